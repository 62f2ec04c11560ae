"""Finite sections of l2 coefficient space.

Vectors are coefficient arrays with respect to the canonical basis
e_0, e_1, ...; anything past the stored length is either exactly zero
(``tail_bound is None``) or has l2 norm at most ``tail_bound``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError

__all__ = [
    "TruncatedVector",
    "FundamentalSymmetry",
    "J",
    "basis",
    "inner",
    "j_inner",
    "norm",
    "norm_interval",
    "parity_signs",
]


def _add_tails(a: Optional[float], b: Optional[float]) -> Optional[float]:
    if a is None and b is None:
        return None
    return (a or 0.0) + (b or 0.0)


@dataclass(frozen=True, eq=False)
class TruncatedVector:
    coeffs: np.ndarray
    tail_bound: Optional[float] = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).ravel()
        if not np.all(np.isfinite(c)):
            raise ValidationError("TruncatedVector coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.tail_bound is not None:
            t = float(self.tail_bound)
            if not (t >= 0.0 and math.isfinite(t)):
                raise ValidationError(f"tail_bound must be finite and >= 0, got {t}")
            object.__setattr__(self, "tail_bound", t)

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    def __getitem__(self, n: int) -> complex:
        if n < 0:
            raise IndexError(n)
        return complex(self.coeffs[n]) if n < len(self) else 0j

    def padded(self, length: int) -> np.ndarray:
        """Coefficients zero-padded (never cut) to ``length``."""
        if length <= len(self):
            return self.coeffs
        out = np.zeros(length, dtype=np.complex128)
        out[: len(self)] = self.coeffs
        return out

    def __add__(self, other: "TruncatedVector") -> "TruncatedVector":
        if not isinstance(other, TruncatedVector):
            return NotImplemented
        n = max(len(self), len(other))
        return TruncatedVector(self.padded(n) + other.padded(n),
                               _add_tails(self.tail_bound, other.tail_bound))

    def __sub__(self, other: "TruncatedVector") -> "TruncatedVector":
        if not isinstance(other, TruncatedVector):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "TruncatedVector":
        return TruncatedVector(-self.coeffs, self.tail_bound)

    def __mul__(self, a: complex) -> "TruncatedVector":
        if not isinstance(a, (int, float, complex, np.number)):
            return NotImplemented
        tail = None if self.tail_bound is None else abs(a) * self.tail_bound
        return TruncatedVector(a * self.coeffs, tail)

    __rmul__ = __mul__

    def nonzero(self):
        """Yield ``(index, coefficient)`` for the nonzero stored entries."""
        for n in np.flatnonzero(self.coeffs):
            yield int(n), complex(self.coeffs[n])


def basis(n: int, length: Optional[int] = None) -> TruncatedVector:
    """Canonical basis vector e_n."""
    if n < 0:
        raise ValidationError("basis index must be >= 0")
    length = n + 1 if length is None else length
    if length <= n:
        raise ValidationError("length must exceed the basis index")
    c = np.zeros(length, dtype=np.complex128)
    c[n] = 1.0
    return TruncatedVector(c)


def parity_signs(length: int) -> np.ndarray:
    """(-1)**n for n = 0..length-1."""
    s = np.ones(length)
    s[1::2] = -1.0
    return s


class FundamentalSymmetry:
    """The parity involution J e_n = (-1)**n e_n."""

    def sign(self, n: int) -> int:
        return -1 if n % 2 else 1

    def __call__(self, v: TruncatedVector) -> TruncatedVector:
        return TruncatedVector(parity_signs(len(v)) * v.coeffs, v.tail_bound)


J = FundamentalSymmetry()


def _pair(u: TruncatedVector, v: TruncatedVector):
    n = max(len(u), len(v))
    return u.padded(n), v.padded(n)


def inner(u: TruncatedVector, v: TruncatedVector) -> complex:
    """Sum of u_n * conj(v_n); linear in the first slot."""
    a, b = _pair(u, v)
    return complex(np.vdot(b, a))


def j_inner(u: TruncatedVector, v: TruncatedVector) -> complex:
    """Indefinite product [u, v] = (Ju, v)."""
    a, b = _pair(u, v)
    return complex(np.vdot(b, parity_signs(a.shape[0]) * a))


def norm(u: TruncatedVector) -> float:
    return float(np.linalg.norm(u.coeffs))


def norm_interval(u: TruncatedVector) -> tuple[float, float]:
    """Enclosure of the norm of the untruncated vector.

    The omitted part is orthogonal to the stored one, so the true norm lies
    in ``[norm, sqrt(norm**2 + tail**2)]``.
    """
    r = norm(u)
    if u.tail_bound is None:
        return r, r
    return r, math.hypot(r, u.tail_bound)
