"""Operators that are block diagonal over the pairs (e_{2k}, e_{2k+1}).

Everything in the Krein-space construction lives here: the contraction T,
Q = 2 * sum(alpha_k sigma_1), the exponentials of Q, and the parity J. Each
operator is stored as a stack of 2x2 blocks, block k acting on
span{e_{2k}, e_{2k+1}}. Unbounded operators (e^{Q/2} with alpha_k -> inf)
only ever exist at a finite number of pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import DimensionError, ExponentRangeError, SingularBlockError, ValidationError
from .seq import TruncatedVector, J, norm

__all__ = [
    "SAFE_EXPONENT",
    "SIGMA0",
    "SIGMA1",
    "SIGMA3",
    "AlphaSequence",
    "BlockOperator",
    "QFamily",
    "exp_sigma1_block",
    "build_T",
    "build_Q_family",
    "parity_operator",
    "apply",
    "cayley_identity_residual",
    "c_symmetry_residual",
    "anticommutator_residual",
]

# cosh/sinh overflow a double just above 710
SAFE_EXPONENT = 709.0

SIGMA0 = np.eye(2)
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])


def _check_exponent(a: float) -> None:
    if not math.isfinite(a):
        raise ValidationError(f"exponent must be finite, got {a}")
    if abs(a) > SAFE_EXPONENT:
        raise ExponentRangeError(
            f"|{a}| exceeds the double-precision exponent range; "
            "reduce the truncation level")


def exp_sigma1_block(a: float) -> np.ndarray:
    """e^{a sigma_1} = cosh(a) sigma_0 + sinh(a) sigma_1."""
    a = float(a)
    _check_exponent(a)
    ch, sh = math.cosh(a), math.sinh(a)
    return np.array([[ch, sh], [sh, ch]])


def _hyperbolic_blocks(ch: np.ndarray, sh: np.ndarray) -> np.ndarray:
    out = np.empty((ch.shape[0], 2, 2))
    out[:, 0, 0] = ch
    out[:, 1, 1] = ch
    out[:, 0, 1] = sh
    out[:, 1, 0] = sh
    return out


@dataclass(frozen=True)
class AlphaSequence:
    """A strictly increasing sequence 0 <= alpha_0 < alpha_1 < ... -> inf.

    Stored as a generator of (cosh alpha_n, sinh alpha_n) so that families
    given through tanh or cosh**2 never have to form alpha itself. Divergence
    cannot be checked on a prefix and is taken on trust.
    """

    hyperbolic_fn: Callable[[np.ndarray], tuple]
    name: str = "custom"
    check: bool = True

    @classmethod
    def from_values(cls, fn: Callable[[np.ndarray], np.ndarray], name="alpha", check=True):
        def hyp(n):
            a = np.asarray(fn(n), dtype=float)
            if np.any(np.abs(a) > SAFE_EXPONENT):
                raise ExponentRangeError("alpha_k outside the safe exponent range")
            return np.cosh(a), np.sinh(a)

        return cls(hyp, name, check)

    @classmethod
    def from_tanh(cls, fn: Callable[[np.ndarray], np.ndarray], name="tanh", check=True):
        def hyp(n):
            t = np.asarray(fn(n), dtype=float)
            if np.any(np.abs(t) >= 1.0):
                raise ExponentRangeError("tanh alpha_k must lie in (-1, 1)")
            ch = 1.0 / np.sqrt(1.0 - t * t)
            return ch, t * ch

        return cls(hyp, name, check)

    @classmethod
    def from_cosh_squared(cls, fn: Callable[[np.ndarray], np.ndarray], name="cosh2", check=True):
        def hyp(n):
            c2 = np.asarray(fn(n), dtype=float)
            if np.any(c2 < 1.0):
                raise ValidationError("cosh^2 alpha_k must be >= 1")
            return np.sqrt(c2), np.sqrt(c2 - 1.0)

        return cls(hyp, name, check)

    def hyperbolic(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        """(cosh alpha_n, sinh alpha_n) for n < count."""
        n = np.arange(count)
        ch, sh = (np.asarray(x, dtype=float) for x in self.hyperbolic_fn(n))
        if not (np.all(np.isfinite(ch)) and np.all(np.isfinite(sh))):
            raise ExponentRangeError(f"alpha sequence {self.name!r} overflowed")
        if self.check:
            if count and sh[0] < 0:
                raise ValidationError("alpha_0 must be >= 0")
            if np.any(np.diff(sh) <= 0):
                raise ValidationError(f"alpha sequence {self.name!r} is not strictly increasing")
        return ch, sh

    def values(self, count: int) -> np.ndarray:
        return np.arcsinh(self.hyperbolic(count)[1])

    def cosh_squared(self, count: int) -> np.ndarray:
        return self.hyperbolic(count)[0] ** 2


@dataclass(frozen=True, eq=False)
class BlockOperator:
    blocks: np.ndarray
    self_adjoint: bool = False

    def __post_init__(self):
        b = np.array(self.blocks, dtype=np.complex128)
        if b.ndim != 3 or b.shape[1:] != (2, 2):
            raise DimensionError(f"blocks must have shape (K, 2, 2), got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValidationError("block entries must be finite")
        if self.self_adjoint:
            dev = np.max(np.abs(b - np.conj(np.swapaxes(b, 1, 2))), initial=0.0)
            scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
            if dev > 1e-14 * scale:
                raise ValidationError(f"blocks flagged self-adjoint deviate by {dev:.3g}")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    @property
    def pairs(self) -> int:
        return self.blocks.shape[0]

    @property
    def dim(self) -> int:
        return 2 * self.pairs

    @classmethod
    def identity(cls, pairs: int) -> "BlockOperator":
        return cls(np.broadcast_to(SIGMA0, (pairs, 2, 2)), True)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for k in range(self.pairs):
            out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = self.blocks[k]
        return out

    def _check_pairs(self, other: "BlockOperator") -> None:
        if self.pairs != other.pairs:
            raise DimensionError(f"pair counts differ: {self.pairs} vs {other.pairs}")

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        self._check_pairs(other)
        return BlockOperator(self.blocks @ other.blocks)

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        self._check_pairs(other)
        return BlockOperator(self.blocks + other.blocks, self.self_adjoint and other.self_adjoint)

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        self._check_pairs(other)
        return BlockOperator(self.blocks - other.blocks, self.self_adjoint and other.self_adjoint)

    def __neg__(self) -> "BlockOperator":
        return BlockOperator(-self.blocks, self.self_adjoint)

    def adjoint(self) -> "BlockOperator":
        return BlockOperator(np.conj(np.swapaxes(self.blocks, 1, 2)), self.self_adjoint)

    def inverse(self) -> "BlockOperator":
        det = self.blocks[:, 0, 0] * self.blocks[:, 1, 1] - self.blocks[:, 0, 1] * self.blocks[:, 1, 0]
        scale = np.max(np.abs(self.blocks), axis=(1, 2)) ** 2
        bad = np.flatnonzero(np.abs(det) <= 1e-14 * np.maximum(scale, 1e-300))
        if bad.size:
            raise SingularBlockError(f"block {int(bad[0])} is numerically singular")
        inv = np.empty_like(self.blocks)
        inv[:, 0, 0] = self.blocks[:, 1, 1]
        inv[:, 1, 1] = self.blocks[:, 0, 0]
        inv[:, 0, 1] = -self.blocks[:, 0, 1]
        inv[:, 1, 0] = -self.blocks[:, 1, 0]
        return BlockOperator(inv / det[:, None, None], self.self_adjoint)

    def block_norms(self) -> np.ndarray:
        """Spectral norm of each block."""
        return np.linalg.norm(self.blocks, ord=2, axis=(1, 2))

    @property
    def max_block_norm(self) -> float:
        return float(np.max(self.block_norms(), initial=0.0))


@dataclass(frozen=True)
class QFamily:
    Q: BlockOperator
    exp_q_half: BlockOperator
    exp_minus_q_half: BlockOperator
    exp_minus_q: BlockOperator


def parity_operator(pairs: int) -> BlockOperator:
    """J as a block operator: sigma_3 on every pair."""
    return BlockOperator(np.broadcast_to(SIGMA3, (pairs, 2, 2)), True)


def build_T(alpha: AlphaSequence, pairs: int) -> BlockOperator:
    """T e_{2k} = tanh(alpha_k) e_{2k+1}, T e_{2k+1} = tanh(alpha_k) e_{2k}."""
    if pairs < 1:
        raise ValidationError("pairs must be >= 1")
    ch, sh = alpha.hyperbolic(pairs)
    t = sh / ch
    return BlockOperator(_hyperbolic_blocks(np.zeros_like(t), t), True)


def build_Q_family(alpha: AlphaSequence, pairs: int) -> QFamily:
    if pairs < 1:
        raise ValidationError("pairs must be >= 1")
    ch, sh = alpha.hyperbolic(pairs)
    a = np.arcsinh(sh)
    if np.any(2.0 * a > SAFE_EXPONENT):
        raise ExponentRangeError("2*alpha_k exceeds the safe exponent range; reduce pairs")
    q = _hyperbolic_blocks(np.zeros_like(a), 2.0 * a)
    # cosh 2a = ch^2 + sh^2, sinh 2a = 2 ch sh
    return QFamily(
        Q=BlockOperator(q, True),
        exp_q_half=BlockOperator(_hyperbolic_blocks(ch, sh), True),
        exp_minus_q_half=BlockOperator(_hyperbolic_blocks(ch, -sh), True),
        exp_minus_q=BlockOperator(_hyperbolic_blocks(ch * ch + sh * sh, -2.0 * ch * sh), True),
    )


def apply(op: BlockOperator, v: TruncatedVector) -> TruncatedVector:
    """Blockwise product; the result always has length 2 * op.pairs.

    A tail bound is carried over multiplied by the largest materialized block
    norm, which is all that is known about the operator at this truncation.
    """
    if len(v) > op.dim:
        raise DimensionError(f"vector of length {len(v)} exceeds operator dimension {op.dim}")
    x = v.padded(op.dim).reshape(op.pairs, 2)
    y = np.einsum("kij,kj->ki", op.blocks, x).reshape(-1)
    tail = None if v.tail_bound is None else v.tail_bound * op.max_block_norm
    return TruncatedVector(y, tail)


def cayley_identity_residual(T: BlockOperator, exp_minus_q: BlockOperator) -> float:
    """Max entrywise deviation of e^{-Q}(I+T) from (I-T)."""
    T._check_pairs(exp_minus_q)
    eye = BlockOperator.identity(T.pairs)
    plus = eye + T
    plus.inverse()  # raises SingularBlockError if some I+T block is singular
    lhs = exp_minus_q @ plus
    return float(np.max(np.abs(lhs.blocks - (eye - T).blocks), initial=0.0))


def anticommutator_residual(op: BlockOperator) -> float:
    """Max entry of J op + op J; zero iff op anticommutes with the parity."""
    Jb = parity_operator(op.pairs)
    return float(np.max(np.abs((Jb @ op + op @ Jb).blocks), initial=0.0))


PhiInput = Union[Sequence[TruncatedVector], Mapping[int, TruncatedVector]]


def c_symmetry_residual(exp_minus_q: BlockOperator, phi: PhiInput) -> float:
    """max_n ||e^{-Q} phi_n - (-1)^n J phi_n|| / ||phi_n||.

    This is C phi_n = (-1)^n phi_n for C = e^Q J rewritten so that only the
    bounded-per-block e^{-Q} is applied. A sequence is read as phi_0, phi_1, ...
    """
    items = phi.items() if isinstance(phi, Mapping) else enumerate(phi)
    worst = 0.0
    for n, v in items:
        r = apply(exp_minus_q, v) - (J.sign(n) * J(v))
        worst = max(worst, norm(r) / norm(v))
    return worst
