"""The two concrete sequence families.

``SemiRegularFamily``: phi_n = n^-beta e_n + n^-alpha e_0 (n >= 1) with the
biorthogonal partner psi_n = n^beta e_n.

``KreinFamily``: the J-orthonormal family built from a strictly increasing
alpha_k and a nonzero chi_n,

    phi_{2k}   = cosh a_k e_{2k} + sinh a_k e_{2k+1}
    phi_{2k+1} = (c_k / sqrt(mu_k)) sum_n chi_n cosh a_n / (1 - mu_k cosh^2 a_n)
                     * (cosh a_n e_{2n+1} + sinh a_n e_{2n})

where mu_k is root k of the secular equation with weights |chi_n cosh a_n|^2
and poles 1/cosh^2 a_n, and c_k its normalization. Root k is the one in the
gap (1/cosh^2 a_{k+1}, 1/cosh^2 a_k); roots are indexed 0, 1, ... in
decreasing order; Root.odd_label gives the odd-index name mu_{2k+1}.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .blocks import AlphaSequence
from .errors import InvalidFamilyError, MissingRootError, RegimeError, TruncationError, ValidationError
from .secular import (
    PowerLawTail,
    RootSet,
    SecularProblem,
    TailPolicy,
    normalization_c,
    power_pole_tail,
    solve_roots,
)
from .seq import TruncatedVector, J, basis

__all__ = [
    "GRSVerdict",
    "SemiRegularFamily",
    "SemiRegularVerdict",
    "Witness",
    "semiregular_classify",
    "witness_family",
    "non_grs_witness",
    "TypeVerdict",
    "TypeClassification",
    "KreinFamily",
    "OddVectorData",
    "odd_vector_data",
    "krein_phi",
    "krein_psi",
    "krein_e",
    "classify_type",
    "J_DEFICIT_LIMIT",
]

# completeness threshold alpha - beta <= 1/2, with room for representation error
_THRESHOLD_SLACK = 1e-12

# largest certified drop of |[phi, phi]| below 1 that a truncation may cause
J_DEFICIT_LIMIT = 1e-3


class GRSVerdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class SemiRegularFamily:
    alpha: float
    beta: float

    @property
    def complete(self) -> bool:
        return self.alpha - self.beta <= 0.5 + _THRESHOLD_SLACK

    def _check_index(self, n: int, length: Optional[int]) -> int:
        if n < 1:
            raise ValidationError("semi-regular family is indexed from n = 1")
        length = n + 1 if length is None else length
        if length <= n:
            raise ValidationError("length must exceed the index")
        return length

    def phi(self, n: int, length: Optional[int] = None) -> TruncatedVector:
        length = self._check_index(n, length)
        c = np.zeros(length)
        c[n] = float(n) ** -self.beta
        c[0] = float(n) ** -self.alpha
        return TruncatedVector(c)

    def psi(self, n: int, length: Optional[int] = None) -> TruncatedVector:
        length = self._check_index(n, length)
        c = np.zeros(length)
        c[n] = float(n) ** self.beta
        return TruncatedVector(c)


@dataclass(frozen=True)
class SemiRegularVerdict:
    complete: bool
    grs: GRSVerdict


def semiregular_classify(family: SemiRegularFamily) -> SemiRegularVerdict:
    """Completeness and GRS status as far as they are settled.

    Incomplete parameters are not semi-regular, so the GRS question does not
    arise. beta <= 0 is never a GRS, beta > 0 with alpha > 1/2 always is;
    beta > 0 with alpha <= 1/2 is left open.
    """
    if not family.complete:
        return SemiRegularVerdict(False, GRSVerdict.NOT_APPLICABLE)
    if family.beta <= 0:
        return SemiRegularVerdict(True, GRSVerdict.NO)
    if family.alpha > 0.5:
        return SemiRegularVerdict(True, GRSVerdict.YES)
    return SemiRegularVerdict(True, GRSVerdict.UNDETERMINED)


@dataclass(frozen=True)
class Witness:
    N: int
    f: TruncatedVector
    s_form: float
    dist_to_e0: float
    D: float

    @property
    def ratio(self) -> float:
        """s_form relative to 1/D_N."""
        return self.s_form * self.D


def witness_family(family: SemiRegularFamily, N: int) -> Witness:
    """f = sum_{n<=N} c_n phi_n with c_n = n^(2beta-alpha) / D_N.

    The e_0 coefficient of f is exactly 1, so ||f - e_0||^2 = 1/D_N, and
    (Sf, f) = sum c_n^2.
    """
    if N < 1:
        raise ValidationError("N must be >= 1")
    a, b = family.alpha, family.beta
    n = np.arange(1, N + 1, dtype=float)
    D = math.fsum(n ** (2 * (b - a)))
    c = n ** (2 * b - a) / D
    coeffs = np.zeros(N + 1)
    coeffs[1:] = c * n ** -b
    coeffs[0] = math.fsum(c * n ** -a)
    f = TruncatedVector(coeffs)
    s_form = math.fsum(c * c)
    dist_sq = math.fsum(coeffs[1:] ** 2) + (coeffs[0] - 1.0) ** 2
    return Witness(N, f, s_form, math.sqrt(dist_sq), D)


def non_grs_witness(family: SemiRegularFamily, N: int) -> Witness:
    """Sequence showing that the closure of S fails the implication
    ((S f_N, f_N) -> 0 and f_N -> g) => g = 0, with g = e_0."""
    if family.beta > 0 or not family.complete:
        raise RegimeError("non-GRS witness needs beta <= 0 and alpha - beta <= 1/2")
    return witness_family(family, N)


class TypeVerdict(str, enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class TypeClassification:
    verdict: TypeVerdict
    chi_cosh_in_l2: bool
    chi_cosh2_in_l2: bool
    exponents: tuple


def _in_l2(exponent: float) -> bool:
    # sum (n+1)^p converges iff p < -1
    return exponent < -1.0


@dataclass(frozen=True)
class KreinFamily:
    """J-orthonormal family from alpha_k and chi_n.

    ``exponents`` = (p, q) declares |chi_n cosh a_n|^2 ~ (n+1)^p and
    |chi_n cosh^2 a_n|^2 ~ (n+1)^q; l2 membership is read off these, never
    from partial sums. ``tail`` encloses the omitted secular sums.
    """

    alpha: AlphaSequence
    chi: Callable[[np.ndarray], np.ndarray]
    pairs: int = 2000
    terms: int = 10_000
    tol: float = 1e-12
    exponents: Optional[tuple] = None
    tail: Optional[TailPolicy] = None
    delta: Optional[float] = None
    name: str = "custom"

    def __post_init__(self):
        if self.pairs < 1:
            raise ValidationError("pairs must be >= 1")
        if self.terms < 2:
            raise ValidationError("terms must be >= 2")

    @classmethod
    def delta_family(cls, delta: float, pairs: int = 2000, terms: int = 10_000,
                     tol: float = 1e-12) -> "KreinFamily":
        """tanh^2 a_n = n/(n+1) (so cosh^2 a_n = n+1), chi_n = (n+1)^-(delta+1)/2."""
        delta = float(delta)
        if not 0.0 < delta <= 2.0:
            raise InvalidFamilyError(
                f"delta={delta!r}: need 0 < delta (chi in l2) and delta <= 2 "
                "({chi_n cosh^2 a_n} not in l2)")
        return cls(
            alpha=AlphaSequence.from_cosh_squared(lambda n: n + 1.0, name="tanh^2=n/(n+1)"),
            chi=lambda n: (n + 1.0) ** (-(delta + 1.0) / 2.0),
            pairs=pairs, terms=terms, tol=tol,
            exponents=(-delta, 1.0 - delta),
            tail=PowerLawTail(delta), delta=delta, name="delta",
        )

    @cached_property
    def _pair_data(self):
        n = np.arange(self.pairs)
        ch, sh = self.alpha.hyperbolic(self.pairs)
        chi = np.asarray(self.chi(n), dtype=np.complex128)
        if np.any(chi == 0):
            raise InvalidFamilyError("chi_n must be nonzero")
        return ch, sh, chi

    @cached_property
    def secular_problem(self) -> SecularProblem:
        n = np.arange(self.terms)
        ch, _ = self.alpha.hyperbolic(self.terms)
        chi = np.asarray(self.chi(n), dtype=np.complex128)
        if np.any(chi == 0):
            raise InvalidFamilyError("chi_n must be nonzero")
        s = ch * ch
        return SecularProblem(np.abs(chi) ** 2 * s, s, self.tail, label=self.name)

    def roots(self, count: int) -> RootSet:
        return solve_roots(self.secular_problem, count, self.tol)


@dataclass(frozen=True)
class OddVectorData:
    """Pair coefficients a_n of phi_{2k+1} and e_{2k+1}, n < pairs."""

    k: int
    mu: float
    c: float
    coeffs: np.ndarray
    e_tail_sq: Optional[float]
    phi_tail_sq: Optional[float]


def odd_vector_data(family: KreinFamily, k: int, roots: RootSet) -> OddVectorData:
    if k >= len(roots):
        raise MissingRootError(f"root {k} not in the supplied root set (has {len(roots)})")
    mu = roots[k].mu
    norm_c = normalization_c(family.secular_problem, mu)
    c = norm_c.value
    ch, sh, chi = family._pair_data
    coeffs = (c / math.sqrt(mu)) * chi * ch / (1.0 - mu * ch * ch)
    e_tail = phi_tail = None
    if family.delta is not None:
        d, P = family.delta, family.pairs
        scale = norm_c.hi ** 2 / mu
        # omitted sum_{m>P} m^-delta / (1 - mu m)^2, and the same weighted by
        # cosh^2 + sinh^2 = 2m - 1
        e_tail = scale * power_pole_tail(d, 2, mu, P).hi
        phi_tail = scale * (2.0 * power_pole_tail(d - 1.0, 2, mu, P).hi
                            - power_pole_tail(d, 2, mu, P).lo)
        if e_tail > J_DEFICIT_LIMIT:
            raise TruncationError(
                f"pairs={P} leaves a certified J-norm deficit {e_tail:.3g} > "
                f"{J_DEFICIT_LIMIT} for root {k}; increase pairs")
    return OddVectorData(k, mu, c, coeffs, e_tail, phi_tail)


def _check_even(family: KreinFamily, k: int) -> None:
    if k >= family.pairs:
        raise TruncationError(f"index 2*{k} needs more than {family.pairs} pairs")


def krein_phi(family: KreinFamily, n: int, roots: Optional[RootSet] = None) -> TruncatedVector:
    if n < 0:
        raise ValidationError("index must be >= 0")
    k = n // 2
    _check_even(family, k)
    ch, sh, _ = family._pair_data
    v = np.zeros(2 * family.pairs, dtype=np.complex128)
    if n % 2 == 0:
        v[2 * k], v[2 * k + 1] = ch[k], sh[k]
        return TruncatedVector(v)
    if roots is None:
        raise MissingRootError(f"odd index {n} needs secular roots")
    odd = odd_vector_data(family, k, roots)
    v[0::2] = odd.coeffs * sh
    v[1::2] = odd.coeffs * ch
    tail = None if odd.phi_tail_sq is None else math.sqrt(odd.phi_tail_sq)
    return TruncatedVector(v, tail)


def krein_psi(family: KreinFamily, n: int, roots: Optional[RootSet] = None) -> TruncatedVector:
    """Biorthogonal partner [phi_n, phi_n] J phi_n, with [phi_n, phi_n] = (-1)^n."""
    return J.sign(n) * J(krein_phi(family, n, roots))


def krein_e(family: KreinFamily, n: int, roots: Optional[RootSet] = None) -> TruncatedVector:
    """Orthonormal system e_n = e^{-Q/2} phi_n in closed form."""
    if n < 0:
        raise ValidationError("index must be >= 0")
    k = n // 2
    _check_even(family, k)
    if n % 2 == 0:
        return basis(2 * k, 2 * family.pairs)
    if roots is None:
        raise MissingRootError(f"odd index {n} needs secular roots")
    odd = odd_vector_data(family, k, roots)
    v = np.zeros(2 * family.pairs, dtype=np.complex128)
    v[1::2] = odd.coeffs
    tail = None if odd.e_tail_sq is None else math.sqrt(odd.e_tail_sq)
    return TruncatedVector(v, tail)


def classify_type(family: KreinFamily) -> TypeClassification:
    """First type iff {chi_n cosh a_n} is not in l2, second type otherwise.

    Requires {chi_n cosh^2 a_n} outside l2, without which the family is
    not complete.
    """
    if family.exponents is None:
        raise ValidationError("classification needs declared decay exponents")
    p, q = family.exponents
    cosh_l2, cosh2_l2 = _in_l2(p), _in_l2(q)
    if cosh2_l2:
        raise InvalidFamilyError("{chi_n cosh^2 a_n} is in l2; the family is not complete")
    verdict = TypeVerdict.SECOND if cosh_l2 else TypeVerdict.FIRST
    return TypeClassification(verdict, cosh_l2, cosh2_l2, (p, q))
