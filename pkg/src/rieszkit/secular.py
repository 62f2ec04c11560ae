"""Secular equation with interlacing poles.

Solves

    F(mu) = sum_n w_n / (1 - mu s_n) = 0,   w_n > 0,  1 <= s_0 < s_1 < ...

for its roots, one in each gap (1/s_{k+1}, 1/s_k) between consecutive
poles. F is strictly increasing on every gap (F' = sum w s / (1 - mu s)^2)
and runs from -inf to +inf across it, so each gap holds exactly one root.

Only the first ``N`` terms are summed explicitly. The rest is handled by a
tail policy that returns an enclosure of the omitted sum; the solver works
with the enclosure midpoint and reports the half-width as part of every
residual.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np
from scipy.special import binom, zeta

from .errors import ConvergenceError, PoleProximityError, TruncationError, ValidationError

__all__ = [
    "Enclosure",
    "TailPolicy",
    "FiniteSum",
    "PowerLawTail",
    "power_pole_tail",
    "crude_power_tail_bound",
    "SecularProblem",
    "SecularValue",
    "Root",
    "RootSet",
    "Normalization",
    "evaluate_F",
    "evaluate_slope",
    "brackets",
    "solve_roots",
    "normalization_c",
]

POLE_GUARD = 1e-13
BRACKET_SHRINK = 1e-12
MAX_ITER = 200
MIN_TOL = 1e-14


@dataclass(frozen=True)
class Enclosure:
    lo: float
    hi: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def radius(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def __add__(self, x: float) -> "Enclosure":
        return Enclosure(self.lo + x, self.hi + x)

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def power_pole_tail(sigma: float, q: int, mu: float, n_terms: int) -> Enclosure:
    """Enclose sum_{m > n_terms} m**(-sigma) * (mu*m - 1)**(-q).

    Expanding (mu m - 1)^{-q} = (mu m)^{-q} sum_j C(j+q-1, j) (mu m)^{-j}
    turns the tail into sum_j C(j+q-1, j) mu^{-j-q} zeta(sigma+q+j, N+1)
    with Hurwitz zeta. Successive terms shrink at least by the factor
    (J+q)/(J+1) / (mu (N+1)), which bounds the remainder geometrically.
    """
    a = n_terms + 1
    x = 1.0 / (mu * a)
    if x > 0.5:
        raise TruncationError(
            f"tail expansion needs mu*(N+1) >= 2; got mu={mu:.6g}, N={n_terms}")
    if sigma + q <= 1.0:
        raise ValidationError("tail diverges: need sigma + q > 1")
    total = 0.0
    for j in range(400):
        term = binom(j + q - 1, j) * mu ** (-j - q) * zeta(sigma + q + j, a)
        rho = (j + q) / (j + 1) * x
        remainder = term / (1.0 - rho) if rho < 1.0 else math.inf
        if j > 0 and remainder <= 1e-17 * total:
            # roundoff in the ~j summed terms and in zeta itself
            slack = remainder + 1e-14 * total
            return Enclosure(max(total - 1e-14 * total, 0.0), total + slack)
        total += term
    raise ConvergenceError("tail expansion did not converge")


def crude_power_tail_bound(mu: float, n_terms: int, delta: float) -> float:
    """|sum_{n>N} n^-delta / (1 - n mu)| <= (2 / (mu delta)) N^-delta.

    Valid once mu*(N+1) >= 2, where each |1/(1 - n mu)| <= 2/(n mu).
    """
    if mu * (n_terms + 1) < 2.0:
        raise TruncationError("crude bound needs mu*(N+1) >= 2")
    return 2.0 / (mu * delta) * n_terms ** (-delta)


class TailPolicy(Protocol):
    """Enclosures for the omitted parts of F and F' beyond ``n_terms`` terms."""

    def value(self, mu: float, n_terms: int) -> Enclosure: ...

    def slope(self, mu: float, n_terms: int) -> Enclosure: ...


@dataclass(frozen=True)
class FiniteSum:
    """The problem is exactly its materialized terms; the tail is zero."""

    def value(self, mu: float, n_terms: int) -> Enclosure:
        return Enclosure(0.0, 0.0)

    def slope(self, mu: float, n_terms: int) -> Enclosure:
        return Enclosure(0.0, 0.0)


@dataclass(frozen=True)
class PowerLawTail:
    """Tail of the problem w_n = (n+1)^-delta, s_n = n+1 (0-based n)."""

    delta: float

    def value(self, mu: float, n_terms: int) -> Enclosure:
        # sum_{m>N} m^-delta / (1 - mu m) = -sum m^-delta / (mu m - 1)
        t = power_pole_tail(self.delta, 1, mu, n_terms)
        return Enclosure(-t.hi, -t.lo)

    def slope(self, mu: float, n_terms: int) -> Enclosure:
        return power_pole_tail(self.delta - 1.0, 2, mu, n_terms)


@dataclass(frozen=True, eq=False)
class SecularProblem:
    weights: np.ndarray
    scales: np.ndarray
    tail: Optional[TailPolicy] = None
    label: str = "custom"

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        s = np.array(self.scales, dtype=float).ravel()
        if w.shape != s.shape or w.shape[0] < 2:
            raise ValidationError("weights and scales need equal length >= 2")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(s))):
            raise ValidationError("weights and scales must be finite")
        if np.any(w <= 0):
            raise ValidationError("weights must be positive")
        if s[0] < 1.0 or np.any(np.diff(s) <= 0):
            raise ValidationError("scales must be >= 1 and strictly increasing")
        for a in (w, s):
            a.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "poles", 1.0 / s)

    @classmethod
    def delta_family(cls, delta: float, terms: int = 10_000) -> "SecularProblem":
        """sum_{m>=1} m^-delta / (1 - m mu) = 0."""
        if not delta > 0:
            raise ValidationError("delta must be > 0")
        m = np.arange(1, terms + 1, dtype=float)
        return cls(m ** -delta, m, PowerLawTail(delta), label=f"delta={delta!r}")

    @property
    def terms(self) -> int:
        return self.weights.shape[0]

    def _check_mu(self, mu: float) -> None:
        if not (0.0 < mu < self.poles[0]):
            raise ValidationError(f"mu={mu!r} outside (0, 1/s_0)")
        # poles are decreasing; find the two neighbours of mu
        i = np.searchsorted(-self.poles, -mu)
        near = self.poles[max(i - 1, 0):i + 1]
        if np.min(np.abs(near - mu)) < POLE_GUARD:
            raise PoleProximityError(f"mu={mu!r} is within {POLE_GUARD} of a pole")


@dataclass(frozen=True)
class SecularValue:
    """Head sum plus an enclosure of the omitted tail (None: unknown)."""

    value: float
    tail: Optional[Enclosure]

    @property
    def estimate(self) -> float:
        return self.value + (self.tail.mid if self.tail else 0.0)

    @property
    def tail_radius(self) -> float:
        return self.tail.radius if self.tail else math.nan

    def enclosure(self) -> Optional[Enclosure]:
        return None if self.tail is None else self.tail + self.value


def _tail(problem: SecularProblem, which: str, mu: float) -> Optional[Enclosure]:
    if problem.tail is None:
        warnings.warn("secular problem has no tail policy; tail reported as unknown",
                      RuntimeWarning, stacklevel=3)
        return None
    return getattr(problem.tail, which)(mu, problem.terms)


def evaluate_F(problem: SecularProblem, mu: float) -> SecularValue:
    mu = float(mu)
    problem._check_mu(mu)
    head = float(np.sum(problem.weights / (1.0 - mu * problem.scales)))
    return SecularValue(head, _tail(problem, "value", mu))


def evaluate_slope(problem: SecularProblem, mu: float) -> SecularValue:
    """F'(mu) = sum w s / (1 - mu s)^2."""
    mu = float(mu)
    problem._check_mu(mu)
    d = 1.0 - mu * problem.scales
    head = float(np.sum(problem.weights * problem.scales / (d * d)))
    return SecularValue(head, _tail(problem, "slope", mu))


def brackets(problem: SecularProblem, count: int) -> list[tuple[float, float]]:
    """Gaps (1/s_{j+1}, 1/s_j), j < count, pulled in by 1e-12 of their width."""
    if count < 0 or count > problem.terms - 1:
        raise ValidationError(f"count must be in [0, {problem.terms - 1}]")
    out = []
    for j in range(count):
        lo, hi = problem.poles[j + 1], problem.poles[j]
        eps = BRACKET_SHRINK * (hi - lo)
        out.append((float(lo + eps), float(hi - eps)))
    return out


@dataclass(frozen=True)
class Root:
    index: int
    mu: float
    bracket: tuple[float, float]
    residual: float
    tail_bound: float
    slope: float
    width: float
    iterations: int

    @property
    def odd_label(self) -> str:
        """Odd-index alias mu_{2k+1}: the root builds phi_{2k+1}."""
        return f"mu_{2 * self.index + 1}"

    @property
    def uncertainty(self) -> float:
        """Half-width of a certified interval around the true root."""
        t = 0.0 if math.isnan(self.tail_bound) else self.tail_bound
        return self.width + 2.0 * t / self.slope


@dataclass(frozen=True)
class RootSet:
    roots: tuple[Root, ...]
    tol: float
    terms: int
    label: str = ""

    def __len__(self) -> int:
        return len(self.roots)

    def __getitem__(self, k: int) -> Root:
        return self.roots[k]

    @property
    def mus(self) -> np.ndarray:
        return np.array([r.mu for r in self.roots])


def _solve_bracket(problem: SecularProblem, k: int, lo: float, hi: float, tol: float) -> Root:
    bracket = (lo, hi)
    f_lo = f_hi = math.inf
    x = 0.5 * (lo + hi)
    for it in range(1, MAX_ITER + 1):
        fv = evaluate_F(problem, x)
        f = fv.estimate
        if f < 0:
            lo, f_lo = x, f
        elif f > 0:
            hi, f_hi = x, f
        else:
            lo = hi = x
            f_lo = f_hi = 0.0
        if hi - lo <= tol:
            break
        df = evaluate_slope(problem, x).estimate
        xn = x - f / df
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        elif abs(xn - x) < 0.5 * tol:
            # Newton has converged from one side: probe just past the root
            xn = x + math.copysign(0.9 * tol, xn - x)
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
        x = xn
    else:
        raise ConvergenceError(f"bracket {k} did not converge in {MAX_ITER} iterations")
    mu = lo if abs(f_lo) <= abs(f_hi) else hi
    fv = evaluate_F(problem, mu)
    # polish inside the certified bracket; the bracket itself is unchanged
    for _ in range(2):
        xp = mu - fv.estimate / evaluate_slope(problem, mu).estimate
        if not (lo <= xp <= hi) or xp == mu:
            break
        fp = evaluate_F(problem, xp)
        if abs(fp.estimate) >= abs(fv.estimate):
            break
        mu, fv = xp, fp
    slope = evaluate_slope(problem, mu).estimate
    tail_r = fv.tail_radius
    residual = abs(fv.estimate) + (0.0 if math.isnan(tail_r) else tail_r)
    return Root(k, float(mu), (float(bracket[0]), float(bracket[1])), float(residual),
                float(tail_r), float(slope), float(hi - lo), it)


def solve_roots(problem: SecularProblem, count: int, tol: float = 1e-12) -> RootSet:
    """Roots 0..count-1 in decreasing order, root k inside gap k.

    Safeguarded Newton: a Newton step is taken only if it stays inside the
    current sign-change bracket, otherwise the bracket is bisected. Stops
    once the bracket is narrower than ``tol``.
    """
    if not tol >= MIN_TOL:
        raise ValidationError(f"tol must be >= {MIN_TOL}")
    roots = tuple(_solve_bracket(problem, k, lo, hi, tol)
                  for k, (lo, hi) in enumerate(brackets(problem, count)))
    return RootSet(roots, tol, problem.terms, problem.label)


@dataclass(frozen=True)
class Normalization:
    value: float
    lo: float
    hi: float


def normalization_c(problem: SecularProblem, mu: float, chi4th: Optional[np.ndarray] = None) -> Normalization:
    """c = (sum_n |chi_n|^2 cosh^4 a_n / (1 - mu cosh^2 a_n)^2)^(-1/2).

    With the default weights chi4th = w * s the sum is exactly F'(mu) and its
    tail comes from the problem's tail policy; custom weights get no tail.
    """
    if chi4th is None:
        sv = evaluate_slope(problem, mu)
    else:
        problem._check_mu(float(mu))
        chi4th = np.asarray(chi4th, dtype=float)
        if chi4th.shape != problem.scales.shape:
            raise ValidationError("chi4th must match the problem length")
        d = 1.0 - mu * problem.scales
        sv = SecularValue(float(np.sum(chi4th / (d * d))), None)
    total = sv.estimate
    enc = sv.enclosure()
    if enc is None:
        return Normalization(total ** -0.5, total ** -0.5, total ** -0.5)
    return Normalization(total ** -0.5, enc.hi ** -0.5, enc.lo ** -0.5)
