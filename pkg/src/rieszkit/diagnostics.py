"""Finite-section bounds and residual suites.

Nothing here certifies an infinite-dimensional property. Gram-section
eigenvalues are one-sided evidence for frame/Bessel/Riesz bounds, and the
residual suite checks each identity of the Krein construction at the
truncation it was built with.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .blocks import (
    QFamily,
    BlockOperator,
    anticommutator_residual,
    apply,
    build_Q_family,
    build_T,
    c_symmetry_residual,
    cayley_identity_residual,
)
from .errors import NumericalError, ValidationError
from .families import KreinFamily, krein_e, krein_phi, krein_psi, odd_vector_data
from .secular import RootSet
from .seq import TruncatedVector, J, inner, j_inner, norm

__all__ = [
    "GramMatrix",
    "FrameBounds",
    "Check",
    "DiagnosticsReport",
    "OlevskiiResult",
    "Tolerances",
    "gram",
    "frame_bounds",
    "residual_suite",
    "krein_residual_suite",
    "olevskii_check",
]


@dataclass(frozen=True, eq=False)
class GramMatrix:
    entries: np.ndarray
    length: int
    tail_bounds: tuple = ()

    def __post_init__(self):
        g = np.asarray(self.entries, dtype=np.complex128)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValidationError("Gram matrix must be square")
        dev = np.max(np.abs(g - g.conj().T), initial=0.0)
        if dev > 1e-12 * max(1.0, float(np.max(np.abs(g), initial=0.0))):
            raise ValidationError(f"Gram matrix is not Hermitian (deviation {dev:.3g})")

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def gram(vectors: Sequence[TruncatedVector]) -> GramMatrix:
    """G[n][m] = inner(phi_n, phi_m), zero-padding to a common length."""
    length = max((len(v) for v in vectors), default=0)
    A = np.array([v.padded(length) for v in vectors], dtype=np.complex128).reshape(len(vectors), length)
    G = A @ A.conj().T
    G = 0.5 * (G + G.conj().T)
    return GramMatrix(G, length, tuple(v.tail_bound for v in vectors))


@dataclass(frozen=True)
class FrameBounds:
    lambda_min: float
    lambda_max: float
    size: int


def frame_bounds(G: GramMatrix) -> FrameBounds:
    """Extreme eigenvalues of a Gram section.

    For a Riesz basis with bounds (a, b) every section satisfies
    a <= lambda_min <= lambda_max <= b; lambda_max also bounds the best
    Bessel constant from below.
    """
    if G.size == 0:
        raise ValidationError("empty Gram matrix")
    try:
        w = np.linalg.eigvalsh(G.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return FrameBounds(float(w[0]), float(w[-1]), G.size)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tol)

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tol": self.tol, "pass": self.passed}


@dataclass
class DiagnosticsReport:
    family: str
    params: dict
    truncation: dict
    checks: list = field(default_factory=list)
    bounds: Optional[dict] = None
    classification: Optional[dict] = None
    outputs: list = field(default_factory=list)

    def add(self, name: str, value: float, tol: float) -> Check:
        c = Check(name, float(value), float(tol))
        self.checks.append(c)
        return c

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        d = {
            "family": self.family,
            "params": self.params,
            "truncation": self.truncation,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.bounds is not None:
            d["bounds"] = self.bounds
        if self.classification is not None:
            d["classification"] = self.classification
        d["outputs"] = list(self.outputs)
        return d


@dataclass(frozen=True)
class Tolerances:
    exact: float = 1e-10
    truncated: float = 1e-6
    anticommute: float = 1e-14


def _items(vs):
    return sorted(vs.items()) if isinstance(vs, Mapping) else list(enumerate(vs))


def residual_suite(
    phi: Mapping[int, TruncatedVector],
    psi: Mapping[int, TruncatedVector],
    e: Mapping[int, TruncatedVector],
    ops: QFamily,
    T: BlockOperator,
    *,
    family: str = "custom",
    params: Optional[dict] = None,
    truncation: Optional[dict] = None,
    budget: float = 0.0,
    tolerances: Tolerances = Tolerances(),
) -> DiagnosticsReport:
    """Check every identity of a J-orthonormal family at a common truncation.

    ``budget`` is a certified bound on the truncation error of the inner
    products between the supplied vectors; truncation-limited checks use the
    larger of it and ``tolerances.truncated``.
    """
    phi, psi, e = dict(_items(phi)), dict(_items(psi)), dict(_items(e))
    idx = sorted(phi)
    report = DiagnosticsReport(family, dict(params or {}), dict(truncation or {}))
    trunc_tol = max(tolerances.truncated, budget)

    biorth = max(abs(inner(psi[n], phi[m]) - (n == m)) for n in idx for m in idx)
    report.add("biorthogonality", biorth, trunc_tol)

    jorth = max(abs(abs(j_inner(phi[n], phi[m])) - (n == m)) for n in idx for m in idx)
    report.add("j_orthonormality", jorth, trunc_tol)

    eorth = max(abs(inner(e[n], e[m]) - (n == m)) for n in idx for m in idx)
    report.add("e_orthonormality", eorth, trunc_tol)

    psi_formula = max(norm(psi[n] - j_inner(phi[n], phi[n]) * J(phi[n])) / norm(psi[n]) for n in idx)
    report.add("psi_formula", psi_formula, trunc_tol)

    recon = max(norm(apply(ops.exp_q_half, e[n]) - phi[n]) / norm(phi[n]) for n in idx)
    report.add("reconstruction", recon, tolerances.exact)

    analysis = max(norm(apply(ops.exp_minus_q_half, phi[n]) - e[n]) for n in idx)
    report.add("analysis", analysis, tolerances.exact)

    report.add("cayley", cayley_identity_residual(T, ops.exp_minus_q), tolerances.exact)
    report.add("c_symmetry", c_symmetry_residual(ops.exp_minus_q, phi), tolerances.exact)
    report.add("anticommute_T", anticommutator_residual(T), tolerances.anticommute)
    report.add("anticommute_Q", anticommutator_residual(ops.Q), tolerances.anticommute)

    # (Sf, f) = sum |c_n|^2 for f = sum c_n phi_n, S phi_n = psi_n
    c = {n: complex(1.0 / (1 + i), 0.5 * (-1) ** i / (1 + i)) for i, n in enumerate(idx)}
    B = {(n, m): inner(psi[n], phi[m]) for n in idx for m in idx}
    sf = sum(c[n] * c[m].conjugate() * B[n, m] for n in idx for m in idx)
    csq = math.fsum(abs(c[n]) ** 2 for n in idx)
    report.add("s_form", abs(sf - csq) / csq, max(tolerances.truncated, budget * len(idx)))
    return report


def krein_residual_suite(
    family: KreinFamily,
    count: int = 7,
    roots: Optional[RootSet] = None,
    tolerances: Tolerances = Tolerances(),
) -> DiagnosticsReport:
    """Residual suite for phi_0 .. phi_{count-1} of a Krein family."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    n_odd = count // 2
    if roots is None:
        roots = family.roots(max(n_odd, 1))
    idx = range(count)
    phi = {n: krein_phi(family, n, roots) for n in idx}
    psi = {n: krein_psi(family, n, roots) for n in idx}
    e = {n: krein_e(family, n, roots) for n in idx}
    ops = build_Q_family(family.alpha, family.pairs)
    T = build_T(family.alpha, family.pairs)

    # |(e_k, e_k')_truncated - delta| <= tau_k tau_k' by Cauchy-Schwarz on the
    # omitted coefficients; 1e-10 covers roots solved to finite tolerance
    tails = [odd_vector_data(family, k, roots).e_tail_sq for k in range(n_odd)]
    known = [t for t in tails if t is not None]
    budget = max(known) + 1e-10 if known else 0.0

    params = {"delta": family.delta} if family.delta is not None else {"name": family.name}
    truncation = {"pairs": family.pairs, "terms": family.terms, "tol": family.tol,
                  "count": count, "tail_budget": budget}
    return residual_suite(phi, psi, e, ops, T, family=family.name, params=params,
                          truncation=truncation, budget=budget, tolerances=tolerances)


@dataclass(frozen=True)
class OlevskiiResult:
    satisfied: bool
    first_empty_interval: Optional[int]


def olevskii_check(spectrum_points: Sequence[float], beta: float) -> OlevskiiResult:
    """Does every interval [(n+1) beta, n beta] hold at least one point?

    Checked for n = 0 .. floor(min(points) / beta), the intervals whose
    upper end the sample reaches. The points are a declared sample of essential spectrum;
    nothing here computes a spectrum.
    """
    if not beta < 0:
        raise ValidationError("beta must be negative")
    pts = np.sort(np.asarray(spectrum_points, dtype=float))
    if pts.size == 0:
        return OlevskiiResult(False, 0)
    n_max = max(0, math.floor(pts[0] / beta))
    for n in range(n_max + 1):
        lo, hi = (n + 1) * beta, n * beta
        i = np.searchsorted(pts, lo, side="left")
        if i >= pts.size or pts[i] > hi:
            return OlevskiiResult(False, n)
    return OlevskiiResult(True, None)
