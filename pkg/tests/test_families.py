import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rieszkit.blocks import AlphaSequence
from rieszkit.errors import InvalidFamilyError, MissingRootError, RegimeError, TruncationError, ValidationError
from rieszkit.families import (
    GRSVerdict,
    KreinFamily,
    SemiRegularFamily,
    TypeVerdict,
    classify_type,
    krein_e,
    krein_phi,
    krein_psi,
    non_grs_witness,
    odd_vector_data,
    semiregular_classify,
    witness_family,
)
from rieszkit.seq import basis, inner, j_inner, norm

from oracles import harmonic


@pytest.fixture(scope="module")
def fam15():
    f = KreinFamily.delta_family(1.5)
    return f, f.roots(6)


@pytest.fixture(scope="module")
def fam05():
    f = KreinFamily.delta_family(0.5)
    return f, f.roots(6)


# semi-regular family

@given(st.floats(-3, 3), st.floats(-3, 3))
def test_phi_1_is_e1_plus_e0(a, b):
    v = SemiRegularFamily(a, b).phi(1)
    assert np.array_equal(v.coeffs, [1, 1])


def test_phi_example_and_biorthogonality():
    f = SemiRegularFamily(1.0, 0.5)
    assert np.allclose(f.phi(4).coeffs, [0.25, 0, 0, 0, 0.5])
    assert inner(f.phi(2, 4), f.psi(3, 4)) == 0
    assert inner(f.phi(2, 4), f.psi(2, 4)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValidationError):
        f.phi(0)


@pytest.mark.parametrize("alpha,beta,complete,grs", [
    (0.4, 0.0, True, GRSVerdict.NO),
    (1.0, 0.6, True, GRSVerdict.YES),
    (2.0, 1.0, False, GRSVerdict.NOT_APPLICABLE),
    (0.3, 0.1, True, GRSVerdict.UNDETERMINED),
    (0.5, 0.0, True, GRSVerdict.NO),
])
def test_semiregular_classify(alpha, beta, complete, grs):
    v = semiregular_classify(SemiRegularFamily(alpha, beta))
    assert (v.complete, v.grs) == (complete, grs)


@pytest.mark.parametrize("N", [100, 1000, 10_000])
def test_witness_harmonic(N):
    w = non_grs_witness(SemiRegularFamily(0.5, 0.0), N)
    H = harmonic(N)
    assert w.dist_to_e0 ** 2 * H == pytest.approx(1.0, abs=1e-12)
    assert w.s_form <= 1 / H + 1e-12
    assert norm(w.f - basis(0, N + 1)) == pytest.approx(w.dist_to_e0, rel=1e-12)


def test_witness_fails_in_grs_regime():
    fam = SemiRegularFamily(1.0, 0.6)
    with pytest.raises(RegimeError):
        non_grs_witness(fam, 10)
    ratios = [witness_family(fam, N).ratio for N in (100, 1000, 10_000)]
    assert ratios[0] < ratios[1] < ratios[2]
    # growth ~ N^{2 alpha - 1} up to the slowly varying D_N
    assert 5 < ratios[2] / ratios[1] < 20


@given(st.floats(-1, 0), st.floats(0, 0.5))
def test_witness_s_form_below_inv_D(beta, gap):
    w = witness_family(SemiRegularFamily(beta + gap, beta), 200)
    assert w.s_form <= 1 / w.D * (1 + 1e-12)
    assert w.dist_to_e0 ** 2 * w.D == pytest.approx(1.0, abs=1e-12)


# Krein family

def test_even_vectors():
    f = KreinFamily.delta_family(0.5, pairs=8)
    assert np.array_equal(krein_phi(f, 0).coeffs, basis(0, 16).coeffs)
    assert np.allclose(krein_phi(f, 2).coeffs[2:4], [math.sqrt(2), 1], atol=1e-15)
    assert np.allclose(krein_phi(f, 4).coeffs[4:6], [math.sqrt(3), math.sqrt(2)], atol=1e-15)
    assert np.array_equal(krein_psi(f, 0).coeffs, basis(0, 16).coeffs)
    assert np.array_equal(krein_e(f, 4).coeffs, basis(4, 16).coeffs)


def test_j_norms(fam15):
    f, roots = fam15
    p1 = krein_phi(f, 1, roots)
    assert j_inner(p1, p1).real == pytest.approx(-1.0, abs=1e-6)
    p3 = krein_phi(f, 3, roots)
    assert abs(j_inner(p1, p3)) < 1e-6


def test_biorthogonal_partner(fam15):
    f, roots = fam15
    assert inner(krein_psi(f, 1, roots), krein_phi(f, 1, roots)).real == pytest.approx(1.0, abs=1e-6)
    assert abs(inner(krein_psi(f, 1, roots), krein_phi(f, 3, roots))) < 1e-6
    assert abs(inner(krein_psi(f, 2, roots), krein_phi(f, 3, roots))) < 1e-15


def test_j_deficit_is_certified_tail(fam05):
    f, roots = fam05
    for k in range(4):
        d = odd_vector_data(f, k, roots)
        p = krein_phi(f, 2 * k + 1, roots)
        deficit = 1.0 + j_inner(p, p).real
        # exact up to rounding in 1 - sum over 2000 pairs
        assert 0 < deficit <= d.e_tail_sq + 1e-12
        assert deficit == pytest.approx(d.e_tail_sq, rel=1e-3)


def test_onb(fam05):
    f, roots = fam05
    e1, e3 = krein_e(f, 1, roots), krein_e(f, 3, roots)
    assert abs(inner(e1, e3)) < 1e-6
    assert norm(e1) == pytest.approx(1.0, abs=1e-6)


def test_missing_roots(fam05):
    f, roots = fam05
    with pytest.raises(MissingRootError):
        krein_phi(f, 1)
    with pytest.raises(MissingRootError):
        krein_phi(f, 13, roots)


def test_truncation_too_small():
    f = KreinFamily.delta_family(0.25, pairs=2)
    with pytest.raises(TruncationError):
        krein_phi(f, 1, f.roots(1))
    with pytest.raises(TruncationError):
        krein_phi(f, 4)


@pytest.mark.parametrize("delta,verdict", [
    (0.5, TypeVerdict.FIRST), (1.0, TypeVerdict.FIRST), (1.5, TypeVerdict.SECOND), (2.0, TypeVerdict.SECOND),
])
def test_classify_type(delta, verdict):
    assert classify_type(KreinFamily.delta_family(delta, pairs=4)).verdict is verdict


@pytest.mark.parametrize("delta", [0.0, -1.0, 2.01, 3.0])
def test_delta_out_of_range(delta):
    with pytest.raises(InvalidFamilyError):
        KreinFamily.delta_family(delta)


def test_cosh2_in_l2_is_invalid():
    f = KreinFamily(alpha=AlphaSequence.from_cosh_squared(lambda n: n + 1.0),
                    chi=lambda n: (n + 1.0) ** -2.0, exponents=(-3.0, -2.0))
    with pytest.raises(InvalidFamilyError):
        classify_type(f)


def test_custom_family_without_tail_still_builds():
    # cosh^2 = n+1 and chi = (n+1)^-1 is the delta = 1 family without a tail policy
    f = KreinFamily(alpha=AlphaSequence.from_cosh_squared(lambda n: n + 1.0),
                    chi=lambda n: 1.0 / (n + 1.0), pairs=200, terms=2000, exponents=(-1.0, 0.0))
    g = KreinFamily.delta_family(1.0, pairs=200, terms=2000)
    with pytest.warns(RuntimeWarning):
        r = f.roots(2)
    # without a tail the roots move by the omitted O(1/N) sum
    assert np.allclose(r.mus, g.roots(2).mus, atol=1e-4)
    assert math.isnan(r[0].tail_bound)
    assert classify_type(f).verdict is TypeVerdict.FIRST
