import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rieszkit.errors import ValidationError
from rieszkit.seq import J, TruncatedVector, basis, inner, j_inner, norm, norm_interval, parity_signs

coef = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)
vectors = st.lists(coef, min_size=1, max_size=12).map(TruncatedVector)


def test_basis_orthonormal():
    assert inner(basis(0), basis(0)) == 1
    assert inner(basis(0), basis(1)) == 0
    assert norm(basis(3)) == 1


def test_inner_linear_in_first_slot():
    assert inner(basis(0) * (1 + 1j), basis(0)) == 1 + 1j
    assert inner(basis(0), basis(0) * (1 + 1j)) == 1 - 1j


def test_j_inner_signs():
    assert j_inner(basis(1), basis(1)) == -1
    assert j_inner(basis(0), basis(1)) == 0


@pytest.mark.parametrize("a", [0.0, 0.3, 1.7, 5.0])
def test_hyperbolic_pair_is_j_unit(a):
    phi0 = TruncatedVector([math.cosh(a), math.sinh(a)])
    assert j_inner(phi0, phi0) == pytest.approx(1.0, abs=1e-12 * math.cosh(a) ** 2)


def test_norm_examples():
    assert norm(TruncatedVector([3, 4])) == 5
    assert norm(TruncatedVector([0.0, 0.0])) == 0


def test_padding_and_arithmetic():
    u, v = TruncatedVector([1, 2]), TruncatedVector([1, 0, 3])
    assert np.array_equal((u + v).coeffs, [2, 2, 3])
    assert np.array_equal((u - v).coeffs, [0, 2, -3])
    assert u[7] == 0


def test_tails_propagate():
    u = TruncatedVector([1.0], tail_bound=0.1)
    w = TruncatedVector([0.0, 1.0], tail_bound=0.2)
    assert (u + w).tail_bound == pytest.approx(0.3)
    assert (u * -2).tail_bound == pytest.approx(0.2)
    assert (u + basis(0)).tail_bound == pytest.approx(0.1)
    lo, hi = norm_interval(u)
    # the omitted tail is orthogonal to the materialized head
    assert lo == 1.0 and hi == pytest.approx(math.sqrt(1.01))


def test_rejects_non_finite():
    with pytest.raises(ValidationError):
        TruncatedVector([1.0, math.nan])
    with pytest.raises(ValidationError):
        basis(-1)


def test_coefficients_read_only():
    v = TruncatedVector([1.0, 2.0])
    with pytest.raises(ValueError):
        v.coeffs[0] = 5


def test_parity_signs():
    assert list(parity_signs(4)) == [1, -1, 1, -1]


@given(vectors, vectors)
def test_inner_hermitian(u, v):
    assert inner(u, v) == pytest.approx(inner(v, u).conjugate(), rel=1e-12, abs=1e-9)
    assert j_inner(u, v) == pytest.approx(j_inner(v, u).conjugate(), rel=1e-12, abs=1e-9)


@given(vectors, vectors)
def test_j_is_unitary_involution(u, v):
    assert np.array_equal(J(J(u)).coeffs, u.coeffs)
    assert j_inner(u, v) == pytest.approx(inner(J(u), v), rel=1e-12, abs=1e-9)
