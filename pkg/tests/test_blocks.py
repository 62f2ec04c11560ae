import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rieszkit.blocks import (
    AlphaSequence,
    BlockOperator,
    anticommutator_residual,
    apply,
    build_Q_family,
    build_T,
    c_symmetry_residual,
    cayley_identity_residual,
    exp_sigma1_block,
)
from rieszkit.errors import DimensionError, ExponentRangeError, SingularBlockError, ValidationError
from rieszkit.seq import TruncatedVector, basis, norm

DELTA_ALPHA = AlphaSequence.from_tanh(lambda n: np.sqrt(n / (n + 1.0)))
ZERO_ALPHA = AlphaSequence.from_values(lambda n: np.zeros(n.shape), check=False)


def test_exp_block_examples():
    assert np.array_equal(exp_sigma1_block(0.0), np.eye(2))
    a = math.atanh(math.sqrt(0.5))
    assert np.allclose(exp_sigma1_block(a), [[math.sqrt(2), 1], [1, math.sqrt(2)]], atol=1e-14)


@given(st.floats(-50, 50))
def test_exp_block_group_law(a):
    prod = exp_sigma1_block(a) @ exp_sigma1_block(-a)
    assert np.allclose(prod, np.eye(2), atol=1e-12 * math.cosh(a) ** 2)


def test_exp_block_range():
    with pytest.raises(ExponentRangeError):
        exp_sigma1_block(800.0)


def test_build_T_blocks():
    T = build_T(DELTA_ALPHA, 4)
    assert np.array_equal(T.blocks[0], np.zeros((2, 2)))
    assert T.blocks[1][0, 1] == pytest.approx(math.sqrt(0.5), abs=1e-15)
    v = apply(T, basis(2, 8))
    assert np.allclose(v.coeffs, math.sqrt(0.5) * basis(3, 8).coeffs, atol=1e-15)


def test_anticommutation_exact():
    ops = build_Q_family(DELTA_ALPHA, 64)
    assert anticommutator_residual(build_T(DELTA_ALPHA, 64)) == 0.0
    assert anticommutator_residual(ops.Q) == 0.0


def test_q_family_consistency():
    ops = build_Q_family(DELTA_ALPHA, 16)
    eye = BlockOperator.identity(16)
    assert np.allclose((ops.exp_q_half @ ops.exp_minus_q_half).blocks, eye.blocks, atol=1e-12)
    assert np.allclose((ops.exp_minus_q_half @ ops.exp_minus_q_half).blocks, ops.exp_minus_q.blocks,
                       rtol=1e-13, atol=1e-12)
    a = DELTA_ALPHA.values(16)
    for k in range(16):
        w = np.linalg.eigvalsh(ops.Q.blocks[k])
        assert np.allclose(w, [-2 * a[k], 2 * a[k]], atol=1e-13)


def test_exp_q_half_on_e0():
    alpha = AlphaSequence.from_values(lambda n: 0.4 + n, name="shifted")
    v = apply(build_Q_family(alpha, 3).exp_q_half, basis(0, 6))
    assert np.allclose(v.coeffs[:2], [math.cosh(0.4), math.sinh(0.4)], atol=1e-15)


def test_cayley_examples():
    assert cayley_identity_residual(build_T(ZERO_ALPHA, 8), build_Q_family(ZERO_ALPHA, 8).exp_minus_q) == 0
    T = build_T(DELTA_ALPHA, 8)
    em = build_Q_family(DELTA_ALPHA, 8).exp_minus_q
    assert cayley_identity_residual(T, em) <= 1e-12
    bad = np.array(T.blocks)
    bad[3, 0, 1] += 1e-3
    assert cayley_identity_residual(BlockOperator(bad, False), em) >= 1e-4


def test_inverse_and_singular():
    ops = build_Q_family(DELTA_ALPHA, 5)
    assert np.allclose(ops.exp_q_half.inverse().blocks, ops.exp_minus_q_half.blocks, atol=1e-12)
    with pytest.raises(SingularBlockError):
        BlockOperator(np.ones((1, 2, 2)), True).inverse()


def test_self_adjoint_flag_checked():
    with pytest.raises(ValidationError):
        BlockOperator(np.array([[[0.0, 1.0], [0.0, 0.0]]]), True)


def test_apply_identity_and_dims():
    v = TruncatedVector([1.0, 2.0, 3.0], tail_bound=0.5)
    w = apply(BlockOperator.identity(2), v)
    assert np.array_equal(w.coeffs, [1, 2, 3, 0]) and w.tail_bound == 0.5
    with pytest.raises(DimensionError):
        apply(BlockOperator.identity(1), v)


def test_c_symmetry_trivial_and_detector():
    em = build_Q_family(ZERO_ALPHA, 4).exp_minus_q
    assert c_symmetry_residual(em, [basis(n, 8) for n in range(8)]) == 0.0
    generic = TruncatedVector(np.linspace(1, 2, 8))
    assert c_symmetry_residual(em, [generic]) > 0.1


def test_alpha_sequence_checks():
    with pytest.raises(ValidationError):
        AlphaSequence.from_values(lambda n: -1.0 * n).hyperbolic(4)
    with pytest.raises(ExponentRangeError):
        AlphaSequence.from_tanh(lambda n: np.ones(n.shape)).hyperbolic(2)
    ch, sh = DELTA_ALPHA.hyperbolic(5)
    assert np.allclose(ch ** 2, np.arange(1, 6), rtol=1e-14)
    assert norm(TruncatedVector(ch ** 2 - sh ** 2 - 1)) < 1e-13
