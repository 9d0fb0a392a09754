from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwhiggs.field import I, FieldScalar, MatrixF
from mwhiggs.higgs import (BlockLeak, HiggsSample, ResampleExhausted, SampleMode, curvature,
                           curvature_and_trace_identity, make_sample, omega_routes, omega_two_routes,
                           run_identity_suite, split_blocks, tau, theta_C, verify_wedge_collapse,
                           wedge_theta_thetabar)

from .conftest import rep_for

E01 = MatrixF.from_rows([[0, 1], [0, 0]])
HAND = HiggsSample(1, 1, E01, E01.scale(I))


def test_tau_and_theta_C():
    assert theta_C(E01) == MatrixF.from_rows([[0, 1], [1, 0]])
    t = MatrixF.from_rows([[0, I], [0, 0]])
    assert theta_C(t) == MatrixF.from_rows([[0, I], [-I, 0]])
    assert tau(tau(t)) == t


def test_hand_oracle_curvature_and_trace():
    # [theta1, theta2^dag] - [theta2, theta1^dag] = -2i diag(1,-1), worked by hand
    w = wedge_theta_thetabar(HAND)
    assert w == MatrixF.diag([I * -2, I * 2])
    F = curvature(HAND)
    assert F == MatrixF.diag([I * 2, I * -2])
    blocks, (lhs, rhs) = curvature_and_trace_identity(HAND, rep_for("su", 1, 1))
    assert blocks.F_V.trace() == I * 2
    assert lhs == rhs == -2


def test_hand_oracle_omega():
    assert omega_two_routes(HAND, rep_for("su", 1, 1), Fraction(-2)) == 4


def test_zero_field():
    z = MatrixF.zeros(2)
    s = HiggsSample(1, 1, z, z)
    blocks, (lhs, rhs) = curvature_and_trace_identity(s, rep_for("su", 1, 1))
    assert lhs == rhs == 0 and blocks.F_V.is_zero()
    assert omega_two_routes(s, rep_for("su", 1, 1), Fraction(-2)) == 0


def test_sample_modes():
    s = make_sample(2, 3, SampleMode.I_MULTIPLE, 1)
    assert s.theta2 == s.theta1.scale(I) and s.commutes() and s.is_off_diagonal()
    s = make_sample(2, 3, SampleMode.SCALAR_MULTIPLE, 1)
    k = next(i for i, x in enumerate(s.theta1.entries) if x)
    lam = s.theta2.entries[k] / s.theta1.entries[k]
    assert lam.is_rational() and s.theta2 == s.theta1.scale(lam)
    s = make_sample(2, 2, SampleMode.STRUCTURED, 7)
    assert s.commutes() and s.is_off_diagonal()
    v = 2
    b1, g1 = s.theta1.sub(0, v, v, 4), s.theta1.sub(v, 4, 0, v)
    b2, g2 = s.theta2.sub(0, v, v, 4), s.theta2.sub(v, 4, 0, v)
    assert b1 @ g2 == b2 @ g1 and g1 @ b2 == g2 @ b1
    assert make_sample(2, 2, SampleMode.STRUCTURED, 7) == s


def test_structured_11_exhausts():
    with pytest.raises(ResampleExhausted):
        make_sample(1, 1, SampleMode.STRUCTURED, 0)


def test_noncommuting_negative_control():
    t1 = MatrixF.from_rows([[0, 1], [0, 0]])
    t2 = MatrixF.from_rows([[0, 0], [1, 0]])
    s = HiggsSample(1, 1, t1, t2)
    r = verify_wedge_collapse(s)
    failed = {c.name for c in r.checks if not c.ok}
    assert "[theta^theta] = 0" in failed
    witness = next(c for c in r.checks if c.name == "[theta^theta] = 0").witness
    assert not witness.is_zero()


def test_block_leak():
    with pytest.raises(BlockLeak):
        split_blocks(MatrixF.from_rows([[0, 1], [0, 0]]), 1)


DIMS = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 3)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(DIMS), st.sampled_from(list(SampleMode)), st.integers(0, 10**6))
def test_identity_suite_property(dims, mode, seed):
    v, w = dims
    if mode is SampleMode.STRUCTURED and dims == (1, 1):
        mode = SampleMode.I_MULTIPLE
    s = make_sample(v, w, mode, seed)
    rep = rep_for("su", v, w)
    r = run_identity_suite(s, rep, rep.c_sigma)
    assert r.ok, r.first_failure()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(DIMS[1:]), st.integers(0, 10**6),
       st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(lambda x: x != 0))
def test_scale_covariance(dims, seed, lam):
    s = make_sample(*dims, SampleMode.STRUCTURED, seed)
    rep = rep_for("su", *dims)
    base = omega_two_routes(s, rep, rep.c_sigma)
    assert omega_two_routes(s.scaled(lam), rep, rep.c_sigma) == base * FieldScalar(lam * lam)


def test_routes_on_structured_22():
    s = make_sample(2, 2, SampleMode.STRUCTURED, 7)
    a, b, c = omega_routes(s, rep_for("su", 2, 2), Fraction(-2))
    assert a == b == c


def test_sp_rep_samples():
    rep = rep_for("sp", 2)
    for seed in range(5):
        s = make_sample(2, 2, SampleMode.STRUCTURED, seed)
        assert run_identity_suite(s, rep, rep.c_sigma).ok
