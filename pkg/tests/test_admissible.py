from fractions import Fraction

import pytest

from mwhiggs import admissible
from mwhiggs.admissible import (AllDegenerate, InconsistentRatio, NotAdmissible, WrongFamily, antidiagonal,
                                check_admissible, check_embedding, compute_c_sigma, corrupt_sign_of_I,
                                embed_sp_in_su, embedding_data, expected_sigma_I, block_image_formula,
                                standard_rep_su, su_nn_condition)
from mwhiggs.field import I, ONE, MatrixF
from mwhiggs.lie import sp_matrix
from mwhiggs.verify import homomorphism_violations, trace_gram_matches_killing

from .conftest import SP_SMALL, SU_SMALL, algebra, hermitian, rep_for


def test_su21_sigma_I():
    h = hermitian("su", 2, 1)
    rep = standard_rep_su(h.algebra, h)
    third = I * Fraction(1, 3)
    assert rep.sigma_I == MatrixF.diag([-third, -third, third * 2])
    cert = check_admissible(rep, h)
    assert cert.split == (2, 1)


def test_su11_sigma_I():
    rep = rep_for("su", 1, 1)
    assert rep.sigma_I == MatrixF.diag([I * Fraction(-1, 2), I * Fraction(1, 2)])


@pytest.mark.parametrize("p,q", SU_SMALL)
def test_su_p_image_spans_off_diagonal(p, q):
    h = hermitian("su", p, q)
    rep = rep_for("su", p, q)
    imgs = [rep(h.algebra.basis[i]) for i in h.cartan.p_indices]
    from mwhiggs.linalg import rank, real_coords
    assert rank([real_coords(m) for m in imgs], 4 * (p + q) ** 2) == 2 * p * q
    assert rep.certificate.admissible and rep.certificate.split == (p, q)


def test_wrong_family():
    with pytest.raises(WrongFamily):
        standard_rep_su(algebra("sp", 1), hermitian("sp", 1))
    with pytest.raises(WrongFamily):
        embed_sp_in_su(algebra("su", 1, 1), hermitian("su", 1, 1))


def test_embedding_n1_example():
    emb = embedding_data(1)
    one = MatrixF.identity(1)
    X = sp_matrix(MatrixF.zeros(1), one, one)
    # direct 2x2 multiplication: T = (1/sqrt2)[[-i, 1], [i, 1]]
    expected = MatrixF.from_rows([[0, -I], [I, 0]])
    assert emb.conjugate(X) == expected
    assert block_image_formula(X, emb.S) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_embedding_checks(n):
    emb = embedding_data(n)
    assert emb.S @ emb.S == MatrixF.identity(n)
    assert emb.T @ emb.T.dagger() == MatrixF.identity(2 * n)
    res = check_embedding(algebra("sp", n), emb)
    assert res.ok, res.first_failure


def test_embedding_tampered_T():
    res = check_embedding(algebra("sp", 2), embedding_data(2, ONE))
    assert not res.unitary
    assert res.first_failure.startswith("T T^dagger")


def test_antidiagonal():
    assert antidiagonal(3).to_rows()[0][2] == 1
    assert su_nn_condition(MatrixF.diag([I, -I]), 1)


@pytest.mark.parametrize("fam,params", [("su", pq) for pq in SU_SMALL] + [("sp", (n,)) for n in SP_SMALL])
def test_admissible_and_c_sigma(fam, params):
    h = hermitian(fam, *params)
    rep = rep_for(fam, *params)
    assert rep.c_sigma == -2
    assert not homomorphism_violations(rep)
    assert trace_gram_matches_killing(h, rep)


def test_c_sigma_hand_oracle(su11):
    rep = rep_for("su", 1, 1)
    X = MatrixF.from_rows([[0, 1], [1, 0]])
    Y = MatrixF.from_rows([[0, I], [-I, 0]])
    assert su11.omega_o(X, Y) == 4
    assert admissible.trace_form(rep, X, Y) == -2


def test_c_sigma_invariant_under_rescaled_basis():
    h = hermitian("su", 2, 2)
    rep = rep_for("su", 2, 2)
    P = [h.algebra.basis[i] for i in h.cartan.p_indices]
    scaled = [b.scale(Fraction(k + 2, 3)) for k, b in enumerate(P)]
    assert compute_c_sigma(h, rep, scaled) == -2


def test_sp_trace_compatibility():
    g = algebra("sp", 2)
    emb = embedding_data(2)
    for a in g.basis:
        for b in g.basis:
            assert (emb.conjugate(a) @ emb.conjugate(b)).trace() == (a @ b).trace()


def test_corrupted_sign_not_admissible():
    h = hermitian("su", 2, 2)
    bad = corrupt_sign_of_I(rep_for("su", 2, 2))
    with pytest.raises(NotAdmissible) as e:
        check_admissible(bad, h)
    cert = e.value.certificate
    assert cert.failures() == ["sigma_I"]
    assert cert.witnesses["sigma_I"] == -expected_sigma_I(2, 2)


def test_unfaithful_rep_is_caught():
    h = hermitian("su", 1, 2)
    rep = rep_for("su", 1, 2)
    zero = admissible.AdmissibleRep(rep.source, 1, 2, lambda X: MatrixF.zeros(3), rep.sigma_I, "zero map")
    cert = check_admissible(zero, h, raise_on_failure=False)
    assert not cert.faithful
    assert "kernel_element" in cert.witnesses


def test_c_sigma_errors():
    h = hermitian("su", 1, 1)
    rep = rep_for("su", 1, 1)
    flat = admissible.AdmissibleRep(rep.source, 1, 1, lambda X: X, MatrixF.zeros(2), "zero sigma_I")
    with pytest.raises(InconsistentRatio):
        compute_c_sigma(h, flat)
    with pytest.raises(AllDegenerate):
        compute_c_sigma(h, rep, [MatrixF.zeros(2)])


def test_certificate_json():
    cert = rep_for("sp", 2).certificate
    d = cert.to_json()
    assert d["admissible"] and d["split"] == [2, 2] and d["witnesses"] == {}
