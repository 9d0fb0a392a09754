"""Structural invariant suite run by ``mwhiggs verify``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import admissible, lie, linalg


@dataclass
class Check:
    name: str
    ok: bool
    detail: Optional[str] = None

    def to_json(self) -> dict:
        d = {"name": self.name, "ok": self.ok}
        if self.detail:
            d["detail"] = self.detail
        return d


def _guard(name: str, fn: Callable[[], object]) -> Check:
    try:
        out = fn()
    except Exception as e:  # report every failure as a check entry
        return Check(name, False, f"{type(e).__name__}: {e}")
    if isinstance(out, tuple):
        ok, detail = out
        return Check(name, bool(ok), detail)
    return Check(name, bool(out))


def homomorphism_violations(rep: admissible.AdmissibleRep) -> list[tuple[int, int]]:
    g = rep.source
    imgs = [rep(b) for b in g.basis]
    bad = []
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            if rep(g.basis[i].commutator(g.basis[j])) != imgs[i].commutator(imgs[j]):
                bad.append((i, j))
    return bad


def trace_gram_matches_killing(h: lie.HermitianStructure, rep: admissible.AdmissibleRep) -> bool:
    """Gram of tr(sigma X sigma Y) on p equals Killing/(2 p_X)."""
    P = h.cartan.p_indices
    imgs = [rep(h.algebra.basis[i]) for i in P]
    kill = h.metric(lie.MetricKind.KILLING).gram
    f = Fraction(1, 2 * h.p_X)
    for a in range(len(P)):
        for b in range(a, len(P)):
            if (imgs[a] @ imgs[b]).trace() != kill[a][b] * f:
                return False
    return True


def ad_invariance_violations(g: lie.RealLieAlgebra, kappa: lie.MetricForm) -> list[tuple[int, int, int]]:
    """kappa([x,y],z) + kappa(y,[x,z]) = 0 on all basis triples."""
    G = kappa.gram
    bad = []
    for x in range(g.dim):
        for y in range(g.dim):
            xy = g.bracket_coeffs(x, y)
            for z in range(y, g.dim):
                xz = g.bracket_coeffs(x, z)
                s = sum((c * G[m][z] for m, c in xy.items()), Fraction(0))
                s += sum((c * G[y][m] for m, c in xz.items()), Fraction(0))
                if s:
                    bad.append((x, y, z))
    return bad


def invariant_suite(family, params, inject_fault: str | None = None) -> tuple[list[Check], dict]:
    g = lie.build_algebra(family, params)
    checks: list[Check] = []
    checks.append(_guard("real-form condition on basis", lambda: all(g.satisfies_real_form(b) for b in g.basis)))
    checks.append(_guard("Jacobi identity on all basis triples", lambda: not g.jacobi_violations()))
    cd = lie.cartan_decompose(g)
    checks.append(_guard("Cartan grading", lambda: not lie.grading_violations(g, cd)))
    kappa = lie.killing_form(g)
    checks.append(_guard("Killing closed form 2 p_X tr(XY)", lambda: not lie.killing_closed_form_mismatches(g, kappa)))
    if g.dim <= 40:
        checks.append(_guard("Killing ad-invariance", lambda: not ad_invariance_violations(g, kappa)))
    checks.append(_guard("Killing negative definite on k",
                         lambda: linalg.is_negative_definite(kappa.restrict(cd.k_indices))))
    checks.append(_guard("Killing positive definite on p",
                         lambda: linalg.is_positive_definite(kappa.restrict(cd.p_indices))))
    h = lie.hermitian_structure(g, cd)
    checks.append(_guard("[I,k] = 0 and ad(I)^2 = -1 on p", lambda: lie.complex_structure_ok(h)))
    checks.append(_guard("real rank certified maximal abelian",
                         lambda: lie.certify_flat(g, cd, h.flat_basis) is None))
    rep = admissible.standard_rep(h)
    if inject_fault == "sign-of-I":
        rep = admissible.corrupt_sign_of_I(rep)
    cert = admissible.check_admissible(rep, h, raise_on_failure=False)
    checks.append(Check("admissible", cert.admissible,
                        None if cert.admissible else "failed: " + ", ".join(cert.failures())))
    checks.append(_guard("dsigma is a homomorphism", lambda: not homomorphism_violations(rep)))
    checks.append(_guard("tr(sigma X sigma Y) Gram = Killing/(2 p_X) on p", lambda: trace_gram_matches_killing(h, rep)))
    c = None
    if cert.admissible:
        c = admissible.compute_c_sigma(h, rep)
        checks.append(Check("c_sigma = -2", c == -2, f"c_sigma = {c}"))
    if g.family is lie.Family.SP_2N:
        emb = admissible.check_embedding(g, rep.embedding)
        checks.append(Check("T-embedding checks", emb.ok, emb.first_failure))
    context = {"algebra": g, "hermitian": h, "rep": rep, "certificate": cert, "c_sigma": c}
    return checks, context
