"""Exit criteria.  Each test records one pass/fail line shown in the terminal summary."""

import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from mwhiggs import admissible, lie
from mwhiggs.admissible import check_embedding, embedding_data, expected_sigma_I
from mwhiggs.field import MatrixF
from mwhiggs.higgs import SampleMode, make_sample, run_identity_suite
from mwhiggs.report import degree_bound, mw_gate, toledo_from_degree

from .conftest import ACCEPTANCE, PI_50

SU_RANGE = [(p, q) for p in range(1, 8) for q in range(p, 8) if p + q <= 8]
SP_RANGE = [1, 2, 3, 4]


def record(k, ok, msg):
    ACCEPTANCE[k] = (ok, msg)
    assert ok, msg


def pipeline(family, params):
    g = lie.build_algebra(family, params)
    h = lie.hermitian_structure(g)
    rep = admissible.standard_rep(h)
    admissible.check_admissible(rep, h)
    return g, h, rep, admissible.compute_c_sigma(h, rep)


@pytest.fixture(scope="module")
def built():
    out = {}
    t0 = time.perf_counter()
    for pq in SU_RANGE:
        out[("su", pq)] = pipeline("su", pq)
    t_su = time.perf_counter() - t0
    t0 = time.perf_counter()
    for n in SP_RANGE:
        out[("sp", (n,))] = pipeline("sp", (n,))
    t_sp = time.perf_counter() - t0
    return out, t_su, t_sp


def test_c1_c_sigma_su(built):
    data, t_su, _ = built
    values = {pq: data[("su", pq)][3] for pq in SU_RANGE}
    ok = all(v == -2 for v in values.values()) and t_su < 10
    record(1, ok, f"c_sigma = -2 for {len(values)} su(p,q), p<=q, p+q<=8; {t_su:.2f}s (< 10s)")


def test_c2_c_sigma_sp(built):
    data, _, t_sp = built
    values = [data[("sp", (n,))][3] for n in SP_RANGE]
    ok = all(v == -2 for v in values) and t_sp < 10
    record(2, ok, f"c_sigma = -2 for sp(2n,R), n=1..4; {t_sp:.2f}s (< 10s)")


def test_c3_killing_closed_forms(built):
    data, _, _ = built
    bad = []
    for key, (g, h, _, _) in data.items():
        coeff = 2 * (sum(g.params) if g.family is lie.Family.SU_PQ else g.params[0] + 1)
        gram = h.killing.gram  # ad-trace route
        for i in range(g.dim):
            for j in range(i, g.dim):
                if (g.basis[i] @ g.basis[j]).trace() * coeff != gram[i][j]:
                    bad.append((key, i, j))
    record(3, not bad, f"tr(ad X ad Y) = 2(p+q) tr(XY) / 2(n+1) tr(XY) on all basis pairs of {len(data)} algebras")


def test_c4_complex_structure_and_sigma_I(built):
    data, _, _ = built
    bad = []
    for key, (g, h, rep, _) in data.items():
        ok = all(h.I.commutator(g.basis[k]).is_zero() for k in h.cartan.k_indices)
        ok &= all(h.I.commutator(h.I.commutator(g.basis[m])) == -g.basis[m] for m in h.cartan.p_indices)
        ok &= rep(h.I) == expected_sigma_I(rep.dimV, rep.dimW)
        ok &= rep.certificate.split == (rep.dimV, rep.dimW)
        if not ok:
            bad.append(key)
    record(4, not bad, f"[I,k]=0, ad(I)^2=-1 on p, dsigma(I) block equation for {len(data)} groups")


def test_c5_real_rank(built):
    data, _, _ = built
    bad = []
    for key, (g, h, _, _) in data.items():
        expected = min(g.params) if g.family is lie.Family.SU_PQ else g.params[0]
        lie.certify_flat(g, h.cartan, h.flat_basis)
        if h.rank != expected:
            bad.append(key)
    record(5, not bad, "real rank = min(p,q) / n with certified maximal abelian flat")


def test_c6_embedding():
    ok = True
    for n in SP_RANGE:
        emb = embedding_data(n)
        res = check_embedding(lie.build_algebra("sp", (n,)), emb)
        ok &= res.ok and emb.S @ emb.S == MatrixF.identity(n) and emb.T @ emb.T.dagger() == MatrixF.identity(2 * n)
    record(6, ok, "S^2=1, TT^dagger=1, block display, su(n,n) membership, trace compatibility for n=1..4")


def test_c7_higgs_identities(built):
    data, _, _ = built
    reps = {(r.dimV, r.dimW): r for (_, _, r, _) in data.values() if r.dimV <= 3 and r.dimW <= 3}
    for pq in [(2, 1), (3, 1), (3, 2)]:
        reps[pq] = pipeline("su", pq)[2]
    sp_reps = [data[("sp", (n,))][2] for n in (1, 2, 3)]
    modes = list(SampleMode)
    t0 = time.perf_counter()
    count = failures = 0
    for k in range(600):
        rep = sp_reps[k % 3] if k % 5 == 0 else list(reps.values())[k % len(reps)]
        mode = modes[k % 3]
        if mode is SampleMode.STRUCTURED and (rep.dimV, rep.dimW) == (1, 1):
            mode = SampleMode.I_MULTIPLE
        s = make_sample(rep.dimV, rep.dimW, mode, k)
        r = run_identity_suite(s, rep, rep.c_sigma)
        count += 1
        failures += not r.ok
    dt = time.perf_counter() - t0
    dims = sorted(reps)
    record(7, failures == 0 and count >= 500 and dt < 30,
           f"{count} samples over dims {dims}, {failures} failures, {dt:.2f}s (< 30s)")


def _random_cases(seed, k):
    rng = random.Random(seed)
    cases = []
    while len(cases) < k:
        if rng.random() < 0.5:
            p = rng.randint(1, 7)
            q = rng.randint(1, 8 - p) if p < 8 else 1
            rank = min(p, q)
        else:
            rank = rng.randint(1, 4)
        vol = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**3))
        K = rank * vol / (4 * PI_50)
        # keep the 50-digit oracle decisive about the floor
        if abs(K - round(K)) > Fraction(1, 10**40):
            cases.append((rank, vol))
    return cases


def test_c8_bound_specialization():
    bad = []
    for rank, vol in _random_cases(8, 20):
        iv, m = degree_bound(rank, Fraction(-2), vol)
        ref = rank * vol / (4 * PI_50)  # closed form for c_sigma = -2
        w = iv.hi - iv.lo
        if not (iv.lo - w <= ref <= iv.hi + w) or m != math.floor(ref):
            bad.append((rank, vol))
    record(8, not bad, "20 randomized (rank, vol): interval contains rank*vol/(4 pi) and floors match 50-digit oracle")


def test_c9_gate_consistency():
    bad = []
    for rank, vol in _random_cases(9, 20):
        vol = vol / 1000  # keep degree ranges short
        _, m = degree_bound(rank, Fraction(-2), vol)
        for d in range(-m - 1, m + 2):
            gate = mw_gate(toledo_from_degree(Fraction(-2), d, vol), rank)
            if (gate == "PASS") != (abs(d) <= m):
                bad.append((rank, vol, d))
    record(9, not bad, "mw_gate agrees with max_degree on [-m-1, m+1] for 20 randomized configurations")


def test_c10_determinism():
    cmds = [
        ["verify", "--group", "su", "--p", "2", "--q", "2", "--trials", "30", "--seed", "42"],
        ["report", "--group", "sp", "--n", "2", "--vol", "628/100", "--seed", "1"],
    ]
    ok = True
    for argv in cmds:
        runs = [subprocess.run([sys.executable, "-m", "mwhiggs", *argv], capture_output=True, check=True).stdout
                for _ in range(2)]
        ok &= runs[0] == runs[1] and len(runs[0]) > 0
    record(10, ok, "verify and report produce byte-identical output across two runs")
