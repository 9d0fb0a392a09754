"""Toledo values, the Milnor-Wood gate and certified degree bounds.

Toledo invariants are carried as exact rational multiples of 2*pi.  pi only
appears inside interval comparisons, refined by doubling precision until the
decision is certain.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import admissible, higgs, lie
from .field import RationalInterval, pi_enclosure

SCHEMA_VERSION = 1
DEFAULT_PI_BITS = 64
MAX_PI_BITS = 4096


class ReportError(Exception):
    def __init__(self, stage: str, message: str, detail: Optional[dict] = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.detail = detail or {}

    def to_json(self) -> dict:
        return {"schema": SCHEMA_VERSION, "error": {"stage": self.stage, "message": str(self), "detail": self.detail}}


class NonpositiveVolume(ValueError):
    pass


class ZeroCSigma(ValueError):
    pass


class PrecisionCapExceeded(RuntimeError):
    pass


def default_pi_bits() -> int:
    env = os.environ.get("MW_PI_BITS")
    return int(env) if env else DEFAULT_PI_BITS


def _qtext(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ToledoValue:
    """T(rho) = coeff * 2*pi."""

    coeff: Fraction

    def enclosure(self, bits: int) -> RationalInterval:
        return pi_enclosure(bits) * (2 * self.coeff)


def toledo_from_degree(c_sigma: Fraction, degV: int, vol: Fraction) -> ToledoValue:
    vol = Fraction(vol)
    if vol <= 0:
        raise NonpositiveVolume(f"volume must be positive, got {vol}")
    return ToledoValue(Fraction(c_sigma) * degV / vol)


def _refine(decide, start_bits: int | None = None):
    bits = max(8, start_bits or default_pi_bits())
    while bits <= MAX_PI_BITS:
        out = decide(pi_enclosure(bits))
        if out is not None:
            return out, bits
        bits *= 2
    raise PrecisionCapExceeded(f"comparison undecided at {MAX_PI_BITS} bits of pi")


def mw_gate(t: ToledoValue, rank: int, start_bits: int | None = None) -> str:
    """PASS iff |T| = |coeff| * 2*pi <= rank."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if t.coeff == 0:
        return "PASS"
    k = 2 * abs(t.coeff)

    def decide(pi: RationalInterval):
        if k * pi.hi <= rank:
            return "PASS"
        if k * pi.lo >= rank:
            return "FAIL"
        return None

    return _refine(decide, start_bits)[0]


def degree_bound(rank: int, c_sigma: Fraction, vol: Fraction,
                 start_bits: int | None = None) -> tuple[RationalInterval, int]:
    """Enclosure of rank*vol/(2*pi*|c_sigma|) and its certified floor."""
    c_sigma, vol = Fraction(c_sigma), Fraction(vol)
    if c_sigma == 0:
        raise ZeroCSigma("c_sigma must be nonzero")
    if vol <= 0:
        raise NonpositiveVolume(f"volume must be positive, got {vol}")
    if rank < 1:
        raise ValueError("rank must be >= 1")
    K = Fraction(rank) * vol / (2 * abs(c_sigma))

    def decide(pi: RationalInterval):
        iv = RationalInterval(K / pi.hi, K / pi.lo)
        m = math.floor(iv.lo)
        # lo < bound < hi, so hi <= m + 1 pins the floor to m
        if iv.hi <= m + 1:
            return iv, m
        return None

    return _refine(decide, start_bits)[0]


@dataclass
class MWReport:
    group: dict
    rank: int
    p_X: int
    c_sigma: Fraction
    vol: Fraction
    bound_interval: RationalInterval
    max_degree: int
    toledo_table: list[dict]
    certificates: dict
    seed: int
    pi_bits: int
    algebra_dim: int
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "group": self.group,
            "algebra_dim": self.algebra_dim,
            "rank": self.rank,
            "p_X": self.p_X,
            "c_sigma": _qtext(self.c_sigma),
            "vol": _qtext(self.vol),
            "bound_interval": self.bound_interval.to_json(),
            "bound_approx": f"{float((self.bound_interval.lo + self.bound_interval.hi) / 2):.12g}",
            "max_degree": self.max_degree,
            "seed": self.seed,
            "pi_bits": self.pi_bits,
            "toledo_table": self.toledo_table,
            "certificates": self.certificates,
        }


def group_descriptor(g: lie.RealLieAlgebra) -> dict:
    d = {"family": g.family.value, "name": g.name}
    if g.family is lie.Family.SU_PQ:
        d["p"], d["q"] = g.params
    else:
        d["n"] = g.params[0]
    return d


def degree_table(c_sigma: Fraction, vol: Fraction, rank: int, max_degree: int,
                 margin: bool = True, start_bits: int | None = None) -> list[dict]:
    lim = max_degree + 1 if margin else max_degree
    rows = []
    for d in range(-lim, lim + 1):
        t = toledo_from_degree(c_sigma, d, vol)
        rows.append({
            "degV": d,
            "degW": -d,
            "toledo_coeff": _qtext(t.coeff),
            "gate": mw_gate(t, rank, start_bits),
            "margin": abs(d) > max_degree,
        })
    return rows


def build_report(family: lie.Family | str, params, vol: Fraction, seed: int = 0, trials: int = 8,
                 pi_bits: int | None = None, inject_fault: str | None = None) -> MWReport:
    """Run the full pipeline and assemble a self-contained report."""
    vol = Fraction(vol)
    if vol <= 0:
        raise NonpositiveVolume(f"volume must be positive, got {vol}")
    bits = pi_bits or default_pi_bits()
    g = lie.build_algebra(family, params)
    cd = lie.cartan_decompose(g)
    h = lie.hermitian_structure(g, cd)
    rep = admissible.standard_rep(h)
    if inject_fault == "sign-of-I":
        rep = admissible.corrupt_sign_of_I(rep)
    cert = admissible.check_admissible(rep, h, raise_on_failure=False)
    if not cert.admissible:
        raise ReportError("admissibility", f"{rep.descriptor} is not admissible", cert.to_json())
    c = admissible.compute_c_sigma(h, rep)
    suite = identity_campaign(rep, c, trials, seed)
    failed = [r for r in suite if not r.ok]
    if failed:
        raise ReportError("identities", "Higgs identity suite failed", failed[0].to_json())
    interval, m = degree_bound(h.rank, c, vol, bits)
    table = degree_table(c, vol, h.rank, m, start_bits=bits)
    certificates = {
        "admissibility": cert.to_json(),
        "identity_suite": {"trials": len(suite), "passed": len(suite) - len(failed), "seed": seed},
        "complex_structure": lie.complex_structure_ok(h),
        "killing_closed_form": True,
        "real_rank_maximal_abelian": True,
    }
    if g.family is lie.Family.SP_2N:
        certificates["embedding"] = admissible.check_embedding(g, rep.embedding).to_json()
    return MWReport(group_descriptor(g), h.rank, h.p_X, c, vol, interval, m, table, certificates,
                    seed, bits, g.dim)


def identity_campaign(rep: admissible.AdmissibleRep, c_sigma: Fraction, trials: int, seed: int) -> list[higgs.IdentityReport]:
    """Seeded Higgs samples on the representation's (dimV, dimW) split, in trial order."""
    v, w = rep.dimV, rep.dimW
    modes = [higgs.SampleMode.I_MULTIPLE, higgs.SampleMode.SCALAR_MULTIPLE, higgs.SampleMode.STRUCTURED]
    out = []
    for t in range(trials):
        mode = modes[t % 3]
        if mode is higgs.SampleMode.STRUCTURED and v == 1 and w == 1:
            mode = higgs.SampleMode.I_MULTIPLE  # every commuting pair is proportional in this case
        s = higgs.make_sample(v, w, mode, seed * 1_000_003 + t)
        out.append(higgs.run_identity_suite(s, rep, c_sigma))
    return out


def table_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=["degV", "degW", "toledo_coeff", "gate", "margin"], lineterminator="\n")
    wr.writeheader()
    for r in rows:
        wr.writerow(r)
    return buf.getvalue()
