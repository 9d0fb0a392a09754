"""Pointwise checks of the identities behind the Toledo-from-degree formula.

A Higgs field is sampled by its values theta1 = theta(xi1), theta2 = theta(xi2)
on two real tangent vectors.  For matrix-valued 1-forms alpha, beta the wedge
bracket evaluated on (xi1, xi2) is

    [alpha ^ beta](xi1, xi2) = [alpha(xi1), beta(xi2)] - [alpha(xi2), beta(xi1)].

With this convention [theta ^ theta^dagger] = [theta^dagger ^ theta] holds
literally and [Theta ^ Theta] = 2 [theta ^ theta^dagger] for
Theta = theta + theta^dagger whenever [theta1, theta2] = 0.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .admissible import AdmissibleRep
from .field import I as IMAG
from .field import FieldScalar, MatrixF


class HiggsError(Exception):
    pass


class ResampleExhausted(HiggsError):
    pass


class BlockLeak(HiggsError):
    pass


class RouteMismatch(HiggsError):
    def __init__(self, a, b, c):
        super().__init__(f"Omega routes disagree: A={a}, B={b}, C={c}")
        self.values = (a, b, c)


class SampleMode(str, enum.Enum):
    I_MULTIPLE = "i_multiple"
    SCALAR_MULTIPLE = "scalar_multiple"
    STRUCTURED = "structured"


@dataclass(frozen=True)
class HiggsSample:
    dimV: int
    dimW: int
    theta1: MatrixF
    theta2: MatrixF
    mode: str = "explicit"
    seed: Optional[int] = None

    @property
    def size(self) -> int:
        return self.dimV + self.dimW

    def is_off_diagonal(self) -> bool:
        v, N = self.dimV, self.size
        return all(t.sub(0, v, 0, v).is_zero() and t.sub(v, N, v, N).is_zero() for t in (self.theta1, self.theta2))

    def commutes(self) -> bool:
        return self.theta1.commutator(self.theta2).is_zero()

    def scaled(self, lam: Fraction) -> HiggsSample:
        return HiggsSample(self.dimV, self.dimW, self.theta1.scale(lam), self.theta2.scale(lam), self.mode, self.seed)


def higgs_block(beta: MatrixF, gamma: MatrixF) -> MatrixF:
    """[[0, beta], [gamma, 0]] with beta: W -> V and gamma: V -> W."""
    v, w = beta.rows, beta.cols
    return MatrixF.block([[MatrixF.zeros(v), beta], [gamma, MatrixF.zeros(w)]])


def _rand_scalar(rng: random.Random, complex_: bool = True) -> FieldScalar:
    def q() -> Fraction:
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))

    return FieldScalar(q(), 0, q() if complex_ else 0)


def _rand_matrix(rng: random.Random, r: int, c: int, density: float = 0.7) -> MatrixF:
    return MatrixF(r, c, [_rand_scalar(rng) if rng.random() < density else 0 for _ in range(r * c)])


def _proportional(a: MatrixF, b: MatrixF) -> bool:
    if a.is_zero() or b.is_zero():
        return True
    k = next(i for i, x in enumerate(a.entries) if x)
    lam = b.entries[k] / a.entries[k]
    return a.scale(lam) == b


def make_sample(dimV: int, dimW: int, mode: SampleMode | str, seed: int, max_tries: int = 64) -> HiggsSample:
    """Deterministic commuting pair of off-diagonal Higgs values."""
    if dimV < 1 or dimW < 1:
        raise ValueError("dims must be >= 1")
    mode = SampleMode(mode)
    rng = random.Random(f"higgs:{dimV}:{dimW}:{mode.value}:{seed}")
    if mode is SampleMode.I_MULTIPLE:
        t1 = _nonzero_theta(rng, dimV, dimW)
        return HiggsSample(dimV, dimW, t1, t1.scale(IMAG), mode.value, seed)
    if mode is SampleMode.SCALAR_MULTIPLE:
        t1 = _nonzero_theta(rng, dimV, dimW)
        lam = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
        return HiggsSample(dimV, dimW, t1, t1.scale(lam), mode.value, seed)
    for _ in range(max_tries):
        t1, t2 = _structured_pair(rng, dimV, dimW)
        if t1.commutator(t2).is_zero() and not _proportional(t1, t2):
            return HiggsSample(dimV, dimW, t1, t2, mode.value, seed)
    raise ResampleExhausted(f"no commuting non-proportional pair found for dims ({dimV},{dimW})")


def _nonzero_theta(rng: random.Random, v: int, w: int) -> MatrixF:
    while True:
        t = higgs_block(_rand_matrix(rng, v, w), _rand_matrix(rng, w, v))
        if not t.is_zero():
            return t


def _structured_pair(rng: random.Random, v: int, w: int) -> tuple[MatrixF, MatrixF]:
    kind = rng.randrange(3)
    if kind == 0:
        # odd polynomials in one off-diagonal matrix stay off-diagonal and commute
        t0 = _nonzero_theta(rng, v, w)
        t3 = t0 @ t0 @ t0
        a1, b1, a2, b2 = (_rand_scalar(rng) for _ in range(4))
        return t0.scale(a1) + t3.scale(b1), t0.scale(a2) + t3.scale(b2)
    if kind == 1:
        # gamma = 0: all products vanish
        z = MatrixF.zeros(w, v)
        return higgs_block(_rand_matrix(rng, v, w), z), higgs_block(_rand_matrix(rng, v, w), z)
    z = MatrixF.zeros(v, w)
    return higgs_block(z, _rand_matrix(rng, w, v)), higgs_block(z, _rand_matrix(rng, w, v))


# tau, Theta and wedge ---------------------------------------------------------------

def tau(theta: MatrixF) -> MatrixF:
    """Cartan involution of GL(E) on the Lie algebra: X -> -conj(X)^t."""
    return -theta.dagger()


def theta_C(theta: MatrixF) -> MatrixF:
    """theta - tau(theta) = theta + conj(theta)^t."""
    return theta - tau(theta)


def wedge(a1: MatrixF, a2: MatrixF, b1: MatrixF, b2: MatrixF) -> MatrixF:
    """[alpha ^ beta](xi1, xi2) for alpha = (a1, a2), beta = (b1, b2)."""
    return a1.commutator(b2) - a2.commutator(b1)


def wedge_theta_thetabar(s: HiggsSample) -> MatrixF:
    return wedge(s.theta1, s.theta2, s.theta1.dagger(), s.theta2.dagger())


@dataclass
class IdentityCheck:
    name: str
    ok: bool
    witness: Optional[MatrixF] = None

    def to_json(self) -> dict:
        d = {"name": self.name, "ok": self.ok}
        if not self.ok and self.witness is not None:
            d["witness"] = self.witness.to_text_rows()
        return d


@dataclass
class IdentityReport:
    dims: tuple[int, int]
    seed: Optional[int]
    mode: str
    rep: Optional[str] = None
    checks: list[IdentityCheck] = field(default_factory=list)
    omega: Optional[FieldScalar] = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, witness: Optional[MatrixF] = None) -> None:
        self.checks.append(IdentityCheck(name, ok, None if ok else witness))

    def first_failure(self) -> Optional[IdentityCheck]:
        return next((c for c in self.checks if not c.ok), None)

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "seed": self.seed,
            "mode": self.mode,
            "rep": self.rep,
            "ok": self.ok,
            "omega": None if self.omega is None else str(self.omega),
            "checks": [c.to_json() for c in self.checks],
        }


def verify_wedge_collapse(s: HiggsSample, report: Optional[IdentityReport] = None) -> IdentityReport:
    r = report or IdentityReport((s.dimV, s.dimW), s.seed, s.mode)
    t1, t2 = s.theta1, s.theta2
    b1, b2 = t1.dagger(), t2.dagger()
    T1, T2 = theta_C(t1), theta_C(t2)
    big = wedge(T1, T2, T1, T2)
    tt = wedge(t1, t2, t1, t2)
    tb = wedge(t1, t2, b1, b2)
    bt = wedge(b1, b2, t1, t2)
    bb = wedge(b1, b2, b1, b2)
    expansion = tt + tb + bt + bb
    r.add("[Theta^Theta] = sum of four wedge terms", big == expansion, big - expansion)
    r.add("[theta^theta] = 0", tt.is_zero(), tt)
    r.add("[thetabar^t ^ thetabar^t] = 0", bb.is_zero(), bb)
    r.add("[theta^thetabar^t] = [thetabar^t^theta]", tb == bt, tb - bt)
    r.add("[Theta^Theta] = 2[theta^thetabar^t]", big == tb.scale(2), big - tb.scale(2))
    return r


# curvature and trace identity ---------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureBlocks:
    F_V: MatrixF
    F_W: MatrixF

    @property
    def traces(self) -> tuple[FieldScalar, FieldScalar]:
        return self.F_V.trace(), self.F_W.trace()


def curvature(s: HiggsSample) -> MatrixF:
    """F = -[theta ^ conj(theta)^t] = [theta ^ tau(theta)]; both spellings must agree."""
    F1 = -wedge_theta_thetabar(s)
    F2 = wedge(s.theta1, s.theta2, tau(s.theta1), tau(s.theta2))
    if F1 != F2:
        raise HiggsError("F = -[theta^thetabar^t] and F = [theta^tau(theta)] disagree")
    return F1


def split_blocks(F: MatrixF, dimV: int) -> CurvatureBlocks:
    N = F.rows
    if not (F.sub(0, dimV, dimV, N).is_zero() and F.sub(dimV, N, 0, dimV).is_zero()):
        raise BlockLeak("curvature has off-diagonal blocks")
    return CurvatureBlocks(F.sub(0, dimV, 0, dimV), F.sub(dimV, N, dimV, N))


def curvature_and_trace_identity(s: HiggsSample, rep: AdmissibleRep) -> tuple[CurvatureBlocks, tuple[FieldScalar, FieldScalar]]:
    """Return the curvature blocks and the matched pair (lhs, rhs) of

        tr(sigma(I)[theta^thetabar^t]) = (i/(v+w)) * (w*tr F_V - v*tr F_W).
    """
    if (rep.dimV, rep.dimW) != (s.dimV, s.dimW):
        raise HiggsError(f"rep split {(rep.dimV, rep.dimW)} does not match sample dims {(s.dimV, s.dimW)}")
    F = curvature(s)
    blocks = split_blocks(F, s.dimV)
    trV, trW = blocks.traces
    if not (trV + trW).is_zero():
        raise HiggsError("tr F_V + tr F_W != 0")
    lhs = (rep.sigma_I @ wedge_theta_thetabar(s)).trace()
    N = s.size
    rhs = IMAG * FieldScalar(Fraction(1, N)) * (trV * s.dimW - trW * s.dimV)
    collapse_V = IMAG * trV
    collapse_W = -(IMAG * trW)
    if not (lhs == rhs == collapse_V == collapse_W):
        raise HiggsError(f"trace identity fails: lhs={lhs}, rhs={rhs}, i*trF_V={collapse_V}, -i*trF_W={collapse_W}")
    return blocks, (lhs, rhs)


def omega_routes(s: HiggsSample, rep: AdmissibleRep, c_sigma: Fraction) -> tuple[FieldScalar, FieldScalar, FieldScalar]:
    sI = rep.sigma_I
    c = FieldScalar(c_sigma)
    T1, T2 = theta_C(s.theta1), theta_C(s.theta2)
    route_a = c * (sI @ T1 @ T2 - T1 @ sI @ T2).trace()
    route_b = c * FieldScalar(Fraction(1, 2)) * (sI @ wedge(T1, T2, T1, T2)).trace()
    route_c = c * (sI @ wedge_theta_thetabar(s)).trace()
    return route_a, route_b, route_c


def omega_two_routes(s: HiggsSample, rep: AdmissibleRep, c_sigma: Fraction) -> FieldScalar:
    """Omega(Theta, Theta)(xi1, xi2) via the direct trace, the wedge form and the collapsed form."""
    a, b, c = omega_routes(s, rep, c_sigma)
    if not (a == b == c):
        raise RouteMismatch(a, b, c)
    return a


def run_identity_suite(s: HiggsSample, rep: AdmissibleRep, c_sigma: Fraction) -> IdentityReport:
    """All pointwise identities on one sample, as report entries rather than exceptions."""
    r = IdentityReport((s.dimV, s.dimW), s.seed, s.mode, rep.descriptor)
    r.add("theta off-diagonal", s.is_off_diagonal())
    r.add("[theta1, theta2] = 0", s.commutes(), s.theta1.commutator(s.theta2))
    verify_wedge_collapse(s, r)
    T1 = theta_C(s.theta1)
    r.add("Theta_C = theta - tau(theta) is Hermitian", T1.dagger() == T1, T1.dagger() - T1)
    try:
        F = curvature(s)
        r.add("F = -[theta^thetabar^t] = [theta^tau(theta)]", True)
    except HiggsError:
        F = -wedge_theta_thetabar(s)
        r.add("F = -[theta^thetabar^t] = [theta^tau(theta)]", False, F)
    try:
        blocks = split_blocks(F, s.dimV)
        r.add("F block-diagonal", True)
    except BlockLeak:
        r.add("F block-diagonal", False, F)
        return r
    trV, trW = blocks.traces
    r.add("tr F_V = -tr F_W", (trV + trW).is_zero(), MatrixF(1, 2, [trV, trW]))
    try:
        curvature_and_trace_identity(s, rep)
        r.add("tr(sigma(I)[theta^thetabar^t]) = i tr F_V", True)
    except HiggsError:
        r.add("tr(sigma(I)[theta^thetabar^t]) = i tr F_V", False, F)
    a, b, c = omega_routes(s, rep, c_sigma)
    r.add("Omega routes A = B = C", a == b == c, MatrixF(1, 3, [a, b, c]))
    r.omega = a
    return r
