"""Admissible representations and the constant c_sigma.

A representation is admissible when dsigma(I) is the two-block scalar matrix
(i/(v+w)) * diag(-w * 1_V, v * 1_W).  For su(p,q) the defining representation
is admissible; for sp(2n,R) we conjugate into su(n,n) with the unitary T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import linalg
from .field import I as IMAG
from .field import ONE, FieldScalar, MatrixF
from .lie import Family, HermitianStructure, MetricKind, RealLieAlgebra

Rep = Callable[[MatrixF], MatrixF]


class AdmissibleError(Exception):
    pass


class WrongFamily(AdmissibleError, ValueError):
    pass


class NotAdmissible(AdmissibleError):
    def __init__(self, certificate: "AdmissibilityCertificate"):
        failed = ", ".join(certificate.failures())
        super().__init__(f"representation is not admissible: failed {failed}")
        self.certificate = certificate


class InconsistentRatio(AdmissibleError):
    def __init__(self, pair1, ratio1, pair2, ratio2):
        super().__init__(f"c_sigma ratio {ratio1} at p-pair {pair1} disagrees with {ratio2} at {pair2}")
        self.pairs = (pair1, pair2)
        self.ratios = (ratio1, ratio2)


class AllDegenerate(AdmissibleError):
    pass


# S and T ------------------------------------------------------------------

INV_SQRT2 = FieldScalar(0, Fraction(1, 2))


def antidiagonal(n: int) -> MatrixF:
    return MatrixF.from_rows([[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class EmbeddingData:
    S: MatrixF
    T: MatrixF

    @property
    def n(self) -> int:
        return self.S.rows

    def conjugate(self, X: MatrixF) -> MatrixF:
        return self.T @ X @ self.T.dagger()


def embedding_data(n: int, scale: FieldScalar = INV_SQRT2) -> EmbeddingData:
    """S = antidiagonal ones, T = scale * [[-iS, S], [iS, S]]."""
    S = antidiagonal(n)
    T = MatrixF.block([[S.scale(-IMAG), S], [S.scale(IMAG), S]]).scale(scale)
    return EmbeddingData(S, T)


def block_image_formula(X: MatrixF, S: MatrixF) -> MatrixF:
    """Closed-form TX(A,B,C)T^* for X = [[A, B], [C, -A^T]], evaluated blockwise."""
    n = S.rows
    A, B, C = X.sub(0, n, 0, n), X.sub(0, n, n, 2 * n), X.sub(n, 2 * n, 0, n)
    At = A.transpose()
    i = IMAG
    half = Fraction(1, 2)
    tl = S @ (A - At - (B - C).scale(i)) @ S
    tr = S @ (-A - At - (B + C).scale(i)) @ S
    bl = S @ (-A - At + (B + C).scale(i)) @ S
    br = S @ (A - At + (B - C).scale(i)) @ S
    return MatrixF.block([[tl, tr], [bl, br]]).scale(half)


def su_nn_condition(Y: MatrixF, n: int) -> bool:
    J = MatrixF.diag([ONE] * n + [-ONE] * n)
    return (Y.dagger() @ J + J @ Y).is_zero() and Y.trace().is_zero()


def standard_map(g: RealLieAlgebra) -> Rep:
    if g.family is Family.SU_PQ:
        return lambda X: X
    emb = embedding_data(g.params[0])
    return emb.conjugate


# admissible representations --------------------------------------------------------

def expected_sigma_I(dimV: int, dimW: int) -> MatrixF:
    N = dimV + dimW
    s = IMAG * FieldScalar(Fraction(1, N))
    return MatrixF.diag([s * (-dimW)] * dimV + [s * dimV] * dimW)


@dataclass(eq=False)
class AdmissibleRep:
    source: RealLieAlgebra
    dimV: int
    dimW: int
    apply: Rep
    sigma_I: MatrixF
    descriptor: str
    embedding: Optional[EmbeddingData] = None
    c_sigma: Optional[Fraction] = None
    certificate: Optional["AdmissibilityCertificate"] = field(default=None, repr=False)

    def __call__(self, X: MatrixF) -> MatrixF:
        return self.apply(X)

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "dimV": self.dimV,
            "dimW": self.dimW,
            "sigma_I": self.sigma_I.to_text_rows(),
            "c_sigma": None if self.c_sigma is None else _qtext(self.c_sigma),
        }


def _qtext(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def standard_rep_su(g: RealLieAlgebra, h: HermitianStructure) -> AdmissibleRep:
    if g.family is not Family.SU_PQ:
        raise WrongFamily(f"standard_rep_su needs su(p,q), got {g.name}")
    p, q = g.params
    return AdmissibleRep(g, p, q, lambda X: X, h.I, f"standard representation of {g.name} on C^{p}+C^{q}")


def embed_sp_in_su(g: RealLieAlgebra, h: HermitianStructure) -> AdmissibleRep:
    if g.family is not Family.SP_2N:
        raise WrongFamily(f"embed_sp_in_su needs sp(2n,R), got {g.name}")
    n = g.params[0]
    emb = embedding_data(n)
    return AdmissibleRep(g, n, n, emb.conjugate, emb.conjugate(h.I),
                         f"T-conjugation of {g.name} into su({n},{n})", embedding=emb)


def standard_rep(h: HermitianStructure) -> AdmissibleRep:
    g = h.algebra
    if g.family is Family.SU_PQ:
        return standard_rep_su(g, h)
    return embed_sp_in_su(g, h)


# admissibility ----------------------------------------------------------------------

@dataclass
class AdmissibilityCertificate:
    faithful: bool
    sigma_I_ok: bool
    off_diagonal_ok: bool
    split: Optional[tuple[int, int]]
    witnesses: dict[str, MatrixF] = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return self.faithful and self.sigma_I_ok and self.off_diagonal_ok

    def failures(self) -> list[str]:
        out = []
        if not self.faithful:
            out.append("faithful")
        if not self.sigma_I_ok:
            out.append("sigma_I")
        if not self.off_diagonal_ok:
            out.append("off_diagonal")
        return out

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "faithful": self.faithful,
            "sigma_I_block_equation": self.sigma_I_ok,
            "p_off_diagonal": self.off_diagonal_ok,
            "split": None if self.split is None else list(self.split),
            "witnesses": {k: v.to_text_rows() for k, v in sorted(self.witnesses.items())},
        }


def discover_split(sigma_I: MatrixF) -> Optional[tuple[int, int]]:
    """(dimV, dimW) from the eigenvalue pattern of a diagonal sigma_I, or None."""
    N = sigma_I.rows
    if sigma_I.rows != sigma_I.cols:
        return None
    diag = []
    for r in range(N):
        for c in range(N):
            if r != c and sigma_I[r, c]:
                return None
        diag.append(sigma_I[r, r])
    if not all(x.is_imaginary() and x.imag_part().is_rational() for x in diag):
        return None
    signs = [(x.imag_part().to_fraction() > 0) - (x.imag_part().to_fraction() < 0) for x in diag]
    v = 0
    while v < N and signs[v] < 0:
        v += 1
    if v == 0 or v == N or any(s <= 0 for s in signs[v:]):
        return None
    return v, N - v


def check_admissible(rep: AdmissibleRep, h: HermitianStructure, raise_on_failure: bool = True) -> AdmissibilityCertificate:
    g = rep.source
    images = [rep(b) for b in g.basis]
    faithful = linalg.rank([linalg.real_coords(m) for m in images], 4 * images[0].rows ** 2) == g.dim
    witnesses: dict[str, MatrixF] = {}
    sigma_I = rep(h.I) if rep.sigma_I is None else rep.sigma_I
    split = discover_split(sigma_I)
    sigma_ok = split is not None and split == (rep.dimV, rep.dimW) and sigma_I == expected_sigma_I(*split)
    if not sigma_ok:
        witnesses["sigma_I"] = sigma_I
    v = rep.dimV
    off_ok = True
    for idx in h.cartan.p_indices:
        Y = images[idx]
        N = Y.rows
        if not (Y.sub(0, v, 0, v).is_zero() and Y.sub(v, N, v, N).is_zero()):
            off_ok = False
            witnesses["p_image"] = Y
            break
    if not faithful:
        cols = [linalg.real_coords(m) for m in images]
        rows = [[c[r] for c in cols] for r in range(len(cols[0]))]
        ker = linalg.nullspace(rows, g.dim)
        witnesses["kernel_element"] = g.coordinatizer.combine(ker[0])
    cert = AdmissibilityCertificate(faithful, sigma_ok, off_ok, split, witnesses)
    rep.certificate = cert
    if raise_on_failure and not cert.admissible:
        raise NotAdmissible(cert)
    return cert


# c_sigma -------------------------------------------------------------------------

def omega_gram(h: HermitianStructure) -> list[list[Fraction]]:
    """omega_o(e_a, e_b) on the p-basis: g_norm(e_a, [I, e_b])."""
    gn = h.metric(MetricKind.NORMALIZED).gram
    adI = h.ad_I_on_p
    n = len(gn)
    return [[sum((gn[a][c] * adI[c][b] for c in range(n) if adI[c][b]), Fraction(0)) for b in range(n)]
            for a in range(n)]


def trace_form(rep: AdmissibleRep, X: MatrixF, Y: MatrixF) -> FieldScalar:
    """tr(sigma(I) sigma(X) sigma(Y) - sigma(X) sigma(I) sigma(Y)) = tr(sigma(I) [sigma X, sigma Y])."""
    sX, sY = rep(X), rep(Y)
    return (rep.sigma_I @ sX.commutator(sY)).trace()


def compute_c_sigma(h: HermitianStructure, rep: AdmissibleRep,
                    p_basis: Sequence[MatrixF] | None = None) -> Fraction:
    """Solve omega_o(X,Y) = c * tr(sigma(I)[sigma X, sigma Y]) over every p-basis pair."""
    if p_basis is None:
        p_basis = [h.algebra.basis[i] for i in h.cartan.p_indices]
        om = omega_gram(h)

        def omega(a: int, b: int) -> FieldScalar:
            return FieldScalar(om[a][b])
    else:
        def omega(a: int, b: int) -> FieldScalar:
            return h.omega_o(p_basis[a], p_basis[b])

    images = [rep(X) for X in p_basis]
    found: Optional[tuple[tuple[int, int], FieldScalar]] = None
    for a in range(len(p_basis)):
        for b in range(len(p_basis)):
            lhs = omega(a, b)
            rhs = (rep.sigma_I @ images[a].commutator(images[b])).trace()
            if rhs.is_zero():
                if not lhs.is_zero():
                    raise InconsistentRatio((a, b), "inf", found[0] if found else None, found[1] if found else None)
                continue
            ratio = lhs / rhs
            if found is None:
                found = ((a, b), ratio)
            elif ratio != found[1]:
                raise InconsistentRatio(found[0], found[1], (a, b), ratio)
    if found is None:
        raise AllDegenerate("tr(sigma(I)[sigma X, sigma Y]) vanishes on every p-basis pair")
    c = found[1]
    if not c.is_rational():
        raise AdmissibleError(f"c_sigma {c} is not rational")
    rep.c_sigma = c.to_fraction()
    return rep.c_sigma


def corrupt_sign_of_I(rep: AdmissibleRep) -> AdmissibleRep:
    """Negative control: same representation with sigma(I) replaced by -sigma(I)."""
    return AdmissibleRep(rep.source, rep.dimV, rep.dimW, rep.apply, -rep.sigma_I,
                         rep.descriptor + " [sign of I flipped]", rep.embedding)


# embedding checks ---------------------------------------------------------------------

@dataclass
class EmbeddingReport:
    n: int
    involution: bool
    unitary: bool
    block_display: bool
    su_nn_membership: bool
    trace_compatible: bool
    first_failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.involution and self.unitary and self.block_display and self.su_nn_membership and self.trace_compatible

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ok": self.ok,
            "S_involution": self.involution,
            "T_unitary": self.unitary,
            "block_display": self.block_display,
            "su_nn_membership": self.su_nn_membership,
            "trace_compatible": self.trace_compatible,
            "first_failure": self.first_failure,
        }


def check_embedding(g: RealLieAlgebra, emb: EmbeddingData | None = None) -> EmbeddingReport:
    if g.family is not Family.SP_2N:
        raise WrongFamily(f"embedding checks need sp(2n,R), got {g.name}")
    n = g.params[0]
    emb = emb or embedding_data(n)
    first: Optional[str] = None
    inv = (emb.S @ emb.S) == MatrixF.identity(n)
    if not inv:
        first = "S^2 != 1"
    uni = (emb.T @ emb.T.dagger()) == MatrixF.identity(2 * n)
    if not uni and first is None:
        first = "T T^dagger != 1"
    block = member = True
    images = []
    for X, label in zip(g.basis, g.labels):
        Y = emb.conjugate(X)
        images.append(Y)
        if block and Y != block_image_formula(X, emb.S):
            block = False
            first = first or f"block display mismatch at {label}"
        if member and not su_nn_condition(Y, n):
            member = False
            first = first or f"image of {label} not in su({n},{n})"
    tr_ok = True
    for a in range(g.dim):
        for b in range(a, g.dim):
            if (images[a] @ images[b]).trace() != (g.basis[a] @ g.basis[b]).trace():
                tr_ok = False
                first = first or f"trace mismatch at ({g.labels[a]}, {g.labels[b]})"
                break
        if not tr_ok:
            break
    return EmbeddingReport(n, inv, uni, block, member, tr_ok, first)
