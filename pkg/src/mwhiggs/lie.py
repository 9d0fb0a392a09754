"""Hermitian real forms su(p,q) and sp(2n,R) as explicit matrix Lie algebras.

Every basis element is an eigenvector of the Cartan involution X -> -X^dagger, so
the Cartan decomposition is read off index by index.  Structure constants are
rational and stored sparsely: ``structure[(i, j)] = {k: c}`` means
[e_i, e_j] = sum_k c e_k.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .field import I as IMAG
from .field import ONE, FieldScalar, MatrixF, rational_sqrt

Sparse = dict[int, Fraction]


class LieError(Exception):
    pass


class ParameterOutOfRange(LieError, ValueError):
    pass


class BasisNotAdapted(LieError):
    pass


class NoSolution(LieError):
    pass


class MaximalityCertificationFailure(LieError):
    pass


class ArgumentNotInP(LieError, ValueError):
    pass


class Family(str, enum.Enum):
    SU_PQ = "su"
    SP_2N = "sp"


class Coordinatizer:
    """Expands matrices in a fixed basis with rational coefficients."""

    def __init__(self, basis: Sequence[MatrixF]):
        self.basis = list(basis)
        self.shape = basis[0].shape
        vecs = [linalg.real_coords(b) for b in basis]
        width = len(vecs[0])
        self._sparse = [{k: x for k, x in enumerate(v) if x} for v in vecs]
        red, pivots = linalg.rref(vecs, width)
        if len(pivots) != len(basis):
            raise LieError("basis is linearly dependent")
        self._pivots = pivots
        square = [[v[p] for v in vecs] for p in pivots]
        self._inv = linalg.inverse(square)

    def coords(self, M: MatrixF) -> list[Fraction]:
        """Rational coefficients of M; raises LieError if M is not in the span."""
        if M.shape != self.shape:
            raise LieError(f"shape {M.shape} does not match basis shape {self.shape}")
        target = linalg.real_coords(M)
        rhs = [target[p] for p in self._pivots]
        nz = [(j, x) for j, x in enumerate(rhs) if x]
        out = [sum((row[j] * x for j, x in nz), Fraction(0)) for row in self._inv]
        recon: dict[int, Fraction] = {}
        for c, sv in zip(out, self._sparse):
            if c:
                for k, x in sv.items():
                    recon[k] = recon.get(k, Fraction(0)) + c * x
        for k, x in enumerate(target):
            if recon.get(k, 0) != x:
                raise LieError("matrix is not in the span of the basis")
        return out

    def combine(self, coeffs: Sequence[object]) -> MatrixF:
        M = MatrixF.zeros(*self.shape)
        for c, b in zip(coeffs, self.basis):
            if c:
                M = M + b.scale(c)
        return M


def _su_basis(p: int, q: int) -> tuple[list[MatrixF], list[str]]:
    N = p + q
    basis: list[MatrixF] = []
    labels: list[str] = []

    def E(i: int, j: int, v: object = 1) -> MatrixF:
        return MatrixF.unit(N, i, j, v)

    def same_block(a: int, b: int) -> bool:
        return (a < p) == (b < p)

    for a in range(N):
        for b in range(a + 1, N):
            if same_block(a, b):
                basis.append(E(a, b) - E(b, a))
                labels.append(f"k:re({a},{b})")
                basis.append(E(a, b, IMAG) + E(b, a, IMAG))
                labels.append(f"k:im({a},{b})")
    for a in range(N - 1):
        basis.append(E(a, a, IMAG) - E(a + 1, a + 1, IMAG))
        labels.append(f"k:h{a}")
    for a in range(p):
        for b in range(p, N):
            basis.append(E(a, b) + E(b, a))
            labels.append(f"p:re({a},{b})")
            basis.append(E(a, b, IMAG) - E(b, a, IMAG))
            labels.append(f"p:im({a},{b})")
    return basis, labels


def sym_unit(n: int, a: int, b: int) -> MatrixF:
    if a == b:
        return MatrixF.unit(n, a, a)
    return MatrixF.unit(n, a, b) + MatrixF.unit(n, b, a)


def sp_matrix(A: MatrixF, B: MatrixF, C: MatrixF) -> MatrixF:
    """X(A, B, C) = [[A, B], [C, -A^T]]."""
    return MatrixF.block([[A, B], [C, -A.transpose()]])


def _sp_basis(n: int) -> tuple[list[MatrixF], list[str]]:
    Z = MatrixF.zeros(n)
    basis: list[MatrixF] = []
    labels: list[str] = []
    for a in range(n):
        for b in range(a + 1, n):
            basis.append(sp_matrix(MatrixF.unit(n, a, b) - MatrixF.unit(n, b, a), Z, Z))
            labels.append(f"k:A({a},{b})")
    for a in range(n):
        for b in range(a, n):
            S = sym_unit(n, a, b)
            basis.append(sp_matrix(Z, S, -S))
            labels.append(f"k:B({a},{b})")
    for a in range(n):
        for b in range(a, n):
            basis.append(sp_matrix(sym_unit(n, a, b), Z, Z))
            labels.append(f"p:A({a},{b})")
    for a in range(n):
        for b in range(a, n):
            S = sym_unit(n, a, b)
            basis.append(sp_matrix(Z, S, S))
            labels.append(f"p:B({a},{b})")
    return basis, labels


@dataclass(eq=False)
class RealLieAlgebra:
    family: Family
    params: tuple[int, ...]
    basis: list[MatrixF]
    labels: list[str]
    structure: dict[tuple[int, int], Sparse] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.basis[0].rows

    @property
    def name(self) -> str:
        if self.family is Family.SU_PQ:
            return f"su({self.params[0]},{self.params[1]})"
        return f"sp({2 * self.params[0]},R)"

    @cached_property
    def coordinatizer(self) -> Coordinatizer:
        return Coordinatizer(self.basis)

    def coords(self, M: MatrixF) -> list[Fraction]:
        return self.coordinatizer.coords(M)

    def bracket_coeffs(self, i: int, j: int) -> Sparse:
        if i == j:
            return {}
        if i < j:
            return self.structure[(i, j)]
        return {k: -v for k, v in self.structure[(j, i)].items()}

    def constant(self, i: int, j: int, k: int) -> Fraction:
        return self.bracket_coeffs(i, j).get(k, Fraction(0))

    @cached_property
    def ad(self) -> list[dict[int, Sparse]]:
        """ad(e_i) as sparse column maps: ad[i][j] = coefficients of [e_i, e_j]."""
        return [{j: self.bracket_coeffs(i, j) for j in range(self.dim) if self.bracket_coeffs(i, j)}
                for i in range(self.dim)]

    def satisfies_real_form(self, X: MatrixF) -> bool:
        if self.family is Family.SU_PQ:
            p, q = self.params
            J = MatrixF.diag([ONE] * p + [-ONE] * q)
            return (X.dagger() @ J + J @ X).is_zero() and X.trace().is_zero()
        n = self.params[0]
        Om = MatrixF.block([[MatrixF.zeros(n), MatrixF.identity(n)], [-MatrixF.identity(n), MatrixF.zeros(n)]])
        return all(x.is_real() for x in X.entries) and (X.transpose() @ Om + Om @ X).is_zero()

    def jacobi_violations(self, limit: int = 1) -> list[tuple[int, int]]:
        """Pairs (i, j) where ad([e_i, e_j]) != [ad e_i, ad e_j].

        This is the Jacobi identity on every triple (i, j, k) at once, checked
        column by column.
        """
        bad = []
        ad = self.ad
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                lhs = _combine_ad(ad, self.structure[(i, j)], self.dim)
                rhs = _sub_maps(_compose(ad[i], ad[j]), _compose(ad[j], ad[i]))
                if lhs != rhs:
                    bad.append((i, j))
                    if len(bad) >= limit:
                        return bad
        return bad

    def to_json(self) -> dict:
        triples = [
            [i, j, k, f"{c.numerator}/{c.denominator}"]
            for (i, j), coeffs in sorted(self.structure.items())
            for k, c in sorted(coeffs.items())
        ]
        return {
            "family": self.family.value,
            "params": list(self.params),
            "dim": self.dim,
            "labels": list(self.labels),
            "basis": [b.to_text_rows() for b in self.basis],
            "structure_constants": triples,
        }

    @classmethod
    def from_json(cls, data: dict) -> RealLieAlgebra:
        structure: dict[tuple[int, int], Sparse] = {}
        dim = data["dim"]
        for i in range(dim):
            for j in range(i + 1, dim):
                structure[(i, j)] = {}
        for i, j, k, c in data["structure_constants"]:
            structure[(i, j)][k] = Fraction(c)
        return cls(
            family=Family(data["family"]),
            params=tuple(data["params"]),
            basis=[MatrixF.from_text_rows(b) for b in data["basis"]],
            labels=list(data["labels"]),
            structure=structure,
        )


def _compose(a: dict[int, Sparse], b: dict[int, Sparse]) -> dict[int, Sparse]:
    """Column map of a∘b, both given as {col: {row: value}}."""
    out: dict[int, Sparse] = {}
    for j, col in b.items():
        acc: Sparse = {}
        for m, x in col.items():
            for r, y in a.get(m, {}).items():
                acc[r] = acc.get(r, 0) + x * y
        acc = {r: v for r, v in acc.items() if v}
        if acc:
            out[j] = acc
    return out


def _sub_maps(a: dict[int, Sparse], b: dict[int, Sparse]) -> dict[int, Sparse]:
    out: dict[int, Sparse] = {}
    for j in set(a) | set(b):
        acc = dict(a.get(j, {}))
        for r, y in b.get(j, {}).items():
            acc[r] = acc.get(r, 0) - y
        acc = {r: v for r, v in acc.items() if v}
        if acc:
            out[j] = acc
    return out


def _combine_ad(ad: list[dict[int, Sparse]], coeffs: Sparse, dim: int) -> dict[int, Sparse]:
    out: dict[int, Sparse] = {}
    for k, c in coeffs.items():
        for j, col in ad[k].items():
            acc = out.setdefault(j, {})
            for r, y in col.items():
                acc[r] = acc.get(r, 0) + c * y
    return {j: {r: v for r, v in col.items() if v} for j, col in out.items() if any(col.values())}


def build_algebra(family: Family | str, params: Sequence[int]) -> RealLieAlgebra:
    family = Family(family)
    params = tuple(int(x) for x in params)
    if family is Family.SU_PQ:
        if len(params) != 2 or min(params) < 1:
            raise ParameterOutOfRange(f"su(p,q) needs p, q >= 1, got {params}")
        basis, labels = _su_basis(*params)
    else:
        if len(params) != 1 or params[0] < 1:
            raise ParameterOutOfRange(f"sp(2n,R) needs n >= 1, got {params}")
        basis, labels = _sp_basis(params[0])
    coord = Coordinatizer(basis)
    structure: dict[tuple[int, int], Sparse] = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            br = basis[i].commutator(basis[j])
            c = coord.coords(br) if not br.is_zero() else []
            structure[(i, j)] = {k: x for k, x in enumerate(c) if x}
    g = RealLieAlgebra(family, params, basis, labels, structure)
    g.__dict__["coordinatizer"] = coord
    return g


# Cartan decomposition --------------------------------------------------------

@dataclass(frozen=True)
class CartanDecomposition:
    k_indices: tuple[int, ...]
    p_indices: tuple[int, ...]

    @property
    def dim_k(self) -> int:
        return len(self.k_indices)

    @property
    def dim_p(self) -> int:
        return len(self.p_indices)


def cartan_decompose(g: RealLieAlgebra) -> CartanDecomposition:
    k, p = [], []
    for idx, X in enumerate(g.basis):
        theta = -X.dagger()
        if theta == X:
            k.append(idx)
        elif theta == -X:
            p.append(idx)
        else:
            raise BasisNotAdapted(f"basis element {g.labels[idx]} is not an eigenvector of X -> -X^dagger")
    return CartanDecomposition(tuple(k), tuple(p))


def grading_violations(g: RealLieAlgebra, cd: CartanDecomposition) -> list[tuple[int, int]]:
    """Basis pairs whose bracket breaks [k,k]<k, [k,p]<p, [p,p]<k."""
    ks = set(cd.k_indices)
    bad = []
    for (i, j), coeffs in g.structure.items():
        parity = (i in ks) == (j in ks)  # True -> bracket must land in k
        target = ks if parity else set(cd.p_indices)
        if any(m not in target for m in coeffs):
            bad.append((i, j))
    return bad


# Killing form and metrics -------------------------------------------------------

class MetricKind(str, enum.Enum):
    KILLING = "killing"
    BERGMAN = "bergman"
    NORMALIZED = "normalized"


@dataclass(frozen=True)
class MetricForm:
    kind: MetricKind
    gram: tuple[tuple[Fraction, ...], ...]
    indices: tuple[int, ...]

    def scaled(self, kind: MetricKind, factor: Fraction) -> MetricForm:
        return MetricForm(kind, tuple(tuple(factor * x for x in row) for row in self.gram), self.indices)

    def restrict(self, idx: Sequence[int]) -> list[list[Fraction]]:
        pos = {b: n for n, b in enumerate(self.indices)}
        return [[self.gram[pos[a]][pos[b]] for b in idx] for a in idx]


def killing_form(g: RealLieAlgebra) -> MetricForm:
    """Gram matrix tr(ad e_i o ad e_j) on the whole basis."""
    ad = g.ad
    n = g.dim
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            t = Fraction(0)
            adj = ad[j]
            for a, col in ad[i].items():  # col: ad_i(e_a) = sum_b col[b] e_b
                for b, x in col.items():
                    y = adj.get(b, {}).get(a)
                    if y:
                        t += x * y
            gram[i][j] = gram[j][i] = t
    return MetricForm(MetricKind.KILLING, tuple(map(tuple, gram)), tuple(range(n)))


def p_X(g: RealLieAlgebra) -> int:
    if g.family is Family.SU_PQ:
        return sum(g.params)
    return g.params[0] + 1


def killing_closed_form_mismatches(g: RealLieAlgebra, kappa: MetricForm) -> list[tuple[int, int]]:
    c = 2 * p_X(g)
    bad = []
    for i in range(g.dim):
        for j in range(i, g.dim):
            if FieldScalar(kappa.gram[i][j]) != (g.basis[i] @ g.basis[j]).trace() * c:
                bad.append((i, j))
    return bad


# central element I ----------------------------------------------------------------

def _ad_on(g: RealLieAlgebra, coeffs: Sequence[object], idx: Sequence[int]) -> list[list[object]]:
    """Matrix of ad(sum coeffs[a] e_a) restricted to span(e_idx) -> span(e_idx)."""
    pos = {b: n for n, b in enumerate(idx)}
    M = [[Fraction(0)] * len(idx) for _ in idx]
    for a, ca in enumerate(coeffs):
        if not ca:
            continue
        for col, m in enumerate(idx):
            for r, v in g.bracket_coeffs(a, m).items():
                if r not in pos:
                    raise LieError("ad does not preserve the given subspace")
                M[pos[r]][col] = M[pos[r]][col] + ca * v
    return M


def central_element(g: RealLieAlgebra, cd: CartanDecomposition, orient: bool = True) -> MatrixF:
    """The element I of the centre of k with ad(I)^2 = -1 on p.

    Solves [I, k] = 0 over the k-basis, rescales so that ad(I)^2 = -id on p, and
    fixes the sign so that the family's admissible representation sends I to
    a diagonal matrix whose first block has negative imaginary part.
    """
    k = cd.k_indices
    rows = []
    for m in k:
        for l in range(g.dim):
            rows.append([g.constant(a, m, l) for a in k])
    ker = linalg.nullspace(rows, len(k))
    if len(ker) != 1:
        raise NoSolution(f"centre of k has dimension {len(ker)}, expected 1")
    coeffs = [Fraction(0)] * g.dim
    for a, z in zip(k, ker[0]):
        coeffs[a] = z
    ad = _ad_on(g, coeffs, cd.p_indices)
    sq = _matmul_q(ad, ad)
    lam = sq[0][0]
    n = len(sq)
    if lam >= 0 or any(sq[r][c] != (lam if r == c else 0) for r in range(n) for c in range(n)):
        raise NoSolution("ad(Z)^2 on p is not a negative scalar")
    t = rational_sqrt(Fraction(-1) / lam)
    I = g.coordinatizer.combine(coeffs).scale(t)
    if orient:
        from .admissible import standard_map

        if _first_imag_sign(standard_map(g)(I)) > 0:
            I = -I
    return I


def _first_imag_sign(M: MatrixF) -> int:
    x = M[0, 0]
    im = x.imag_part()
    # imag part lies in Q(sqrt2); sign via a float is safe for the small rationals here,
    # but decide exactly when it is rational
    if im.is_rational():
        f = im.to_fraction()
        return (f > 0) - (f < 0)
    v = im.approx().real
    return (v > 0) - (v < 0)


def _matmul_q(a: list[list[object]], b: list[list[object]]) -> list[list[object]]:
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m) if a[i][k]), Fraction(0)) for j in range(p)] for i in range(n)]


# real rank ------------------------------------------------------------------------

def candidate_flat(g: RealLieAlgebra) -> list[MatrixF]:
    if g.family is Family.SU_PQ:
        p, q = g.params
        N = p + q
        return [MatrixF.unit(N, j, p + j) + MatrixF.unit(N, p + j, j) for j in range(min(p, q))]
    n = g.params[0]
    Z = MatrixF.zeros(n)
    return [sp_matrix(Z, MatrixF.unit(n, j, j), MatrixF.unit(n, j, j)) for j in range(n)]


def certify_flat(g: RealLieAlgebra, cd: CartanDecomposition, flat: Sequence[MatrixF]) -> None:
    """Raise MaximalityCertificationFailure unless span(flat) is maximal abelian in p."""
    pset = set(cd.p_indices)
    fcoords = []
    for a in flat:
        c = g.coords(a)
        if any(c[i] for i in range(g.dim) if i not in pset):
            raise MaximalityCertificationFailure("flat element not in p")
        fcoords.append(c)
    for x in range(len(flat)):
        for y in range(x + 1, len(flat)):
            if not flat[x].commutator(flat[y]).is_zero():
                raise MaximalityCertificationFailure(f"flat elements {x} and {y} do not commute")
    # centralizer of the flat inside p: sum_m x_m [e_m, a] = 0 for each flat element a
    P = cd.p_indices
    rows = []
    for c in fcoords:
        for l in range(g.dim):
            rows.append([sum((c[r] * g.constant(m, r, l) for r in P if c[r]), Fraction(0)) for m in P])
    ker = linalg.nullspace(rows, len(P))
    flat_p = [[c[m] for m in P] for c in fcoords]
    if len(ker) != len(flat) or linalg.rank(flat_p + ker, len(P)) != len(flat):
        raise MaximalityCertificationFailure(
            f"centralizer of flat in p has dimension {len(ker)}, flat has {len(flat)}"
        )


def real_rank(g: RealLieAlgebra, cd: CartanDecomposition) -> tuple[int, list[MatrixF]]:
    flat = candidate_flat(g)
    certify_flat(g, cd, flat)
    return len(flat), flat


# Hermitian structure ----------------------------------------------------------------

@dataclass(eq=False)
class HermitianStructure:
    algebra: RealLieAlgebra
    cartan: CartanDecomposition
    I: MatrixF
    p_X: int
    rank: int
    flat_basis: list[MatrixF]
    killing: MetricForm

    @cached_property
    def ad_I_on_p(self) -> list[list[Fraction]]:
        c = self.algebra.coords(self.I)
        return _ad_on(self.algebra, c, self.cartan.p_indices)

    def metric(self, kind: MetricKind | str = MetricKind.NORMALIZED) -> MetricForm:
        return metrics(self)[MetricKind(kind)]

    def p_coords(self, X: MatrixF) -> list[Fraction]:
        try:
            c = self.algebra.coords(X)
        except LieError as e:
            raise ArgumentNotInP(str(e)) from None
        ks = set(self.cartan.k_indices)
        if any(c[i] for i in ks):
            raise ArgumentNotInP("argument has a k-component")
        return [c[i] for i in self.cartan.p_indices]

    def omega_o(self, X: MatrixF, Y: MatrixF) -> FieldScalar:
        """Kahler form at the base point: g_norm(X, [I, Y])."""
        x = self.p_coords(X)
        IY = self.p_coords(self.I.commutator(Y))
        gn = self.metric(MetricKind.NORMALIZED).gram
        n = len(x)
        return FieldScalar(sum((x[a] * gn[a][b] * IY[b] for a in range(n) if x[a] for b in range(n) if IY[b]),
                               Fraction(0)))


def metrics(h: HermitianStructure) -> dict[MetricKind, MetricForm]:
    P = h.cartan.p_indices
    kill = MetricForm(MetricKind.KILLING, tuple(map(tuple, h.killing.restrict(P))), P)
    norm = kill.scaled(MetricKind.NORMALIZED, Fraction(1, h.p_X))
    berg = norm.scaled(MetricKind.BERGMAN, Fraction(h.p_X, 2))
    return {MetricKind.KILLING: kill, MetricKind.NORMALIZED: norm, MetricKind.BERGMAN: berg}


def complex_structure_ok(h: HermitianStructure) -> bool:
    g, I = h.algebra, h.I
    if any(not I.commutator(g.basis[k]).is_zero() for k in h.cartan.k_indices):
        return False
    for m in h.cartan.p_indices:
        X = g.basis[m]
        if I.commutator(I.commutator(X)) != -X:
            return False
    return True


def hermitian_structure(g: RealLieAlgebra, cd: CartanDecomposition | None = None) -> HermitianStructure:
    cd = cd or cartan_decompose(g)
    kappa = killing_form(g)
    if killing_closed_form_mismatches(g, kappa):
        raise LieError(f"Killing form of {g.name} disagrees with 2*p_X*tr(XY); p_X table is wrong")
    I = central_element(g, cd)
    rk, flat = real_rank(g, cd)
    h = HermitianStructure(g, cd, I, p_X(g), rk, flat, kappa)
    if not complex_structure_ok(h):
        raise NoSolution("I fails [I,k]=0 or ad(I)^2=-1 on p")
    return h
