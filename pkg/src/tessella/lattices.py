"""Full-rank rational lattices in R^n and their tiling arithmetic.

Covolumes, sums, intersections and indices, exact tiling and packing
verification of box regions, constructive common fundamental domains for
commensurable pairs of equal covolume, the k + eps splitting, component
translation systems, function tilings, and boundary-count diagnostics.
All rational lattice pairs of equal dimension are commensurable, so the
constructions here never need a limiting argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .boxes import (
    Box,
    FrameRegion,
    ReducedRegion,
    box_center,
    box_volume,
    boxes_overlap,
    compressed_cover,
    reduce_mod,
)
from .errors import (
    ConditionFails,
    CovolumeMismatch,
    Incommensurable,
    InvalidDomain,
    InvalidInput,
    NotSublattice,
)
from .finite import VerifyResult
from .flows import lex_least_selection
from .linalg import (
    Mat,
    Vec,
    det,
    floor_frac,
    frac,
    hnf,
    hnf_rational,
    identity,
    mat,
    mat_inv,
    mat_mul,
    mat_vec,
    transpose,
)


class EucLattice:
    """Lattice generated by the columns of a nonsingular rational matrix."""

    def __init__(self, basis):
        self.basis = mat(basis)
        n = len(self.basis)
        if any(len(r) != n for r in self.basis):
            raise InvalidInput("lattice basis must be square")
        if det(self.basis) == 0:
            raise InvalidInput("lattice basis must be nonsingular")
        self._canonical: Optional[Mat] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def columns(self) -> list[Vec]:
        return [tuple(row[j] for row in self.basis) for j in range(self.dim)]

    @property
    def canonical_basis(self) -> Mat:
        """Hermite-reduced basis; equal lattices get equal matrices."""
        if self._canonical is None:
            self._canonical = hnf_rational(self.columns)
        return self._canonical

    def same_lattice(self, other: "EucLattice") -> bool:
        return self.dim == other.dim and self.canonical_basis == other.canonical_basis

    def contains(self, v: Sequence) -> bool:
        coords = mat_vec(mat_inv(self.basis), tuple(frac(x) for x in v))
        return all(c.denominator == 1 for c in coords)

    @classmethod
    def standard(cls, n: int) -> "EucLattice":
        return cls(identity(n))


def covolume(L: EucLattice) -> Fraction:
    """Measure of any fundamental domain: |det basis|."""
    return abs(det(L.basis))


def lattice_sum(L1: EucLattice, L2: EucLattice) -> EucLattice:
    """Lattice generated by both; Hermite-reduced basis."""
    if L1.dim != L2.dim:
        raise Incommensurable("lattices of different dimension")
    return EucLattice(hnf_rational(L1.columns + L2.columns))


def lattice_intersection(L1: EucLattice, L2: EucLattice) -> EucLattice:
    """Common sublattice, via duality: (L1 ^ L2)* = L1* + L2*."""
    if L1.dim != L2.dim:
        raise Incommensurable("lattices of different dimension")

    def dual(L: EucLattice) -> EucLattice:
        return EucLattice(transpose(mat_inv(L.basis)))

    return EucLattice(hnf_rational(dual(lattice_sum(dual(L1), dual(L2))).columns))


def index(L_sub: EucLattice, L: EucLattice) -> int:
    """[L : L_sub], the covolume ratio, as an exact positive integer."""
    if L_sub.dim != L.dim:
        raise NotSublattice("lattices of different dimension")
    C = mat_mul(mat_inv(L.basis), L_sub.basis)
    if any(x.denominator != 1 for row in C for x in row):
        raise NotSublattice("first lattice is not contained in the second")
    d = abs(det(C))
    assert d.denominator == 1 and d > 0
    return int(d)


def fundamental_parallelepiped(L: EucLattice) -> FrameRegion:
    """The half-open box [0,1)^n in the basis frame; tiles by L."""
    n = L.dim
    return FrameRegion(L.basis, (tuple((Fraction(0), Fraction(1)) for _ in range(n)),))


def region_reduce_mod(R: FrameRegion, L: EucLattice) -> ReducedRegion:
    """R modulo L: multiplicity levels on a fundamental torus of L."""
    return reduce_mod(R, L.basis)


def _witness_point(reduced: ReducedRegion, cell: Box) -> list[Fraction]:
    return list(mat_vec(reduced.frame, box_center(cell)))


def verify_tiling_exact(R: FrameRegion, L: EucLattice) -> VerifyResult:
    """Exact tiling check: translates of R under L partition R^n.

    Equivalent to the reduction having multiplicity one on the whole
    torus. The witness of a failure is a rational point covered zero or
    at least two times.
    """
    red = region_reduce_mod(R, L)
    for m in sorted(red.levels):
        if m >= 2:
            cell = red.levels[m][0]
            return VerifyResult(False, {
                "point": _witness_point(red, cell), "multiplicity": m})
    if red.uncovered:
        return VerifyResult(False, {
            "point": _witness_point(red, red.uncovered[0]), "multiplicity": 0})
    return VerifyResult(True)


def verify_packing_exact(R: FrameRegion, L: EucLattice) -> VerifyResult:
    """Exact packing check: translates of R under L are pairwise disjoint."""
    red = region_reduce_mod(R, L)
    for m in sorted(red.levels):
        if m >= 2:
            cell = red.levels[m][0]
            return VerifyResult(False, {
                "point": _witness_point(red, cell), "multiplicity": m})
    return VerifyResult(True)


def _reduce_vec(v: list[int], H: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Canonical representative of v modulo the column lattice of the
    lower-triangular H: coordinates brought into [0, H[j][j]) in order."""
    v = list(v)
    n = len(v)
    for j in range(n):
        m = v[j] // H[j][j]
        if m:
            for i in range(j, n):
                v[i] -= m * H[i][j]
    return tuple(v)


def _integer_image(Lsmall: EucLattice, Lbig: EucLattice) -> list[list[int]]:
    """Columns of Lbig^-1 * Lsmall, which are integral when Lsmall <= Lbig."""
    C = mat_mul(mat_inv(Lbig.basis), Lsmall.basis)
    if any(x.denominator != 1 for row in C for x in row):
        raise NotSublattice("expected a sublattice")
    return [[int(C[i][j]) for i in range(len(C))] for j in range(len(C))]


def _subgroup_closure(gens: Sequence[Sequence[int]], H) -> set[tuple[int, ...]]:
    zero = tuple(0 for _ in range(len(H)))
    seen = {zero}
    frontier = [zero]
    while frontier:
        v = frontier.pop()
        for g in gens:
            w = _reduce_vec([a + b for a, b in zip(v, g)], H)
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


class _CellSystem:
    """Cells of the sum lattice S modulo Delta = L1 ^ L2.

    Cells are the unit boxes of the S frame at the integer offsets of the
    HNF transversal of Delta in S; the quotients L1/Delta and L2/Delta
    act on the offsets by addition. This is the exact combinatorial
    skeleton on which the matching constructions run.
    """

    def __init__(self, L1: EucLattice, L2: EucLattice, first_axis_split: int = 1):
        S = lattice_sum(L1, L2)
        if first_axis_split > 1:
            q = Fraction(first_axis_split)
            scaled = tuple(
                tuple(S.basis[i][j] / q if j == 0 else S.basis[i][j]
                      for j in range(S.dim))
                for i in range(S.dim)
            )
            S = EucLattice(scaled)
        delta = lattice_intersection(L1, L2)
        self.S = S
        self.delta = delta
        C = mat_mul(mat_inv(S.basis), delta.basis)
        if any(x.denominator != 1 for row in C for x in row):
            raise NotSublattice("intersection not contained in the sum lattice")
        self.H = hnf([[int(x) for x in row] for row in C])
        n = S.dim
        self.reps = sorted(product(*[range(self.H[j][j]) for j in range(n)]))
        self.v1 = _subgroup_closure(_integer_image(L1, S), self.H)
        self.v2 = _subgroup_closure(_integer_image(L2, S), self.H)

    def coset_labels(self, subgroup: set[tuple[int, ...]]) -> dict[tuple[int, ...], tuple[int, ...]]:
        labels = {}
        for r in self.reps:
            if r in labels:
                continue
            coset = sorted(
                _reduce_vec([a + b for a, b in zip(r, v)], self.H) for v in subgroup
            )
            lead = coset[0]
            for member in coset:
                labels[member] = lead
        return labels

    def cell_region(self, reps: Iterable[tuple[int, ...]]) -> FrameRegion:
        boxes = tuple(
            tuple((Fraction(r[j]), Fraction(r[j] + 1)) for j in range(self.S.dim))
            for r in sorted(reps)
        )
        return FrameRegion(self.S.basis, boxes)


def common_fd_commensurable(L1: EucLattice, L2: EucLattice) -> FrameRegion:
    """A region tiling by both lattices, of measure the shared covolume.

    Cells of the sum lattice modulo the intersection are matched one per
    L1-coset and one per L2-coset (the bipartite multigraph is regular,
    so a perfect matching always exists); the lexicographically least
    matching is returned. Verified against both lattices before return.
    """
    if L1.dim != L2.dim:
        raise Incommensurable("lattices of different dimension")
    if covolume(L1) != covolume(L2):
        raise CovolumeMismatch(
            f"covolumes differ: {covolume(L1)} vs {covolume(L2)}")
    if L1.same_lattice(L2):
        return fundamental_parallelepiped(L1)
    cs = _CellSystem(L1, L2)
    lab1 = cs.coset_labels(cs.v1)
    lab2 = cs.coset_labels(cs.v2)
    left_ids = sorted(set(lab1.values()))
    right_ids = sorted(set(lab2.values()))
    lmap = {c: i for i, c in enumerate(left_ids)}
    rmap = {c: i for i, c in enumerate(right_ids)}
    left_of = [lmap[lab1[r]] for r in cs.reps]
    right_of = [rmap[lab2[r]] for r in cs.reps]
    sel = lex_least_selection(
        left_of, right_of, [(1, 1)] * len(left_ids), [(1, 1)] * len(right_ids))
    assert sel is not None, "regular bipartite multigraph lost its matching"
    D = cs.cell_region([cs.reps[e] for e in sel])
    assert verify_tiling_exact(D, L1).ok
    assert verify_tiling_exact(D, L2).ok
    assert D.measure == covolume(L1)
    return D


def construct_k_epsilon_lattices(
    L1: EucLattice, L2: EucLattice
) -> tuple[list[FrameRegion], FrameRegion]:
    """Split covolume(L1)/covolume(L2) = k + eps into k regions tiling by
    L2 plus a packing remainder of measure eps * covolume(L2), the whole
    family partitioning a region that tiles by L1.

    Cells are refined along the first frame axis by the denominator of
    eps; the selection runs block-wise over the joint cosets with the
    same degree constraints as the finite engine.
    """
    if L1.dim != L2.dim:
        raise Incommensurable("lattices of different dimension")
    ratio = covolume(L1) / covolume(L2)
    assert isinstance(ratio, Fraction)
    if ratio < 1:
        raise ConditionFails(
            f"covolume ratio {ratio} < 1 leaves no room for a fundamental domain")
    k = floor_frac(ratio)
    eps = ratio - k
    cs = _CellSystem(L1, L2, first_axis_split=eps.denominator)
    lab1 = cs.coset_labels(cs.v1)
    lab2 = cs.coset_labels(cs.v2)
    joint = cs.coset_labels(_subgroup_closure(
        [list(v) for v in cs.v1] + [list(v) for v in cs.v2], cs.H))
    blocks: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for r in cs.reps:
        blocks.setdefault(joint[r], []).append(r)

    selected: list[tuple[int, ...]] = []
    for lead in sorted(blocks):
        reps = sorted(blocks[lead])
        left_ids = sorted({lab1[r] for r in reps})
        right_ids = sorted({lab2[r] for r in reps})
        lmap = {c: i for i, c in enumerate(left_ids)}
        rmap = {c: i for i, c in enumerate(right_ids)}
        t = eps * len(right_ids)
        assert t.denominator == 1, "non-integer k+1 coset count on a block"
        t = int(t)
        left_of = [lmap[lab1[r]] for r in reps]
        right_of = [rmap[lab2[r]] for r in reps]
        if t == 0:
            bounds = [(k, k)] * len(right_ids)
            total = None
        else:
            bounds = [(k, k + 1)] * len(right_ids)
            tot = k * len(right_ids) + t
            total = (tot, tot)
        sel = lex_least_selection(
            left_of, right_of, [(1, 1)] * len(left_ids), bounds, total)
        if sel is None:
            raise ConditionFails("no feasible cell selection on a joint block")
        selected += [reps[e] for e in sel]

    by_right: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for r in sorted(selected):
        by_right.setdefault(lab2[r], []).append(r)
    fs_cells = [[] for _ in range(k)]
    feps_cells = []
    for label in sorted(by_right):
        chosen = by_right[label]
        for i, r in enumerate(chosen):
            (fs_cells[i] if i < k else feps_cells).append(r)
    fs = [cs.cell_region(cells) for cells in fs_cells]
    feps = cs.cell_region(feps_cells) if feps_cells else FrameRegion(cs.S.basis, ())
    for f in fs:
        assert verify_tiling_exact(f, L2).ok
        assert f.measure == covolume(L2)
    assert verify_packing_exact(feps, L2).ok
    assert feps.measure == eps * covolume(L2)
    union = cs.cell_region(selected)
    assert verify_tiling_exact(union, L1).ok
    return fs, feps


@dataclass(frozen=True)
class TSComponent:
    """One component of a translation system: the two generator images."""
    dim: int
    gamma_vectors: Mat
    lambda_vectors: Mat

    def __post_init__(self):
        object.__setattr__(self, "gamma_vectors", mat(self.gamma_vectors))
        object.__setattr__(self, "lambda_vectors", mat(self.lambda_vectors))
        for m in (self.gamma_vectors, self.lambda_vectors):
            if len(m) != self.dim:
                raise InvalidInput("generator matrix has wrong row count")

    def gamma_lattice(self) -> EucLattice:
        return _image_lattice(self.gamma_vectors)

    def lambda_lattice(self) -> EucLattice:
        return _image_lattice(self.lambda_vectors)


def _image_lattice(vectors: Mat) -> EucLattice:
    cols = [tuple(row[j] for row in vectors) for j in range(len(vectors[0]))]
    try:
        return EucLattice(hnf_rational(cols))
    except ValueError as exc:
        raise InvalidInput(f"generator image is not a full-rank lattice: {exc}")


class TranslationSystem:
    """Two rank-d translation groups acting on a disjoint union of
    Euclidean components; generator j translates component c by column j
    of the component's gamma (resp. lambda) matrix."""

    def __init__(self, rank: int, components: Sequence[TSComponent]):
        if rank < 1:
            raise InvalidInput("rank must be at least 1")
        if not components:
            raise InvalidInput("at least one component required")
        for comp in components:
            if len(comp.gamma_vectors[0]) != rank or len(comp.lambda_vectors[0]) != rank:
                raise InvalidInput("generator matrix has wrong column count")
        self.rank = rank
        self.components = tuple(components)
        for comp in self.components:
            comp.gamma_lattice()
            comp.lambda_lattice()


@dataclass(frozen=True)
class TSReport:
    ok: bool
    ratios: tuple[Fraction, ...]
    offending: Optional[tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.ok


def translation_system_check(
    ts: TranslationSystem,
    X: Sequence[FrameRegion],
    Y: Sequence[FrameRegion],
) -> TSReport:
    """PASS iff the per-component covolume ratios agree.

    X[c] (resp. Y[c]) must tile component c by the gamma (resp. lambda)
    image lattice; verified first. Equal ratios are equivalent to
    m(A & X) / m(A & Y) being constant over all jointly invariant sets,
    since every invariant set decomposes over components and within one
    component both measures scale with the same cell counts.
    """
    if len(X) != len(ts.components) or len(Y) != len(ts.components):
        raise InvalidInput("one region per component required in X and Y")
    ratios = []
    for c, comp in enumerate(ts.components):
        vg = verify_tiling_exact(X[c], comp.gamma_lattice())
        if not vg:
            raise InvalidDomain(f"X[{c}] does not tile its component: {vg.witness}")
        vl = verify_tiling_exact(Y[c], comp.lambda_lattice())
        if not vl:
            raise InvalidDomain(f"Y[{c}] does not tile its component: {vl.witness}")
        ratios.append(covolume(comp.gamma_lattice()) / covolume(comp.lambda_lattice()))
    for i in range(len(ratios)):
        for j in range(i + 1, len(ratios)):
            if ratios[i] != ratios[j]:
                return TSReport(False, tuple(ratios), (i, j))
    return TSReport(True, tuple(ratios))


def translation_system_common_fd(ts: TranslationSystem) -> list[FrameRegion]:
    """Per-component common fundamental domains; requires every component
    ratio to equal 1 (otherwise the equality condition fails on the
    component, ConditionFails)."""
    ratios = [
        covolume(c.gamma_lattice()) / covolume(c.lambda_lattice())
        for c in ts.components
    ]
    bad = [i for i, r in enumerate(ratios) if r != 1]
    if bad:
        raise ConditionFails(
            f"component covolume ratios {[str(r) for r in ratios]} are not all 1")
    return [
        common_fd_commensurable(c.gamma_lattice(), c.lambda_lattice())
        for c in ts.components
    ]


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative rational step function: sum of coeff * indicator(region),
    all regions sharing one frame."""
    terms: tuple[tuple[FrameRegion, Fraction], ...]

    def __post_init__(self):
        terms = tuple((r, frac(c)) for r, c in self.terms)
        if any(c < 0 for _, c in terms):
            raise InvalidInput("coefficients must be nonnegative")
        frames = {r.frame for r, _ in terms}
        if len(frames) > 1:
            raise InvalidInput("all terms must share one frame")
        object.__setattr__(self, "terms", terms)


def function_tiling_check(f: StepFunction, L: EucLattice) -> bool:
    """Exact check that the L-periodization of f is constantly 1."""
    if not f.terms:
        return False
    weighted: list[tuple[Box, Fraction]] = []
    torus = None
    for region, coeff in f.terms:
        red = region_reduce_mod(region, L)
        torus = red.torus
        for piece, _ in red.pieces:
            weighted.append((piece, coeff))
    assert torus is not None
    return all(value == 1 for _, value in compressed_cover(weighted, torus))


@dataclass(frozen=True)
class BoundaryCount:
    interior: int
    boundary: int


def boundary_count(
    L: EucLattice, A: FrameRegion, X: Optional[FrameRegion] = None
) -> BoundaryCount:
    """Count lattice translates of the domain X inside and straddling A.

    interior: translates gamma.X with m(gamma.X & A) = m(X);
    boundary: translates with 0 < m(gamma.X & A) < m(X).

    With the default X (the fundamental parallelepiped of the reduction
    basis of L) the counts come from the mod-L reduction of A, which
    tracks the translate each piece came from, so they are exact for any
    rational L. A custom X must share A's frame; then the translates are
    enumerated directly by interval arithmetic.
    """
    if X is None:
        red = region_reduce_mod(A, L)
        cell_measure = red.cell_measure
        per_shift: dict[tuple[int, ...], Fraction] = {}
        for piece, w in red.pieces:
            per_shift[w] = per_shift.get(w, Fraction(0)) + box_volume(piece)
        scale = abs(det(red.frame))
        interior = boundary = 0
        for w, vol in per_shift.items():
            m = vol * scale
            if m == cell_measure:
                interior += 1
            elif m > 0:
                boundary += 1
        return BoundaryCount(interior, boundary)

    if X.frame != A.frame:
        raise InvalidInput("a custom domain must share the frame of A")
    F = A.frame
    C = mat_mul(mat_inv(F), L.basis)
    n = A.dim
    lo_a = [min(b[j][0] for b in A.boxes) for j in range(n)]
    hi_a = [max(b[j][1] for b in A.boxes) for j in range(n)]
    lo_x = [min(b[j][0] for b in X.boxes) for j in range(n)]
    hi_x = [max(b[j][1] for b in X.boxes) for j in range(n)]
    # frame-coordinate translation t = C z must put bbox(X)+t against bbox(A)
    t_lo = [lo_a[j] - hi_x[j] for j in range(n)]
    t_hi = [hi_a[j] - lo_x[j] for j in range(n)]
    Cinv = mat_inv(C)
    z_lo, z_hi = [], []
    for i in range(n):
        lo = hi = Fraction(0)
        for j in range(n):
            a, b = Cinv[i][j] * t_lo[j], Cinv[i][j] * t_hi[j]
            lo += min(a, b)
            hi += max(a, b)
        z_lo.append(floor_frac(lo))
        z_hi.append(floor_frac(hi) + 1)
    m_x = X.measure
    scale = abs(det(F))
    interior = boundary = 0
    for z in product(*[range(z_lo[i], z_hi[i] + 1) for i in range(n)]):
        t = mat_vec(C, tuple(Fraction(x) for x in z))
        m = Fraction(0)
        for bx in X.boxes:
            shifted = tuple((lo + t[j], hi + t[j]) for j, (lo, hi) in enumerate(bx))
            for ba in A.boxes:
                if boxes_overlap(shifted, ba):
                    v = Fraction(1)
                    for (l1, h1), (l2, h2) in zip(shifted, ba):
                        v *= min(h1, h2) - max(l1, l2)
                    m += v
        m *= scale
        if m == m_x:
            interior += 1
        elif m > 0:
            boundary += 1
    return BoundaryCount(interior, boundary)


@dataclass(frozen=True)
class BoundaryEntry:
    interior: int
    boundary: int
    measure: Fraction
    ratio: Fraction
    inner_measure: Fraction
    outer_measure: Fraction


def boundary_series(L: EucLattice, regions: Sequence[FrameRegion]) -> list[BoundaryEntry]:
    """Boundary diagnostic along a sequence of regions: counts, the ratio
    N_b / m(A), and the sandwich m(inner) <= m(A) <= m(outer) given by the
    interior translates alone and by interior plus straddling ones."""
    out = []
    cv = covolume(L)
    for A in regions:
        bc = boundary_count(L, A)
        m = A.measure
        out.append(BoundaryEntry(
            interior=bc.interior,
            boundary=bc.boundary,
            measure=m,
            ratio=Fraction(bc.boundary) / m,
            inner_measure=bc.interior * cv,
            outer_measure=(bc.interior + bc.boundary) * cv,
        ))
    return out
