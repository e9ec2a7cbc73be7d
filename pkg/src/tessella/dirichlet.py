"""Dirichlet cells of rational lattices in dimensions 1 to 3.

The cell of a base point x0 is the set of points at least as close to x0
as to every other point of the orbit x0 + L. Both representations are
produced exactly: the facet half-spaces and the vertex list, plus the
exact volume (a cone decomposition from x0, so every summand is a
rational determinant). No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations, product
from typing import Optional, Sequence

from .errors import DimensionTooLarge
from .lattices import EucLattice
from .linalg import (
    Vec,
    det,
    dot,
    frac,
    gram_schmidt_sq,
    isqrt_floor,
    mat_inv,
    mat_vec,
    vec_sub,
)


@dataclass(frozen=True)
class ConvexCell:
    """Bounded rational polytope: facet half-spaces dot(n, x) <= c together
    with the matching vertex list and the exact volume."""

    halfspaces: tuple[tuple[Vec, Fraction], ...]
    vertices: tuple[Vec, ...]
    volume: Fraction

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def contains(self, point: Sequence) -> bool:
        p = tuple(frac(x) for x in point)
        return all(dot(nrm, p) <= off for nrm, off in self.halfspaces)


def _floor_sqrt(q: Fraction) -> int:
    # floor(sqrt(p/q)) = floor(sqrt(p q) / q), exact in integers
    return isqrt_floor(q.numerator * q.denominator) // q.denominator


def _short_vectors(L: EucLattice, bound_sq: Fraction) -> list[Vec]:
    """All nonzero v in L with |v|^2 <= bound_sq, lexicographically sorted."""
    n = L.dim
    Binv = mat_inv(L.basis)
    ranges = []
    for i in range(n):
        row_sq = sum((x * x for x in Binv[i]), Fraction(0))
        m = _floor_sqrt(bound_sq * row_sq)
        ranges.append(range(-m, m + 1))
    out = []
    for z in product(*ranges):
        if all(zi == 0 for zi in z):
            continue
        v = mat_vec(L.basis, tuple(Fraction(zi) for zi in z))
        if dot(v, v) <= bound_sq:
            out.append(v)
    return sorted(out)


def _relevant_vectors(L: EucLattice) -> list[Vec]:
    """Lattice vectors whose bisector can touch the cell of the origin.

    Every point of the cell lies within the covering radius mu of the
    lattice, and mu^2 <= (1/4) sum of squared Gram-Schmidt norms (round
    one basis direction at a time), so facet vectors satisfy
    |v| <= 2 mu. A vector v survives iff v/2 is weakly closer to 0 than
    to every other enumerated point; vectors beyond the bound can never
    decide this, because rejecting v/2 would force |u| < |v|.
    """
    bound_sq = sum(gram_schmidt_sq(L.columns), Fraction(0))
    candidates = _short_vectors(L, bound_sq)
    kept = []
    for v in candidates:
        ok = True
        for u in candidates:
            if dot(v, u) > dot(u, u):
                ok = False
                break
        if ok:
            kept.append(v)
    return kept


def _vertex_candidates(halfspaces, n: int) -> list[Vec]:
    seen = set()
    out = []
    for combo in combinations(range(len(halfspaces)), n):
        rows = tuple(halfspaces[i][0] for i in combo)
        rhs = tuple(halfspaces[i][1] for i in combo)
        if det(rows) == 0:
            continue
        p = mat_vec(mat_inv(rows), rhs)
        if p in seen:
            continue
        if all(dot(nrm, p) <= off for nrm, off in halfspaces):
            seen.add(p)
            out.append(p)
    return sorted(out)


def _ccw_order(points: Sequence[Vec], center: Vec) -> list[Vec]:
    """Exact counterclockwise order around an interior center (2-D)."""

    def half(d):
        return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1

    def cmp(a, b):
        da, db = vec_sub(a, center), vec_sub(b, center)
        ha, hb = half(da), half(db)
        if ha != hb:
            return ha - hb
        cr = da[0] * db[1] - da[1] * db[0]
        return -1 if cr > 0 else (1 if cr < 0 else 0)

    return sorted(points, key=cmp_to_key(cmp))


def _facet_vertices(halfspace, vertices) -> list[Vec]:
    nrm, off = halfspace
    return [p for p in vertices if dot(nrm, p) == off]


def _prune_to_facets(halfspaces, vertices, n: int):
    kept = []
    for hs in halfspaces:
        inc = _facet_vertices(hs, vertices)
        if n == 1:
            if len(inc) >= 1:
                kept.append(hs)
        elif n == 2:
            if len(set(inc)) >= 2:
                kept.append(hs)
        else:
            pts = sorted(set(inc))
            if len(pts) < 3:
                continue
            # affine span must be a plane, not a line
            base = pts[0]
            dirs = [vec_sub(p, base) for p in pts[1:]]
            planar = False
            for d1, d2 in combinations(dirs, 2):
                cx = (
                    d1[1] * d2[2] - d1[2] * d2[1],
                    d1[2] * d2[0] - d1[0] * d2[2],
                    d1[0] * d2[1] - d1[1] * d2[0],
                )
                if any(c != 0 for c in cx):
                    planar = True
                    break
            if planar:
                kept.append(hs)
    return kept


def _volume(vertices, halfspaces, x0: Vec, n: int) -> Fraction:
    if n == 1:
        xs = sorted(p[0] for p in vertices)
        return xs[-1] - xs[0]
    if n == 2:
        ring = _ccw_order(vertices, x0)
        area = Fraction(0)
        for i in range(len(ring)):
            a = vec_sub(ring[i], x0)
            b = vec_sub(ring[(i + 1) % len(ring)], x0)
            area += a[0] * b[1] - a[1] * b[0]
        return abs(area) / 2
    vol = Fraction(0)
    for hs in halfspaces:
        pts = sorted(set(_facet_vertices(hs, vertices)))
        # order the facet ring by projecting out the dominant normal axis
        nrm = hs[0]
        drop = max(range(3), key=lambda i: abs(nrm[i]))
        keep = [i for i in range(3) if i != drop]
        proj = {p: (p[keep[0]], p[keep[1]]) for p in pts}
        centroid = tuple(
            sum((proj[p][j] for p in pts), Fraction(0)) / len(pts) for j in range(2)
        )
        ring = _ccw_order(list(proj.values()), centroid)
        back = {proj[p]: p for p in pts}
        ordered = [back[q] for q in ring]
        q0 = vec_sub(ordered[0], x0)
        for i in range(1, len(ordered) - 1):
            qi = vec_sub(ordered[i], x0)
            qj = vec_sub(ordered[i + 1], x0)
            vol += abs(det((q0, qi, qj)))
    return vol / 6


def dirichlet_domain(L: EucLattice, x0: Optional[Sequence] = None) -> ConvexCell:
    """The cell of x0 in the orbit x0 + L, exact in dimensions 1 to 3.

    Facet half-spaces are the bisectors of the relevant lattice vectors,
    vertices come from nonsingular n-fold bisector intersections, and the
    volume is a cone decomposition from x0. The cell always has volume
    equal to the covolume and is centrally symmetric about x0.
    """
    n = L.dim
    if n > 3:
        raise DimensionTooLarge("cells are computed in dimensions 1 to 3 only")
    base = tuple(frac(x) for x in (x0 if x0 is not None else [0] * n))
    if len(base) != n:
        raise ValueError("base point dimension does not match the lattice")
    halfspaces = []
    for v in _relevant_vectors(L):
        halfspaces.append((v, dot(v, base) + dot(v, v) / 2))
    vertices = _vertex_candidates(halfspaces, n)
    facets = _prune_to_facets(halfspaces, vertices, n)
    return ConvexCell(
        halfspaces=tuple(sorted(facets)),
        vertices=tuple(vertices),
        volume=_volume(vertices, facets, base, n),
    )
