"""Half-open box regions in a rational coordinate frame.

A region is a finite disjoint union of boxes prod [a_i, b_i) whose
corners are given in the coordinates of an invertible rational frame
matrix (columns are the frame vectors). The class is closed under the
one operation everything else reduces to: cutting boxes along lattice
hyperplanes and translating the pieces, which makes tiling and packing
checks against any rational lattice exact. The half-open convention
turns "up to measure zero" statements into literal partitions.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import InvalidInput
from .linalg import (
    Mat,
    Vec,
    denominator_lcm,
    det,
    floor_frac,
    frac,
    hnf,
    mat,
    mat_inv,
    mat_mul,
    mat_vec,
)

Box = tuple[tuple[Fraction, Fraction], ...]


def make_box(lo: Sequence, hi: Sequence) -> Box:
    lo = tuple(frac(x) for x in lo)
    hi = tuple(frac(x) for x in hi)
    if len(lo) != len(hi):
        raise InvalidInput("box corner dimensions differ")
    if any(a >= b for a, b in zip(lo, hi)):
        raise InvalidInput("box needs lo < hi on every axis")
    return tuple(zip(lo, hi))


def box_volume(b: Box) -> Fraction:
    v = Fraction(1)
    for lo, hi in b:
        v *= hi - lo
    return v


def boxes_overlap(b1: Box, b2: Box) -> bool:
    return all(lo1 < hi2 and lo2 < hi1 for (lo1, hi1), (lo2, hi2) in zip(b1, b2))


def box_center(b: Box) -> Vec:
    return tuple((lo + hi) / 2 for lo, hi in b)


@dataclass(frozen=True)
class FrameRegion:
    """Disjoint half-open boxes in the coordinates of an invertible frame."""

    frame: Mat
    boxes: tuple[Box, ...]

    def __post_init__(self):
        object.__setattr__(self, "frame", mat(self.frame))
        if det(self.frame) == 0:
            raise InvalidInput("frame matrix must be invertible")
        n = len(self.frame)
        boxes = tuple(
            make_box([x[0] for x in b], [x[1] for x in b]) for b in self.boxes
        )
        if any(len(b) != n for b in boxes):
            raise InvalidInput("box dimension does not match the frame")
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if boxes_overlap(boxes[i], boxes[j]):
                    raise InvalidInput(f"boxes {i} and {j} overlap")
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def from_corners(cls, frame, corners: Iterable[tuple[Sequence, Sequence]]) -> "FrameRegion":
        return cls(mat(frame), tuple(make_box(lo, hi) for lo, hi in corners))

    @property
    def dim(self) -> int:
        return len(self.frame)

    @property
    def measure(self) -> Fraction:
        scale = abs(det(self.frame))
        return scale * sum((box_volume(b) for b in self.boxes), Fraction(0))

    def to_ambient(self, coords: Sequence) -> Vec:
        return mat_vec(self.frame, tuple(frac(c) for c in coords))

    def contains(self, point: Sequence) -> bool:
        coords = mat_vec(mat_inv(self.frame), tuple(frac(x) for x in point))
        return any(
            all(lo <= c < hi for c, (lo, hi) in zip(coords, b)) for b in self.boxes
        )


def compressed_cover(pieces: Sequence[tuple[Box, object]], bounds: Box):
    """Coordinate-compressed arrangement of weighted boxes inside bounds.

    Yields (cell, total weight) pairs whose cells partition bounds; the
    weight of a cell is the sum of the weights of the pieces covering it
    (0 where nothing does). Weights may be integers or Fractions. Cost is
    O(cells) via an n-dimensional difference array, independent of how
    many pieces overlap each cell.
    """
    n = len(bounds)
    cuts = []
    for j in range(n):
        vals = {bounds[j][0], bounds[j][1]}
        for bx, _ in pieces:
            vals.add(bx[j][0])
            vals.add(bx[j][1])
        cuts.append(sorted(vals))
    dims = [len(c) - 1 for c in cuts]
    strides = [0] * n
    acc = 1
    for j in reversed(range(n)):
        strides[j] = acc
        acc *= dims[j] + 1
    shape = [d + 1 for d in dims]
    diff: list = [0] * acc
    for bx, weight in pieces:
        a = [bisect_left(cuts[j], bx[j][0]) for j in range(n)]
        b = [bisect_left(cuts[j], bx[j][1]) for j in range(n)]
        for corner in product(*[(0, 1)] * n):
            idx = sum((b[j] if corner[j] else a[j]) * strides[j] for j in range(n))
            diff[idx] = diff[idx] + (-weight if sum(corner) % 2 else weight)
    for j in range(n):
        step = strides[j]
        for o in range(acc // shape[j]):
            base = (o // step) * (shape[j] * step) + (o % step)
            run = 0
            for i in range(shape[j]):
                run = run + diff[base + i * step]
                diff[base + i * step] = run
    for cell_idx in product(*[range(d) for d in dims]):
        flat = sum(cell_idx[j] * strides[j] for j in range(n))
        cell = tuple(
            (cuts[j][cell_idx[j]], cuts[j][cell_idx[j] + 1]) for j in range(n)
        )
        yield cell, diff[flat]


@dataclass(frozen=True)
class ReducedRegion:
    """A region expressed modulo a lattice.

    frame: the refined frame in which the lattice is the column lattice
    of the integer HNF matrix; torus: the box prod [0, h_jj) in that
    frame, a fundamental parallelepiped of the lattice; levels[m]: the
    cells of the torus covered exactly m >= 1 times; uncovered: cells
    covered zero times; pieces: the reduced boxes each tagged with the
    integer lattice coordinates (in the HNF basis) of the translate it
    came from. cell_basis is that HNF basis in ambient coordinates.
    """

    frame: Mat
    torus: Box
    levels: dict[int, tuple[Box, ...]]
    uncovered: tuple[Box, ...]
    pieces: tuple[tuple[Box, tuple[int, ...]], ...]
    cell_basis: Mat

    def level_region(self, m: int) -> FrameRegion:
        return FrameRegion(self.frame, self.levels.get(m, ()))

    def level_measure(self, m: int) -> Fraction:
        scale = abs(det(self.frame))
        return scale * sum((box_volume(b) for b in self.levels.get(m, ())), Fraction(0))

    @property
    def cell_measure(self) -> Fraction:
        return abs(det(self.frame)) * box_volume(self.torus)


def reduce_mod(region: FrameRegion, basis: Mat) -> ReducedRegion:
    """Express a bounded region modulo the column lattice of basis.

    The region frame B is refined to B'' = B diag(1/d_i) with d_i the
    lcm of the denominators of row i of B^-1 basis, so the lattice
    becomes an integer column lattice; its HNF H is lower triangular,
    and coordinates are reduced in ascending order by cutting each box
    at multiples of H[j][j] and translating pieces by -m * column_j
    (which only moves coordinates >= j). Total measure is conserved
    across multiplicity levels, asserted on every call.
    """
    B = region.frame
    n = region.dim
    if len(basis) != n:
        raise InvalidInput("lattice dimension does not match the region frame")
    M = mat_mul(mat_inv(B), mat(basis))
    scales = [denominator_lcm(row) for row in M]
    K = [[int(M[i][j] * scales[i]) for j in range(n)] for i in range(n)]
    H = hnf(K)
    refined = tuple(
        tuple(B[i][j] / scales[j] for j in range(n)) for i in range(n)
    )
    pieces: list[tuple[list[list[Fraction]], list[int]]] = []
    for b in region.boxes:
        scaled = [[lo * scales[i], hi * scales[i]] for i, (lo, hi) in enumerate(b)]
        pieces.append((scaled, [0] * n))
    for j in range(n):
        hjj = Fraction(H[j][j])
        nxt = []
        for bx, w in pieces:
            lo, hi = bx[j]
            m = floor_frac(lo / hjj)
            while Fraction(m) * hjj < hi:
                seg_lo = max(lo, m * hjj)
                seg_hi = min(hi, (m + 1) * hjj)
                if seg_lo < seg_hi:
                    nb = [list(iv) for iv in bx]
                    nb[j] = [seg_lo - m * hjj, seg_hi - m * hjj]
                    for i in range(j + 1, n):
                        if H[i][j]:
                            nb[i] = [nb[i][0] - m * H[i][j], nb[i][1] - m * H[i][j]]
                    nw = list(w)
                    nw[j] += m
                    nxt.append((nb, nw))
                m += 1
        pieces = nxt
    torus = tuple((Fraction(0), Fraction(H[j][j])) for j in range(n))
    frozen_pieces = tuple(
        (tuple((lo, hi) for lo, hi in bx), tuple(w)) for bx, w in pieces
    )

    levels: dict[int, list[Box]] = {}
    uncovered: list[Box] = []
    for cell, count in compressed_cover([(bx, 1) for bx, _ in frozen_pieces], torus):
        if count == 0:
            uncovered.append(cell)
        else:
            levels.setdefault(count, []).append(cell)

    reduced = ReducedRegion(
        frame=refined,
        torus=torus,
        levels={m: tuple(cells) for m, cells in sorted(levels.items())},
        uncovered=tuple(uncovered),
        pieces=frozen_pieces,
        cell_basis=mat_mul(refined, tuple(tuple(map(Fraction, row)) for row in H)),
    )
    total = sum(
        (Fraction(m) * reduced.level_measure(m) for m in reduced.levels), Fraction(0)
    )
    assert total == region.measure, "measure not conserved during reduction"
    return reduced
