import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tessella.boxes import (
    FrameRegion,
    box_center,
    box_volume,
    boxes_overlap,
    compressed_cover,
    make_box,
    reduce_mod,
)
from tessella.errors import InvalidInput
from tessella.linalg import identity, mat, mat_vec

coords = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def boxes_2d(max_count=4):
    corner = st.tuples(coords, coords, coords, coords)
    return st.lists(corner, min_size=0, max_size=max_count).map(
        lambda cs: [
            ((min(a, b), max(a, b) + 1), (min(c, d), max(c, d) + 1))
            for a, b, c, d in cs
        ])


def test_box_constructors_and_volume():
    b = make_box([0, 0], [1, Fraction(1, 2)])
    assert box_volume(b) == Fraction(1, 2)
    assert box_center(b) == (Fraction(1, 2), Fraction(1, 4))
    with pytest.raises(InvalidInput):
        make_box([0, 0], [1, 0])
    with pytest.raises(InvalidInput):
        make_box([0], [1, 1])


def test_overlap_is_strict():
    a = make_box([0, 0], [1, 1])
    b = make_box([1, 0], [2, 1])
    assert not boxes_overlap(a, b)
    assert boxes_overlap(a, make_box(["1/2", "1/2"], [2, 2]))


def test_region_rejects_overlapping_boxes():
    with pytest.raises(InvalidInput):
        FrameRegion(identity(2), (make_box([0, 0], [2, 2]),
                                  make_box([1, 1], [3, 3])))


def test_region_rejects_singular_frame():
    with pytest.raises(InvalidInput):
        FrameRegion(mat([[1, 1], [1, 1]]), (make_box([0, 0], [1, 1]),))


def test_region_measure_scales_with_frame():
    R = FrameRegion(mat([["1/2", 0], [0, 2]]),
                    (make_box([0, 0], [1, 1]), make_box([1, 1], [2, 2])))
    assert R.measure == 2


def test_region_membership_uses_frame_coordinates():
    R = FrameRegion(mat([["1/2", 0], [0, 1]]), (make_box([0, 0], [1, 1]),))
    assert R.contains((Fraction(1, 4), Fraction(1, 2)))
    assert not R.contains((Fraction(1, 2), Fraction(1, 2)))
    assert R.to_ambient((1, 1)) == (Fraction(1, 2), 1)


def test_cover_single_box():
    bounds = make_box([0, 0], [2, 2])
    piece = make_box([0, 0], [1, 1])
    cells = dict(compressed_cover([(piece, 1)], bounds))
    assert cells[((Fraction(0), Fraction(1)), (Fraction(0), Fraction(1)))] == 1
    total = sum(box_volume(c) for c in cells)
    assert total == 4


@given(boxes_2d())
def test_cover_partitions_bounds(boxes):
    bounds = ((Fraction(-6), Fraction(6)), (Fraction(-6), Fraction(6)))
    pieces = [(b, 1) for b in boxes]
    cells = list(compressed_cover(pieces, bounds))
    assert sum(box_volume(c) for c, _ in cells) == box_volume(bounds)
    # weighted cell volume equals total piece volume (pieces may overlap)
    assert sum(box_volume(c) * w for c, w in cells) == \
        sum(box_volume(b) for b in boxes)


@given(boxes_2d(3))
def test_cover_counts_match_pointwise(boxes):
    bounds = ((Fraction(-6), Fraction(6)), (Fraction(-6), Fraction(6)))
    cells = list(compressed_cover([(b, 1) for b in boxes], bounds))
    rng = random.Random(3)
    for cell, w in rng.sample(cells, min(5, len(cells))):
        p = box_center(cell)
        direct = sum(
            1 for b in boxes
            if all(lo <= x < hi for x, (lo, hi) in zip(p, b)))
        assert w == direct


def test_reduce_unit_square_is_identity():
    R = FrameRegion(identity(2), (make_box([0, 0], [1, 1]),))
    red = reduce_mod(R, identity(2))
    assert red.cell_measure == 1
    assert red.level_measure(1) == 1
    assert red.uncovered == ()
    assert red.levels.keys() == {1}


def test_reduce_tracks_translates():
    # [0,2) x [0,1) reduced mod Z^2 covers the torus twice
    R = FrameRegion(identity(2), (make_box([0, 0], [2, 1]),))
    red = reduce_mod(R, identity(2))
    assert red.level_measure(2) == 1
    shifts = {w for _, w in red.pieces}
    assert shifts == {(0, 0), (1, 0)}


def test_reduce_rational_lattice():
    # reduction mod the lattice (1/2)Z x 2Z
    R = FrameRegion(identity(2), (make_box([0, 0], [1, 1]),))
    red = reduce_mod(R, mat([["1/2", 0], [0, 2]]))
    assert red.cell_measure == 1
    assert red.level_measure(2) == Fraction(1, 2)
    assert red.level_measure(1) == 0
    # the doubly covered half accounts for the region; the rest is bare
    uncovered = sum((box_volume(b) for b in red.uncovered), Fraction(0))
    assert uncovered * abs_det(red.frame) == Fraction(1, 2)


def test_reduce_pieces_reconstruct_region():
    # each reduced piece, shifted back by its tag, lands inside the region
    R = FrameRegion(mat([[1, "1/3"], [0, 1]]),
                    (make_box([0, 0], ["3/2", 1]),))
    basis = mat([[1, "1/2"], [0, "1/2"]])
    red = reduce_mod(R, basis)
    total = Fraction(0)
    for bx, shift in red.pieces:
        total += box_volume(bx)
        center = box_center(bx)
        moved = [
            c + sum(Fraction(red.cell_basis[i][j]) * shift[j]
                    for j in range(2))
            for i, c in enumerate(center)
        ]
        assert R.contains(mat_vec(red.frame, tuple(moved)))
    assert total * abs_det(red.frame) == R.measure


def abs_det(m):
    from tessella.linalg import det

    return abs(det(m))


@given(st.integers(1, 4), st.integers(1, 4), st.integers(-2, 2))
def test_reduce_conserves_measure(p, q, shear):
    R = FrameRegion(identity(2),
                    (make_box([0, 0], [Fraction(p, 2), Fraction(q, 3)]),))
    basis = mat([[1, shear], [0, 1]])
    red = reduce_mod(R, basis)
    covered = sum(m * red.level_measure(m) for m in red.levels)
    assert covered == R.measure
    levels_total = sum(red.level_measure(m) for m in red.levels)
    uncovered = sum((box_volume(b) for b in red.uncovered), Fraction(0))
    assert levels_total + uncovered * abs_det(red.frame) == red.cell_measure
