import random
from fractions import Fraction

import pytest

from tessella.dirichlet import dirichlet_domain
from tessella.errors import DimensionTooLarge, InvalidInput
from tessella.lattices import EucLattice, covolume

import oracles


def L(*cols):
    n = len(cols[0])
    return EucLattice([[Fraction(cols[j][i]) for j in range(len(cols))]
                       for i in range(n)])


def test_square_lattice_cell():
    cell = dirichlet_domain(EucLattice.standard(2))
    assert cell.volume == 1
    assert sorted(cell.vertices) == sorted([
        (Fraction(s1, 2), Fraction(s2, 2)) for s1 in (-1, 1) for s2 in (-1, 1)
    ])
    assert len(cell.halfspaces) == 4
    assert cell.contains((0, 0))
    assert cell.contains((Fraction(1, 2), Fraction(1, 2)))  # closed cell
    assert not cell.contains((Fraction(3, 5), 0))


def test_interval_cell():
    cell = dirichlet_domain(L(("3/2",)))
    assert cell.volume == Fraction(3, 2)
    assert sorted(cell.vertices) == [(Fraction(-3, 4),), (Fraction(3, 4),)]


def test_hexagonal_cell():
    cell = dirichlet_domain(L((2, 1), (1, 2)))
    assert cell.volume == 3
    assert len(cell.vertices) == 6
    assert len(cell.halfspaces) == 6


def test_rhombic_dodecahedral_cell():
    # face-centered-cubic style basis: nearest neighbours in 12 directions
    cell = dirichlet_domain(L((1, 1, 0), (1, 0, 1), (0, 1, 1)))
    assert cell.volume == 2
    assert len(cell.halfspaces) == 12
    assert len(cell.vertices) == 14


def test_cell_is_shifted_with_base_point():
    lat = L((2, 1), (1, 2))
    origin = dirichlet_domain(lat)
    moved = dirichlet_domain(lat, ("1/3", "2/3"))
    shift = (Fraction(1, 3), Fraction(2, 3))
    assert moved.volume == origin.volume
    assert sorted(moved.vertices) == sorted(
        tuple(v + s for v, s in zip(vert, shift)) for vert in origin.vertices)


def test_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        dirichlet_domain(EucLattice.standard(4))


def test_base_point_dimension_checked():
    with pytest.raises(ValueError):
        dirichlet_domain(EucLattice.standard(2), (0, 0, 0))


def central_symmetry_holds(cell, center):
    verts = set(cell.vertices)
    mirrored = {
        tuple(2 * c - v for c, v in zip(center, vert)) for vert in verts
    }
    return mirrored == verts


def random_lattice_2d(rng):
    while True:
        rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                 for _ in range(2)] for _ in range(2)]
        try:
            return EucLattice(rows)
        except InvalidInput:
            continue


def test_random_cells_have_covolume_and_symmetry():
    rng = random.Random(59)
    for _ in range(30):
        lat = random_lattice_2d(rng)
        cell = dirichlet_domain(lat)
        assert cell.volume == covolume(lat)
        assert central_symmetry_holds(cell, (0, 0))
        # the closed cell contains the origin strictly inside
        assert cell.contains((0, 0))
        assert all(dot_lt(nrm, off) for nrm, off in cell.halfspaces)


def dot_lt(nrm, off):
    return 0 < off  # origin strictly satisfies dot(n, 0) = 0 < off


def test_volumes_match_hull_oracle():
    rng = random.Random(61)
    for _ in range(10):
        lat = random_lattice_2d(rng)
        cell = dirichlet_domain(lat)
        hull = oracles.hull_volume([tuple(map(float, v))
                                    for v in cell.vertices])
        assert abs(float(cell.volume) - hull) < 1e-9


def test_3d_volume_matches_hull_oracle():
    cell = dirichlet_domain(L((2, 0, 1), (0, 1, 0), (0, 0, 1)))
    assert cell.volume == 2
    hull = oracles.hull_volume([tuple(map(float, v)) for v in cell.vertices])
    assert abs(float(cell.volume) - hull) < 1e-9
    assert central_symmetry_holds(cell, (0, 0, 0))


def test_skewed_basis_same_cell():
    # same lattice, wildly skewed generators: cell must be identical
    a = L((2, 1), (1, 2))
    b = L((2, 1), (5, 4))  # (5,4) = 2*(2,1) + (1,2), unimodular change
    assert a.same_lattice(b)
    assert sorted(dirichlet_domain(a).vertices) == \
        sorted(dirichlet_domain(b).vertices)
