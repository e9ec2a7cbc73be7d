"""
Common domains for plane lattices
=================================

Two commensurable lattices of the same covolume always share a
fundamental domain; two translation actions with mismatched covolume
ratios across components never do. Both directions below are exact.
"""

from fractions import Fraction

from tessella import (
    EucLattice,
    FrameRegion,
    TSComponent,
    TranslationSystem,
    boundary_series,
    common_fd_commensurable,
    covolume,
    dirichlet_domain,
    index,
    lattice_intersection,
    lattice_sum,
    translation_system_check,
    verify_tiling_exact,
)
from tessella.linalg import identity


def interval(lo, hi):
    return FrameRegion.from_corners(identity(1), [((lo,), (hi,))])

# the square lattice against the half-width, double-height one
z2 = EucLattice([[1, 0], [0, 1]])
tall = EucLattice([[Fraction(1, 2), 0], [0, 2]])
print("covolumes:", covolume(z2), covolume(tall))

inter = lattice_intersection(z2, tall)
total = lattice_sum(z2, tall)
print("intersection covolume:", covolume(inter),
      " sum covolume:", covolume(total))
print("index in each:", index(inter, z2), index(inter, tall))

# equal covolume, so a common fundamental domain exists; the builder
# returns half-open boxes in the frame of the joint refinement
D = common_fd_commensurable(z2, tall)
print("common domain measure:", D.measure)
print("tiles under both:",
      verify_tiling_exact(D, z2).ok and verify_tiling_exact(D, tall).ok)

# two one-dimensional components with ratios 2 and 1/2: each action has
# fundamental domains of measure 3, yet no common one exists
ts = TranslationSystem(1, [
    TSComponent(1, [[2]], [[1]]),
    TSComponent(1, [[1]], [[2]]),
])
X = [interval(0, 2), interval(0, 1)]
Y = [interval(0, 1), interval(0, 2)]
rep = translation_system_check(ts, X, Y)
print("component ratios:", [str(r) for r in rep.ratios],
      " common domain possible:", rep.ok)

# boundary diagnostic: translates of the unit cell straddling the edge
# of [0, n + 1/2)^2 thin out relative to the area
regions = [
    FrameRegion.from_corners(identity(2), [
        ((0, 0), (Fraction(2 * n + 1, 2), Fraction(2 * n + 1, 2)))])
    for n in (1, 4, 16)
]
for n, entry in zip((1, 4, 16), boundary_series(z2, regions)):
    print(f"n={n:2d}  interior {entry.interior:4d}  "
          f"boundary {entry.boundary:3d}  ratio {entry.ratio}")

# the nearest-point cell of a hexagonal-style lattice
cell = dirichlet_domain(EucLattice([[2, 1], [1, 2]]))
print("hexagon cell volume:", cell.volume,
      " vertices:", len(cell.vertices))
