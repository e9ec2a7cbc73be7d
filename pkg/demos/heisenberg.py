"""
The rational Heisenberg group
=============================

Points (x1, x2, c) multiply by (x,c)(y,d) = (x+y, c+d+x1 y2 - x2 y1).
Every point reduces uniquely against a lattice into a half-open cell,
which makes the cell a fundamental domain certificate rather than a
numerical observation.
"""

from fractions import Fraction

from tessella import (
    HeisAction,
    HeisLattice,
    HeisPoint,
    LieVec,
    aut_image_lattice,
    aut_shear_upper,
    discrete_ball_growth,
    flow_exp,
    growth_exponent_estimate,
    heis_exp,
    heis_inv,
    heis_mul,
    lattice_covolume,
    lie_bracket,
    malcev_cell,
    mc_verify_tiling,
    reduce_left,
)

def show(g):
    return "(" + ", ".join(str(x) for x in g.as_tuple()) + ")"


g = HeisPoint(1, 2, 0)
h = HeisPoint(3, -1, 1)
print("g h   =", show(heis_mul(g, h)))
print("h g   =", show(heis_mul(h, g)))
print("g^-1  =", show(heis_inv(g)))

# two charts: the cube-straightening one and the one-parameter one
v = LieVec(1, 1, 0)
print("cube chart of (1,1,0):", show(heis_exp(v)))
print("flow chart of (1,1,0):", show(flow_exp(v)))
w = LieVec(0, 1, 0)
print("bracket [(1,0,0),(0,1,0)]:",
      lie_bracket(LieVec(1, 0, 0), w).u3, "* X3")

# reduce a rational point against the integer points: g = gamma * omega
L = HeisLattice.standard()
red = reduce_left(HeisPoint("3/2", "-1/4", "37/10"), L)
print("exponents:", red.exponents)
print("gamma:", show(red.gamma), " omega:", show(red.omega))

# covolume scales with the planar data; automorphism images keep it
half = HeisLattice([[1, 0], [0, Fraction(1, 2)]])
print("covolumes:", lattice_covolume(L), lattice_covolume(half))
sheared = aut_image_lattice(aut_shear_upper(2), half)
print("sheared image covolume:", lattice_covolume(sheared))

# seeded histogram over the cell translates: all multiplicities one
rep = mc_verify_tiling(malcev_cell(half), HeisAction("left", half),
                       malcev_cell(half).bbox, samples=400, seed=0)
print("multiplicity histogram:", rep.histogram)

# word-metric balls grow like n^4
sizes = discrete_ball_growth(20)
print("ball sizes:", sizes[:7], "...")
print("growth exponent estimate:", round(growth_exponent_estimate(sizes), 3))
