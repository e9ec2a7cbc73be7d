"""
Commuting actions on six atoms
==============================

Two commuting cyclic shifts on the same six uniform atoms: an order-2
shift by 3 acting on the left, an order-3 shift by 2 acting on the
right. The walk below checks the measure condition, builds the packing
and the k+eps split, and shows the obstruction when the condition
fails.
"""

from fractions import Fraction

from tessella import (
    ActionPair,
    FiniteAction,
    FiniteGroup,
    FiniteMeasureSpace,
    brute_force_common_fd_exists,
    check_condition,
    construct_k_epsilon,
    construct_packing_fds,
    dye_equivalent,
    joint_invariant_partition,
    verify_fundamental_domain,
)

# six atoms of weight 1; perms[i] is the image list of the i-th element
space = FiniteMeasureSpace([1] * 6)
shift3 = [(a + 3) % 6 for a in range(6)]
shift2 = [(a + 2) % 6 for a in range(6)]
shift4 = [(a + 4) % 6 for a in range(6)]

left = FiniteAction(FiniteGroup.cyclic(2), space,
                    [tuple(range(6)), tuple(shift3)], side="left")
right = FiniteAction(FiniteGroup.cyclic(3), space,
                     [tuple(range(6)), tuple(shift2), tuple(shift4)],
                     side="right")
pair = ActionPair(left, right)

# X is a fundamental domain for the left shift, Y for the right one
X = [0, 1, 2]
Y = [0, 1]
print("X is a left domain: ", verify_fundamental_domain(left, X).ok)
print("Y is a right domain:", verify_fundamental_domain(right, Y).ok)

# the whole space is the only joint-invariant block here, and
# m(X) = 3 = (1 + 1/2) * m(Y), so X splits as one copy of Y plus half
blocks = joint_invariant_partition(pair)
print("joint-invariant blocks:", blocks)
rep = check_condition(pair, X, Y, k=1, eps=Fraction(1, 2), mode="eq")
print("m(A n X) = (1 + 1/2) m(A n Y) on every block:", rep.ok)

# one right domain packing on the left...
fs = construct_packing_fds(pair, X, Y, k=1)
print("packing member F1:", sorted(fs[0]))

# ...and the exact remainder F_eps with m(F_eps) = eps * m(Y)
fs, f_eps = construct_k_epsilon(pair, X, Y, k=1, eps=Fraction(1, 2))
print("k+eps split:", sorted(fs[0]), "plus remainder", sorted(f_eps))
union = sorted(set(fs[0]) | set(f_eps))
print("union is a left domain:", verify_fundamental_domain(left, union).ok)

# m(X) != m(Y), so no single set serves both actions
print("common domain exists:", brute_force_common_fd_exists(pair))

# transport certificate: {0,1} and {3,4} differ by the left shift
plan = dye_equivalent(left, {0, 1}, {3, 4})
print("transport plan {0,1} -> {3,4}:",
      [(sorted(piece), g) for piece, g in plan.pieces])
