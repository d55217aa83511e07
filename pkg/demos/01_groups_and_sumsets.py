#!/usr/bin/env python3
"""Walkthrough: exact arithmetic on finite abelian groups and their subsets.

Groups are direct products of cyclic groups; elements are residue tuples and
subsets carry exact densities.  Everything prints as plain rationals.
"""

from addforms import (
    FiniteAbelianGroup,
    GroupSubset,
    doubling_constant,
    parse_group,
    signed_iterated_sumset,
    stabilizer,
    sumset,
)

# A group can be built from moduli or parsed from a literal.
G = parse_group("Z9 x Z2")
print(f"group {G.literal()} has order {G.order}")

a = G.element([8, 1])
b = G.element([1, 1])
print(f"({a.residues}) + ({b.residues}) = {(a + b).residues}")
print(f"-1 * {b.residues} = {(-b).residues}")

# Subsets: bit-vector membership, exact density.
A = GroupSubset.from_residues(G, [(0, 0), (1, 1), (3, 0)])
print(f"\nA = {[e.residues for e in A.elements()]}, density {A.density()}")

# Sumsets grow until they stabilize on a coset of the stabilizer subgroup.
Z10 = parse_group("Z10")
P = GroupSubset.from_residues(Z10, [(0,), (1,)])
S = P
for step in range(1, 5):
    S = sumset(S, P)
    print(f"{step + 1}-fold sumset of {{0,1}} in Z10 has size {S.size}")

print(f"\ndoubling constant of {{0,1}} in Z10: {doubling_constant(P)}")
even = GroupSubset.from_residues(Z10, [(0,), (2,), (4,), (6,), (8,)])
print(f"doubling constant of the even residues (a subgroup): {doubling_constant(even)}")

# B - B always contains 0; r and s count sum and difference folds.
diff = signed_iterated_sumset(P, 1, 1)
print(f"\nB - B for B = {{0,1}}: {sorted(e.residues[0] for e in diff.elements())}")

# The stabilizer {g : g + S = S} is a subgroup; unions of cosets have big ones.
half = GroupSubset.from_residues(Z10, [(0,), (2,), (4,), (6,), (8,)])
print(f"stabilizer of the evens: {sorted(e.residues[0] for e in stabilizer(half).elements())}")
spread = GroupSubset.from_residues(Z10, [(0,), (1,), (2,)])
print(f"stabilizer of {{0,1,2}}: {sorted(e.residues[0] for e in stabilizer(spread).elements())}")
