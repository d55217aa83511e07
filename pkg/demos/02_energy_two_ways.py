#!/usr/bin/env python3
"""Walkthrough: additive energy computed two independent ways.

The counting path sums squared representation counts and is exact; the
spectral path sums fourth powers of Fourier coefficients and verifies it to
floating-point accuracy.  Singleton subsets are the tight case 1/n^3.
"""

from fractions import Fraction

from addforms import (
    FiniteAbelianGroup,
    GroupSubset,
    additive_energy,
    additive_energy_raw,
    energy_fourier,
    energy_upper_bound,
    parseval_check,
    representation_counts,
)

Z8 = FiniteAbelianGroup([8])
A = GroupSubset.from_residues(Z8, [(0,), (1,), (2,), (5,)])

counts = {e.residues[0]: c for e, c in representation_counts(A).items() if c}
print(f"A = {{0,1,2,5}} in Z8, pair-sum counts r_A: {counts}")
print(f"raw energy (quadruples with a1+a2 = a3+a4): {additive_energy_raw(A)}")
print(f"normalized energy: {additive_energy(A)}")
print(f"spectral energy:   {energy_fourier(A):.12f}")

lhs, rhs = parseval_check(A)
print(f"\nParseval: spectral mass {lhs:.12f} vs density {rhs:.12f}")

# The normalized energy never exceeds the scalloped bound in the density.
alpha = A.density()
print(f"\ndensity alpha = {alpha}, bound {energy_upper_bound(alpha)}, "
      f"energy {additive_energy(A)}")

# Tight case: a single element has energy exactly 1/n^3.
for n in (4, 7, 12):
    Zn = FiniteAbelianGroup([n])
    single = GroupSubset.from_residues(Zn, [(0,)])
    e = additive_energy(single)
    assert e == Fraction(1, n**3) == energy_upper_bound(single.density())
    print(f"Z{n}: energy of a singleton = {e} (bound met with equality)")

# Subgroups meet the bound too: their density has integer reciprocal.
Z12 = FiniteAbelianGroup([12])
sub = GroupSubset.from_residues(Z12, [(0,), (4,), (8,)])
print(f"\nsubgroup {{0,4,8}} of Z12: energy {additive_energy(sub)}, "
      f"bound {energy_upper_bound(sub.density())}")
