#!/usr/bin/env python3
"""Walkthrough: classical inequality checkers and the scalar bound calculus.

Each checker returns an exact left-hand side together with its sign, so
equality cases are visible.  The piecewise bounds come with grid verifiers
run entirely in rational arithmetic.
"""

from fractions import Fraction

from addforms import (
    FiniteAbelianGroup,
    GroupSubset,
    bollobas_h,
    check_energy_bound,
    check_energy_doubling,
    check_kneser,
    check_plunnecke_ruzsa,
    delta,
    energy_upper_bound,
    in_region_R_graph,
    verify_delta_derivative_claims,
)

Z5 = FiniteAbelianGroup([5])
B = GroupSubset.from_residues(Z5, [(0,), (1,)])

lhs, holds = check_kneser(B, B)
print(f"kneser on B = {{0,1}} in Z5: lhs = {lhs} (equality case), holds: {holds}")
lhs, holds = check_plunnecke_ruzsa(B, B, 1, 1)
print(f"plunnecke-ruzsa (r=s=1): lhs = {lhs}, holds: {holds}")
lhs, holds = check_energy_doubling(B)
print(f"energy vs doubling: lhs = {lhs}, holds: {holds}")
slack, holds = check_energy_bound(B)
print(f"energy upper bound: slack = {slack}, holds: {holds}")

# Exhaustive sweep: no subset of Z8 beats the energy bound.
Z8 = FiniteAbelianGroup([8])
worst = None
for mask in range(1, 1 << 8):
    a = GroupSubset.from_indices(Z8, [i for i in range(8) if mask >> i & 1])
    s, _ = check_energy_bound(a)
    if worst is None or s < worst:
        worst = s
print(f"\nminimum slack over all 255 nonempty subsets of Z8: {worst}")

# The piecewise-linear lower bound on 3-cycle density vs pair density.
for x in (Fraction(1, 2), Fraction(3, 5), Fraction(2, 3), Fraction(9, 10)):
    print(f"bollobas_h({x}) = {bollobas_h(x)}")
print(f"(1/2, 0) feasible: {in_region_R_graph(Fraction(1, 2), 0)}; "
      f"(1, 1/2) feasible: {in_region_R_graph(1, Fraction(1, 2))}")

# The energy gap delta vanishes exactly at reciprocals of integers.
for alpha in (Fraction(1, 3), Fraction(2, 5), Fraction(1, 2), Fraction(7, 10)):
    print(f"alpha = {alpha}: bound {energy_upper_bound(alpha)}, gap {delta(alpha)}")

report = verify_delta_derivative_claims(step=Fraction(1, 500), t_max=12)
print(f"\nderivative sign claims on {sum(s.points for s in report.segments)} "
      f"grid points: all hold = {report.ok}")
for seg in report.segments[:3]:
    print(f"  {seg.name}: branch {seg.branch}, extreme value {seg.extreme}")
