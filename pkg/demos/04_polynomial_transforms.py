#!/usr/bin/env python3
"""Walkthrough: the three polynomial transforms.

1. Clearing denominators of q(e/v^2, t/v^3) into an integer polynomial over
   the v/e/t layout (the monomials later expand into quantum systems).
2. Reciprocal inversion q(1/x) * prod(x^deg q), which trades nonnegativity
   on positive integers for nonnegativity on the points 1/n.
3. The cubic penalty q(x, y) = p(x) + M * sum(x_i^3 - y_i) with a certified
   derivative-bound constant M.
"""

from fractions import Fraction

from addforms import parse_poly, poly_eval, transform_p_from_q, transform_q_from_p, transform_qstar
from addforms.polynomial import format_poly, penalty_constant_report, substitute

q = parse_poly("x1^2 - 2y1 + 1")
qstar = transform_qstar(q, 1)
print(f"q      = {format_poly(q)}")
print(f"q*     = {format_poly(qstar)}")

# The defining identity holds at every point with v != 0.
v, e, t = Fraction(3, 2), Fraction(-1, 3), Fraction(5, 4)
lhs = poly_eval(qstar, [v, e, t])
rhs = poly_eval(q, [e / v**2, t / v**3]) * v ** (3 * q.degree())
print(f"identity at (v,e,t) = ({v},{e},{t}): {lhs} = {rhs}")
assert lhs == rhs

# Reciprocal inversion: sign at integer points transfers to 1/n points.
q2 = parse_poly("x1x2 - 3")
p2 = transform_p_from_q(q2)
print(f"\nq2 = {format_poly(q2)}  ->  p2 = {format_poly(p2)}")
for n1, n2 in [(1, 2), (2, 2), (1, 3), (3, 5)]:
    qv = poly_eval(q2, [n1, n2])
    pv = poly_eval(p2, [Fraction(1, n1), Fraction(1, n2)])
    print(f"  q2({n1},{n2}) = {str(qv):>3}   p2(1/{n1},1/{n2}) = {pv}")
    assert (qv > 0) == (pv > 0) and (qv < 0) == (pv < 0)

# Penalty construction: substituting y = x^3 collapses q back to p.
p = parse_poly("x1^2 - x1")
q3, M = transform_q_from_p(p)
print(f"\np = {format_poly(p)}  ->  M = {M},  q = {format_poly(q3)}")
collapsed = substitute(q3, {"y1": parse_poly("x1^3")})
print(f"q(x, x^3) = {format_poly(collapsed)}")
assert collapsed == p.with_variables(collapsed.varnames)

# The certified M dominates a grid estimate of the true derivative sups.
print(f"\npenalty constant report: {penalty_constant_report(p, steps=8)}")
