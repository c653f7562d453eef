"""
Balls in the Gaifman graph
==========================

r-balls, canonical codes for their isomorphism types, and the check that a
long identity leaves small balls of the free structure untouched.
"""

from limdens.locality import (ball, canonical_ball_code, element_codes,
                              free_vs_quotient_ball_check, local_sentence_eval)
from limdens.structures import Cycle, RhoShape, materialize_finite
from limdens.terms import parse_identity
from limdens.variety import VarietySpec

rho = materialize_finite(RhoShape(3, 4))
print(canonical_ball_code(ball(rho, 0, 1)).decode())
print(canonical_ball_code(ball(rho, 3, 1)).decode())

# every element of a cycle looks the same
print(len(set(element_codes(materialize_finite(Cycle(9)), 3))), "distinct code(s) on a 9-cycle")

# two points more than 2r apart with the same 1-ball
c12 = materialize_finite(Cycle(12))
print("scattered pair in C_12:", local_sentence_eval(c12, canonical_ball_code(ball(c12, 0, 1)), 1, 2))

spec = VarietySpec.basic_bijective()
print(free_vs_quotient_ball_check(spec, parse_identity("S^100(a)=a", spec.signature), 3))
print(free_vs_quotient_ball_check(spec, parse_identity("S^2(a)=a", spec.signature), 3,
                                  require_hypothesis=False))

print(ball(materialize_finite(Cycle(4)), 0, 1).to_dot("c4"))
