"""
Evaluating sentences on the structures
======================================

A catalogue of invariant sentences with direct truth tables, and a brute
force first-order evaluator that checks them on explicit finite models.
"""

from limdens.fo import eval_fo_finite, eval_invariant, invariant, render, szmielew_eval
from limdens.structures import Cycle, CyclicGroup, build_unary, materialize_finite
from limdens.terms import UNARY, parse_identity

rho = build_unary(parse_identity("f^3(a)=f^7(a)", UNARY))
print(rho, materialize_finite(rho).tables["f"])

inv = invariant("NotInjective")
text = render(inv, "f")
print(text)
print("catalogue:", eval_invariant(rho, inv), " brute force:", eval_fo_finite(materialize_finite(rho), text))

# the same sentence fails on a cycle
print("on a 5-cycle:", eval_invariant(Cycle(5, "f", None), inv))

# divisibility invariants of cyclic groups
for m in (6, 8, 12, 18):
    beta = invariant("SzBeta", p=2, n=1, k=1)
    print(f"Z_{m}: 4 | order is {szmielew_eval(m, beta)}", eval_invariant(CyclicGroup(m), beta))

print(eval_fo_finite(materialize_finite(Cycle(3)), "exists x. S(S(S(x))) = x"))
