"""
The abelianized group of a bijective variety
============================================

Relations between the symbols become an integer lattice; its quotient is
a finitely generated abelian group with a projection onto Z.
"""

from limdens.counting import pi1_difference_distribution
from limdens.structures import build_genbij, coset_equal
from limdens.terms import Term, parse_identity
from limdens.variety import VarietySpec, e0_bound, gaifman_group, inverse_word, projection_pi1

spec = VarietySpec.genbij(["f", "g", "h"], [(1, 0, -2), (1, 1, 0)])
g = gaifman_group(spec)
print("rank", g.rank, "torsion", g.torsion, "projection", g.pi1, "e0", e0_bound(g).e0)
print("inverse of f:", inverse_word(spec, "f"))
print("projection of f g g h:", projection_pi1(g, Term(("f", "g", "g", "h"))))

# quotient by one identity, then compare words in it
q = build_genbij(parse_identity("f(f(f(a)))=a", spec.signature), spec)
print("quotient size:", q.size)

basic = gaifman_group(VarietySpec.basic_bijective())
t5 = Term(("S",) * 5)
print("S^7 ~ S^2 mod S^5:", coset_equal(Term(("S",) * 7), Term(("S", "S")), t5, basic))

# distribution of the projection difference over identities of length 20
d = pi1_difference_distribution(spec, 20)
print("largest share:", float(d.max_share()))
