"""
Counting identities and presentations
=====================================

Every density is a ratio of two integer counts.  This script builds the
counts for the basic families and checks a few of them by brute force.
"""

from limdens.counting import (alpha_count, coprime_pair_count, total_presentations,
                              x_value_distribution)
from limdens.terms import bijective_mode, free_mode, unary_mode

# identities of length <= s, closed form next to a direct enumeration
for name, mode in (("bijective", bijective_mode()), ("unary", unary_mode()),
                   ("two symbols", free_mode(2))):
    s = 6
    brute = sum(1 for ell in range(s + 1) for _ in mode.enumerate(ell))
    print(f"{name:12s} s={s}: closed form {mode.total(s)}, enumerated {brute}")

# presentations with two identities, in the three counting modes
for cm in ("unordered-distinct", "ordered-distinct", "ordered-with-rep"):
    print(cm, total_presentations("bijective", 4, k=2, counting_mode=cm))

# X = (#S) - (#S^-1) over words of length <= 4
dist = x_value_distribution(s=4)
print("X values:", dict(dist.counts))
print("words with |X| = 1 up to length 5:", alpha_count(1, 5))

# ordered pairs of identities whose |X| values are coprime
print("coprime pairs, s=10:", coprime_pair_count(10), "of", bijective_mode().total(10) ** 2)
