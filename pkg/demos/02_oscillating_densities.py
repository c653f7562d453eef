"""
Densities that settle and densities that toggle
===============================================

Exact density series for a few sentences, then an even/odd split of the
tail to see which ones settle and which ones keep switching.
"""

from limdens.density import coprime_density, density_series, even_odd_limits

# the cycle length divides X, so "X even" just tracks the parity of s
parity = density_series("bijective", "XResidue N=2 r=0", 60)
rep = even_odd_limits(parity)
print(f"X even: even s -> {rep.even_last:.6f}, odd s -> {rep.odd_last:.6f}, "
      f"oscillation={rep.oscillation}")

# a 1-cycle is rare and gets rarer
alpha = density_series("bijective", "BijAlpha n=1 k=1", 400)
rep = even_odd_limits(alpha)
print(f"1-cycle: {rep.even_last:.5f} / {rep.odd_last:.5f}, trends {rep.even_trend}/{rep.odd_trend}")

# two identities: the structure is a 1-cycle iff the |X| values are coprime
series, rep = coprime_density(400)
print(f"two identities, 1-cycle: even {rep.even_last:.4f} (ref {rep.references['even']:.4f}), "
      f"odd {rep.odd_last:.4f} (ref {rep.references['odd']:.4f})")

# abelian groups on one generator: 3 divides the order about a third of the time
sz = density_series("abelian", "SzBeta p=3 n=0 k=1", s_values=[500])
print("3 | order at s=500:", float(sz.density(500)))

# a series is just exact (count, total) pairs
print(parity.to_csv().splitlines()[:4])
