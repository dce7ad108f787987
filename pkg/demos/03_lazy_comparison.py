"""How many random bits does it take to decide ``U < 1/3``?

A lazy uniform reveals binary digits only until its dyadic interval falls
on one side of the target, which takes two bits on average.
"""

from collections import Counter
from fractions import Fraction

from incrtree import BitSource, LazyUniform, lazy_compare
from incrtree.rng_bits import LESS, constant_target

src = BitSource(seed=3)
used = Counter()
below = 0
trials = 10_000
for _ in range(trials):
    u = LazyUniform(src)
    below += lazy_compare(u, constant_target(Fraction(1, 3))) == LESS
    used[u.p] += 1

print(f"P(U < 1/3) estimated as {below / trials:.4f}")
print("bits revealed per decision:")
for p in sorted(used):
    print(f"  {p:>2}: {used[p]}")
print("mean:", sum(p * c for p, c in used.items()) / trials)
