"""
How close to optimal?
=====================

The distributed matching always weighs at least half the maximum matching.
On the path with weights (w, w+1, w) it weighs exactly (w+1)/(2w) of it,
which approaches one half as w grows.
"""

# %%
from fractions import Fraction

from dgmatch import generate, optimal_matching, random_corpus, simulate
from dgmatch.sim import Scheduler

for w in (1, 10, 1000, 10**6):
    g = generate("path", 4, weights="adversarial_half_ratio", base=w)
    got = simulate(g)[0].total_weight
    best = optimal_matching(g).total_weight
    print(f"w={w:<8} distributed={got:<8} optimal={best:<8} ratio={Fraction(got, best)}")

# %% [markdown]
# Over a mixed corpus of small random graphs the ratio is usually much
# better than the guarantee.

# %%
ratios = []
for i, g in enumerate(random_corpus(300, 12, seed=1)):
    best = optimal_matching(g).total_weight
    if best:
        got = simulate(g, Scheduler("random", i))[0].total_weight
        ratios.append(Fraction(got, best))

print("graphs:", len(ratios))
print("worst ratio:", min(ratios), float(min(ratios)))
print("mean ratio: %.4f" % float(sum(ratios) / len(ratios)))
print("optimal in %d of %d" % (sum(r == 1 for r in ratios), len(ratios)))
