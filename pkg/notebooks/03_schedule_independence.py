"""
Delivery order does not change the answer
=========================================

With a strict order on edges the protocol always produces the matching the
sequential greedy algorithm finds, however the network reorders messages.
Only the message trace differs from run to run.
"""

# %%
from dgmatch import check_trace, generate, sequential_greedy, simulate
from dgmatch.sim import POLICIES, Scheduler, all_passed

g = generate("random_gnp", 12, seed=8, weights="distinct_random", p=0.4)
print(g.vertex_count, "vertices,", g.edge_count, "edges")
reference = sequential_greedy(g)
print("sequential greedy:", reference.pairs, "weight", reference.total_weight)

# %%
matchings, orders = set(), set()
for policy in POLICIES:
    for seed in range(25):
        m, trace, stats = simulate(g, Scheduler(policy, seed))
        assert all_passed(check_trace(g, trace))
        matchings.add(m)
        orders.add(tuple(r.edge.pair for r in trace.matches))

print("distinct matchings:", len(matchings), "same as sequential:", matchings == {reference})
print("distinct orders in which edges were matched:", len(orders))

# %% [markdown]
# Equal weights are fine too: ties fall back to vertex ids.

# %%
flat = generate("complete", 7, weights="all_equal")
print(sequential_greedy(flat).pairs)
print({simulate(flat, Scheduler("random", s))[0] for s in range(20)} == {sequential_greedy(flat)})
