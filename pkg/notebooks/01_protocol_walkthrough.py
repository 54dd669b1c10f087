"""
Walking through one run of the protocol
=======================================

A star with three leaves: every node proposes along its heaviest edge, the
hub and the heaviest leaf agree, and the hub withdraws its other edges.
"""

# %%
from dgmatch import Scheduler, check_trace, generate, simulate

star = generate("star", 4, weights=[1, 2, 3])
for e in star.edges:
    print(e)

# %% [markdown]
# Run it with FIFO delivery and print every recorded event except the
# live-set snapshots.

# %%
matching, trace, stats = simulate(star, Scheduler("fifo"))
for ev in trace.events:
    if ev.kind != "snapshot":
        print(ev.step, ev.kind, ev.src, "->", ev.dst, ev.payload)

print("matching:", matching.pairs, "weight", matching.total_weight)
print(stats)

# %% [markdown]
# Six messages cross three edges: one per direction, the most any run can
# use.  Under LIFO the hub matches before the light leaves' proposals land;
# those arrive at a stopped node and are absorbed.

# %%
_, trace, stats = simulate(star, Scheduler("lifo"))
print("absorbed:", [(ev.src, ev.dst, ev.payload["msg"]) for ev in trace.of_kind("absorb")])

for verdict in check_trace(star, trace):
    print(verdict)
