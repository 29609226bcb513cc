"""Random deflection: fine when dense, hopeless when sparse.

On a complete graph every packet is adjacent to its destination, so it is
delivered in one hop.  On a long ring a deflected packet does a random walk
and rarely covers 50 hops of distance within a 50-hop budget.
"""

import random

from lna.generators import complete_graph, cycle_graph
from lna.simulator import Demand, SimScenario, simulate

rng = random.Random(8)

if __name__ == "__main__":
    k8 = complete_graph(8)
    traffic = tuple(Demand(*rng.sample(range(8), 2), 1, i // 10) for i in range(1000))
    print("K8, random pairs:", simulate(SimScenario(k8, traffic, protocol="deflection", seed=1)).delivery_fraction)
    ring = cycle_graph(100)
    for gap in (2, 5, 10, 25, 50):
        traffic = tuple(Demand(i, (i + gap) % 100, 1, i // 10) for i in range(100))
        r = simulate(SimScenario(ring, traffic, protocol="deflection", seed=1, hop_limit=50))
        print(f"C100, distance {gap:>2}, hop limit 50: {r.delivery_fraction:.2f}")
