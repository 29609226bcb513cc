"""One link fails; who keeps delivering?

R3 reroutes around the failed link inside the cycle it lies on and needs no
table recomputation.  Static shortest-path routing loses every packet whose
path crossed the link until the tables are rebuilt.
"""

import random

from lna.generators import random_biconnected
from lna.simulator import Demand, FailureEvent, SimScenario, simulate

rng = random.Random(1)
g = random_biconnected(20, 4, rng)
traffic = tuple(Demand(*rng.sample(range(20), 2), 4, i) for i in range(40))
failure = (FailureEvent(g.edges[0], down=2),)


def show(label, sc):
    r = simulate(sc)
    hops = [p.hops for p in r.packets if p.outcome == "delivered"]
    mean = sum(hops) / len(hops) if hops else 0
    print(f"{label:<24} delivered {r.delivered}/{r.total}  recomputes {r.recompute_events}  mean hops {mean:.2f}")


if __name__ == "__main__":
    print(f"topology: n={g.n} m={g.m}, failing {g.edges[0]} at tick 2")
    show("r3", SimScenario(g, traffic, failure))
    show("spf, static", SimScenario(g, traffic, failure, "spf"))
    show("spf, recompute at 6", SimScenario(g, traffic, failure, "spf", recomputes=(6,)))
