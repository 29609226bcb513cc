"""Depth and diversity density on families with known answers.

Complete graphs abridge in exactly n - 2 levels, so D = 1 - 2/n creeps up
towards 1; rings need one level whatever their length; trees need none.
"""

from lna import abridge
from lna.generators import complete_graph, cycle_graph, random_tree


def row(name, g):
    h = abridge(g)
    nus = [lvl.nu for lvl in h.levels]
    print(f"{name:>8}  n={g.n:<3} m={g.m:<3} L={h.L}  D={str(h.D):<5} ({float(h.D):.3f})  nu per level {nus}")


if __name__ == "__main__":
    for n in range(3, 8):
        row(f"K{n}", complete_graph(n))
    for k in (3, 8, 20):
        row(f"C{k}", cycle_graph(k))
    row("tree", random_tree(25, seed=1))
