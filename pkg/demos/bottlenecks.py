"""Spotting cut vertices and bridges from the level report.

Two dense blocks joined by a single bridge look healthy at level 0, but
the abstraction splits them apart one level up.  The report flags that
level as a bottleneck.
"""

from lna import Graph, abridge
from lna.hierarchy import level_report

left = [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)]
right = [(4, 5), (5, 6), (4, 6), (5, 7), (6, 7)]
g = Graph((), left + right + [(3, 4)])

if __name__ == "__main__":
    for r in level_report(abridge(g)):
        flag = "  <- bottleneck" if r["bottleneck"] else ""
        print(
            f"level {r['level']}: n={r['n']} m={r['m']} components={r['components']} "
            f"cut vertices={r['cut_vertices']} bridges={r['cut_edges']}{flag}"
        )
