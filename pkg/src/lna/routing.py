"""Resilient recursive routing over an abstraction hierarchy.

A route between two physical vertices that first share a logical cycle at
level ``l`` is built top-down: an arc is picked on that level-``l`` ring,
and every logical vertex on the arc is crossed by routing around its own
ring one level down, until level 0 is reached.  Consecutive logical
vertices hand the packet over at the smallest lower-level vertex they
share.  Pairs that share no logical cycle at any level (separated by cut
vertices, bridges or trees) are split into segments that do.

Forwarding state is a stack of :class:`Frame` objects, one per level in
use; the packet follows the physical legs of the level-0 frames.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .cycles import cycle_ring
from .graph import Edge, Graph, canonical_edge, components, cut_vertices, tree_path
from .hierarchy import LnaHierarchy

__all__ = [
    "CycleUnreachable",
    "NoRoute",
    "LinkState",
    "Frame",
    "Leg",
    "Segment",
    "Router",
    "RouteState",
    "fundamental_cycle_route",
    "plan_route",
    "traverse_cut",
    "DELIVER",
    "DROP",
]

DELIVER = "deliver"
DROP = "drop"


class CycleUnreachable(Exception):
    """Both arcs of a ring between two vertices contain failed links."""


class NoRoute(Exception):
    """Source and destination are in different physical components."""


class LinkState:
    """Link availability and windowed congestion estimates per level.

    Level ``l`` refreshes its estimates every ``tau(l)`` ticks, where
    ``tau(l) = max(1, round(tau0 * b**l))``.  An estimate is the number of
    packets committed to a link during the last window divided by the
    window length.
    """

    def __init__(self, levels: int = 1, tau0: int = 1, b: float = 2.0):
        if tau0 <= 0:
            raise ValueError("tau0 must be positive")
        if b <= 1:
            raise ValueError("b must exceed 1")
        self.tau0 = tau0
        self.b = b
        self.levels = levels
        self.down: Set[Edge] = set()
        self.estimates: List[Dict[Edge, float]] = [{} for _ in range(levels)]
        self.counters: List[Dict[Edge, int]] = [{} for _ in range(levels)]
        self.refresh_ticks: List[List[int]] = [[] for _ in range(levels)]

    def tau(self, level: int) -> int:
        return max(1, round(self.tau0 * self.b**level))

    def is_up(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) not in self.down

    def fail(self, u: int, v: int):
        self.down.add(canonical_edge(u, v))

    def restore(self, u: int, v: int):
        self.down.discard(canonical_edge(u, v))

    def failed(self, level: int, u: int, v: int) -> bool:
        # only physical links fail; logical links see failures through congestion
        return level == 0 and not self.is_up(u, v)

    def cost(self, level: int, u: int, v: int) -> float:
        if level >= self.levels:
            return 1.0
        return 1.0 + self.estimates[level].get(canonical_edge(u, v), 0.0)

    def record(self, level: int, u: int, v: int, amount: int = 1):
        if level < self.levels:
            c = self.counters[level]
            e = canonical_edge(u, v)
            c[e] = c.get(e, 0) + amount

    def tick(self, t: int):
        """Refresh every level whose window ends at tick ``t``."""
        if t <= 0:
            return
        for level in range(self.levels):
            tau = self.tau(level)
            if t % tau == 0:
                self.estimates[level] = {e: n / tau for e, n in self.counters[level].items()}
                self.counters[level] = {}
                self.refresh_ticks[level].append(t)


def _arc(ring: Sequence[int], i: int, j: int, step: int) -> List[int]:
    n = len(ring)
    out = [ring[i]]
    while i != j:
        i = (i + step) % n
        out.append(ring[i])
    return out


def fundamental_cycle_route(
    ring: Sequence[int],
    entry: int,
    exit: int,
    link_state: Optional[LinkState] = None,
    level: int = 0,
    policy: str = "congestion",
    excluded: Iterable[Edge] = (),
) -> List[int]:
    """Pick one of the two arcs of ``ring`` from ``entry`` to ``exit``.

    Arcs containing a failed (or ``excluded``) link are discarded.  The
    survivor with the lower cost wins; cost is the sum of ``1 + congestion``
    over the arc's links under the ``"congestion"`` policy, or the plain
    link count under ``"hops"``.  Equal costs go to the arc with the
    smaller first hop.  ``entry == exit`` gives the zero-hop arc ``[entry]``.

    Raises
    ------
    CycleUnreachable
        If both arcs are blocked.
    """
    if policy not in ("congestion", "hops"):
        raise ValueError(f"unknown policy {policy!r}")
    ring = list(ring)
    i, j = ring.index(entry), ring.index(exit)
    if i == j:
        return [entry]
    blocked = {canonical_edge(*e) for e in excluded}
    options = []
    for step in (1, -1):
        arc = _arc(ring, i, j, step)
        links = list(zip(arc, arc[1:]))
        if any(canonical_edge(a, b) in blocked for a, b in links):
            continue
        if link_state is not None and any(link_state.failed(level, a, b) for a, b in links):
            continue
        if policy == "congestion" and link_state is not None:
            cost = sum(link_state.cost(level, a, b) for a, b in links)
        else:
            cost = float(len(links))
        options.append((cost, arc[1], arc))
    if not options:
        raise CycleUnreachable(f"ring {ring} severed between {entry} and {exit}")
    return min(options, key=lambda o: (o[0], o[1]))[2]


@dataclass(eq=False)
class Frame:
    """One application of cycle routing at ``level``.

    ``walk`` is the sequence of level vertices being followed; ``ring`` is
    the logical cycle it lies on, or ``None`` for deterministic tree/cut
    walks.  ``pos`` is this frame's index in its parent's walk.
    """

    level: int
    ring: Optional[Tuple[int, ...]]
    walk: List[int]
    entry: int
    exit: int
    parent: Optional["Frame"] = None
    pos: int = 0

    def depth(self) -> int:
        d, f = 1, self.parent
        while f is not None:
            d += 1
            f = f.parent
        return d

    def ancestors(self) -> List["Frame"]:
        out, f = [], self
        while f is not None:
            out.append(f)
            f = f.parent
        return out


@dataclass(eq=False)
class Leg:
    """Physical hops executed under one level-0 frame."""

    path: List[int]
    frame: Frame


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    distance: Optional[int]  # topological distance, None for a forced hop
    via: Optional[int] = None  # cut vertex the segment ends on, if any


class Router:
    """Plans routes over a fixed hierarchy.

    Parameters
    ----------
    h : LnaHierarchy
    policy : {"congestion", "hops"}
        Arc selection policy passed to :func:`fundamental_cycle_route`.
    """

    def __init__(self, h: LnaHierarchy, policy: str = "congestion"):
        self.h = h
        self.policy = policy
        self.g0 = h.graph(0)
        self._labels = components(self.g0).component_of
        self._cuts = cut_vertices(self.g0)
        self._hanging: List[Dict[int, List[int]]] = []
        for k in range(h.L + 1):
            groups: Dict[int, List[int]] = {}
            for w, r in sorted(h.levels[k].tree_map.items()):
                groups.setdefault(r, []).append(w)
            self._hanging.append(groups)
        # physical vertex -> type-1 ids (of level l+1) whose cycle covers it
        self._cover: List[Dict[int, Set[int]]] = []
        for lvl in range(h.L):
            table: Dict[int, Set[int]] = {}
            for t in h.levels[lvl].type1_of:
                for p in h.base_res[lvl + 1][t]:
                    table.setdefault(p, set()).add(t)
            self._cover.append(table)
        # physical vertex -> tree-collapse roots of its images, per level
        self._roots: List[Dict[int, Set[int]]] = []
        for lvl in range(h.L + 1):
            tmap = h.levels[lvl].tree_map
            table = {}
            for v, members in h.base_res[lvl].items():
                for p in members:
                    table.setdefault(p, set()).add(tmap.get(v, v))
            self._roots.append(table)
        self._rings: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        self._hops = {v: _bfs_hops(self.g0, v) for v in self.g0.vertices}

    # -- hierarchy helpers ---------------------------------------------
    def distance(self, a: int, b: int) -> Optional[int]:
        found = self._locate(a, b)
        return None if found is None else found[0]

    def _locate(self, a: int, b: int) -> Optional[Tuple[int, bool]]:
        """``(level, via_cycle)`` of the first logical vertex ``a`` and ``b`` share."""
        if a == b:
            return 0, False
        for lvl in range(self.h.L + 1):
            if lvl < self.h.L and self._cover[lvl].get(a, set()) & self._cover[lvl].get(b, set()):
                return lvl, True
            if self._roots[lvl].get(a, set()) & self._roots[lvl].get(b, set()):
                return lvl, False
        return None

    def ring_of(self, level: int, t: int) -> Tuple[int, ...]:
        """Ring (vertices of ``level - 1``) used to cross vertex ``t`` of ``level``."""
        key = (level, t)
        if key not in self._rings:
            below = self.h.levels[level - 1]
            vec = below.type1_of.get(t)
            if vec is None:
                # a cycle adjacency is crossed along the first cycle that produced it
                vec = below.type1_of[below.type2_pairs[t][0][0]]
            self._rings[key] = tuple(cycle_ring(vec))
        return self._rings[key]

    def _image(self, level: int, p: int, candidates: Iterable[int]) -> int:
        table = self.h.full_res[level]
        hits = [v for v in candidates if p in table[v]]
        if not hits:
            raise NoRoute(f"vertex {p} has no image among level-{level} candidates")
        return min(hits)

    def _anchor(self, level: int, p: int, x: int) -> int:
        base = self.h.base_res[level]
        if p in base[x]:
            return x
        for w in self._hanging[level].get(x, ()):
            if p in base[w]:
                return w
        raise NoRoute(f"vertex {p} is not inside level-{level} vertex {x}")

    def _handoff(self, level: int, shared: Iterable[int], cur: int) -> Tuple[int, int]:
        """Nearest physical member of the shared level vertices, and its vertex."""
        hop = self._hops[cur]
        base = self.h.base_res[level]
        best = min(
            (hop.get(p, len(hop)), p, u) for u in shared for p in base[u]
        )
        return best[1], best[2]

    def _tree_path(self, level: int, a: int, b: int) -> List[int]:
        if a == b:
            return [a]
        g = self.h.graph(level)
        root = self.h.levels[level].tree_map.get(a, a)
        allowed = set(self._hanging[level].get(root, ())) | {root}
        return tree_path(g, a, b, allowed)

    # -- planning --------------------------------------------------------
    def plan(self, s: int, d: int, link_state: Optional[LinkState] = None) -> List[Leg]:
        """Physical legs from ``s`` to ``d``.

        Raises
        ------
        NoRoute
            When ``s`` and ``d`` lie in different components.
        """
        if s not in self.g0 or d not in self.g0:
            raise NoRoute(f"unknown vertex {s if s not in self.g0 else d}")
        if s == d:
            return []
        if self._labels[s] != self._labels[d]:
            raise NoRoute(f"{s} and {d} are disconnected")
        if self.distance(s, d) is not None:
            return self._plan_segment(s, d, link_state)
        legs: List[Leg] = []
        for seg in self.traverse_cut(s, d):
            if seg.distance is None:
                frame = Frame(0, None, [seg.start, seg.end], seg.start, seg.end)
                legs.append(Leg([seg.start, seg.end], frame))
            else:
                legs.extend(self._plan_segment(seg.start, seg.end, link_state))
        return legs

    def _plan_segment(self, a: int, b: int, link_state) -> List[Leg]:
        ell, via_cycle = self._locate(a, b)
        if via_cycle:
            choices = self._cover[ell][a] & self._cover[ell][b]
            vecs = self.h.levels[ell].type1_of
            top = min(choices, key=lambda t: (vecs[t].weight, vecs[t].positions))
            return self._route_inside(ell + 1, top, a, b, None, None, None, 0, link_state)
        # images hang in one level-ell tree: walk it deterministically
        root = min(self._roots[ell][a] & self._roots[ell][b])
        tmap = self.h.levels[ell].tree_map
        base = self.h.base_res[ell]
        members = [root, *self._hanging[ell].get(root, ())]
        x = min(v for v in members if a in base[v] and tmap.get(v, v) == root)
        y = min(v for v in members if b in base[v] and tmap.get(v, v) == root)
        walk = self._tree_path(ell, x, y)
        frame = Frame(ell, None, walk, a, b)
        return self._realize(ell, walk, a, b, frame, link_state)

    def _route_inside(self, k, y, a, b, hint_a, hint_b, parent, pos, link_state) -> List[Leg]:
        """Cross level-``k`` vertex ``y`` from physical ``a`` to ``b``."""
        if a == b:
            return []
        ring = self.ring_of(k, y)
        ua = hint_a if hint_a is not None and hint_a in ring else self._image(k - 1, a, ring)
        ub = hint_b if hint_b is not None and hint_b in ring else self._image(k - 1, b, ring)
        arc = fundamental_cycle_route(ring, ua, ub, link_state, k - 1, self.policy)
        frame = Frame(k - 1, ring, arc, a, b, parent, pos)
        _commit(link_state, k - 1, arc)
        return self._realize(k - 1, arc, a, b, frame, link_state)

    def _realize(self, k, walk, a, b, frame, link_state) -> List[Leg]:
        """Turn a walk of level-``k`` vertices into physical legs."""
        if len(walk) == 1:
            # both ends inside one vertex's territory: go straight through its tree
            root = walk[0]
            ta, tb = self._anchor(k, a, root), self._anchor(k, b, root)
            allowed = set(self._hanging[k].get(root, ())) | {root}
            direct = tree_path(self.h.graph(k), ta, tb, allowed)
            if k == 0:
                # tree walks sit beside the ring frame, not inside it
                side = Frame(0, None, direct, a, b, frame.parent, frame.pos)
                return [Leg(direct, side)] if len(direct) > 1 else []
            walk, head, tail = direct, [direct[0]], [direct[-1]]
        elif k == 0:
            head = tail = None
        else:
            head = self._tree_path(k, self._anchor(k, a, walk[0]), walk[0])
            tail = self._tree_path(k, walk[-1], self._anchor(k, b, walk[-1]))
        if k == 0:
            legs = []
            if a != walk[0]:
                tail = self._tree_path(0, a, walk[0])
                legs.append(Leg(tail, Frame(0, None, tail, a, walk[0], frame.parent, frame.pos)))
            if len(walk) > 1:
                legs.append(Leg(list(walk), frame))
            if b != walk[-1]:
                tail = self._tree_path(0, walk[-1], b)
                legs.append(Leg(tail, Frame(0, None, tail, walk[-1], b, frame.parent, frame.pos)))
            return legs
        full = head[:-1] + list(walk) + tail[1:]
        offset = len(head) - 1
        legs: List[Leg] = []
        cur, cur_hint = a, None
        for i, y in enumerate(full):
            if i + 1 < len(full):
                shared = set(self.h.parts(k, y)) & set(self.h.parts(k, full[i + 1]))
                nxt, nxt_hint = self._handoff(k - 1, shared, cur)
            else:
                nxt, nxt_hint = b, None
            legs.extend(
                self._route_inside(k, y, cur, nxt, cur_hint, nxt_hint, frame, i - offset, link_state)
            )
            cur, cur_hint = nxt, nxt_hint
        return legs

    def traverse_cut(self, s: int, d: int) -> List[Segment]:
        """Split an ``s``-``d`` route into segments that each share a cycle.

        The route follows the shortest walk between the endpoints' images at
        the highest level where they are still connected.  Its hand-over
        points are then merged greedily: each segment runs to the furthest
        later point still sharing a logical cycle with its start.  A pair
        sharing no cycle at all is a forced single hop (a bridge or tree
        edge).
        """
        if s == d:
            return []
        points = self._handoff_points(s, d)
        segs: List[Segment] = []
        i = 0
        while i < len(points) - 1:
            j = len(points) - 1
            while j > i + 1 and self.distance(points[i], points[j]) is None:
                j -= 1
            dist = self.distance(points[i], points[j])
            if dist is None and not self.g0.has_edge(points[i], points[j]):
                raise NoRoute(f"cannot bridge {points[i]} -> {points[j]}")
            segs.append(Segment(points[i], points[j], dist))
            i = j
        cuts = self._cuts
        return [
            Segment(x.start, x.end, x.distance, x.end if x.end in cuts and x.end != d else None)
            for x in segs
        ]

    def _handoff_points(self, s: int, d: int) -> List[int]:
        for k in range(self.h.L, -1, -1):
            g = self.h.graph(k)
            base = self.h.base_res[k]
            src = [v for v in g.vertices if s in base[v]]
            dst = [v for v in g.vertices if d in base[v]]
            if not src or not dst:
                continue
            walk = _shortest_walk(g, src, dst)
            if walk is None:
                continue
            points = [s]
            for y, z in zip(walk, walk[1:]):
                if k == 0:
                    points.append(z)
                    continue
                shared = set(self.h.parts(k, y)) & set(self.h.parts(k, z))
                points.append(self._handoff(k - 1, shared, points[-1])[0])
            if points[-1] != d:
                points.append(d)
            dedup = [points[0]]
            for p in points[1:]:
                if p != dedup[-1]:
                    dedup.append(p)
            return dedup
        raise NoRoute(f"{s} and {d} are disconnected")


def _commit(link_state, level: int, arc: Sequence[int]):
    """Count a chosen arc against its links' congestion for this window.

    Load is booked when a packet is committed to an arc rather than when it
    crosses each link, so the next refresh sees this window's decisions
    without the lag of in-flight packets.
    """
    if link_state is not None:
        for u, v in zip(arc, arc[1:]):
            link_state.record(level, u, v)


def _bfs_hops(g: Graph, s: int) -> Dict[int, int]:
    dist = {s: 0}
    queue = [s]
    for x in queue:
        for y in g.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _shortest_walk(g: Graph, sources: List[int], targets: List[int]) -> Optional[List[int]]:
    """Fewest-hop walk from any source to any target; ties lexicographic."""
    targets_set = set(targets)
    best: Optional[List[int]] = None
    for s in sorted(sources):
        prev = {s: None}
        frontier = [s]
        found = None
        while frontier and found is None:
            nxt = []
            for x in frontier:
                for y in g.neighbors(x):
                    if y not in prev:
                        prev[y] = x
                        nxt.append(y)
            hit = sorted(v for v in frontier if v in targets_set)
            if hit:
                found = hit[0]
                break
            frontier = sorted(nxt)
        if found is None:
            continue
        walk = [found]
        while prev[walk[-1]] is not None:
            walk.append(prev[walk[-1]])
        walk.reverse()
        if best is None or (len(walk), walk) < (len(best), best):
            best = walk
    return best


@dataclass(eq=False)
class RouteState:
    """Forwarding state of one packet.

    ``legs`` holds the remaining physical legs; the current leg's frame and
    its ancestors form the frame stack.
    """

    packet: int
    source: int
    destination: int
    legs: List[Leg]
    position: int
    router: Router
    hops: int = 0
    path: List[int] = field(default_factory=list)
    visited: Set[int] = field(default_factory=set)
    max_depth: int = 0
    reroutes: int = 0

    @classmethod
    def start(cls, router: Router, packet: int, s: int, d: int, link_state=None) -> "RouteState":
        state = cls(packet, s, d, router.plan(s, d, link_state), s, router, path=[s])
        state._enter_leg()
        return state

    @property
    def stack(self) -> List[Frame]:
        """Active frames, innermost first."""
        return self.legs[0].frame.ancestors() if self.legs else []

    def _enter_leg(self):
        while self.legs and len(self.legs[0].path) <= 1:
            self.legs.pop(0)
        self.visited = {self.position}
        if self.legs:
            if self.legs[0].path[0] != self.position:
                raise AssertionError("leg does not start at the packet position")
            self.max_depth = max(self.max_depth, self.legs[0].frame.depth())

    def step(self, link_state: Optional[LinkState] = None, hop_limit: Optional[int] = None):
        """Advance one hop.

        Returns the next vertex, :data:`DELIVER` once the destination is
        reached, or :data:`DROP` when the frame stack runs out of options
        or the hop limit is hit.
        """
        if self.position == self.destination:
            return DELIVER
        if hop_limit is not None and self.hops >= hop_limit:
            return DROP
        if not self.legs:
            return DROP
        leg = self.legs[0]
        i = leg.path.index(self.position)
        nxt = leg.path[i + 1]
        if link_state is not None and not link_state.is_up(self.position, nxt):
            if not self._react(link_state):
                return DROP
            return self.step(link_state, hop_limit)
        if nxt in self.visited:
            raise AssertionError(f"loop: vertex {nxt} revisited within one frame")
        self.visited.add(nxt)
        self.position = nxt
        self.hops += 1
        self.path.append(nxt)
        if nxt == leg.path[-1]:
            self.legs.pop(0)
            self._enter_leg()
        return nxt

    def _react(self, link_state: LinkState) -> bool:
        """Reroute around a failed link, widening scope one frame at a time."""
        leg = self.legs[0]
        frame = leg.frame
        here = self.position
        if frame.ring is not None and here in frame.ring:
            try:
                arc = fundamental_cycle_route(
                    frame.ring, here, leg.path[-1], link_state, 0, self.router.policy
                )
            except CycleUnreachable:
                arc = None
            if arc is not None:
                _commit(link_state, 0, arc)
                new = Frame(0, frame.ring, arc, here, leg.path[-1], frame.parent, frame.pos)
                self.legs[0] = Leg(arc, new)
                self.reroutes += 1
                self._enter_leg()
                return True
        # ring severed: the error moves up one frame at a time
        child = frame
        parent = frame.parent
        while parent is not None:
            legs = self._replan(parent, child, link_state)
            if legs is not None:
                rest = [l for l in self.legs if parent not in l.frame.ancestors()]
                self.legs = legs + rest
                self.reroutes += 1
                self._enter_leg()
                return True
            child, parent = parent, parent.parent
        return False

    def _replan(self, frame: Frame, child: Frame, link_state) -> Optional[List[Leg]]:
        if frame.ring is None or frame.level == 0:
            return None
        walk = frame.walk
        pos = child.pos
        if not 0 <= pos < len(walk) or walk[pos] not in frame.ring:
            return None
        here = walk[pos]
        excluded = []
        if pos + 1 < len(walk):
            excluded.append((here, walk[pos + 1]))
        try:
            arc = fundamental_cycle_route(
                frame.ring, here, walk[-1], link_state, frame.level, self.router.policy, excluded
            )
            new = Frame(frame.level, frame.ring, arc, self.position, frame.exit, frame.parent, frame.pos)
            legs = self.router._realize(frame.level, arc, self.position, frame.exit, new, link_state)
        except (CycleUnreachable, NoRoute, ValueError):
            return None
        if legs and legs[0].path[0] != self.position:
            return None
        return legs


def plan_route(h: LnaHierarchy, s: int, d: int, link_state: Optional[LinkState] = None,
               policy: str = "congestion", packet: int = 0) -> RouteState:
    """Fresh forwarding state for one packet from ``s`` to ``d``."""
    return RouteState.start(Router(h, policy), packet, s, d, link_state)


def traverse_cut(h: LnaHierarchy, s: int, d: int) -> List[Segment]:
    return Router(h).traverse_cut(s, d)
