"""Deterministic tick-based simulation of packet forwarding.

Every packet moves one hop per tick.  Three forwarding protocols share the
same event loop:

``r3``
    recursive cycle routing over the abstraction hierarchy, reacting to
    failed links locally without recomputing any table;
``spf``
    static shortest paths, computed once and only refreshed by explicit
    ``recomputes`` events;
``deflection``
    hand the packet to the destination if adjacent, otherwise to a
    uniformly random neighbour over an up link.

Per tick, in order: congestion windows that end at this tick refresh,
failure/recovery and recompute events fire, new packets are injected, and
every in-flight packet (by id) takes one hop.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .graph import Edge, Graph, canonical_edge, path_weight, shortest_path, shortest_path_tree
from .hierarchy import LnaHierarchy, abridge
from .routing import DELIVER, DROP, LinkState, NoRoute, Router, RouteState

__all__ = [
    "Demand",
    "FailureEvent",
    "SimScenario",
    "SimReport",
    "ScenarioError",
    "simulate",
    "baseline_shortest_path",
    "baseline_deflection",
    "PROTOCOLS",
]

PROTOCOLS = ("r3", "spf", "deflection")
DELIVERED = "delivered"
DROPPED = "dropped"
HOP_LIMIT = "hop-limit"


class ScenarioError(ValueError):
    """Invalid scenario contents."""


@dataclass(frozen=True)
class Demand:
    source: int
    destination: int
    packets: int = 1
    start: int = 0
    interval: int = 1


@dataclass(frozen=True)
class FailureEvent:
    edge: Edge
    down: int
    up: Optional[int] = None


@dataclass(frozen=True)
class SimScenario:
    """Everything one simulation run needs.

    ``hop_limit`` defaults to ``4 * n``.  ``recomputes`` lists the ticks at
    which the shortest-path baseline rebuilds its tables.
    """

    topology: Graph
    traffic: Tuple[Demand, ...] = ()
    failures: Tuple[FailureEvent, ...] = ()
    protocol: str = "r3"
    tau0: int = 1
    b: float = 2.0
    seed: int = 0
    hop_limit: Optional[int] = None
    recomputes: Tuple[int, ...] = ()
    policy: str = "congestion"

    def __post_init__(self):
        g = self.topology
        if self.protocol not in PROTOCOLS:
            raise ScenarioError(f"unknown protocol {self.protocol!r}")
        if not isinstance(self.tau0, int) or self.tau0 <= 0:
            raise ScenarioError("tau0 must be a positive integer")
        if not self.b > 1:
            raise ScenarioError("b must be greater than 1")
        if self.hop_limit is not None and self.hop_limit <= 0:
            raise ScenarioError("hop_limit must be positive")
        for dem in self.traffic:
            for v in (dem.source, dem.destination):
                if v not in g:
                    raise ScenarioError(f"traffic references unknown vertex {v}")
            if dem.source == dem.destination:
                raise ScenarioError(f"traffic source equals destination ({dem.source})")
            if dem.packets < 0 or dem.start < 0 or dem.interval < 1:
                raise ScenarioError(f"bad demand {dem}")
        for f in self.failures:
            if not g.has_edge(*f.edge):
                raise ScenarioError(f"failure on unknown edge {f.edge}")
            if f.down < 0 or (f.up is not None and f.up < f.down):
                raise ScenarioError(f"bad failure times {f}")
        if any(t < 0 for t in self.recomputes):
            raise ScenarioError("recompute times must be non-negative")

    @property
    def limit(self) -> int:
        return self.hop_limit if self.hop_limit is not None else 4 * self.topology.n

    def with_protocol(self, protocol: str) -> "SimScenario":
        return SimScenario(
            self.topology, self.traffic, self.failures, protocol, self.tau0, self.b,
            self.seed, self.hop_limit, self.recomputes, self.policy,
        )

    @classmethod
    def from_json(cls, data: dict, base_dir: Path = Path(".")) -> "SimScenario":
        from .io import parse_edgelist

        known = {
            "topology", "edges", "protocol", "tau0", "b", "seed", "hop_limit",
            "traffic", "failures", "recomputes", "policy",
        }
        extra = set(data) - known
        if extra:
            raise ScenarioError(f"unknown scenario fields: {sorted(extra)}")
        if "edges" in data:
            topo = Graph((), [tuple(e) for e in data["edges"]])
        elif "topology" in data:
            path = Path(data["topology"])
            if not path.is_absolute():
                path = base_dir / path
            topo = parse_edgelist(path.read_text(), source=str(path))
        else:
            raise ScenarioError("scenario needs 'topology' or 'edges'")
        try:
            traffic = tuple(
                Demand(
                    int(d["source"]), int(d["destination"]), int(d.get("packets", 1)),
                    int(d.get("start", 0)), int(d.get("interval", 1)),
                )
                for d in data.get("traffic", [])
            )
            failures = tuple(
                FailureEvent(
                    canonical_edge(*map(int, f["edge"])), int(f["down"]),
                    None if f.get("up") is None else int(f["up"]),
                )
                for f in data.get("failures", [])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed traffic or failure entry: {exc}") from exc
        return cls(
            topo, traffic, failures,
            data.get("protocol", "r3"), data.get("tau0", 1), float(data.get("b", 2.0)),
            int(data.get("seed", 0)), data.get("hop_limit"),
            tuple(int(t) for t in data.get("recomputes", [])), data.get("policy", "congestion"),
        )


@dataclass
class PacketRecord:
    id: int
    source: int
    destination: int
    injected: int
    outcome: str = ""
    finished: Optional[int] = None
    path: List[int] = field(default_factory=list)
    stretch: Optional[float] = None
    reroutes: int = 0

    @property
    def hops(self) -> int:
        return max(0, len(self.path) - 1)


@dataclass
class SimReport:
    """Outcome of one run.  ``to_json`` gives a canonical, stable dict."""

    protocol: str
    packets: List[PacketRecord]
    link_peak_load: Dict[Edge, int]
    link_total_load: Dict[Edge, int]
    recovery: List[dict]
    recompute_events: int
    refresh_ticks: Dict[int, List[int]]
    max_depth: int
    levels: Optional[int]
    ticks: int

    def count(self, outcome: str) -> int:
        return sum(1 for p in self.packets if p.outcome == outcome)

    @property
    def delivered(self) -> int:
        return self.count(DELIVERED)

    @property
    def dropped(self) -> int:
        return self.count(DROPPED)

    @property
    def hop_limited(self) -> int:
        return self.count(HOP_LIMIT)

    @property
    def total(self) -> int:
        return len(self.packets)

    @property
    def delivery_fraction(self) -> float:
        return self.delivered / self.total if self.packets else 1.0

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol,
            "summary": {
                "total": self.total,
                "delivered": self.delivered,
                "dropped": self.dropped,
                "hop_limit": self.hop_limited,
                "delivery_fraction": round(self.delivery_fraction, 12),
                "recompute_events": self.recompute_events,
                "max_depth": self.max_depth,
                "L": self.levels,
                "ticks": self.ticks,
            },
            "packets": [
                {
                    "id": p.id,
                    "source": p.source,
                    "destination": p.destination,
                    "outcome": p.outcome,
                    "injected": p.injected,
                    "finished": p.finished,
                    "hops": p.hops,
                    "stretch": None if p.stretch is None else round(p.stretch, 12),
                    "reroutes": p.reroutes,
                    "path": p.path,
                }
                for p in self.packets
            ],
            "links": [
                {"edge": list(e), "peak": self.link_peak_load.get(e, 0), "total": self.link_total_load.get(e, 0)}
                for e in sorted(set(self.link_peak_load) | set(self.link_total_load))
            ],
            "recovery": self.recovery,
            "refresh_ticks": {str(k): v for k, v in sorted(self.refresh_ticks.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


class _Forwarder:
    """Per-protocol hop decisions; subclasses keep their own packet state."""

    def __init__(self, scenario: SimScenario, links: LinkState):
        self.scenario = scenario
        self.g = scenario.topology
        self.links = links

    def inject(self, rec: PacketRecord) -> bool:
        return True

    def hop(self, rec: PacketRecord, here: int):
        raise NotImplementedError

    def recompute(self):
        pass


class _PlanningView:
    """What a source knows when it plans: congestion summaries, but not
    remote link failures.  Failures are found hop by hop."""

    def __init__(self, links: LinkState):
        self._links = links

    def failed(self, level, u, v):
        return False

    def cost(self, level, u, v):
        return self._links.cost(level, u, v)

    def record(self, level, u, v, amount=1):
        self._links.record(level, u, v, amount)


class _R3(_Forwarder):
    def __init__(self, scenario, links, h: LnaHierarchy):
        super().__init__(scenario, links)
        self.h = h
        self.router = Router(h, scenario.policy)
        self.states: Dict[int, RouteState] = {}
        self.max_depth = 0

    def inject(self, rec):
        try:
            self.states[rec.id] = RouteState.start(
                self.router, rec.id, rec.source, rec.destination, _PlanningView(self.links)
            )
        except NoRoute:
            return False
        return True

    def hop(self, rec, here):
        st = self.states[rec.id]
        out = st.step(self.links, self.scenario.limit)
        self.max_depth = max(self.max_depth, st.max_depth)
        if st.max_depth > self.h.L + 1:
            raise AssertionError(f"frame stack depth {st.max_depth} exceeds L + 1 = {self.h.L + 1}")
        rec.reroutes = st.reroutes
        if out == DROP and st.hops >= self.scenario.limit:
            return HOP_LIMIT
        return out


class _SPF(_Forwarder):
    def __init__(self, scenario, links):
        super().__init__(scenario, links)
        self.generation = 0
        self.recomputes = 0
        self._table_graph = self.g
        self._trees: Dict[int, dict] = {}
        self.routes: Dict[int, Tuple[int, List[int]]] = {}

    def recompute(self):
        self.generation += 1
        self.recomputes += 1
        self._table_graph = self.g.without_edges(self.links.down)
        self._trees = {}

    def _path(self, s, d):
        if s not in self._trees:
            self._trees[s] = shortest_path_tree(self._table_graph, s)
        tree = self._trees[s]
        return list(tree[d][1]) if d in tree else None

    def inject(self, rec):
        path = self._path(rec.source, rec.destination)
        if path is None:
            return False
        self.routes[rec.id] = (self.generation, path)
        return True

    def hop(self, rec, here):
        if here == rec.destination:
            return DELIVER
        if rec.hops >= self.scenario.limit:
            return HOP_LIMIT
        gen, path = self.routes[rec.id]
        nxt = path[path.index(here) + 1]
        if not self.links.is_up(here, nxt):
            if gen == self.generation:
                return DROP  # tables not yet re-converged
            fresh = self._path(here, rec.destination)
            if fresh is None:
                return DROP
            self.routes[rec.id] = (self.generation, fresh)
            return self.hop(rec, here)
        return nxt


class _Deflection(_Forwarder):
    def __init__(self, scenario, links):
        super().__init__(scenario, links)
        self.rng = random.Random(scenario.seed)

    def hop(self, rec, here):
        d = rec.destination
        if here == d:
            return DELIVER
        if rec.hops >= self.scenario.limit:
            return HOP_LIMIT
        if self.g.has_edge(here, d) and self.links.is_up(here, d):
            return d
        options = [w for w in self.g.neighbors(here) if self.links.is_up(here, w)]
        if not options:
            return DROP
        return options[self.rng.randrange(len(options))]


def simulate(scenario: SimScenario, hierarchy: Optional[LnaHierarchy] = None) -> SimReport:
    """Run ``scenario`` to completion.

    Parameters
    ----------
    scenario : SimScenario
    hierarchy : LnaHierarchy, optional
        Precomputed hierarchy for the ``r3`` protocol; built from the
        topology when omitted.

    Returns
    -------
    SimReport
        Identical inputs (including seed) give an identical report.
    """
    g = scenario.topology
    h = None
    if scenario.protocol == "r3":
        h = hierarchy if hierarchy is not None else abridge(g)
        links = LinkState(h.L + 1, scenario.tau0, scenario.b)
        fwd: _Forwarder = _R3(scenario, links, h)
    else:
        links = LinkState(1, scenario.tau0, scenario.b)
        fwd = _SPF(scenario, links) if scenario.protocol == "spf" else _Deflection(scenario, links)

    injections: Dict[int, List[Tuple[int, int]]] = {}
    records: List[PacketRecord] = []
    for dem in scenario.traffic:
        for i in range(dem.packets):
            t = dem.start + i * dem.interval
            rec = PacketRecord(len(records), dem.source, dem.destination, t)
            records.append(rec)
            injections.setdefault(t, []).append(rec.id)
    events: Dict[int, List[Tuple[str, Edge]]] = {}
    for f in scenario.failures:
        events.setdefault(f.down, []).append(("down", f.edge))
        if f.up is not None:
            events.setdefault(f.up, []).append(("up", f.edge))
    recompute_at = set(scenario.recomputes)

    reference = {}  # static shortest path on the intact topology, per pair
    in_flight: Dict[int, int] = {}  # packet id -> current vertex
    peak: Dict[Edge, int] = {}
    total: Dict[Edge, int] = {}
    last_event = max([0, *injections, *events, *recompute_at])
    t = 0
    while in_flight or t <= last_event:
        links.tick(t)
        for kind, e in events.get(t, ()):
            links.fail(*e) if kind == "down" else links.restore(*e)
        if t in recompute_at:
            fwd.recompute()
        for pid in injections.get(t, ()):
            rec = records[pid]
            rec.path = [rec.source]
            if fwd.inject(rec):
                in_flight[pid] = rec.source
            else:
                rec.outcome, rec.finished = DROPPED, t
        used: Dict[Edge, int] = {}
        for pid in sorted(in_flight):
            rec = records[pid]
            here = in_flight[pid]
            out = fwd.hop(rec, here)
            if out == DELIVER:
                rec.outcome, rec.finished = DELIVERED, t
            elif out in (DROP, DROPPED):
                rec.outcome, rec.finished = DROPPED, t
            elif out == HOP_LIMIT:
                rec.outcome, rec.finished = HOP_LIMIT, t
            else:
                e = canonical_edge(here, out)
                used[e] = used.get(e, 0) + 1
                rec.path.append(out)
                in_flight[pid] = out
                if out == rec.destination:
                    rec.outcome, rec.finished = DELIVERED, t + 1
                continue
            del in_flight[pid]
        for pid in [p for p in in_flight if records[p].outcome]:
            del in_flight[pid]
        for e, n in used.items():
            total[e] = total.get(e, 0) + n
            peak[e] = max(peak.get(e, 0), n)
        t += 1

    for rec in records:
        if rec.outcome == DELIVERED:
            key = (rec.source, rec.destination)
            if key not in reference:
                reference[key] = shortest_path(g, *key)
            rec.stretch = float(path_weight(g, rec.path) / path_weight(g, reference[key]))

    return SimReport(
        protocol=scenario.protocol,
        packets=records,
        link_peak_load=peak,
        link_total_load=total,
        recovery=_recovery(scenario, records),
        recompute_events=getattr(fwd, "recomputes", 0),
        refresh_ticks={lvl: ticks for lvl, ticks in enumerate(links.refresh_ticks)},
        max_depth=getattr(fwd, "max_depth", 0),
        levels=None if h is None else h.L,
        ticks=t,
    )


def _recovery(scenario: SimScenario, records: Sequence[PacketRecord]) -> List[dict]:
    """Ticks from each failure until a packet whose intact shortest path used
    the failed link is next delivered (``None`` if that never happens)."""
    g = scenario.topology
    out = []
    cache: Dict[Tuple[int, int], set] = {}
    for f in scenario.failures:
        best = None
        for rec in records:
            if rec.outcome != DELIVERED or rec.finished is None or rec.finished < f.down:
                continue
            key = (rec.source, rec.destination)
            if key not in cache:
                p = shortest_path(g, *key) or []
                cache[key] = {canonical_edge(a, b) for a, b in zip(p, p[1:])}
            if f.edge in cache[key]:
                dt = rec.finished - f.down
                best = dt if best is None else min(best, dt)
        out.append({"edge": list(f.edge), "down": f.down, "up": f.up, "recovery_time": best})
    return out


def baseline_shortest_path(scenario: SimScenario) -> SimReport:
    """Static shortest-path forwarding; failures are only routed around
    after an explicit recompute event."""
    return simulate(scenario.with_protocol("spf"))


def baseline_deflection(scenario: SimScenario) -> SimReport:
    """Random deflection forwarding, seeded by ``scenario.seed``."""
    return simulate(scenario.with_protocol("deflection"))
