"""Simplified Seifert graph, the combinatorial quantities, and the bounds.

Vertices are the circles of the oriented resolution.  Two circles sharing at
least one crossing get a single edge, classed positive / negative / neutral by
the signs of all shared crossings.  A vertex is positive (negative) when every
incident edge is, neutral otherwise; circles with no crossings at all are
classed neutral.  A vertex is pure when all its neighbors share its class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import OrientedDiagram, writhe
from .resolution import oriented_resolution, resolve

POSITIVE = "positive"
NEGATIVE = "negative"
NEUTRAL = "neutral"


@dataclass(frozen=True)
class SeifertGraph:
    n_vertices: int
    edges: dict  # frozenset({u, v}) -> class
    vertex_class: dict
    pure: dict
    crossings_on_edge: dict  # frozenset({u, v}) -> tuple of crossing indices
    circle_arcs: tuple  # arc tuples of the arc-bearing circles, loops appended

    def neighbors(self, v):
        out = set()
        for e in self.edges:
            if v in e:
                out.update(e - {v})
        return out

    def component_of(self, v, edge_filter=None):
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for e, cls in self.edges.items():
                if u not in e:
                    continue
                if edge_filter is not None and not edge_filter(cls):
                    continue
                for w in e - {u}:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return seen

    def components(self, edge_filter=None):
        remaining = set(range(self.n_vertices))
        comps = []
        while remaining:
            v = min(remaining)
            comp = self.component_of(v, edge_filter)
            comps.append(comp)
            remaining -= comp
        return comps


@dataclass(frozen=True)
class Quantities:
    V: int
    Vplus: int
    Vminus: int
    lplus: int
    lminus: int
    splus: int
    sminus: int
    deltaminus: int
    ls: int
    w: int
    ell: int  # link component count, feeds the Lobb lower bound

    def as_dict(self):
        return {
            "V": self.V,
            "Vplus": self.Vplus,
            "Vminus": self.Vminus,
            "lplus": self.lplus,
            "lminus": self.lminus,
            "splus": self.splus,
            "sminus": self.sminus,
            "deltaminus": self.deltaminus,
            "ls": self.ls,
            "w": self.w,
        }


@dataclass
class BoundReport:
    cbound: int
    lobb_lower: int
    lobb_upper: int
    kawcav: int
    sharp_flags: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "cbound": self.cbound,
            "lobb_lower": self.lobb_lower,
            "lobb_upper": self.lobb_upper,
            "kawcav": self.kawcav,
        }


def build_graph(d: OrientedDiagram) -> SeifertGraph:
    """Simplified Seifert graph of the oriented resolution."""
    cs = resolve(d, oriented_resolution(d))
    edge_signs = {}
    crossings_on = {}
    for idx, (u, v) in enumerate(cs.pairs):
        if u == v:
            continue  # cannot happen for planar input (bipartite circles)
        e = frozenset((u, v))
        edge_signs.setdefault(e, []).append(d.crossings[idx].sign)
        crossings_on.setdefault(e, []).append(idx)
    edges = {}
    for e, signs in edge_signs.items():
        if all(s > 0 for s in signs):
            edges[e] = POSITIVE
        elif all(s < 0 for s in signs):
            edges[e] = NEGATIVE
        else:
            edges[e] = NEUTRAL
    vertex_class = {}
    for v in range(cs.n_circles):
        incident = [cls for e, cls in edges.items() if v in e]
        if incident and all(c == POSITIVE for c in incident):
            vertex_class[v] = POSITIVE
        elif incident and all(c == NEGATIVE for c in incident):
            vertex_class[v] = NEGATIVE
        else:
            vertex_class[v] = NEUTRAL
    g = SeifertGraph(
        n_vertices=cs.n_circles,
        edges=edges,
        vertex_class=vertex_class,
        pure={},
        crossings_on_edge={e: tuple(v) for e, v in crossings_on.items()},
        circle_arcs=cs.circles + tuple(() for _ in range(cs.loops)),
    )
    pure = {}
    for v in range(cs.n_circles):
        pure[v] = all(vertex_class[w] == vertex_class[v] for w in g.neighbors(v))
    object.__setattr__(g, "pure", pure)
    return g


def quantities(g: SeifertGraph, d: OrientedDiagram) -> Quantities:
    """All combinatorial quantities of the bound formulas."""
    vc = g.vertex_class
    comps = g.components()
    lplus = sum(1 for comp in comps if all(vc[v] == POSITIVE for v in comp))
    lminus = sum(1 for comp in comps if all(vc[v] == NEGATIVE for v in comp))
    splus = len(g.components(edge_filter=lambda cls: cls != NEGATIVE))
    sminus = len(g.components(edge_filter=lambda cls: cls != POSITIVE))
    deltaminus = int(
        any(
            cls == NEGATIVE and all(vc[v] == NEUTRAL for v in e)
            for e, cls in g.edges.items()
        )
    )
    return Quantities(
        V=g.n_vertices,
        Vplus=sum(1 for v in vc.values() if v == POSITIVE),
        Vminus=sum(1 for v in vc.values() if v == NEGATIVE),
        lplus=lplus,
        lminus=lminus,
        splus=splus,
        sminus=sminus,
        deltaminus=deltaminus,
        ls=len(comps),
        w=writhe(d),
        ell=d.components(),
    )


def bounds(q: Quantities) -> BoundReport:
    """The three displayed bounds, evaluated exactly.

    cbound:      s >= w - V + 2 V- - 2 l- + 2 delta- + 1
    Lobb:        w + V - 2 s- + 1 >= s >= w - V + 2 s+ - 2 ell + 1
    KawCav:      s >= w - V + 2 s+ - 2 ls + 1
    """
    return BoundReport(
        cbound=q.w - q.V + 2 * q.Vminus - 2 * q.lminus + 2 * q.deltaminus + 1,
        lobb_lower=q.w - q.V + 2 * q.splus - 2 * q.ell + 1,
        lobb_upper=q.w + q.V - 2 * q.sminus + 1,
        kawcav=q.w - q.V + 2 * q.splus - 2 * q.ls + 1,
    )


def almost_positive_check(d: OrientedDiagram):
    """Predicted s for a non-split almost-positive diagram, else None.

    Almost-positive means exactly one negative crossing and at least one
    positive crossing; the prediction is w - V + 2 delta- + 1.
    """
    if d.n_neg != 1 or d.n_pos < 1:
        return None
    g = build_graph(d)
    q = quantities(g, d)
    if q.ls != 1:
        return None
    return q.w - q.V + 2 * q.deltaminus + 1
