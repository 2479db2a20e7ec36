"""Resolutions of a diagram: circle tracing, the cube, and nesting parities.

With the slot convention of `diagram`, the 0-smoothing of any crossing joins
(a, b) and (c, d), and the 1-smoothing joins (a, d) and (b, c).  The oriented
resolution picks 0 at positive crossings and 1 at negative ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import OrientedDiagram
from .errors import DiagramError, NestingUndeterminedError


@dataclass(frozen=True)
class Resolution:
    choices: tuple

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))
        if any(ch not in (0, 1) for ch in self.choices):
            raise DiagramError("resolution choices must be 0 or 1")

    @property
    def weight(self) -> int:
        return sum(self.choices)


@dataclass(frozen=True)
class CircleSet:
    """Circles of one resolution.

    circles[i] is the sorted arc tuple of circle i; arc-bearing circles come
    first, ordered by smallest arc id, followed by `loops` crossingless
    circles.  pairs[c] is the (possibly equal) pair of circle ids whose joins
    meet crossing c.
    """

    circles: tuple
    loops: int
    pairs: tuple
    circle_of_arc: dict

    @property
    def n_circles(self) -> int:
        return len(self.circles) + self.loops

    def touch(self, crossing_index: int):
        return set(self.pairs[crossing_index])

    def joined(self, crossing_index: int):
        return self.pairs[crossing_index]


def _joins(crossing, choice):
    a, b, c, d = crossing.a, crossing.b, crossing.c, crossing.d
    return ((a, b), (c, d)) if choice == 0 else ((a, d), (b, c))


def resolve(d: OrientedDiagram, r: Resolution) -> CircleSet:
    """Trace the circles of a resolution by gluing arcs at each smoothing."""
    if len(r.choices) != d.n_crossings:
        raise DiagramError(
            f"resolution has {len(r.choices)} choices for {d.n_crossings} crossings"
        )
    arcs = d.arcs()
    parent = {a: a for a in arcs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, ch in zip(d.crossings, r.choices):
        for u, v in _joins(c, ch):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)

    groups = {}
    for a in arcs:
        groups.setdefault(find(a), []).append(a)
    circles = tuple(tuple(sorted(g)) for _, g in sorted(groups.items()))
    circle_of_arc = {}
    for cid, circle in enumerate(circles):
        for a in circle:
            circle_of_arc[a] = cid
    pairs = tuple(
        (circle_of_arc[j1[0]], circle_of_arc[j2[0]])
        for c, ch in zip(d.crossings, r.choices)
        for j1, j2 in [_joins(c, ch)]
    )
    return CircleSet(circles, d.free_loops, pairs, circle_of_arc)


def oriented_resolution(d: OrientedDiagram) -> Resolution:
    """The orientation-respecting (Seifert) smoothing of every crossing."""
    return Resolution(tuple(0 if c.sign > 0 else 1 for c in d.crossings))


def cube_neighbors(r: Resolution):
    """All resolutions one 0-to-1 flip away, with the flipped crossing index."""
    out = []
    for i, ch in enumerate(r.choices):
        if ch == 0:
            flipped = r.choices[:i] + (1,) + r.choices[i + 1 :]
            out.append((i, Resolution(flipped)))
    return out


@dataclass(frozen=True)
class NestingAssignment:
    parity: dict
    provenance: str  # "braid-geometric" or "two-coloring"

    def flipped(self):
        return NestingAssignment({k: 1 - v for k, v in self.parity.items()}, self.provenance)


def nesting_parities(d: OrientedDiagram, reverse: bool = False) -> NestingAssignment:
    """Nesting parities of the Seifert circles for o_D (or -o_D with reverse).

    For braid closures the parities come from the round-closure geometry with
    outward positive normals: the circle of strand i gets (n - i) mod 2, and
    reversing the orientation flips every parity.  Otherwise a proper
    two-coloring of the simplified Seifert graph is used, rooted at the circle
    with the lowest arc id; this needs the graph to be connected.
    """
    cs = resolve(d, oriented_resolution(d))
    if d.braid is not None:
        n = d.braid.strands
        parity = {}
        loop_base = len(cs.circles)
        for pos, (kind, v) in enumerate(d.braid.strand_reps, start=1):
            cid = cs.circle_of_arc[v] if kind == "arc" else loop_base + v
            parity[cid] = (n - pos) % 2
        if len(parity) != cs.n_circles:
            raise DiagramError("braid layout does not cover the oriented resolution")
        out = NestingAssignment(parity, "braid-geometric")
        return out.flipped() if reverse else out

    adj = {cid: set() for cid in range(cs.n_circles)}
    for u, v in cs.pairs:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    parity = {0: 0} if cs.n_circles else {}
    queue = [0] if cs.n_circles else []
    while queue:
        u = queue.pop()
        for v in adj[u]:
            if v not in parity:
                parity[v] = 1 - parity[u]
                queue.append(v)
            elif parity[v] == parity[u]:
                raise DiagramError(
                    "oriented resolution is not bipartite; diagram is not planar-consistent"
                )
    if len(parity) != cs.n_circles:
        raise NestingUndeterminedError(
            "split Seifert graph without braid structure: nesting undetermined"
        )
    out = NestingAssignment(parity, "two-coloring")
    return out.flipped() if reverse else out
