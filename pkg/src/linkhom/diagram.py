"""Oriented link diagrams, braid words, diagram families, and surgeries.

A diagram is a PD-style crossing list.  Each crossing stores the four incident
arc ids (a, b, c, d) counterclockwise starting from the incoming under-strand,
plus an explicit sign:

    a -> c is the under-strand;
    sign +1: the over-strand runs d -> b;
    sign -1: the over-strand runs b -> d.

With this convention the 0-smoothing always joins (a, b) and (c, d), and the
1-smoothing joins (a, d) and (b, c); the oriented smoothing is the 0-choice at
positive crossings and the 1-choice at negative ones.

Crossingless circle components cannot be carried by crossing records, so the
diagram keeps an explicit count of free loops; the 0-crossing unknot is the
diagram with one free loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ArcNotFoundError,
    DiagramError,
    ParseError,
    RegimeError,
    UnknownBuiltinError,
)


@dataclass(frozen=True)
class Crossing:
    a: int
    b: int
    c: int
    d: int
    sign: int

    def slots(self):
        return (self.a, self.b, self.c, self.d)

    def outgoing(self):
        """Arc ids leaving this crossing (under-out plus over-out)."""
        return (self.c, self.b) if self.sign > 0 else (self.c, self.d)

    def incoming(self):
        return (self.a, self.d) if self.sign > 0 else (self.a, self.b)


@dataclass(frozen=True)
class BraidWord:
    """A braid word: letter i > 0 is sigma_i, i < 0 is its inverse."""

    strands: int
    letters: tuple = ()

    def __post_init__(self):
        if self.strands < 1:
            raise DiagramError("braid needs at least one strand")
        object.__setattr__(self, "letters", tuple(self.letters))
        for w in self.letters:
            if w == 0 or abs(w) > self.strands - 1:
                raise DiagramError(f"letter {w} out of range for {self.strands} strands")

    @property
    def writhe(self) -> int:
        return sum(1 if w > 0 else -1 for w in self.letters)

    def is_positive(self) -> bool:
        return all(w > 0 for w in self.letters)

    def is_negative(self) -> bool:
        return all(w < 0 for w in self.letters)


@dataclass(frozen=True)
class BraidLayout:
    """Closure bookkeeping: which circle of the oriented resolution is which strand.

    strand_reps[p] is ('arc', arc_id) for a strand that meets a crossing and
    ('loop', k) for the k-th crossingless strand.
    """

    strands: int
    letters: tuple
    strand_reps: tuple


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple = ()


@dataclass(frozen=True)
class OrientedDiagram:
    crossings: tuple = ()
    free_loops: int = 0
    braid: BraidLayout | None = None

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_pos(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_neg(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    def arcs(self):
        out = set()
        for c in self.crossings:
            out.update(c.slots())
        return sorted(out)

    def validate(self) -> ValidationReport:
        issues = []
        seen_in, seen_out = {}, {}
        for idx, c in enumerate(self.crossings):
            if c.sign not in (1, -1):
                issues.append(f"crossing {idx}: sign must be +1 or -1")
                continue
            for arc in c.incoming():
                seen_in[arc] = seen_in.get(arc, 0) + 1
            for arc in c.outgoing():
                seen_out[arc] = seen_out.get(arc, 0) + 1
        counts = {}
        for c in self.crossings:
            for arc in c.slots():
                counts[arc] = counts.get(arc, 0) + 1
        for arc, n in sorted(counts.items()):
            if n != 2:
                issues.append(f"arc {arc} occurs {n} times, expected 2")
        if not issues:
            for arc in counts:
                if seen_in.get(arc, 0) != 1 or seen_out.get(arc, 0) != 1:
                    issues.append(
                        f"arc {arc} has {seen_in.get(arc, 0)} heads / "
                        f"{seen_out.get(arc, 0)} tails; orientations are inconsistent"
                    )
        if self.free_loops < 0:
            issues.append("negative free loop count")
        if self.n_crossings == 0 and self.free_loops == 0:
            issues.append("empty diagram: no crossings and no free loops")
        return ValidationReport(ok=not issues, issues=tuple(issues))

    def components(self) -> int:
        """Number of link components (strand tracing through crossings)."""
        parent = {a: a for a in self.arcs()}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for c in self.crossings:
            union(c.a, c.c)
            if c.sign > 0:
                union(c.d, c.b)
            else:
                union(c.b, c.d)
        comps = len({find(a) for a in parent})
        return comps + self.free_loops


def writhe(d: OrientedDiagram) -> int:
    return d.n_pos - d.n_neg


def braid_closure(b: BraidWord) -> OrientedDiagram:
    """Standard round closure of a braid word.

    Crossing order follows letter order; arcs are relabeled 0..2k-1
    deterministically after gluing top to bottom.  Strands never involved in a
    crossing close into free loops.
    """
    n = b.strands
    cur = list(range(n))
    nxt = n
    raw = []
    for w in b.letters:
        i = abs(w)
        x, y = cur[i - 1], cur[i]
        u, v = nxt, nxt + 1
        nxt += 2
        if w > 0:
            raw.append((y, v, u, x, 1))
        else:
            raw.append((x, y, v, u, -1))
        cur[i - 1], cur[i] = u, v

    parent = list(range(nxt))

    def find(z):
        while parent[z] != z:
            parent[z] = parent[parent[z]]
            z = parent[z]
        return z

    for p in range(n):
        # glue top of strand p to its bottom
        ra, rb = find(cur[p]), find(p)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    used = set()
    for rec in raw:
        used.update(find(z) for z in rec[:4])
    relabel = {rep: i for i, rep in enumerate(sorted(used))}
    crossings = tuple(
        Crossing(relabel[find(a)], relabel[find(bb)], relabel[find(c)], relabel[find(dd)], s)
        for a, bb, c, dd, s in raw
    )

    strand_reps = []
    loops = 0
    for p in range(n):
        rep = find(p)
        if rep in relabel:
            strand_reps.append(("arc", relabel[rep]))
        else:
            strand_reps.append(("loop", loops))
            loops += 1
    layout = BraidLayout(n, tuple(b.letters), tuple(strand_reps))
    return OrientedDiagram(crossings, free_loops=loops, braid=layout)


def mirror(d: OrientedDiagram) -> OrientedDiagram:
    """Mirror image: every crossing switched, arc labels and orientations kept."""
    out = []
    for c in d.crossings:
        if c.sign > 0:
            out.append(Crossing(c.d, c.a, c.b, c.c, -1))
        else:
            out.append(Crossing(c.b, c.c, c.d, c.a, 1))
    layout = d.braid
    if layout is not None:
        layout = BraidLayout(
            layout.strands, tuple(-w for w in layout.letters), layout.strand_reps
        )
    return OrientedDiagram(tuple(out), d.free_loops, layout)


def disjoint_union(d1: OrientedDiagram, d2: OrientedDiagram) -> OrientedDiagram:
    """Disjoint union, arcs of the second summand relabeled out of the way."""
    shift = (max(d1.arcs()) + 1) if d1.crossings else 0
    moved = tuple(
        Crossing(c.a + shift, c.b + shift, c.c + shift, c.d + shift, c.sign)
        for c in d2.crossings
    )
    layout = None
    if d1.braid is not None and d2.braid is not None:
        n1 = d1.braid.strands
        reps = list(d1.braid.strand_reps)
        loop_base = sum(1 for kind, _ in reps if kind == "loop")
        for kind, v in d2.braid.strand_reps:
            reps.append(("arc", v + shift) if kind == "arc" else ("loop", v + loop_base))
        letters = tuple(d1.braid.letters) + tuple(
            (w + n1 if w > 0 else w - n1) for w in d2.braid.letters
        )
        layout = BraidLayout(n1 + d2.braid.strands, letters, tuple(reps))
    return OrientedDiagram(d1.crossings + moved, d1.free_loops + d2.free_loops, layout)


def connected_sum(d1: OrientedDiagram, arc1: int, d2: OrientedDiagram, arc2: int) -> OrientedDiagram:
    """Splice arc1 of d1 with arc2 of d2 (orientation-respecting connected sum).

    The caller is responsible for choosing arcs on outer-boundary-safe
    positions; combinatorially any pair of arcs is accepted.
    """
    if arc1 not in set(d1.arcs()):
        raise ArcNotFoundError(f"arc {arc1} not in first diagram")
    if arc2 not in set(d2.arcs()):
        raise ArcNotFoundError(f"arc {arc2} not in second diagram")
    shift = max(d1.arcs()) + 1
    a2 = arc2 + shift
    fresh = shift + max(d2.arcs()) + 1
    moved = [
        Crossing(c.a + shift, c.b + shift, c.c + shift, c.d + shift, c.sign)
        for c in d2.crossings
    ]

    # new arc `arc1` keeps d1's tail and gets d2's head; `fresh` takes the rest
    def rewire(crossings, old, tail_new, head_new):
        out = []
        for c in crossings:
            slots = list(c.slots())
            for s, a in enumerate(slots):
                if a == old:
                    outgoing = a in c.outgoing()
                    slots[s] = tail_new if outgoing else head_new
            out.append(Crossing(slots[0], slots[1], slots[2], slots[3], c.sign))
        return out

    new1 = rewire(d1.crossings, arc1, arc1, fresh)
    new2 = rewire(moved, a2, fresh, arc1)
    return OrientedDiagram(tuple(new1 + new2), d1.free_loops + d2.free_loops, None)


# ---------------------------------------------------------------------------
# Markov moves


def _free_reduce(letters):
    out = []
    for w in letters:
        if out and out[-1] == -w:
            out.pop()
        else:
            out.append(w)
    return tuple(out)


def conjugate(b: BraidWord, i: int) -> BraidWord:
    """sigma_i^-1 . b . sigma_i, freely reduced."""
    if not 1 <= i <= b.strands - 1:
        raise DiagramError(f"conjugation index {i} out of range")
    return BraidWord(b.strands, _free_reduce((-i,) + b.letters + (i,)))

def stabilize_positive(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands + 1, b.letters + (b.strands,))


def stabilize_negative(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands + 1, b.letters + (-b.strands,))


def braid_relation_variants(b: BraidWord):
    """Words obtained by one far-commutation or one Yang-Baxter slide."""
    out = []
    ws = b.letters
    for t in range(len(ws) - 1):
        if abs(abs(ws[t]) - abs(ws[t + 1])) >= 2:
            swapped = ws[:t] + (ws[t + 1], ws[t]) + ws[t + 2 :]
            out.append(BraidWord(b.strands, swapped))
    for t in range(len(ws) - 2):
        x, y, z = ws[t : t + 3]
        if x == z and abs(abs(x) - abs(y)) == 1 and (x > 0) == (y > 0):
            slid = ws[:t] + (y, x, y) + ws[t + 3 :]
            out.append(BraidWord(b.strands, slid))
    return out


# ---------------------------------------------------------------------------
# The diagram families of the examples section

def generate_U(k: int, h: int) -> OrientedDiagram:
    """Unknot diagram built from k + h 'over-over' two-crossing tangles.

    Two columns of reducible tangles hang off a three-crossing core; every
    tangle is removable by a Reidemeister II move, so the diagram is an
    unknot for all k, h >= 1.  Its simplified Seifert graph is a theta graph
    with alternating edge signs, which is what makes the combinatorial bound
    degrade linearly while the writhe stays 1.
    """
    if k < 1 or h < 1:
        raise RegimeError("generate_U needs k, h >= 1")
    arc = [0]

    def new(count):
        base = arc[0]
        arc[0] += count
        return list(range(base, base + count))

    crossings = []
    # connector arcs
    p_in, q_out, b_mid = new(3)
    # left column: inner strand ascends (r-arcs), outer descends (l-arcs)
    r = new(k + 1)  # r[0] enters box 1, r[j] between boxes, r[k] exits to X_m
    l = new(k + 1)  # l[k] enters box k from the top, l[0] exits at the bottom
    r_mid = new(k)
    l_mid = new(k)
    for j in range(k):
        # box j+1, bottom-to-top: low crossing negative, high positive
        crossings.append(Crossing(r[j], l_mid[j], r_mid[j], l[j], -1))
        crossings.append(Crossing(r_mid[j], l_mid[j], r[j + 1], l[j + 1], 1))
    # right column: inner strand descends (i-arcs), outer ascends (o-arcs)
    i_ = new(h + 1)  # i_[h] from X_m, i_[0] exits to X_br
    o = new(h + 1)  # o[0] from X_br, o[h] exits over the top
    i_mid = new(h)
    o_mid = new(h)
    for j in range(h):
        # box j+1, bottom-to-top: low crossing positive, high negative
        crossings.append(Crossing(i_mid[j], o_mid[j], i_[j], o[j], 1))
        crossings.append(Crossing(i_[j + 1], o_mid[j], i_mid[j], o[j + 1], -1))
    # the big outer arc identifies the left column's top outer with the right's
    top_out = l[k]
    crossings = [
        Crossing(
            {o[h]: top_out}.get(c.a, c.a),
            {o[h]: top_out}.get(c.b, c.b),
            {o[h]: top_out}.get(c.c, c.c),
            {o[h]: top_out}.get(c.d, c.d),
            c.sign,
        )
        for c in crossings
    ]
    # core crossings
    crossings.append(Crossing(p_in, q_out, i_[h], r[k], 1))   # X_m
    crossings.append(Crossing(b_mid, p_in, r[0], l[0], 1))    # X_bl
    crossings.append(Crossing(i_[0], q_out, b_mid, o[0], -1))  # X_br
    return OrientedDiagram(tuple(crossings))


def _antiparallel_twist(m: int, sign: int, lam, rho):
    """Vertical twist of m crossings between antiparallel strands.

    lam/rho are the m+1 left/right gap arcs from bottom to top (lam[0], rho[0]
    the bottom ports; lam[m], rho[m] the top ports); the ascending strand
    enters at rho[0].  All crossings carry the given sign.
    """
    out = []
    for j in range(1, m + 1):
        if sign > 0:
            if j % 2 == 1:
                out.append(Crossing(rho[j], lam[j], lam[j - 1], rho[j - 1], 1))
            else:
                out.append(Crossing(lam[j - 1], rho[j - 1], rho[j], lam[j], 1))
        else:
            if j % 2 == 1:
                out.append(Crossing(rho[j - 1], rho[j], lam[j], lam[j - 1], -1))
            else:
                out.append(Crossing(lam[j], lam[j - 1], rho[j - 1], rho[j], -1))
    return out


def generate_D(r: int, k: int, t: int) -> OrientedDiagram:
    """The two-bridge family: twist boxes of 2r+1, 2k-1 and 2t+1 crossings.

    Only the regime r > 0, k < 0, t < 0 is analyzed; parameters outside it are
    rejected.  The vertical boxes hold antiparallel twists (positive of length
    2r+1 on one side, negative of length 1-2k on the other) and the horizontal
    box a negative parallel twist of length -(2t+1).
    """
    if not (r > 0 and k < 0 and t < 0):
        raise RegimeError("generate_D is defined for r > 0, k < 0, t < 0")
    m_b = 2 * r + 1
    m_a = 1 - 2 * k
    p = -(2 * t + 1)
    arc = [0]

    def new(count):
        base = arc[0]
        arc[0] += count
        return list(range(base, base + count))

    top, bot, lt, lb, rt, rb = new(6)
    lam_b = [bot] + new(m_b - 1) + [top]
    rho_b = [lb] + new(m_b - 1) + [lt]
    lam_a = [rb] + new(m_a - 1) + [rt]
    rho_a = [bot] + new(m_a - 1) + [top]

    crossings = []
    crossings += _antiparallel_twist(m_b, 1, lam_b, rho_b)
    crossings += _antiparallel_twist(m_a, -1, lam_a, rho_a)
    tau = [rt] + new(p - 1) + [lt]
    beta = [rb] + new(p - 1) + [lb]
    for j in range(1, p + 1):
        crossings.append(Crossing(beta[j - 1], tau[j - 1], tau[j], beta[j], -1))
    return OrientedDiagram(tuple(crossings))


# ---------------------------------------------------------------------------
# Builtin catalog

# 9_42 presented as a braid closure; word validated against catalog invariants
# (Alexander polynomial, determinant, Jones polynomial, s over F2 and Q).
_NINE_42_WORD = (1, 1, 1, 2, -1, 2, -3, 2, -3)

_BUILTIN_WORDS = {
    "trefoil+": (2, (1, 1, 1)),
    "trefoil-": (2, (-1, -1, -1)),
    "figure8": (3, (1, -2, 1, -2)),
    "9_42": (4, _NINE_42_WORD),
}


def builtin_names():
    return ("unknot", "unlink2") + tuple(sorted(_BUILTIN_WORDS))


def builtin_diagram(name: str) -> OrientedDiagram:
    """Catalog diagrams: unknot, unlink2, trefoil+/-, figure8, 9_42."""
    if name == "unknot":
        return braid_closure(BraidWord(1, ()))
    if name == "unlink2":
        return braid_closure(BraidWord(2, ()))
    if name in _BUILTIN_WORDS:
        n, word = _BUILTIN_WORDS[name]
        return braid_closure(BraidWord(n, word))
    raise UnknownBuiltinError(f"unknown builtin diagram {name!r}; catalog: {builtin_names()}")


# ---------------------------------------------------------------------------
# Text format: bit-exact round trip

def print_diagram(d: OrientedDiagram) -> str:
    lines = [f"pd {d.n_crossings}"]
    if d.free_loops:
        lines.append(f"loops {d.free_loops}")
    for c in d.crossings:
        lines.append(f"X[{c.a},{c.b},{c.c},{c.d}] {c.sign:+d}")
    return "\n".join(lines) + "\n"


def print_braid(b: BraidWord) -> str:
    parts = [f"braid {b.strands}"]
    parts.extend(str(w) for w in b.letters)
    return " ".join(parts) + "\n"


def parse_braid(text: str) -> BraidWord:
    toks = text.split()
    if not toks or toks[0] != "braid":
        raise ParseError("expected 'braid <n> w1 w2 ...'")
    try:
        n = int(toks[1])
        letters = tuple(int(t) for t in toks[2:])
    except (IndexError, ValueError) as e:
        raise ParseError(f"bad braid line: {e}") from None
    try:
        return BraidWord(n, letters)
    except DiagramError as e:
        raise ParseError(str(e)) from None


def parse_diagram(text: str) -> OrientedDiagram:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("pd "):
        raise ParseError("expected header 'pd <n_crossings>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ParseError("bad pd header") from None
    loops = 0
    body = lines[1:]
    if body and body[0].startswith("loops "):
        try:
            loops = int(body[0].split()[1])
        except (IndexError, ValueError):
            raise ParseError("bad loops line") from None
        body = body[1:]
    crossings = []
    for ln in body:
        if not ln.startswith("X[") or "]" not in ln:
            raise ParseError(f"bad crossing line: {ln!r}")
        inside, _, rest = ln[2:].partition("]")
        try:
            a, b, c, dd = (int(x) for x in inside.split(","))
            sign = int(rest.strip())
        except ValueError:
            raise ParseError(f"bad crossing line: {ln!r}") from None
        if sign not in (1, -1):
            raise ParseError(f"bad sign in line: {ln!r}")
        crossings.append(Crossing(a, b, c, dd, sign))
    if len(crossings) != n:
        raise ParseError(f"header says {n} crossings, found {len(crossings)}")
    return OrientedDiagram(tuple(crossings), free_loops=loops)


def parse_any(text: str):
    head = text.lstrip().split(None, 1)
    if not head:
        raise ParseError("empty input")
    if head[0] == "braid":
        return parse_braid(text)
    if head[0] == "pd":
        return parse_diagram(text)
    raise ParseError("input is neither a braid nor a pd block")
