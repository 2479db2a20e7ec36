"""Randomized property suites over seeded braid corpora.

Each suite returns a SuiteResult with the checks it ran and minimal witnesses
(braid word, field, property name) for anything that failed.  The CLI `verify`
subcommand and the acceptance tests both run these.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .coeffs import GF2, GF3, RATIONALS
from .complexes import build_complex, chain_is_zero
from .diagram import (
    BraidWord,
    braid_closure,
    braid_relation_variants,
    conjugate,
    stabilize_negative,
    stabilize_positive,
)
from .homology import BNHomology, homology_field
from .invariants import (
    beta,
    c_invariants,
    negative_row_index,
    s_invariant,
    theorem_decomposition,
    x_state,
    x_state_conjugated,
    y_state,
    deltaminus_witness,
)
from .complexes import chain_scale_upow, chain_sub
from .resolution import nesting_parities, oriented_resolution, resolve
from .seifert import NEGATIVE, NEUTRAL, build_graph, quantities


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok, witness):
        self.checks += 1
        if not ok:
            self.failures.append(witness)

    def summary(self) -> str:
        status = "ok" if self.passed else "FAIL"
        out = f"suite {self.name}: {status} ({self.checks} checks)"
        for w in self.failures[:20]:
            out += f"\n  FAIL {w}"
        return out


def corpus_braids(seed: int, count: int, max_crossings: int,
                  min_strands: int = 2, max_strands: int = 4, predicate=None):
    """Deterministic braid corpus; predicate filters by rejection sampling."""
    rng = random.Random(seed)
    out = []
    guard = 0
    while len(out) < count:
        guard += 1
        if guard > 200 * count:
            raise RuntimeError("corpus predicate too restrictive")
        n = rng.randint(min_strands, max_strands)
        length = rng.randint(1, max_crossings)
        letters = tuple(
            rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)
        )
        b = BraidWord(n, letters)
        if predicate is None or predicate(b):
            out.append(b)
    return out


def _specialized_entries(cx, u_value):
    out = {}
    for i in cx.degrees:
        for src, entries in enumerate(cx.diff[i]):
            acc = {}
            for tgt, c, m in entries:
                acc[tgt] = acc.get(tgt, 0) + c * (u_value ** m if m else 1)
            for tgt, c in acc.items():
                if c:
                    out[(i, src, tgt)] = c
    return out


def _plain_entries(cx):
    out = {}
    for i in cx.degrees:
        for src, entries in enumerate(cx.diff[i]):
            acc = {}
            for tgt, c, m in entries:
                if m:
                    return None  # field theories carry no U
                acc[tgt] = acc.get(tgt, 0) + c
            for tgt, c in acc.items():
                if c:
                    out[(i, src, tgt)] = c
    return out


def suite_structural(seed: int = 7, count: int = 200, max_crossings: int = 10) -> SuiteResult:
    """d^2 = 0 (integer level, hence every field), beta cycles, bipartiteness,
    specialization homomorphisms, and the graded Euler characteristic."""
    res = SuiteResult("structural")
    for b in corpus_braids(seed, count, max_crossings):
        d = braid_closure(b)
        cxs = {}
        for theory in ("kh", "tlee", "bn"):
            cx = build_complex(d, theory, check=False)
            cxs[theory] = cx
            ok, witness = cx.verify_d_squared()
            res.check(ok, (b.letters, theory, "d^2", witness))
            ok, witness = cx.verify_graded()
            res.check(ok, (b.letters, theory, "graded", witness))
        # beta cycles in the Bar-Natan theory
        for reverse in (False, True):
            bc = beta(d, cxs["bn"], reverse=reverse)
            res.check(
                chain_is_zero(cxs["bn"].d_int(0, bc.chain)),
                (b.letters, "bn", "beta cycle", reverse),
            )
        # bipartite nesting: circles sharing a crossing get opposite parities
        par = nesting_parities(d)
        cs = resolve(d, oriented_resolution(d))
        ok = all(par.parity[u] != par.parity[v] for u, v in cs.pairs)
        res.check(ok, (b.letters, "nesting", "bipartite"))
        flipped = nesting_parities(d, reverse=True)
        res.check(
            all(flipped.parity[k] == 1 - v for k, v in par.parity.items()),
            (b.letters, "nesting", "orientation flip"),
        )
        # U -> 0 gives the Khovanov differential, U -> 1 the twisted Lee one
        res.check(
            _specialized_entries(cxs["bn"], 0) == _plain_entries(cxs["kh"]),
            (b.letters, "specialize", "U->0 vs kh"),
        )
        res.check(
            _specialized_entries(cxs["bn"], 1) == _plain_entries(cxs["tlee"]),
            (b.letters, "specialize", "U->1 vs tlee"),
        )
    # graded Euler characteristic: chain level vs homology, on a subcorpus
    for b in corpus_braids(seed + 1, max(10, count // 10), max_crossings):
        d = braid_closure(b)
        cx = build_complex(d, "kh", check=False)
        chain_euler = {}
        for i in cx.degrees:
            for q in cx.qdeg[i]:
                chain_euler[q] = chain_euler.get(q, 0) + (-1) ** i
        for f in (GF2, GF3, RATIONALS):
            hom_euler = {}
            for (i, q), dim in homology_field(cx, f).dims.items():
                hom_euler[q] = hom_euler.get(q, 0) + (-1) ** i * dim
            ok = {q: c for q, c in chain_euler.items() if c} == {
                q: c for q, c in hom_euler.items() if c
            }
            res.check(ok, (b.letters, str(f), "euler characteristic"))
    return res


def suite_theorem11(seed: int = 7, count: int = 100, max_crossings: int = 9) -> SuiteResult:
    """c, cbar >= V- - l- + delta- over F2 and Q, plus exact witnesses."""
    res = SuiteResult("theorem11")
    for b in corpus_braids(seed, count, max_crossings):
        d = braid_closure(b)
        g = build_graph(d)
        q = quantities(g, d)
        bound = q.Vminus - q.lminus + q.deltaminus
        cx = build_complex(d, "bn", check=False)
        for f in (GF2, RATIONALS):
            c, cbar = c_invariants(d, f, cx)
            res.check(c >= bound, (b.letters, str(f), "c >= bound", c, bound))
            res.check(cbar >= bound, (b.letters, str(f), "cbar >= bound", cbar, bound))
        try:
            wit = theorem_decomposition(d, cx)
            res.check(wit.exponent == bound, (b.letters, "witness exponent", wit.exponent, bound))
        except Exception as e:  # the construction self-verifies; any raise is a failure
            res.check(False, (b.letters, "decomposition", repr(e)))
    return res


def suite_bennequin(seed: int = 7, count: int = 100, max_crossings: int = 9) -> SuiteResult:
    """s >= w - V + 2c + 1 and the cbar variant; negative rows force c >= 1."""
    res = SuiteResult("bennequin")
    for b in corpus_braids(seed, count, max_crossings):
        d = braid_closure(b)
        g = build_graph(d)
        q = quantities(g, d)
        cx_bn = build_complex(d, "bn", check=False)
        cx_tl = build_complex(d, "tlee", check=False)
        for f in (GF2, RATIONALS):
            c, cbar = c_invariants(d, f, cx_bn)
            s = s_invariant(d, f, cx_tl)
            res.check(s >= q.w - q.V + 2 * c + 1, (b.letters, str(f), "bennequin c", s, c))
            res.check(s >= q.w - q.V + 2 * cbar + 1, (b.letters, str(f), "bennequin cbar", s, cbar))
            if negative_row_index(b) is not None:
                res.check(c >= 1, (b.letters, str(f), "negative row c >= 1", c))
                res.check(cbar >= 1, (b.letters, str(f), "negative row cbar >= 1", cbar))
    return res


def suite_lemma52(seed: int = 7, count: int = 50, max_crossings: int = 8) -> SuiteResult:
    """Exact chain-level checks of the two combinatorial lemmas."""
    res = SuiteResult("lemma52")

    def has_negative_vertex(b):
        d = braid_closure(b)
        g = build_graph(d)
        return any(cls == NEGATIVE for cls in g.vertex_class.values())

    rng = random.Random(seed + 13)
    for b in corpus_braids(seed, count, max_crossings, predicate=has_negative_vertex):
        d = braid_closure(b)
        g = build_graph(d)
        par = nesting_parities(d)
        cx = build_complex(d, "bn", check=False)
        negs = sorted(v for v, cls in g.vertex_class.items() if cls == NEGATIVE)
        subsets = [frozenset(negs)]
        if len(negs) > 1:
            subsets.append(frozenset(rng.sample(negs, rng.randint(1, len(negs)))))
        for gp in subsets:
            x = x_state(cx, g, par, gp)
            for v0 in sorted(gp):
                xc = x_state_conjugated(cx, g, par, gp, v0)
                rest = x_state(cx, g, par, gp - {v0})
                diff = chain_sub(x, xc)
                ok = diff in (chain_scale_upow(rest, 1, 1), chain_scale_upow(rest, -1, 1))
                res.check(ok, (b.letters, tuple(gp), v0, "lemma1"))
                # lemma 2 needs v0 non-pure or non-isolated in Gamma'
                partners = [
                    w
                    for w in g.neighbors(v0)
                    if w in gp or g.vertex_class[w] != NEGATIVE
                ]
                for w in partners[:2]:
                    crossing = min(g.crossings_on_edge[frozenset((v0, w))])
                    y = y_state(cx, g, par, gp, v0, crossing)
                    res.check(
                        cx.d_int(-1, y) == xc,
                        (b.letters, tuple(gp), v0, crossing, "lemma2"),
                    )
            q = quantities(g, d)
            if q.deltaminus:
                edge = min(
                    (
                        e
                        for e, cls in g.edges.items()
                        if cls == NEGATIVE
                        and all(g.vertex_class[v] == NEUTRAL for v in e)
                    ),
                    key=lambda e: tuple(sorted(e)),
                )
                crossing = min(g.crossings_on_edge[edge])
                try:
                    deltaminus_witness(cx, g, par, gp, crossing)
                    res.check(True, None)
                except Exception as e:
                    res.check(False, (b.letters, tuple(gp), "deltaminus", repr(e)))
    return res


def suite_markov(seed: int = 7, count: int = 30, max_crossings: int = 8) -> SuiteResult:
    """Invariance under conjugation and braid relations; stabilization rules."""
    res = SuiteResult("markov")
    rng = random.Random(seed + 4)
    f = GF2
    for b in corpus_braids(seed, count, max_crossings):
        d = braid_closure(b)
        c, cbar = c_invariants(d, f)
        s = s_invariant(d, f)
        variants = [conjugate(b, rng.randint(1, b.strands - 1))]
        variants += braid_relation_variants(b)[:2]
        for v in variants:
            dv = braid_closure(v)
            cv, cbarv = c_invariants(dv, f)
            sv = s_invariant(dv, f)
            res.check(
                (cv, cbarv, sv) == (c, cbar, s),
                (b.letters, v.letters, "conjugation/relation", (c, cbar, s), (cv, cbarv, sv)),
            )
        up = braid_closure(stabilize_positive(b))
        cp, cbarp = c_invariants(up, f)
        sp = s_invariant(up, f)
        res.check((cp, cbarp) == (c, cbar), (b.letters, "stab+", (c, cbar), (cp, cbarp)))
        res.check(sp == s, (b.letters, "stab+ s", s, sp))
        dn = braid_closure(stabilize_negative(b))
        cn, cbarn = c_invariants(dn, f)
        sn = s_invariant(dn, f)
        res.check(
            (cn, cbarn) == (c + 1, cbar + 1), (b.letters, "stab-", (c, cbar), (cn, cbarn))
        )
        res.check(sn == s, (b.letters, "stab- s", s, sn))
    return res


def suite_sharpness(seed: int = 7, count: int = 20, max_crossings: int = 9) -> SuiteResult:
    """cbound = s on positive and negative braid closures; almost-positive formula."""
    from .seifert import almost_positive_check, bounds

    res = SuiteResult("sharpness")
    rng = random.Random(seed + 8)

    def positive_words():
        out = []
        for _ in range(count):
            n = rng.randint(2, 4)
            length = rng.randint(1, max_crossings)
            out.append(BraidWord(n, tuple(rng.randint(1, n - 1) for _ in range(length))))
        return out

    for sign in (1, -1):
        for b in positive_words():
            if sign < 0:
                b = BraidWord(b.strands, tuple(-w for w in b.letters))
            d = braid_closure(b)
            q = quantities(build_graph(d), d)
            rhs = bounds(q).cbound
            for f in (GF2, RATIONALS):
                s = s_invariant(d, f)
                res.check(s == rhs, (b.letters, str(f), "cbound sharp", s, rhs))

    # almost-positive battery: positive word with one negated letter, non-split
    found = 0
    guard = 0
    while found < 5 and guard < 500:
        guard += 1
        n = rng.randint(2, 4)
        length = rng.randint(3, 7)
        letters = [rng.randint(1, n - 1) for _ in range(length)]
        pos = rng.randrange(length)
        letters[pos] = -letters[pos]
        b = BraidWord(n, tuple(letters))
        d = braid_closure(b)
        predicted = almost_positive_check(d)
        if predicted is None:
            continue
        found += 1
        for f in (GF2, RATIONALS):
            s = s_invariant(d, f)
            res.check(s == predicted, (b.letters, str(f), "almost-positive", s, predicted))
    res.check(found >= 5, ("almost-positive battery size", found))
    return res


def suite_betamodule(seed: int = 7, count: int = 100, max_crossings: int = 9) -> SuiteResult:
    """[beta], [beta-bar] are non-torsion and F[U]-independent in degree 0."""
    res = SuiteResult("betamodule")
    for b in corpus_braids(seed, count, max_crossings):
        d = braid_closure(b)
        cx = build_complex(d, "bn", check=False)
        h0 = BNHomology(cx, GF2, 0)
        bc = beta(d, cx)
        bbc = beta(d, cx, reverse=True)
        fp1, _ = h0.coords_of_cycle(bc.chain, bc.qdeg)
        fp2, _ = h0.coords_of_cycle(bbc.chain, bbc.qdeg)
        res.check(bool(fp1), (b.letters, "beta non-torsion"))
        res.check(bool(fp2), (b.letters, "betabar non-torsion"))
        res.check(
            _monomial_rank2(GF2, fp1, fp2), (b.letters, "beta, betabar independent")
        )
    return res


def _monomial_rank2(field, fp1, fp2):
    """True when two free-part vectors with monomial entries have rank 2 over F(U)."""
    c1 = {t: (lam, m) for lam, m, t, _ in fp1}
    c2 = {t: (lam, m) for lam, m, t, _ in fp2}
    gens = sorted(set(c1) | set(c2))
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            a0, a1 = c1.get(gens[i]), c1.get(gens[j])
            b0, b1 = c2.get(gens[i]), c2.get(gens[j])
            terms = {}
            if a0 and b1:
                k = a0[1] + b1[1]
                terms[k] = field.add(terms.get(k, field.zero()), field.mul(a0[0], b1[0]))
            if a1 and b0:
                k = a1[1] + b0[1]
                terms[k] = field.sub(terms.get(k, field.zero()), field.mul(a1[0], b0[0]))
            if any(not field.is_zero(v) for v in terms.values()):
                return True
    return False


SUITES = {
    "structural": suite_structural,
    "theorem11": suite_theorem11,
    "bennequin": suite_bennequin,
    "lemma52": suite_lemma52,
    "markov": suite_markov,
    "sharpness": suite_sharpness,
    "betamodule": suite_betamodule,
}
