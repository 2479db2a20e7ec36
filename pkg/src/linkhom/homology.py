"""Exact homology: bigraded dimensions over a field, graded module
decomposition over F[U], U-divisibility of classes, and filtration degrees.

The Bar-Natan complex is graded with deg(U) = -2, so every homogeneous matrix
entry is a monomial c * U^m whose power is determined by the row and column
quantum degrees.  Storing only the scalar c makes column/row reduction over
F[U] look exactly like reduction over F, with one legality constraint: a
multiple of a column (row) may only be added to a column (row) of smaller or
equal quantum degree.  Kernels, Smith normal forms, and class coordinates all
stay exact this way, and every invariant factor is automatically a U-power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coeffs import FieldSpec
from .complexes import ChainComplex, chain_is_zero
from .errors import (
    InternalCheckError,
    NotACycleError,
    TheoryError,
    TrivialClassError,
)
from .linalg import echelon_basis


# ---------------------------------------------------------------------------
# Field-coefficient helpers

def _field_vec(field, chain):
    """Integer chain with U-power 0 -> field vector {idx: scalar}."""
    out = {}
    for idx, poly in chain.items():
        if len(poly) > 1 and any(poly[1:]):
            raise TheoryError("chain has U-powers; not a field-complex element")
        c = field.elem(poly[0] if poly else 0)
        if not field.is_zero(c):
            out[idx] = c
    return out


def _d_columns(cx: ChainComplex, field, i):
    """Differential columns C^i -> C^{i+1} as field vectors (U must not occur)."""
    cols = []
    for src, entries in enumerate(cx.diff.get(i, [])):
        vec = {}
        for tgt, c, m in entries:
            if m:
                raise TheoryError("U-power in a field complex differential")
            v = field.add(vec.get(tgt, field.zero()), field.elem(c))
            if field.is_zero(v):
                vec.pop(tgt, None)
            else:
                vec[tgt] = v
        cols.append((src, vec))
    return cols


def is_cycle(cx: ChainComplex, field, i, chain) -> bool:
    dz = cx.d_int(i, chain)
    if chain_is_zero(dz):
        return True
    p = field.characteristic
    if p == 0:
        return False
    return all(all(c % p == 0 for c in poly) for poly in dz.values())


@dataclass(frozen=True)
class BigradedDims:
    dims: dict  # (i, j) -> dimension

    def total(self) -> int:
        return sum(self.dims.values())

    def poincare_items(self):
        return sorted(self.dims.items())


def homology_field(cx: ChainComplex, field: FieldSpec) -> BigradedDims:
    """Bigraded dimensions of a graded field complex (the Khovanov theory)."""
    if cx.theory != "kh":
        raise TheoryError("bigraded field homology is defined for the kh theory")
    ranks = {}
    counts = {}
    for i in cx.degrees:
        for idx, q in enumerate(cx.qdeg[i]):
            counts[(i, q)] = counts.get((i, q), 0) + 1
        bases = {}
        for src, vec in _d_columns(cx, field, i):
            if not vec:
                continue
            q = cx.qdeg[i][src]
            bases.setdefault(q, echelon_basis(field)).add(vec)
        for q, basis in bases.items():
            ranks[(i, q)] = basis.rank
    dims = {}
    for (i, q), n in counts.items():
        dim = n - ranks.get((i, q), 0) - ranks.get((i - 1, q), 0)
        if dim:
            dims[(i, q)] = dim
    return BigradedDims(dims)


def homology_ranks(cx: ChainComplex, field: FieldSpec) -> dict:
    """Ungraded per-degree homology dimensions over a field (kh or tlee)."""
    if cx.theory == "bn":
        raise TheoryError("use homology_bn for the Bar-Natan theory")
    ranks = {}
    for i in cx.degrees:
        basis = echelon_basis(field)
        for _, vec in _d_columns(cx, field, i):
            if vec:
                basis.add(vec)
        ranks[i] = basis.rank
    return {
        i: cx.dim(i) - ranks.get(i, 0) - ranks.get(i - 1, 0)
        for i in cx.degrees
        if cx.dim(i) - ranks.get(i, 0) - ranks.get(i - 1, 0)
    }


def is_boundary(cx: ChainComplex, field: FieldSpec, i: int, chain):
    """Exact solve d(w) = z over the field; returns (flag, witness or None)."""
    z = _field_vec(field, chain)
    if not is_cycle(cx, field, i, chain):
        raise NotACycleError("element is not a cycle")
    if not z:
        return True, {}
    basis = echelon_basis(field, track=True)
    for src, vec in _d_columns(cx, field, i - 1):
        if vec:
            basis.add(vec, tag=src)
    residual, combo = basis.reduce(z)
    if residual:
        return False, None
    return True, combo


def filtration_degree(cx: ChainComplex, field: FieldSpec, i: int, chain):
    """Filtered degree of a twisted Lee homology class.

    Fdeg([z]) is the largest j such that some representative z - d(w) lies in
    F_j = span{states of qdeg >= j}.  Returns math.inf for the zero class.
    """
    if cx.theory != "tlee":
        raise TheoryError("filtration degrees live in the twisted Lee theory")
    z = _field_vec(field, chain)
    if not is_cycle(cx, field, i, chain):
        raise NotACycleError("element is not a cycle")
    basis = echelon_basis(field)
    for _, vec in _d_columns(cx, field, i - 1):
        if vec:
            basis.add(vec)
    if basis.contains(z):
        return math.inf
    by_q = {}
    for idx, q in enumerate(cx.qdeg[i]):
        by_q.setdefault(q, []).append(idx)
    for q in sorted(by_q, reverse=True):
        for idx in by_q[q]:
            basis.add({idx: field.one()})
        if basis.contains(z):
            return q
    raise InternalCheckError("cycle not contained in its own chain group")


# ---------------------------------------------------------------------------
# Graded Bar-Natan machinery

class _GradedColumns:
    """Column echelon of a graded monomial matrix over F[U].

    Columns are dicts {row: scalar}; column j has a generator qdeg col_q[j],
    rows have qdegs row_q, and the scalar at (r, j) stands for the monomial
    scalar * U^((row_q[r] - col_q[j]) / 2).  Eliminations always use the
    maximal-qdeg column as pivot, so multipliers stay in F[U].
    """

    def __init__(self, field, row_q, cols, col_q):
        self.field = field
        self.row_q = row_q
        self.cols = [dict(c) for c in cols]
        self.col_q = list(col_q)
        self.combos = [{j: field.one()} for j in range(len(cols))]
        self.pivot_of_col = [None] * len(cols)
        self.pivot_row_to_col = {}
        self._reduce_all()

    def _rows_used(self):
        used = set()
        for c in self.cols:
            used.update(c)
        return sorted(used)

    def _reduce_all(self):
        f = self.field
        for r in self._rows_used():
            active = [
                j
                for j in range(len(self.cols))
                if self.pivot_of_col[j] is None and not f.is_zero(self.cols[j].get(r, f.zero()))
            ]
            if not active:
                continue
            piv = max(active, key=lambda j: (self.col_q[j], -j))
            for j in active:
                if j == piv:
                    continue
                lam = f.div(self.cols[j][r], self.cols[piv][r])
                self._sub_col(j, piv, lam)
            self.pivot_of_col[piv] = r
            self.pivot_row_to_col[r] = piv

    def _sub_col(self, j, p, lam):
        f = self.field
        for r, c in self.cols[p].items():
            v = f.sub(self.cols[j].get(r, f.zero()), f.mul(lam, c))
            if f.is_zero(v):
                self.cols[j].pop(r, None)
            else:
                self.cols[j][r] = v
        for g, c in self.combos[p].items():
            v = f.sub(self.combos[j].get(g, f.zero()), f.mul(lam, c))
            if f.is_zero(v):
                self.combos[j].pop(g, None)
            else:
                self.combos[j][g] = v

    def kernel(self):
        """Kernel basis as (combo over original columns, generator qdeg)."""
        out = []
        for j in range(len(self.cols)):
            if self.pivot_of_col[j] is None and not self.cols[j]:
                out.append((self.combos[j], self.col_q[j]))
        return out

    def image(self):
        """Echelonized image columns as (vec, generator qdeg, pivot row)."""
        out = []
        for j in range(len(self.cols)):
            if self.pivot_of_col[j] is not None:
                out.append((self.cols[j], self.col_q[j], self.pivot_of_col[j]))
        return out


def _reduce_against_echelon(field, echelon, vec, vec_q):
    """Express a graded vector in an echelonized graded basis.

    echelon: list of (column vec, qdeg, pivot row) with distinct pivot rows and
    zeros above each pivot.  Returns {column index: scalar} with the implicit
    powers (q_col - vec_q)/2, or None when the vector is not in the span.
    """
    f = field
    by_pivot = {piv: (t, col, q) for t, (col, q, piv) in enumerate(echelon)}
    rem = dict(vec)
    coords = {}
    while rem:
        r = min(rem)
        if f.is_zero(rem[r]):
            del rem[r]
            continue
        hit = by_pivot.get(r)
        if hit is None:
            return None
        t, col, q = hit
        if (q - vec_q) % 2 or q < vec_q:
            return None
        lam = f.div(rem[r], col[r])
        coords[t] = lam
        for rr, c in col.items():
            v = f.sub(rem.get(rr, f.zero()), f.mul(lam, c))
            if f.is_zero(v):
                rem.pop(rr, None)
            else:
                rem[rr] = v
    return coords


@dataclass(frozen=True)
class ModuleDecomposition:
    """Graded F[U]-module data per homological degree.

    free[i] is a list of generator qdegs; torsion[i] a list of
    (U-power of the annihilator, generator qdeg).
    """

    free: dict
    torsion: dict

    def free_rank(self, i) -> int:
        return len(self.free.get(i, ()))


class _SmithCell:
    """Graded Smith normal form of W with the row transformation tracked."""

    def __init__(self, field, row_q, cols, col_q):
        f = field
        self.field = f
        self.row_q = list(row_q)
        n_rows = len(row_q)
        rows = [{} for _ in range(n_rows)]
        for j, col in enumerate(cols):
            for r, c in col.items():
                rows[r][j] = c
        self.rows = rows
        self.col_q = list(col_q)
        self.p_rows = [{t: f.one()} for t in range(n_rows)]  # tracked transformation
        self.diag = {}  # row index -> (scalar, upow) of its SNF diagonal entry
        self._smith()

    def _entry_pow(self, r, j):
        return (self.row_q[r] - self.col_q[j]) // 2

    def _smith(self):
        f = self.field
        done_rows, done_cols = set(), set()
        while True:
            best = None
            for r, row in enumerate(self.rows):
                if r in done_rows:
                    continue
                for j, c in row.items():
                    if j in done_cols or f.is_zero(c):
                        continue
                    key = (self._entry_pow(r, j), r, j)
                    if best is None or key < best:
                        best = key
            if best is None:
                break
            m, r, j = best
            # clear column j with row operations
            for r2 in range(len(self.rows)):
                if r2 == r or r2 in done_rows:
                    continue
                c2 = self.rows[r2].get(j)
                if c2 is None or f.is_zero(c2):
                    continue
                lam = f.div(c2, self.rows[r][j])
                self._sub_row(r2, r, lam)
            # clear row r with column operations (no tracking needed)
            base = self.rows[r][j]
            for j2 in list(self.rows[r]):
                if j2 == j or f.is_zero(self.rows[r].get(j2, f.zero())):
                    continue
                lam = f.div(self.rows[r][j2], base)
                for rr in range(len(self.rows)):
                    if rr in done_rows or rr == r:
                        continue
                    c = self.rows[rr].get(j)
                    if c is None:
                        continue
                    v = f.sub(self.rows[rr].get(j2, f.zero()), f.mul(lam, c))
                    if f.is_zero(v):
                        self.rows[rr].pop(j2, None)
                    else:
                        self.rows[rr][j2] = v
                del self.rows[r][j2]
            self.diag[r] = (self.rows[r][j], m)
            done_rows.add(r)
            done_cols.add(j)

    def _sub_row(self, t, s, lam):
        f = self.field
        for j, c in self.rows[s].items():
            v = f.sub(self.rows[t].get(j, f.zero()), f.mul(lam, c))
            if f.is_zero(v):
                self.rows[t].pop(j, None)
            else:
                self.rows[t][j] = v
        for g, c in self.p_rows[s].items():
            v = f.sub(self.p_rows[t].get(g, f.zero()), f.mul(lam, c))
            if f.is_zero(v):
                self.p_rows[t].pop(g, None)
            else:
                self.p_rows[t][g] = v

    def transform(self, coords):
        """Apply the tracked row transformation to kernel coordinates."""
        f = self.field
        out = {}
        for t, prow in enumerate(self.p_rows):
            acc = f.zero()
            for g, c in prow.items():
                a = coords.get(g)
                if a is not None:
                    acc = f.add(acc, f.mul(c, a))
            if not f.is_zero(acc):
                out[t] = acc
        return out


class BNHomology:
    """Homology of the Bar-Natan complex in one homological degree.

    Provides the module decomposition and coordinates of cycle classes; all
    arithmetic is exact over field[U] via the graded monomial representation.
    """

    def __init__(self, cx: ChainComplex, fieldspec: FieldSpec, i: int):
        if cx.theory != "bn":
            raise TheoryError("BNHomology requires the Bar-Natan theory")
        self.cx = cx
        self.field = fieldspec
        self.i = i
        f = fieldspec

        row_q_next = cx.qdeg.get(i + 1, [])
        cols, col_q = [], []
        for src in range(cx.dim(i)):
            vec = {}
            for tgt, c, m in cx.diff[i][src]:
                v = f.add(vec.get(tgt, f.zero()), f.elem(c))
                if f.is_zero(v):
                    vec.pop(tgt, None)
                else:
                    vec[tgt] = v
            cols.append(vec)
            col_q.append(cx.qdeg[i][src])
        ech_i = _GradedColumns(f, row_q_next, cols, col_q)
        self.kernel_gens = ech_i.kernel()  # (chain coords over states, qdeg)

        # kernel basis echelonized in state coordinates, for class coords
        kcols = [dict(combo) for combo, _ in self.kernel_gens]
        kq = [q for _, q in self.kernel_gens]
        self._kernel_ech = _GradedColumns(f, cx.qdeg[i], kcols, kq)
        self._kernel_image = self._kernel_ech.image()
        if any(p is None for p in self._kernel_ech.pivot_of_col):
            raise InternalCheckError("kernel basis is not independent")

        prev = i - 1
        img = []
        if prev in cx.diff:
            cols_p, col_q_p = [], []
            for src in range(cx.dim(prev)):
                vec = {}
                for tgt, c, m in cx.diff[prev][src]:
                    v = f.add(vec.get(tgt, f.zero()), f.elem(c))
                    if f.is_zero(v):
                        vec.pop(tgt, None)
                    else:
                        vec[tgt] = v
                cols_p.append(vec)
                col_q_p.append(cx.qdeg[prev][src])
            ech_prev = _GradedColumns(f, cx.qdeg[i], cols_p, col_q_p)
            img = ech_prev.image()

        w_cols, w_col_q = [], []
        for vec, q, _ in img:
            coords = _reduce_against_echelon(f, self._kernel_image, vec, q)
            if coords is None:
                raise InternalCheckError("image vector outside the kernel (d^2 != 0?)")
            w_cols.append(self._to_kernel_gen_coords(coords))
            w_col_q.append(q)
        kgen_q = [q for _, q in self.kernel_gens]
        self._smith = _SmithCell(f, kgen_q, w_cols, w_col_q)
        self.kgen_q = kgen_q

    def _to_kernel_gen_coords(self, ech_coords):
        """Echelon-column coordinates -> original kernel generator coordinates."""
        f = self.field
        out = {}
        for t, lam in ech_coords.items():
            for g, c in self._kernel_ech.combos[t].items():
                v = f.add(out.get(g, f.zero()), f.mul(lam, c))
                if f.is_zero(v):
                    out.pop(g, None)
                else:
                    out[g] = v
        return out

    def decomposition(self):
        free, torsion = [], []
        for t, q in enumerate(self.kgen_q):
            # row qdeg after the tracked transformation is still kgen_q[t]
            d = self._smith.diag.get(t)
            if d is None:
                free.append(q)
            else:
                _, m = d
                if m >= 1:
                    torsion.append((m, q))
        return free, torsion

    def coords_of_cycle(self, chain, qdeg):
        """Coordinates of a homogeneous integer cycle of the given qdeg."""
        f = self.field
        vec = {}
        for idx, poly in chain.items():
            expected = (self.cx.qdeg[self.i][idx] - qdeg) // 2
            for m, a in enumerate(poly):
                if a and m != expected:
                    raise InternalCheckError("cycle is not homogeneous of the stated qdeg")
            if expected < len(poly):
                c = f.elem(poly[expected])
                if not f.is_zero(c):
                    vec[idx] = c
        ech_coords = _reduce_against_echelon(f, self._kernel_image, vec, qdeg)
        if ech_coords is None:
            raise InternalCheckError("cycle does not reduce against the kernel basis")
        coords = self._to_kernel_gen_coords(ech_coords)
        transformed = self._smith.transform(coords)
        free_part, torsion_part = [], []
        for t, lam in transformed.items():
            m = (self.kgen_q[t] - qdeg) // 2
            d = self._smith.diag.get(t)
            if d is None:
                free_part.append((lam, m, t, self.kgen_q[t]))
            else:
                _, ann = d
                if ann >= 1 and m < ann:
                    torsion_part.append((lam, m, ann, t, self.kgen_q[t]))
        return free_part, torsion_part

    def divisibility_from_coords(self, chain, qdeg):
        """Max U-divisibility of the class, read from Smith coordinates."""
        free_part, torsion_part = self.coords_of_cycle(chain, qdeg)
        vals = [m for _, m, _, _ in free_part] + [m for _, m, _, _, _ in torsion_part]
        if not vals:
            raise TrivialClassError("class is trivial; divisibility unbounded")
        return min(vals)


def homology_bn(cx: ChainComplex, fieldspec: FieldSpec) -> ModuleDecomposition:
    """Module decomposition of Bar-Natan homology in every homological degree."""
    free, torsion = {}, {}
    for i in cx.degrees:
        h = BNHomology(cx, fieldspec, i)
        fr, to = h.decomposition()
        if fr:
            free[i] = tuple(sorted(fr, reverse=True))
        if to:
            torsion[i] = tuple(sorted(to))
    return ModuleDecomposition(free=free, torsion=torsion)


# ---------------------------------------------------------------------------
# Divisibility by iterated graded solves (the primary route)

def _bn_slice(cx: ChainComplex, i: int, q: int):
    """Basis (state, upow) of the qdeg-q slice of C^i over the field."""
    out = []
    for idx, sq in enumerate(cx.qdeg.get(i, [])):
        if sq >= q and (sq - q) % 2 == 0:
            out.append((idx, (sq - q) // 2))
    return out


def _bn_d_column(cx, field, i, idx, m, pos_of):
    vec = {}
    for tgt, c, dm in cx.diff[i][idx]:
        p = pos_of.get((tgt, m + dm))
        if p is None:
            raise InternalCheckError("graded differential left the slice")
        v = field.add(vec.get(p, field.zero()), field.elem(c))
        if field.is_zero(v):
            vec.pop(p, None)
        else:
            vec[p] = v
    return vec


def divisibility(cx: ChainComplex, fieldspec: FieldSpec, i: int, chain,
                 want_witness: bool = False):
    """Largest k with [z] = U^k [x] in Bar-Natan homology, by graded solves.

    Solvability of z = U^k x + d(w) is a finite F-linear system in the qdeg
    slices; k is stepped up until the x-slice empties or the solve fails.
    Raises TrivialClassError when [z] = 0.
    """
    if cx.theory != "bn":
        raise TheoryError("divisibility lives in the Bar-Natan theory")
    f = fieldspec
    dz = cx.d_int(i, chain)
    if not chain_is_zero(dz) and not is_cycle(cx, f, i, chain):
        raise NotACycleError("element is not a cycle")
    q0 = cx.qdeg_of(i, chain)
    target = _bn_slice(cx, i, q0)
    pos_of = {sm: p for p, sm in enumerate(target)}
    zvec = {}
    for idx, poly in chain.items():
        for m, a in enumerate(poly):
            if not a:
                continue
            p = pos_of.get((idx, m))
            if p is None:
                raise InternalCheckError("chain is not homogeneous of its own qdeg")
            v = f.add(zvec.get(p, f.zero()), f.elem(a))
            if f.is_zero(v):
                zvec.pop(p, None)
            else:
                zvec[p] = v

    im_cols = []
    if i - 1 in cx.diff:
        for idx, m in _bn_slice(cx, i - 1, q0):
            vec = _bn_d_column(cx, f, i - 1, idx, m, pos_of)
            if vec:
                im_cols.append((("w", idx, m), vec))

    basis0 = echelon_basis(f)
    for _, vec in im_cols:
        basis0.add(vec)
    if basis0.contains(zvec):
        raise TrivialClassError("class is trivial; divisibility unbounded")

    k = 0
    witness = None
    while True:
        xs = _bn_slice(cx, i, q0 + 2 * (k + 1))
        if not xs:
            return (k, witness) if want_witness else k
        basis = echelon_basis(f, track=want_witness)
        for tag, vec in im_cols:
            basis.add(vec, tag=tag) if want_witness else basis.add(vec)
        for idx, m in xs:
            p = pos_of[(idx, m + k + 1)]
            vec = {p: f.one()}
            basis.add(vec, tag=("x", idx, m)) if want_witness else basis.add(vec)
        if want_witness:
            residual, combo = basis.reduce(zvec)
            feasible = not residual
        else:
            feasible = basis.contains(zvec)
            combo = None
        if not feasible:
            return (k, witness) if want_witness else k
        k += 1
        if want_witness:
            witness = {}
            for tag, c in (combo or {}).items():
                if tag[0] == "x":
                    witness[(tag[1], tag[2])] = c
