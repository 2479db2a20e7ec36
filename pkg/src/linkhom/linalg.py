"""Exact sparse linear algebra over prime fields and the rationals.

Vectors are dicts {index: scalar}.  The workhorse is an incrementally built
echelon basis supporting rank, membership, and solves with witness tracking.
F2 gets a bitset fast path (vectors packed into Python ints); rank and
membership over the rationals run fraction-free on integer rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .coeffs import FieldSpec


class EchelonBasis:
    """Reduced basis of a growing subspace over an arbitrary FieldSpec.

    With track=True every stored row remembers its expression in terms of the
    vectors fed to add(), so solves can return witnesses.
    """

    def __init__(self, field: FieldSpec, track: bool = False):
        self.field = field
        self.track = track
        self.rows = {}  # pivot index -> (vector, combo | None)
        self.n_added = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec, combo):
        f = self.field
        vec = dict(vec)
        while vec:
            piv = min(vec)
            if f.is_zero(vec[piv]):
                del vec[piv]
                continue
            hit = self.rows.get(piv)
            if hit is None:
                return vec, combo, piv
            row, row_combo = hit
            coef = f.div(vec[piv], row[piv])
            for j, c in row.items():
                r = f.sub(vec.get(j, f.zero()), f.mul(coef, c))
                if f.is_zero(r):
                    vec.pop(j, None)
                else:
                    vec[j] = r
            if combo is not None:
                for j, c in row_combo.items():
                    r = f.sub(combo.get(j, f.zero()), f.mul(coef, c))
                    if f.is_zero(r):
                        combo.pop(j, None)
                    else:
                        combo[j] = r
        return vec, combo, None

    def add(self, vec, tag=None) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        combo = {self.n_added if tag is None else tag: self.field.one()} if self.track else None
        self.n_added += 1
        vec, combo, piv = self._reduce(vec, combo)
        if piv is None:
            return False
        self.rows[piv] = (vec, combo)
        return True

    def reduce(self, vec):
        """Residual of vec modulo the span; with track, also the combination.

        Returns (residual, combo) where combo satisfies:
            vec = sum combo[tag] * added[tag] + residual.
        """
        res, combo, _ = self._reduce(vec, {} if self.track else None)
        if combo is not None:
            combo = {k: self.field.neg(v) for k, v in combo.items()}
        return res, combo

    def contains(self, vec) -> bool:
        res, _, _ = self._reduce(vec, None)
        return not res


class GF2Basis:
    """Bitset variant of EchelonBasis for characteristic 2."""

    def __init__(self, track: bool = False):
        self.track = track
        self.rows = {}  # pivot bit position -> (mask, combo_mask)
        self.n_added = 0
        self.tags = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    @staticmethod
    def pack(vec) -> int:
        mask = 0
        for j, c in vec.items():
            if c % 2:
                mask |= 1 << j
        return mask

    def _reduce_mask(self, mask, combo):
        while mask:
            piv = mask.bit_length() - 1
            hit = self.rows.get(piv)
            if hit is None:
                return mask, combo, piv
            mask ^= hit[0]
            if combo is not None:
                combo ^= hit[1]
        return mask, combo, None

    def add_mask(self, mask, tag=None) -> bool:
        combo = (1 << self.n_added) if self.track else None
        if self.track:
            self.tags.append(self.n_added if tag is None else tag)
        self.n_added += 1
        mask, combo, piv = self._reduce_mask(mask, combo)
        if piv is None:
            return False
        self.rows[piv] = (mask, combo)
        return True

    def add(self, vec, tag=None) -> bool:
        return self.add_mask(self.pack(vec), tag)

    def reduce_mask(self, mask):
        res, combo, _ = self._reduce_mask(mask, 0 if self.track else None)
        return res, combo

    def reduce(self, vec):
        res, combo = self.reduce_mask(self.pack(vec))
        out_combo = None
        if self.track:
            out_combo = {}
            k = 0
            while combo:
                if combo & 1:
                    out_combo[self.tags[k]] = 1
                combo >>= 1
                k += 1
        residual = {}
        j = 0
        while res:
            if res & 1:
                residual[j] = 1
            res >>= 1
            j += 1
        return residual, out_combo

    def contains_mask(self, mask) -> bool:
        res, _, _ = self._reduce_mask(mask, None)
        return res == 0

    def contains(self, vec) -> bool:
        return self.contains_mask(self.pack(vec))


class IntEchelon:
    """Fraction-free echelon over the rationals: rows stay integer.

    Row spans match the rational spans, so rank and membership agree with the
    Fraction-based basis; residuals come back scaled, which is why this class
    does not offer combination tracking.
    """

    def __init__(self):
        self.rows = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @staticmethod
    def _canon(vec):
        den = 1
        for v in vec.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        out = {}
        for j, v in vec.items():
            n = int(v * den)
            if n:
                out[j] = n
        if not out:
            return out
        g = 0
        for v in out.values():
            g = gcd(g, v)
        if g > 1:
            out = {j: v // g for j, v in out.items()}
        return out

    def _reduce(self, vec):
        vec = self._canon(vec)
        while vec:
            piv = min(vec)
            if not vec[piv]:
                del vec[piv]
                continue
            row = self.rows.get(piv)
            if row is None:
                return vec, piv
            a, b = row[piv], vec[piv]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {}
            for j in vec.keys() | row.keys():
                v = ma * vec.get(j, 0) - mb * row.get(j, 0)
                if v:
                    new[j] = v
            g2 = 0
            for v in new.values():
                g2 = gcd(g2, v)
            if g2 > 1:
                new = {j: v // g2 for j, v in new.items()}
            vec = new
        return vec, None

    def add(self, vec, tag=None) -> bool:
        vec, piv = self._reduce(vec)
        if piv is None:
            return False
        self.rows[piv] = vec
        return True

    def contains(self, vec) -> bool:
        return self._reduce(vec)[1] is None


def echelon_basis(field: FieldSpec, track: bool = False):
    if field.characteristic == 2:
        return GF2Basis(track=track)
    if field.characteristic == 0 and not track:
        return IntEchelon()
    return EchelonBasis(field, track=track)


def solve(field: FieldSpec, columns, b):
    """Solve sum_j x_j col_j = b; returns {j: x_j} or None if infeasible."""
    basis = echelon_basis(field, track=True)
    for tag, col in columns:
        basis.add(col, tag=tag)
    residual, combo = basis.reduce(b)
    if residual:
        return None
    return combo or {}
