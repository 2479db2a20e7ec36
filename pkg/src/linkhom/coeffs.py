"""Exact coefficient arithmetic and the three Frobenius algebra tables.

Everything downstream works over a prime field or the rationals, possibly
extended by a formal variable U of quantum degree -2.  Elements of an algebra
are written in the basis (1, X); the three theories differ only in their
structure constants:

    kh    X^2 = 0        Delta(1) = X(x)1 + 1(x)X
    tlee  X^2 = X        Delta(1) = X(x)1 + 1(x)X - 1(x)1
    bn    X^2 = U X      Delta(1) = X(x)1 + 1(x)X - U 1(x)1

with Delta(X) = X(x)X, eps(1) = 0, eps(X) = 1 in all three.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalCheckError, RingMismatchError, TheoryError

# Basis labels used everywhere: 0 is the unit "1", 1 is "X".
ONE = 0
X = 1

# Quantum degrees: deg(1) = 0, deg(X) = -2, deg(U) = -2.
LABEL_DEG = {ONE: 0, X: -2}
U_DEG = -2

THEORIES = ("kh", "tlee", "bn")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field: characteristic 0 means the rationals."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {self.characteristic}")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else f"prime field F_{self.characteristic}"

    def elem(self, n):
        """Coerce an integer (or Fraction over Q) into the field."""
        p = self.characteristic
        if p == 0:
            return n if isinstance(n, Fraction) else Fraction(n)
        return n % p

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def add(self, a, b):
        p = self.characteristic
        return a + b if p == 0 else (a + b) % p

    def sub(self, a, b):
        p = self.characteristic
        return a - b if p == 0 else (a - b) % p

    def mul(self, a, b):
        p = self.characteristic
        return a * b if p == 0 else (a * b) % p

    def neg(self, a):
        p = self.characteristic
        return -a if p == 0 else (-a) % p

    def inv(self, a):
        p = self.characteristic
        if p == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1) / a
        return pow(a, p - 2, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0 if self.characteristic == 0 else a % self.characteristic == 0

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"


RATIONALS = FieldSpec(0)
GF2 = FieldSpec(2)
GF3 = FieldSpec(3)


class PolyU:
    """Univariate polynomial in U over a FieldSpec, canonical (no trailing zeros)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        self.field = field
        cs = [field.elem(c) for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def u_power(cls, field, m, c=1):
        return cls(field, (0,) * m + (c,))

    @property
    def degree(self) -> int:
        """Degree in U; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def qdeg(self):
        """Minimum quantum degree among monomials (U has degree -2)."""
        if not self.coeffs:
            raise ValueError("qdeg of zero polynomial")
        return U_DEG * self.degree

    def _check(self, other):
        if self.field != other.field:
            raise RingMismatchError("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        f = self.field
        cs = [
            f.add(
                self.coeffs[i] if i < len(self.coeffs) else f.zero(),
                other.coeffs[i] if i < len(other.coeffs) else f.zero(),
            )
            for i in range(n)
        ]
        return PolyU(f, cs)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PolyU(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        if self.is_zero() or other.is_zero():
            return PolyU(self.field)
        f = self.field
        out = [f.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return PolyU(f, out)

    def scale(self, c):
        c = self.field.elem(c)
        return PolyU(self.field, [self.field.mul(c, a) for a in self.coeffs])

    def divmod(self, other):
        """Euclidean division; other must be nonzero."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        q = [f.zero()] * max(0, len(rem) - len(other.coeffs) + 1)
        lead = f.inv(other.coeffs[-1])
        while len(rem) >= len(other.coeffs):
            c = f.mul(rem[-1], lead)
            k = len(rem) - len(other.coeffs)
            q[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] = f.sub(rem[k + i], f.mul(c, b))
            while rem and f.is_zero(rem[-1]):
                rem.pop()
            if not rem:
                break
        return PolyU(f, q), PolyU(f, rem)

    def evaluate(self, u_value):
        """Evaluate at a field element (used by the U -> 0 / U -> 1 quotients)."""
        f = self.field
        acc = f.zero()
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, f.elem(u_value)), c)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, PolyU)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.field.is_zero(c):
                continue
            parts.append(f"{c}" if i == 0 else (f"{c}*U^{i}" if i > 1 else f"{c}*U"))
        return " + ".join(parts)


# Structure constants over Z[U].  An integer tuple (c0, c1, ...) stands for
# c0 + c1*U + ... ; multiplication maps a basis pair to {label: poly}, and
# comultiplication maps a label to {(label, label): poly}.
_MULT = {
    "kh": {
        (ONE, ONE): {ONE: (1,)},
        (ONE, X): {X: (1,)},
        (X, ONE): {X: (1,)},
        (X, X): {},
    },
    "tlee": {
        (ONE, ONE): {ONE: (1,)},
        (ONE, X): {X: (1,)},
        (X, ONE): {X: (1,)},
        (X, X): {X: (1,)},
    },
    "bn": {
        (ONE, ONE): {ONE: (1,)},
        (ONE, X): {X: (1,)},
        (X, ONE): {X: (1,)},
        (X, X): {X: (0, 1)},
    },
}

_COMULT = {
    "kh": {
        ONE: {(X, ONE): (1,), (ONE, X): (1,)},
        X: {(X, X): (1,)},
    },
    "tlee": {
        ONE: {(X, ONE): (1,), (ONE, X): (1,), (ONE, ONE): (-1,)},
        X: {(X, X): (1,)},
    },
    "bn": {
        ONE: {(X, ONE): (1,), (ONE, X): (1,), (ONE, ONE): (0, -1)},
        X: {(X, X): (1,)},
    },
}

_COUNIT = {ONE: (), X: (1,)}

# Twisted Lee filtration levels of the basis, decreasing convention:
# F_j is spanned by basis elements of filtration level >= j.
TLEE_FILTRATION = {X: -2, ONE: 0}


@dataclass(frozen=True)
class FrobeniusSpec:
    """One of the three Frobenius algebra presentations, with integer tables."""

    theory: str

    def __post_init__(self):
        if self.theory not in THEORIES:
            raise TheoryError(f"unknown theory {self.theory!r}")

    @property
    def needs_u(self) -> bool:
        return self.theory == "bn"

    @property
    def mult(self):
        return _MULT[self.theory]

    @property
    def comult(self):
        return _COMULT[self.theory]

    @property
    def counit(self):
        return _COUNIT

    def basis_degree(self, label: int) -> int:
        return LABEL_DEG[label]


KH = FrobeniusSpec("kh")
TLEE = FrobeniusSpec("tlee")
BN = FrobeniusSpec("bn")


def _as_element(field, raw):
    """Normalize {label: int | tuple | PolyU} to {label: PolyU}, dropping zeros."""
    out = {}
    for label, c in raw.items():
        if isinstance(c, PolyU):
            if c.field != field:
                raise RingMismatchError("element coefficients over a different field")
            p = c
        elif isinstance(c, tuple):
            p = PolyU(field, c)
        else:
            p = PolyU.const(field, c)
        if not p.is_zero():
            out[label] = p
    return out


def _check_u(spec, elem):
    if not spec.needs_u:
        for p in elem.values():
            if p.degree > 0:
                raise RingMismatchError(f"theory {spec.theory} has no U in its ground ring")


def fa_multiply(spec: FrobeniusSpec, a, b, field: FieldSpec = RATIONALS):
    """Product of two algebra elements, reduced to the (1, X) basis."""
    ea, eb = _as_element(field, a), _as_element(field, b)
    _check_u(spec, ea), _check_u(spec, eb)
    out = {}
    for la, pa in ea.items():
        for lb, pb in eb.items():
            for lo, struct in spec.mult[(la, lb)].items():
                term = pa * pb * PolyU(field, struct)
                out[lo] = out.get(lo, PolyU(field)) + term
    return {k: v for k, v in out.items() if not v.is_zero()}


def fa_comultiply(spec: FrobeniusSpec, a, field: FieldSpec = RATIONALS):
    """Coproduct as a dict {(label, label): PolyU}."""
    ea = _as_element(field, a)
    _check_u(spec, ea)
    out = {}
    for la, pa in ea.items():
        for pair, struct in spec.comult[la].items():
            term = pa * PolyU(field, struct)
            out[pair] = out.get(pair, PolyU(field)) + term
    return {k: v for k, v in out.items() if not v.is_zero()}


def fa_counit(spec: FrobeniusSpec, a, field: FieldSpec = RATIONALS):
    ea = _as_element(field, a)
    _check_u(spec, ea)
    acc = PolyU(field)
    for la, pa in ea.items():
        acc = acc + pa * PolyU(field, spec.counit[la])
    return acc


def specialize(elem, target: int, field: FieldSpec = RATIONALS):
    """Evaluate U -> 0 (Khovanov quotient) or U -> 1 (twisted Lee quotient).

    Input is an element over field[U]; output coefficients are field scalars.
    """
    if target not in (0, 1):
        raise ValueError("target must be 0 or 1")
    e = _as_element(field, elem)
    out = {}
    for label, p in e.items():
        v = p.evaluate(target)
        if not field.is_zero(v):
            out[label] = v
    return out


def conjugate_labels(spec: FrobeniusSpec, field: FieldSpec = RATIONALS):
    """The pair (x_circ, x_dot) = (X, X - U) with its verified multiplication facts.

    Returns (x_circ, x_dot, facts) where facts is a dict of identity names to
    booleans, each established by exhaustive table arithmetic.  Raises unless
    the theory is the Bar-Natan deformation, where the pair lives.
    """
    if spec.theory != "bn":
        raise TheoryError("conjugate labels are specific to the Bar-Natan theory")
    x_circ = {X: PolyU.const(field, 1)}
    x_dot = {X: PolyU.const(field, 1), ONE: PolyU(field, (0, -1))}
    u = PolyU(field, (0, 1))

    def eq(e1, e2):
        keys = set(e1) | set(e2)
        return all((e1.get(k, PolyU(field)) - e2.get(k, PolyU(field))).is_zero() for k in keys)

    def scale(e, p):
        return {k: v * p for k, v in e.items()}

    facts = {
        "x_circ * x_dot = 0": fa_multiply(spec, x_circ, x_dot, field) == {},
        "x_circ^2 = U x_circ": eq(fa_multiply(spec, x_circ, x_circ, field), scale(x_circ, u)),
        "x_dot^2 = -U x_dot": eq(fa_multiply(spec, x_dot, x_dot, field), scale(x_dot, -u)),
        "Delta(x_circ) = x_circ (x) x_circ": eq(
            fa_comultiply(spec, x_circ, field), _tensor(x_circ, x_circ, field)
        ),
        "Delta(x_dot) = x_dot (x) x_dot": eq(
            fa_comultiply(spec, x_dot, field), _tensor(x_dot, x_dot, field)
        ),
    }
    if not all(facts.values()):
        raise InternalCheckError(f"conjugate label facts failed: {facts}")
    return x_circ, x_dot, facts


def _tensor(e1, e2, field):
    out = {}
    for l1, p1 in e1.items():
        for l2, p2 in e2.items():
            out[(l1, l2)] = out.get((l1, l2), PolyU(field)) + p1 * p2
    return {k: v for k, v in out.items() if not v.is_zero()}


def verify_frobenius_axioms(spec: FrobeniusSpec, field: FieldSpec = RATIONALS) -> None:
    """Exhaustively check the Frobenius axioms on basis elements.

    Raises InternalCheckError on any failure.  Cheap: the basis has two
    elements, so this runs once at import time for each theory.
    """
    basis = [{ONE: PolyU.const(field, 1)}, {X: PolyU.const(field, 1)}]

    def elem_eq(e1, e2):
        keys = set(e1) | set(e2)
        return all((e1.get(k, PolyU(field)) - e2.get(k, PolyU(field))).is_zero() for k in keys)

    def t3_eq(t1, t2):
        keys = set(t1) | set(t2)
        return all((t1.get(k, PolyU(field)) - t2.get(k, PolyU(field))).is_zero() for k in keys)

    one = {ONE: PolyU.const(field, 1)}
    for a in basis:
        # unit
        if not elem_eq(fa_multiply(spec, one, a, field), a):
            raise InternalCheckError("unit axiom failed")
        # co-commutativity
        d = fa_comultiply(spec, a, field)
        flipped = {(l2, l1): p for (l1, l2), p in d.items()}
        if not t3_eq(d, flipped):
            raise InternalCheckError("co-commutativity failed")
        # co-associativity: (Delta (x) id) Delta = (id (x) Delta) Delta
        left, right = {}, {}
        for (l1, l2), p in d.items():
            for (m1, m2), q in fa_comultiply(spec, {l1: PolyU.const(field, 1)}, field).items():
                key = (m1, m2, l2)
                left[key] = left.get(key, PolyU(field)) + p * q
            for (m1, m2), q in fa_comultiply(spec, {l2: PolyU.const(field, 1)}, field).items():
                key = (l1, m1, m2)
                right[key] = right.get(key, PolyU(field)) + p * q
        keys = set(left) | set(right)
        if not all((left.get(k, PolyU(field)) - right.get(k, PolyU(field))).is_zero() for k in keys):
            raise InternalCheckError("co-associativity failed")
        # counit: (eps (x) id) Delta = id
        per_label = {}
        for (l1, l2), p in d.items():
            per_label[l2] = per_label.get(l2, PolyU(field)) + p * PolyU(field, spec.counit[l1])
        per_label = {k: v for k, v in per_label.items() if not v.is_zero()}
        if not elem_eq(per_label, a):
            raise InternalCheckError("counit axiom failed")
    # Delta is a module map: Delta(ab) = a . Delta(b)
    for a in basis:
        for b in basis:
            lhs = fa_comultiply(spec, fa_multiply(spec, a, b, field), field)
            rhs = {}
            for (l1, l2), p in fa_comultiply(spec, b, field).items():
                for lo, q in fa_multiply(spec, a, {l1: PolyU.const(field, 1)}, field).items():
                    key = (lo, l2)
                    rhs[key] = rhs.get(key, PolyU(field)) + p * q
            rhs = {k: v for k, v in rhs.items() if not v.is_zero()}
            if not t3_eq(lhs, rhs):
                raise InternalCheckError("Delta is not a module map")


# Verified once at import; the tables are data, so a failure here is a typo.
for _spec in (KH, TLEE, BN):
    verify_frobenius_axioms(_spec)
