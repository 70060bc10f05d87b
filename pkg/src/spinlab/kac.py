"""The tiny Kaplansky superalgebra K, the 10-dimensional Kac Jordan
superalgebra J = k1 (+) K(x)K, its normalized trace and inner
derivations, the Grassmann envelope G(J), and the degree-3
Cayley-Hamilton scan.

K has basis (e | x, y) with e^2 = e, ex = xe = x/2, ey = ye = y/2,
xy = -yx = e, and the supersymmetric form (e|e) = 1/2, (x|y) = 1.
J multiplies through

    (a(x)b)(c(x)d) = (-1)^{bc} (ac (x) bd - (3/4)(a|c)(b|d) 1),

with 1 the unit.  All structure constants are rational with powers of 2
in the denominators, so one integer-free Fraction table serves every
field of odd characteristic through Field.raw.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from .exterior import wedge_sign
from .fields import Field, FieldMismatch, Scalar
from .linalg import RowSpace

K_LABELS = ("e", "x", "y")
K_PARITY = (0, 1, 1)
# K products and the bilinear form, as Fraction coefficient maps
_H = Fraction(1, 2)
K_TABLE = (
    ({0: Fraction(1)}, {1: _H}, {2: _H}),
    ({1: _H}, {}, {0: Fraction(1)}),
    ({2: _H}, {0: Fraction(-1)}, {}),
)
K_FORM = (
    (_H, Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(0), Fraction(1)),
    (Fraction(0), Fraction(-1), Fraction(0)),
)

J_LABELS = ("1",) + tuple(f"{a}(x){b}" for a in K_LABELS for b in K_LABELS)
J_PARITY = (0,) + tuple((K_PARITY[i] + K_PARITY[j]) % 2
                        for i in range(3) for j in range(3))
J_DIM = 10
EVEN_INDICES = tuple(i for i, p in enumerate(J_PARITY) if p == 0)
ODD_INDICES = tuple(i for i, p in enumerate(J_PARITY) if p == 1)


def _tensor_index(i: int, j: int) -> int:
    """J-basis index of K_i (x) K_j."""
    return 1 + 3 * i + j


@lru_cache(maxsize=1)
def _j_table():
    """J structure constants over Q: table[i][j] = ((k, Fraction), ...)."""
    tab = [[None] * J_DIM for _ in range(J_DIM)]
    for i in range(J_DIM):
        tab[0][i] = ((i, Fraction(1)),)
        tab[i][0] = ((i, Fraction(1)),)
    for ai, bi, ci, di in itertools.product(range(3), repeat=4):
        row, col = _tensor_index(ai, bi), _tensor_index(ci, di)
        sign = -1 if K_PARITY[bi] and K_PARITY[ci] else 1
        acc = {}
        for k1, c1 in K_TABLE[ai][ci].items():
            for k2, c2 in K_TABLE[bi][di].items():
                t = _tensor_index(k1, k2)
                acc[t] = acc.get(t, Fraction(0)) + sign * c1 * c2
        scal = sign * Fraction(-3, 4) * K_FORM[ai][ci] * K_FORM[bi][di]
        if scal:
            acc[0] = acc.get(0, Fraction(0)) + scal
        tab[row][col] = tuple((k, v) for k, v in sorted(acc.items()) if v)
    return tuple(tuple(r) for r in tab)


@lru_cache(maxsize=None)
def _j_field_table(field: Field):
    f = field
    out = []
    for row in _j_table():
        cells = []
        for cell in row:
            ent = tuple((k, f.raw(c)) for k, c in cell if not f.is_zero(f.raw(c)))
            cells.append(ent)
        out.append(tuple(cells))
    return tuple(out)


class KacElement:
    """Element of J in coordinates over (1, e(x)e, e(x)x, ..., y(x)y)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: Field, coords):
        coords = [field.raw(c) for c in coords]
        if len(coords) != J_DIM:
            raise ValueError(f"need {J_DIM} coordinates")
        self.field = field
        self.coords = coords

    @classmethod
    def zero(cls, field: Field) -> "KacElement":
        return cls(field, [0] * J_DIM)

    @classmethod
    def unit(cls, field: Field) -> "KacElement":
        return cls.basis(field, 0)

    @classmethod
    def basis(cls, field: Field, i: int) -> "KacElement":
        c = [0] * J_DIM
        c[i] = 1
        return cls(field, c)

    @classmethod
    def tensor(cls, field: Field, a, b) -> "KacElement":
        """a (x) b for K coordinate vectors a, b (length 3)."""
        f = field
        c = [f.zero()] * J_DIM
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                c[_tensor_index(i, j)] = f.mul(f.raw(ai), f.raw(bj))
        return cls(field, c)

    def _compat(self, other):
        if not isinstance(other, KacElement):
            raise TypeError("expected a KacElement")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._compat(other)
        f = self.field
        return KacElement(f, [f.add(a, b) for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._compat(other)
        f = self.field
        return KacElement(f, [f.sub(a, b) for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return KacElement(self.field, [self.field.neg(a) for a in self.coords])

    def scale(self, c) -> "KacElement":
        f = self.field
        c = f.raw(c)
        return KacElement(f, [f.mul(c, a) for a in self.coords])

    def __mul__(self, other):
        if not isinstance(other, KacElement):
            return NotImplemented
        self._compat(other)
        f = self.field
        tab = _j_field_table(f)
        out = [f.zero()] * J_DIM
        for i, a in enumerate(self.coords):
            if f.is_zero(a):
                continue
            row = tab[i]
            for j, b in enumerate(other.coords):
                if f.is_zero(b):
                    continue
                c = f.mul(a, b)
                for k, v in row[j]:
                    out[k] = f.add(out[k], f.mul(c, v))
        return KacElement(f, out)

    def __eq__(self, other):
        if not isinstance(other, KacElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        raise TypeError("KacElement is unhashable")

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coords)

    def parity(self):
        """0, 1, or None for mixed/zero elements."""
        seen = {J_PARITY[i] for i, c in enumerate(self.coords)
                if not self.field.is_zero(c)}
        return seen.pop() if len(seen) == 1 else None

    def trace(self) -> Scalar:
        """The normalized trace: t(1) = 1, t(K(x)K) = 0."""
        return Scalar(self.field, self.coords[0])

    def star(self, other) -> "KacElement":
        """x * y = xy - t(xy) 1 (projection of the product onto J0)."""
        prod = self * other
        out = list(prod.coords)
        out[0] = self.field.zero()
        return KacElement(self.field, out)

    def __repr__(self):
        f = self.field
        parts = [f"{f.to_str(c)}*{J_LABELS[i]}"
                 for i, c in enumerate(self.coords) if not f.is_zero(c)]
        return " + ".join(parts) if parts else "0"


def kac_product(p: KacElement, q: KacElement) -> KacElement:
    return p * q


def normalized_trace(p: KacElement) -> Scalar:
    return p.trace()


def idempotent_f(field: Field) -> KacElement:
    """f = -(1/2) 1 + 2 e(x)e; satisfies f*f = f with t(f) = -1/2."""
    c = [0] * J_DIM
    c[0] = Fraction(-1, 2)
    c[_tensor_index(0, 0)] = 2
    return KacElement(field, c)


def left_mult_matrix(p: KacElement) -> list:
    """Matrix of q -> p q on the J basis (rows = outputs)."""
    f = p.field
    tab = _j_field_table(f)
    rows = [[f.zero()] * J_DIM for _ in range(J_DIM)]
    for i, a in enumerate(p.coords):
        if f.is_zero(a):
            continue
        for j in range(J_DIM):
            for k, v in tab[i][j]:
                rows[k][j] = f.add(rows[k][j], f.mul(a, v))
    return rows


def inner_derivation_J(p: KacElement, q: KacElement) -> list:
    """[L_p, L_q] as a 9x9 matrix on K(x)K (rows = outputs).

    p and q must be parity-homogeneous (the Koszul sign needs it); the
    super-commutator annihilates 1 and preserves K(x)K, which is
    asserted before the first row and column are dropped.
    """
    f = p.field
    pp, pq = p.parity(), q.parity()
    if pp is None or pq is None:
        raise ValueError("inner derivations need parity-homogeneous arguments")
    LP, LQ = left_mult_matrix(p), left_mult_matrix(q)
    sign = -1 if pp and pq else 1
    full = [[f.zero()] * J_DIM for _ in range(J_DIM)]
    for i in range(J_DIM):
        for j in range(J_DIM):
            acc = f.zero()
            for k in range(J_DIM):
                acc = f.add(acc, f.mul(LP[i][k], LQ[k][j]))
                term = f.mul(LQ[i][k], LP[k][j])
                acc = f.sub(acc, term) if sign > 0 else f.add(acc, term)
            full[i][j] = acc
    assert all(f.is_zero(full[i][0]) for i in range(J_DIM))
    assert all(f.is_zero(full[0][j]) for j in range(J_DIM))
    return [row[1:] for row in full[1:]]


def inder_j_span(field: Field):
    """(even basis, odd basis) of inder J = span [L_J0, L_J0], as 9x9
    matrices; dimensions come out (6, 4)."""
    f = field
    spans = {0: RowSpace(f, 81), 1: RowSpace(f, 81)}
    mats = {0: [], 1: []}
    for i in range(1, J_DIM):
        for j in range(i, J_DIM):
            par = (J_PARITY[i] + J_PARITY[j]) % 2
            m = inner_derivation_J(KacElement.basis(f, i), KacElement.basis(f, j))
            flat = [x for row in m for x in row]
            if spans[par].insert([flat]):
                mats[par].append(m)
    return mats[0], mats[1]


# ---------------------------------------------------------------------------
# Grassmann envelope


class EnvelopeElement:
    """Even element of the Grassmann envelope G(J) on m generators.

    terms maps (grassmann mask, J basis index) -> raw coefficient, with
    the monomial degree matching the J parity mod 2, so the element is
    even overall and G(J) is an honest commutative Jordan algebra.
    """

    __slots__ = ("m", "field", "terms")

    def __init__(self, m: int, field: Field, terms):
        clean = {}
        for (g, j), c in dict(terms).items():
            if not 0 <= g < (1 << m):
                raise ValueError(f"monomial mask {g} out of range")
            if g.bit_count() & 1 != J_PARITY[j]:
                raise ValueError(
                    f"parity mismatch: mask {g:b} with generator {J_LABELS[j]}")
            c = field.raw(c)
            if not field.is_zero(c):
                clean[(g, j)] = c
        self.m = m
        self.field = field
        self.terms = clean

    @classmethod
    def zero(cls, m: int, field: Field) -> "EnvelopeElement":
        return cls(m, field, {})

    @classmethod
    def unit(cls, m: int, field: Field) -> "EnvelopeElement":
        return cls(m, field, {(0, 0): field.one()})

    def _compat(self, other):
        if self.m != other.m:
            raise ValueError("generator counts differ")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._compat(other)
        f = self.field
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = f.add(out.get(key, f.zero()), c)
            if f.is_zero(v):
                out.pop(key, None)
            else:
                out[key] = v
        return EnvelopeElement(self.m, f, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "EnvelopeElement":
        f = self.field
        c = f.raw(c)
        return EnvelopeElement(self.m, f,
                               {k: f.mul(c, v) for k, v in self.terms.items()})

    def lam_scale(self, lam: dict) -> "EnvelopeElement":
        """Multiply by an even Grassmann scalar {mask: raw}."""
        f = self.field
        out = {}
        for gm, c in lam.items():
            if gm.bit_count() & 1:
                raise ValueError("Grassmann scalar must be even")
            for (g, j), v in self.terms.items():
                s = wedge_sign(gm, g)
                if not s:
                    continue
                w = f.mul(c, v)
                w = w if s > 0 else f.neg(w)
                key = (gm | g, j)
                t = f.add(out.get(key, f.zero()), w)
                if f.is_zero(t):
                    out.pop(key, None)
                else:
                    out[key] = t
        return EnvelopeElement(self.m, f, out)

    def __mul__(self, other):
        if not isinstance(other, EnvelopeElement):
            return NotImplemented
        self._compat(other)
        return _envelope_product(self, other, _j_field_table(self.field))

    def lambda_trace(self) -> dict:
        """The normalized trace extended Lambda-linearly: {mask: raw}."""
        f = self.field
        out = {}
        for (g, j), c in self.terms.items():
            if j == 0:
                v = f.add(out.get(g, f.zero()), c)
                if f.is_zero(v):
                    out.pop(g, None)
                else:
                    out[g] = v
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, EnvelopeElement):
            return NotImplemented
        return (self.m, self.field, self.terms) == (other.m, other.field, other.terms)

    def __hash__(self):
        raise TypeError("EnvelopeElement is unhashable")

    def support(self) -> list:
        """Sorted [(mask, j, coeff string), ...] for reports."""
        f = self.field
        return [[g, j, f.to_str(c)] for (g, j), c in sorted(self.terms.items())]

    def __repr__(self):
        f = self.field
        bits = []
        for (g, j), c in sorted(self.terms.items()):
            mono = "".join(f"q{i+1}" for i in range(self.m) if g >> i & 1) or "1"
            bits.append(f"{f.to_str(c)}*{mono}*{J_LABELS[j]}")
        return " + ".join(bits) if bits else "0"


def _envelope_product(a: EnvelopeElement, b: EnvelopeElement, tab):
    f = a.field
    out = {}
    for (ga, ja), ca in a.terms.items():
        pj = J_PARITY[ja]
        for (gb, jb), cb in b.terms.items():
            ws = wedge_sign(ga, gb)
            if not ws:
                continue
            if pj and gb.bit_count() & 1:
                ws = -ws
            c = f.mul(ca, cb)
            c = c if ws > 0 else f.neg(c)
            g = ga | gb
            for k, v in tab[ja][jb]:
                key = (g, k)
                t = f.add(out.get(key, f.zero()), f.mul(c, v))
                if f.is_zero(t):
                    out.pop(key, None)
                else:
                    out[key] = t
    return EnvelopeElement(a.m, f, out)


def _lam_mul(f: Field, u: dict, v: dict) -> dict:
    out = {}
    for ga, ca in u.items():
        for gb, cb in v.items():
            s = wedge_sign(ga, gb)
            if not s:
                continue
            c = f.mul(ca, cb)
            c = c if s > 0 else f.neg(c)
            g = ga | gb
            t = f.add(out.get(g, f.zero()), c)
            if f.is_zero(t):
                out.pop(g, None)
            else:
                out[g] = t
    return out


def ch3(x: EnvelopeElement) -> EnvelopeElement:
    """The degree-3 Cayley-Hamilton value

        x^3 - 3 t(x) x^2 + ((9/2) t(x)^2 - (3/2) t(x^2)) x
            - (t(x^3) - (9/2) t(x^2) t(x) + (9/2) t(x)^3) 1,

    with t extended Lambda-linearly; identically zero on G(J) exactly in
    characteristic 5.
    """
    f = x.field
    x2 = x * x
    x3 = x2 * x
    t1 = x.lambda_trace()
    t2 = x2.lambda_trace()
    t3 = x3.lambda_trace()
    nine_half = f.raw(Fraction(9, 2))
    three_half = f.raw(Fraction(3, 2))
    t1t1 = _lam_mul(f, t1, t1)
    t1t1t1 = _lam_mul(f, t1t1, t1)
    t2t1 = _lam_mul(f, t2, t1)

    def lam_comb(*pairs):
        acc = {}
        for coeff, lam in pairs:
            for g, c in lam.items():
                v = f.add(acc.get(g, f.zero()), f.mul(coeff, c))
                if f.is_zero(v):
                    acc.pop(g, None)
                else:
                    acc[g] = v
        return acc

    out = x3
    out = out + x2.lam_scale(lam_comb((f.of_int(-3), t1)))
    out = out + x.lam_scale(lam_comb((nine_half, t1t1), (f.neg(three_half), t2)))
    const = lam_comb((f.neg(f.one()), t3), (nine_half, t2t1),
                     (f.neg(nine_half), t1t1t1))
    out = out + EnvelopeElement.unit(x.m, f).lam_scale(const)
    return out


# ---------------------------------------------------------------------------
# scans


def _even_addition_masks(m: int) -> list:
    """None (no addition), the empty monomial, then all degree-2 monomials."""
    out = [None, 0]
    for i in range(m):
        for j in range(i + 1, m):
            out.append(1 << i | 1 << j)
    return out


def ch3_scan(field: Field, m: int, strategy: str = "elementary",
             n: int = 200, seed: int = 0) -> dict:
    """Search G(J) for a ch3 violation.

    elementary: x = xi_1 (x) b_1 + ... + xi_4 (x) b_4 + [xi_S (x) f],
    over all assignments of the four odd J generators to b_i and all
    even monomial additions xi_S of degree <= 2 carrying the idempotent
    f.  seeded-random: n draws with coefficients from a deterministic
    generator on every degree <= 2 slot.

    Verdict is "witness" when a nonzero value is found; otherwise "pass"
    in characteristic 5 (where the identity is a theorem) and
    "inconclusive" elsewhere -- an exhausted scan is evidence, not proof,
    that no violation exists.
    """
    if m < 4:
        raise ValueError("need at least 4 Grassmann generators")
    f = field
    checked = 0

    def finish(witness, x=None):
        verdict = ("witness" if witness is not None
                   else "pass" if f.p == 5 else "inconclusive")
        rec = None
        if witness is not None:
            rec = {"x": x.support(), "value": witness.support()}
        return {"verdict": verdict, "witness": rec, "checked": checked,
                "strategy": strategy, "m": m, "field": f.p}

    fe = idempotent_f(f)
    if strategy == "elementary":
        for add in _even_addition_masks(m):
            base = {}
            if add is not None:
                for j, c in enumerate(fe.coords):
                    if not f.is_zero(c):
                        base[(add, j)] = c
            for assign in itertools.product(range(4), repeat=4):
                terms = dict(base)
                for i, pick in enumerate(assign):
                    terms[(1 << i, ODD_INDICES[pick])] = f.one()
                x = EnvelopeElement(m, f, terms)
                v = ch3(x)
                checked += 1
                if not v.is_zero():
                    return finish(v, x)
        return finish(None)
    if strategy == "seeded-random":
        rng = random.Random(seed)
        slots = [(0, j) for j in EVEN_INDICES]
        slots += [(1 << i, j) for i in range(m) for j in ODD_INDICES]
        slots += [(1 << i | 1 << k, j) for i in range(m) for k in range(i + 1, m)
                  for j in EVEN_INDICES]
        for _ in range(n):
            terms = {}
            for key in slots:
                c = rng.randrange(f.p) if f.p else rng.randint(-3, 3)
                if c:
                    terms[key] = f.of_int(c)
            x = EnvelopeElement(m, f, terms)
            v = ch3(x)
            checked += 1
            if not v.is_zero():
                return finish(v, x)
        return finish(None)
    raise ValueError(f"unknown strategy {strategy!r}")


def jordan_envelope_check(field: Field, m: int, samples: int, seed: int,
                          table=None) -> dict:
    """Commutativity and the Jordan identity (x^2 y) x = x^2 (y x) on
    seeded random even envelope elements.  table overrides the J
    structure constants (negative-control hook for tests)."""
    if m < 2:
        raise ValueError("need at least 2 Grassmann generators")
    f = field
    tab = table if table is not None else _j_field_table(f)
    rng = random.Random(seed)
    slots = [(0, j) for j in EVEN_INDICES]
    slots += [(1 << i, j) for i in range(m) for j in ODD_INDICES]
    slots += [(1 << i | 1 << k, j) for i in range(m) for k in range(i + 1, m)
              for j in EVEN_INDICES]

    def draw():
        terms = {}
        for key in slots:
            c = rng.randrange(f.p) if f.p else rng.randint(-2, 2)
            if c:
                terms[key] = f.of_int(c)
        return EnvelopeElement(m, f, terms)

    for trial in range(samples):
        x, y = draw(), draw()
        xy = _envelope_product(x, y, tab)
        yx = _envelope_product(y, x, tab)
        if xy != yx:
            return {"pass": False, "witness": {"trial": trial, "law": "commutativity"}}
        x2 = _envelope_product(x, x, tab)
        lhs = _envelope_product(_envelope_product(x2, y, tab), x, tab)
        rhs = _envelope_product(x2, yx, tab)
        if lhs != rhs:
            return {"pass": False, "witness": {"trial": trial, "law": "jordan"}}
    return {"pass": True, "witness": None, "checked": samples}
