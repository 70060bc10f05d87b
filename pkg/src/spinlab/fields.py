"""Exact scalar arithmetic over Q and over GF(p) for odd primes p.

A Field object carries the characteristic and the raw-value operations;
raw values are Fraction in characteristic 0 and plain ints in [0, p)
otherwise.  Scalar is a thin wrapper pairing a raw value with its field so
that arithmetic between scalars of different fields is a loud error rather
than a silent coercion.
"""

from __future__ import annotations

from fractions import Fraction


class InvalidField(ValueError):
    """Requested field does not exist here (char 2, composite modulus, ...)."""


class FieldMismatch(TypeError):
    """Two scalars from different fields met in one operation."""


class DivideByZero(ZeroDivisionError):
    """Division or inversion of the zero scalar."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # Deterministic Miller-Rabin; the base set above is exact for n < 3.3e24.
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Arithmetic context: characteristic 0 (Q) or an odd prime p (GF(p)).

    All methods operate on raw values (Fraction or int).  Fields compare
    equal iff they have the same characteristic, so the Q singleton below
    and any GF(p) constructed twice interoperate.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if p != 0:
            if p == 2:
                raise InvalidField("characteristic 2 is not supported")
            if not _is_prime(p):
                raise InvalidField(f"{p} is not prime")
        self.p = p

    # -- raw-value ops ------------------------------------------------

    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def of_int(self, n: int):
        return Fraction(n) if self.p == 0 else n % self.p

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def inv(self, a):
        if not a:
            raise DivideByZero("inverse of zero")
        return 1 / Fraction(a) if self.p == 0 else pow(a, self.p - 2, self.p)

    def div(self, a, b):
        if not b:
            raise DivideByZero("division by zero")
        if self.p == 0:
            return Fraction(a) / b
        return a * pow(b, self.p - 2, self.p) % self.p

    def is_zero(self, a) -> bool:
        return not a

    # -- serialization ------------------------------------------------

    def to_str(self, a) -> str:
        """Canonical text form: "num/den" in char 0 ("num" when the
        denominator is 1), decimal residue mod p."""
        if self.p == 0:
            f = Fraction(a)
            if f.denominator == 1:
                return str(f.numerator)
            return f"{f.numerator}/{f.denominator}"
        return str(a % self.p)

    def from_str(self, s: str):
        s = s.strip()
        if self.p == 0:
            num, _, den = s.partition("/")
            return Fraction(int(num), int(den) if den else 1)
        v = int(s)
        if not 0 <= v < self.p:
            raise ValueError(f"residue {s} out of range for GF({self.p})")
        return v

    # -- identity -----------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p == 0 else f"GF({self.p})"

    def raw(self, v):
        """Normalize an int, Fraction, or Scalar to a raw value of this field."""
        if isinstance(v, Scalar):
            if v.field != self:
                raise FieldMismatch(f"{v.field} scalar used in {self}")
            return v.value
        if self.p == 0:
            return Fraction(v)
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise DivideByZero(f"denominator of {v} vanishes in {self}")
            return v.numerator * pow(v.denominator, self.p - 2, self.p) % self.p
        return int(v) % self.p

    def scalar(self, v) -> "Scalar":
        """Wrap an int, Fraction, or raw value as a Scalar of this field."""
        return Scalar(self, self.raw(v))


QQ = Field(0)


def GF(p: int) -> Field:
    if p == 0:
        raise InvalidField("characteristic 0 field is QQ, not GF(0)")
    return Field(p)


def make_field(char: int) -> Field:
    """Field of the given characteristic: 0 gives Q, odd prime p gives GF(p)."""
    return QQ if char == 0 else Field(char)


def embed_integer(n: int, f: Field) -> "Scalar":
    """Canonical image of the integer n in f (ring homomorphism Z -> f)."""
    return Scalar(f, f.of_int(n))


def arith(a: "Scalar", b: "Scalar", op: str) -> "Scalar":
    """Apply a named field operation to two scalars of the same field."""
    if not isinstance(a, Scalar) or not isinstance(b, Scalar):
        raise TypeError("arith expects Scalar operands")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


class Scalar:
    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int) or (self.field.p == 0 and isinstance(other, Fraction)):
            return self.field.of_int(other) if isinstance(other, int) else other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.div(self.value, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field.div(v, self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value == self.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.of_int(other) if isinstance(other, int) else self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __bool__(self):
        return not self.field.is_zero(self.value)

    def __repr__(self):
        return f"{self.field.to_str(self.value)}@{self.field!r}"
