"""Exact linear algebra: field-generic Gaussian elimination plus fast
numpy kernels for matrices over GF(p).

The field-generic routines work on lists of raw field values and are used
wherever Fractions are in play.  The *_modp kernels keep everything in
int64 numpy arrays; products are computed through float64 BLAS when the
magnitudes provably fit in the 53-bit mantissa, falling back to chunking
otherwise, so every result is exact.
"""

from __future__ import annotations

import numpy as np

from .fields import Field

# ---------------------------------------------------------------------------
# field-generic routines (raw values, lists of lists)


def rref_field(mat, field: Field):
    """Reduced row echelon form.  Returns (rows, pivot_cols); zero rows dropped."""
    rows = [list(r) for r in mat]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if not field.is_zero(rows[i][c])), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank_field(mat, field: Field) -> int:
    return len(rref_field(mat, field)[1])


def nullspace_field(mat, field: Field):
    """Basis of the right nullspace, one row per basis vector."""
    rows, pivots = rref_field(mat, field)
    ncols = len(mat[0]) if mat else 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero()] * ncols
        v[f] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(rows[i][f])
        basis.append(v)
    return basis


def inv_field(mat, field: Field):
    """Inverse of a square matrix; raises ValueError if singular."""
    n = len(mat)
    aug = [list(mat[i]) + [field.one() if j == i else field.zero() for j in range(n)] for i in range(n)]
    rows, pivots = rref_field(aug, field)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [r[n:] for r in rows]


def matmul_field(a, b, field: Field):
    bt = list(zip(*b))
    out = []
    for row in a:
        orow = []
        for col in bt:
            s = field.zero()
            for x, y in zip(row, col):
                if not field.is_zero(x) and not field.is_zero(y):
                    s = field.add(s, field.mul(x, y))
            orow.append(s)
        out.append(orow)
    return out


# ---------------------------------------------------------------------------
# GF(p) kernels on int64 arrays; all entries normalized to [0, p)

_MANTISSA = 1 << 53


def matmul_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) % p.  float64 BLAS when k*(p-1)^2 fits the mantissa."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, _MANTISSA // max((p - 1) * (p - 1), 1))
    if k <= step:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return (prod.astype(np.int64)) % p
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        e = min(k, s + step)
        acc = (acc + (a[:, s:e].astype(np.float64) @ b[s:e].astype(np.float64)).astype(np.int64)) % p
    return acc


def rref_modp(a: np.ndarray, p: int):
    """Reduced row echelon form mod p.  Returns (R, pivot_cols); R keeps its
    original row count, zero rows at the bottom."""
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        coefs = a[:, c].copy()
        coefs[r] = 0
        hot = np.nonzero(coefs)[0]
        if hot.size:
            a[hot] = (a[hot] - coefs[hot, None] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_modp(a: np.ndarray, p: int) -> int:
    return len(rref_modp(a, p)[1])


def nullspace_modp(a: np.ndarray, p: int) -> np.ndarray:
    """Right-nullspace basis as rows of an (dim, ncols) int64 array."""
    r, pivots = rref_modp(a, p)
    n = a.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = (-r[j, f]) % p
    return basis


def inv_modp(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    aug = np.hstack([a % p, np.eye(n, dtype=np.int64)])
    r, pivots = rref_modp(aug, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod %d" % p)
    return r[:n, n:]


class RowSpaceModP:
    """Incrementally built row space over GF(p), kept in reduced echelon form.

    insert() takes a whole batch of rows at once: the batch is reduced
    against the current basis with one BLAS-backed multiply, the remainder
    is row-reduced, and the new pivots are eliminated from the old basis.
    """

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self.basis = np.zeros((0, width), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def _reduce(self, rows: np.ndarray) -> np.ndarray:
        if self.basis.shape[0] == 0:
            return rows % self.p
        coef = rows[:, self.pivots] % self.p
        return (rows - matmul_modp(coef, self.basis, self.p)) % self.p

    def insert(self, rows) -> int:
        """Add rows to the span; returns how many were independent."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.width)
        if rows.shape[0] == 0:
            return 0
        red = self._reduce(rows)
        r, new_pivots = rref_modp(red, self.p)
        if not new_pivots:
            return 0
        r = r[: len(new_pivots)]
        if self.basis.shape[0]:
            coef = self.basis[:, new_pivots]
            if coef.any():
                self.basis = (self.basis - matmul_modp(coef, r, self.p)) % self.p
        merged = np.vstack([self.basis, r])
        allp = self.pivots + new_pivots
        order = np.argsort(allp, kind="stable")
        self.basis = merged[order]
        self.pivots = [allp[i] for i in order]
        return len(new_pivots)

    def contains(self, row) -> bool:
        red = self._reduce(np.asarray(row, dtype=np.int64).reshape(1, -1))
        return not red.any()


class RowSpace:
    """Incrementally grown row space over any exact field.

    Over GF(p) this wraps RowSpaceModP (numpy); over Q it keeps a small
    reduced echelon basis of Fraction rows.  insert() returns how many
    of the offered rows were independent.
    """

    def __init__(self, field: Field, width: int):
        self.field = field
        self.width = width
        if field.p:
            self._modp = RowSpaceModP(field.p, width)
        else:
            self._rows = []          # echelon rows (raw values)
            self._pivots = []

    @property
    def dim(self) -> int:
        return self._modp.dim if self.field.p else len(self._rows)

    def insert(self, rows) -> int:
        if self.field.p:
            arr = np.array([[int(x) % self.field.p for x in r] for r in rows],
                           dtype=np.int64)
            if arr.size == 0:
                return 0
            return self._modp.insert(arr)
        added = 0
        for row in rows:
            if self._insert_one([self.field.raw(x) for x in row]):
                added += 1
        return added

    def _insert_one(self, row) -> bool:
        f = self.field
        for pc, er in zip(self._pivots, self._rows):
            if not f.is_zero(row[pc]):
                c = row[pc]
                row = [f.sub(x, f.mul(c, y)) for x, y in zip(row, er)]
        lead = next((i for i, x in enumerate(row) if not f.is_zero(x)), None)
        if lead is None:
            return False
        inv = f.inv(row[lead])
        row = [f.mul(inv, x) for x in row]
        for i, (pc, er) in enumerate(zip(self._pivots, self._rows)):
            if not f.is_zero(er[lead]):
                c = er[lead]
                self._rows[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(er, row)]
        at = next((i for i, pc in enumerate(self._pivots) if pc > lead), len(self._pivots))
        self._pivots.insert(at, lead)
        self._rows.insert(at, row)
        return True

    def contains(self, row) -> bool:
        if self.field.p:
            return self._modp.contains(
                np.array([int(x) % self.field.p for x in row], dtype=np.int64))
        f = self.field
        row = [f.raw(x) for x in row]
        for pc, er in zip(self._pivots, self._rows):
            if not f.is_zero(row[pc]):
                c = row[pc]
                row = [f.sub(x, f.mul(c, y)) for x, y in zip(row, er)]
        return all(f.is_zero(x) for x in row)

    def basis(self) -> list:
        """Reduced echelon basis rows as raw field values."""
        if not self.field.p:
            return [list(r) for r in self._rows]
        f = self.field
        return [[f.of_int(int(x)) for x in row] for row in self._modp.basis]


class SpanSolver:
    """Spanning list with coordinate recovery.

    Built from an ordered list of (possibly dependent) rows; coords(v)
    returns coefficients c with sum(c[i]*rows[i]) == v, or None when v
    lies outside the span.  Dependent rows simply get zero coefficients.
    """

    __slots__ = ("field", "nrows", "width", "_red", "_tr", "_pivots")

    def __init__(self, field: Field, rows):
        f = field
        rows = [[f.raw(x) for x in r] for r in rows]
        self.field = f
        self.nrows = len(rows)
        self.width = len(rows[0]) if rows else 0
        one, zero = f.one(), f.zero()
        aug = [r + [one if j == i else zero for j in range(self.nrows)]
               for i, r in enumerate(rows)]
        red, pivots = rref_field(aug, f)
        self._red, self._tr, self._pivots = [], [], []
        for row, p in zip(red, pivots):
            if p < self.width:       # pivot in the span part, not a relation
                self._red.append(row[:self.width])
                self._tr.append(row[self.width:])
                self._pivots.append(p)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def coords(self, vec):
        f = self.field
        v = [f.raw(x) for x in vec]
        out = [f.zero()] * self.nrows
        for red, tr, p in zip(self._red, self._tr, self._pivots):
            c = v[p]
            if f.is_zero(c):
                continue
            v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, red)]
            out = [f.add(o, f.mul(c, t)) for o, t in zip(out, tr)]
        if any(not f.is_zero(x) for x in v):
            return None
        return out
