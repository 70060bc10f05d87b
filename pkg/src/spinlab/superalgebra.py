"""Z2-graded algebras with exact structure constants, and the verification
toolkit around them: graded Jacobi scanning, ideal and derived-algebra
computations, an absolute-irreducibility certificate, the solver for
spaces of equivariant bilinear maps, and isomorphism checking.

Bracket conventions.  A SuperAlgebra stores [e_i, e_j] for i <= j only
(plus odd diagonals); the other order is recovered from the symmetry
flag through bracket_terms: swapping two odd arguments costs no sign
when the algebra is odd_symmetric, and every other swap costs one.
The graded Jacobi identity is taken in the form

    J(x,y,z) = [[x,y],z] + eps(x,y) [y,[x,z]] - [x,[y,z]],

with eps(x,y) = -1 exactly when the algebra is odd_symmetric and both
x, y are odd, so that for three odd elements J reduces to the cyclic
sum rho([s1,s2])(s3) + rho([s2,s3])(s1) + rho([s3,s1])(s2).

The full-mode scanner is an operator identity evaluated in batch: with
C the structure tensor as integer data (mod p, or scaled by the lcm of
denominators over Q), all Jacobi values for a fixed first index i come
out of three sparse matrix products, and witnesses are re-evaluated
exactly through the dictionary route before being reported.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

import numpy as np
import scipy.sparse as sparse

from .fields import Field, FieldMismatch, make_field
from .linalg import (RowSpace, matmul_field, matmul_modp, nullspace_field,
                     nullspace_modp, rank_field, rank_modp)

SCHEMA_VERSION = 1


class SuperAlgebra:
    """Z2-graded algebra over an exact field, defined by an ordered basis
    (even part first), per-index parity, and sparse structure constants."""

    __slots__ = ("name", "field", "n0", "n1", "labels", "odd_symmetric",
                 "table", "_coo_cache")

    def __init__(self, name: str, field: Field, n0: int, n1: int, labels,
                 bracket: dict, odd_symmetric: bool, check: bool = True):
        n = n0 + n1
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError(f"need {n} labels, got {len(labels)}")
        self.name = name
        self.field = field
        self.n0 = n0
        self.n1 = n1
        self.labels = labels
        self.odd_symmetric = bool(odd_symmetric)
        self.table = {}
        self._coo_cache = None
        f = field
        for (i, j), terms in bracket.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"basis index out of range in ({i},{j})")
            clean = {}
            for k, v in dict(terms).items():
                v = f.raw(v)
                if not f.is_zero(v):
                    clean[k] = v
            if not clean:
                continue
            if i > j:
                sgn = self._swap_sign(i, j)
                clean = {k: (v if sgn > 0 else f.neg(v)) for k, v in clean.items()}
                i, j = j, i
            prev = self.table.get((i, j))
            if prev is not None and prev != clean:
                raise ValueError(f"inconsistent bracket orders for ({i},{j})")
            self.table[(i, j)] = clean
        if check:
            self._validate()

    # -- basic structure -----------------------------------------------

    @property
    def dim(self) -> int:
        return self.n0 + self.n1

    def parity(self, i: int) -> int:
        return 0 if i < self.n0 else 1

    def _swap_sign(self, i: int, j: int) -> int:
        """Sign s with [e_i, e_j] = s * [e_j, e_i]."""
        if self.odd_symmetric and self.parity(i) and self.parity(j):
            return 1
        return -1

    def bracket_terms(self, i: int, j: int) -> dict:
        """[e_i, e_j] as a zero-free dict k -> raw coefficient."""
        if i <= j:
            return dict(self.table.get((i, j), ()))
        terms = self.table.get((j, i))
        if not terms:
            return {}
        if self._swap_sign(i, j) > 0:
            return dict(terms)
        f = self.field
        return {k: f.neg(v) for k, v in terms.items()}

    def bracket_vectors(self, x, y) -> list:
        """Bracket of two coordinate vectors (raw values), as a raw vector."""
        f = self.field
        n = self.dim
        out = [f.zero()] * n
        nx = [(i, v) for i, v in enumerate(x) if not f.is_zero(v)]
        ny = [(j, v) for j, v in enumerate(y) if not f.is_zero(v)]
        for i, xi in nx:
            for j, yj in ny:
                terms = self.bracket_terms(i, j)
                if not terms:
                    continue
                c = f.mul(xi, yj)
                for k, v in terms.items():
                    out[k] = f.add(out[k], f.mul(c, v))
        return out

    def _validate(self):
        f = self.field
        for (i, j), terms in self.table.items():
            want = self.parity(i) ^ self.parity(j)
            for k in terms:
                if not 0 <= k < self.dim:
                    raise ValueError(f"target index {k} out of range")
                if self.parity(k) != want:
                    raise ValueError(
                        f"bracket ({self.labels[i]},{self.labels[j]}) "
                        f"violates the grading at {self.labels[k]}")
            if i == j and self._swap_sign(i, i) < 0:
                raise ValueError(f"[x,x] must vanish for {self.labels[i]}")

    # -- integer view for the batch scanner ------------------------------

    def _coo(self):
        """(I, J, K, V, scale): both bracket orders as int64 COO data.

        Over GF(p) the values are residues and scale is 1; over Q they
        are the exact numerators after multiplying through by scale (the
        lcm of all denominators).
        """
        if self._coo_cache is not None:
            return self._coo_cache
        f = self.field
        entries = []
        for (i, j), terms in self.table.items():
            for k, v in terms.items():
                entries.append((i, j, k, v))
                if i != j:
                    sgn = self._swap_sign(j, i)
                    entries.append((j, i, k, v if sgn > 0 else f.neg(v)))
        if f.p:
            scale = 1
            vals = [int(v) % f.p for (_, _, _, v) in entries]
        else:
            scale = lcm(*(Fraction(v).denominator for *_ , v in entries)) if entries else 1
            vals = []
            for *_, v in entries:
                sv = Fraction(v) * scale
                assert sv.denominator == 1
                vals.append(int(sv))
        I = np.fromiter((e[0] for e in entries), dtype=np.int64, count=len(entries))
        J = np.fromiter((e[1] for e in entries), dtype=np.int64, count=len(entries))
        K = np.fromiter((e[2] for e in entries), dtype=np.int64, count=len(entries))
        V = np.asarray(vals, dtype=np.int64)
        self._coo_cache = (I, J, K, V, scale)
        return self._coo_cache

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        f = self.field
        brackets = []
        for (i, j) in sorted(self.table):
            terms = self.table[(i, j)]
            brackets.append([i, j, [[k, f.to_str(v)] for k, v in sorted(terms.items())]])
        d = {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "field": f.p,
            "dims": [self.n0, self.n1],
            "odd_symmetric": self.odd_symmetric,
            "labels": list(self.labels),
            "brackets": brackets,
        }
        d["content_hash"] = _canonical_hash(d)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "SuperAlgebra":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
        stored = d.get("content_hash")
        if stored is not None and stored != _canonical_hash(d):
            raise ValueError("content hash mismatch")
        f = make_field(d["field"])
        n0, n1 = d["dims"]
        bracket = {}
        for i, j, terms in d["brackets"]:
            bracket[(i, j)] = {k: f.from_str(s) for k, s in terms}
        return cls(d["name"], f, n0, n1, d["labels"], bracket, d["odd_symmetric"])

    @classmethod
    def from_json(cls, text: str) -> "SuperAlgebra":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return (self.field == other.field
                and (self.n0, self.n1) == (other.n0, other.n1)
                and self.labels == other.labels
                and self.odd_symmetric == other.odd_symmetric
                and self.table == other.table)

    def __hash__(self):
        raise TypeError("SuperAlgebra is unhashable")

    def __repr__(self):
        return (f"SuperAlgebra({self.name!r}, {self.field!r}, "
                f"dims=({self.n0},{self.n1}))")


def _canonical_hash(d: dict) -> str:
    body = {k: v for k, v in d.items() if k != "content_hash"}
    blob = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------------------
# verification reports


@dataclass
class VerificationReport:
    algebra: str
    field: str
    mode: str
    jacobi_pass: bool
    witnesses: list
    dims: tuple
    bracket_symmetry: str
    simplicity: str = "not-attempted"
    notes: str = ""
    elapsed_ms: int = 0

    @property
    def witness_count(self) -> int:
        return len(self.witnesses)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "algebra": self.algebra,
            "field": self.field,
            "mode": self.mode,
            "pass": self.jacobi_pass,
            "witness_count": self.witness_count,
            "witnesses": self.witnesses,
            "dims": list(self.dims),
            "bracket_symmetry": self.bracket_symmetry,
            "simplicity": self.simplicity,
            "notes": self.notes,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# graded Jacobi identity


def j_triple(A: SuperAlgebra, i: int, j: int, k: int) -> dict:
    """J(e_i, e_j, e_k) as a zero-free dict w -> raw, by dictionary
    arithmetic (the exact route, independent of the batch scanner)."""
    f = A.field

    def fold(acc, outer_terms, inner, right):
        for m, c in outer_terms.items():
            terms = A.bracket_terms(inner, m) if right else A.bracket_terms(m, inner)
            for w, v in terms.items():
                s = f.add(acc.get(w, f.zero()), f.mul(c, v))
                if f.is_zero(s):
                    acc.pop(w, None)
                else:
                    acc[w] = s

    acc: dict = {}
    # [[e_i,e_j], e_k]
    fold(acc, A.bracket_terms(i, j), k, right=False)
    # + eps(i,j) [e_j, [e_i,e_k]]
    inner = A.bracket_terms(i, k)
    if A.odd_symmetric and A.parity(i) and A.parity(j):
        inner = {m: f.neg(c) for m, c in inner.items()}
    fold(acc, inner, j, right=True)
    # - [e_i, [e_j,e_k]]
    neg = {m: f.neg(c) for m, c in A.bracket_terms(j, k).items()}
    fold(acc, neg, i, right=True)
    return acc


def _scan_matrices(A: SuperAlgebra):
    n = A.dim
    I, J, K, V, _ = A._coo()
    C2 = sparse.csr_matrix((V, (I * n + J, K)), shape=(n * n, n))
    C1 = sparse.csr_matrix((V, (I, J * n + K)), shape=(n, n * n))
    big = sparse.csr_matrix((V, (I * n + K, J)), shape=(n * n, n))
    return C2, C1, big


def _scan_one_i(A, mats, par, i, odd_only):
    """Basis triples (i, j, z) with J(e_i, e_j, e_z) != 0, sorted."""
    C2, C1, big = mats
    n = A.dim
    p = A.field.p
    ci = C2[i * n:(i + 1) * n]
    if ci.nnz == 0:
        return ()
    g = (ci @ C1).tocoo()            # [j, z*n+w]   = [[i,j],z] terms
    a = (C2 @ ci).tocoo()            # [j*n+z, w]   = [i,[j,z]] terms
    b = (big @ ci.T).tocoo()         # [j*n+w, z]   = [j,[i,z]] terms
    kg = g.row.astype(np.int64) * (n * n) + g.col.astype(np.int64)
    ka = a.row.astype(np.int64) * n + a.col.astype(np.int64)
    kb = ((b.row // n).astype(np.int64) * (n * n)
          + b.col.astype(np.int64) * n + (b.row % n).astype(np.int64))
    vb = b.data.astype(np.float64)
    if A.odd_symmetric and par[i]:
        jj = (b.row // n).astype(np.int64)
        vb = np.where(par[jj] == 1, -vb, vb)
    keys = np.concatenate([kg, ka, kb])
    vals = np.concatenate([g.data.astype(np.float64), -a.data.astype(np.float64), vb])
    uk, inv = np.unique(keys, return_inverse=True)
    acc = np.bincount(inv, weights=vals, minlength=len(uk))
    acc = np.rint(acc).astype(np.int64)
    if p:
        acc %= p
    nz = uk[acc != 0]
    if odd_only and nz.size:
        jj = nz // (n * n)
        zz = (nz // n) % n
        nz = nz[(par[jj] == 1) & (par[zz] == 1)]
    if nz.size == 0:
        return ()
    tz = np.unique(nz // n)          # j*n + z identifiers
    return tuple((i, int(t) // n, int(t) % n) for t in tz)


def _witness_entry(A: SuperAlgebra, triple) -> dict:
    i, j, k = triple
    val = j_triple(A, i, j, k)
    if not val:
        raise AssertionError(f"scanner reported a vanishing witness at {triple}")
    f = A.field
    return {"i": i, "j": j, "k": k,
            "value": [[w, f.to_str(v)] for w, v in sorted(val.items())]}


def check_jacobi(A: SuperAlgebra, mode: str = "full", triples=None,
                 witness_cap: int = 10, workers: int = None) -> VerificationReport:
    """Scan the graded Jacobi identity.

    mode "full" covers every ordered basis triple; "odd-only" restricts
    all three slots to odd indices; "generators" evaluates exactly the
    supplied index triples.  Witnesses are collected in lexicographic
    triple order up to witness_cap, then re-evaluated exactly.
    """
    n = A.dim
    if mode == "generators":
        if triples is None:
            raise ValueError("generators mode needs explicit triples")
        found = []
        for t in sorted(tuple(t) for t in triples):
            if len(found) >= witness_cap:
                break
            if j_triple(A, *t):
                found.append(t)
    elif mode in ("full", "odd-only"):
        par = np.array([A.parity(i) for i in range(n)], dtype=np.int64)
        mats = _scan_matrices(A)
        if mode == "odd-only":
            i_list = [i for i in range(n) if par[i]]
        else:
            i_list = list(range(n))
        found = []
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                for res in ex.map(lambda i: _scan_one_i(A, mats, par, i, mode == "odd-only"),
                                  i_list):
                    if len(found) < witness_cap:
                        found.extend(res)
        else:
            for i in i_list:
                found.extend(_scan_one_i(A, mats, par, i, mode == "odd-only"))
                if len(found) >= witness_cap:
                    break
        found = found[:witness_cap]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    witnesses = [_witness_entry(A, t) for t in found]
    return VerificationReport(
        algebra=A.name,
        field=repr(A.field),
        mode=mode,
        jacobi_pass=not witnesses,
        witnesses=witnesses,
        dims=(A.n0, A.n1),
        bracket_symmetry="symmetric" if A.odd_symmetric else "skew",
    )


def even_subalgebra(A: SuperAlgebra, check: bool = True) -> SuperAlgebra:
    """The even part of A as a plain (n0, 0) algebra on the same basis."""
    table = {k: dict(v) for k, v in A.table.items()
             if k[0] < A.n0 and k[1] < A.n0}
    return SuperAlgebra(A.name + "_0", A.field, A.n0, 0, A.labels[:A.n0],
                        table, odd_symmetric=False, check=check)


# ---------------------------------------------------------------------------
# ideals, derived algebra, simplicity


def ideal_closure(A: SuperAlgebra, seeds) -> list:
    """Reduced basis of the smallest ideal containing the seed vectors."""
    f = A.field
    n = A.dim
    space = RowSpace(f, n)
    queue = []
    for s in seeds:
        v = [f.raw(x) for x in s]
        if space.insert([v]):
            queue.append(v)
    while queue:
        x = queue.pop()
        for a in range(n):
            ea = [f.one() if t == a else f.zero() for t in range(n)]
            w = A.bracket_vectors(ea, x)
            if any(not f.is_zero(c) for c in w) and not space.contains(w):
                space.insert([w])
                queue.append(w)
    return space.basis()


def derived_algebra(A: SuperAlgebra) -> list:
    """Reduced basis of [A, A]."""
    f = A.field
    n = A.dim
    space = RowSpace(f, n)
    rows = []
    for (i, j), terms in A.table.items():
        v = [f.zero()] * n
        for k, c in terms.items():
            v[k] = c
        rows.append(v)
    space.insert(rows)
    return space.basis()


def burnside_irreducible(ops, n: int, field: Field) -> bool:
    """True iff the unital associative algebra generated by the operators
    is all of End(k^n), certified by span closure (Burnside)."""
    f = field
    if f.p:
        gens = [np.array([[int(f.raw(x)) % f.p for x in row] for row in M],
                         dtype=np.int64) for M in ops]
        space = RowSpace(f, n * n)
        eye = np.eye(n, dtype=np.int64)
        space.insert([eye.reshape(-1)])
        wave = [eye]
        for g in gens:
            if space.insert([g.reshape(-1)]):
                wave.append(g)
        while wave and space.dim < n * n:
            prev_basis = {tuple(r) for r in
                          np.asarray(space._modp.basis, dtype=np.int64).tolist()}
            stack = np.stack(wave).reshape(len(wave) * n, n)
            for g in gens:
                prod = matmul_modp(stack, g, f.p).reshape(len(wave), n * n)
                space.insert(prod)
            wave = [np.array(r, dtype=np.int64).reshape(n, n)
                    for r in np.asarray(space._modp.basis, dtype=np.int64).tolist()
                    if tuple(r) not in prev_basis]
        return space.dim == n * n
    gens = [[[f.raw(x) for x in row] for row in M] for M in ops]
    space = RowSpace(f, n * n)
    eye = [[f.one() if i == j else f.zero() for j in range(n)] for i in range(n)]
    space.insert([[x for row in eye for x in row]])
    queue = [eye]
    for g in gens:
        if space.insert([[x for row in g for x in row]]):
            queue.append(g)
    while queue and space.dim < n * n:
        m = queue.pop()
        for g in gens:
            prod = matmul_field(m, g, f)
            if space.insert([[x for row in prod for x in row]]):
                queue.append(prod)
    return space.dim == n * n


def _rep_on_odd(A: SuperAlgebra):
    """Matrices of the even basis acting on the odd part: R_a[r][s] is the
    coefficient of e_{n0+r} in [e_a, e_{n0+s}]."""
    f = A.field
    n0, n1 = A.n0, A.n1
    mats = []
    for a in range(n0):
        m = [[f.zero()] * n1 for _ in range(n1)]
        for s in range(n1):
            for k, v in A.bracket_terms(a, n0 + s).items():
                m[k - n0][s] = v
        mats.append(m)
    return mats


def _rep_kernel(A: SuperAlgebra, rep) -> list:
    """Basis of {x in even part : sum x_a rho(e_a) = 0}, as raw rows."""
    f = A.field
    n0, n1 = A.n0, A.n1
    # rows indexed by (r,s), columns by a
    if f.p:
        mat = np.zeros((n1 * n1, n0), dtype=np.int64)
        for a, m in enumerate(rep):
            for r in range(n1):
                for s in range(n1):
                    mat[r * n1 + s, a] = int(m[r][s]) % f.p
        ns = nullspace_modp(mat, f.p)
        return [[f.of_int(int(x)) for x in row] for row in ns]
    mat = [[rep[a][r][s] for a in range(n0)] for r in range(n1) for s in range(n1)]
    return nullspace_field(mat, f) if mat else []


def _largest_ideal_inside(A: SuperAlgebra, kernel_rows) -> int:
    """Dimension of the largest even subspace of span(kernel_rows) closed
    under bracketing with the whole even part."""
    f = A.field
    n0 = A.n0
    rows = [list(r) for r in kernel_rows]
    while rows:
        space = RowSpace(f, n0)
        space.insert(rows)
        # conditions: [k_i, e_b] reduces to zero against the span
        cond = []
        for b in range(n0):
            eb = [f.one() if t == b else f.zero() for t in range(A.dim)]
            resid = []
            for r in rows:
                w = A.bracket_vectors(r + [f.zero()] * A.n1, eb)[:n0]
                resid.append(w)
            # coordinates of the residue after reduction by the span
            for t in range(n0):
                cond.append([_reduce_coord(space, resid[i], t, f)
                             for i in range(len(rows))])
        # solve sum_i c_i * resid_i = 0 (mod span)
        sol = nullspace_field(cond, f) if cond else []
        if len(sol) == len(rows):
            return len(rows)
        new_rows = []
        for c in sol:
            v = [f.zero()] * n0
            for i, ci in enumerate(c):
                if not f.is_zero(ci):
                    for t in range(n0):
                        v[t] = f.add(v[t], f.mul(ci, rows[i][t]))
            if any(not f.is_zero(x) for x in v):
                new_rows.append(v)
        rows = new_rows
    return 0


def _reduce_coord(space: RowSpace, vec, t, f):
    """t-th coordinate of vec after reduction modulo the row space."""
    # reduce a copy of vec by the stored echelon basis, then read coord t
    basis = space.basis()
    if f.p:
        pivots = list(space._modp.pivots)
    else:
        pivots = list(space._pivots)
    v = [f.raw(x) for x in vec]
    for pc, er in zip(pivots, basis):
        if not f.is_zero(v[pc]):
            c = v[pc]
            v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, er)]
    return v[t]


def simplicity_certificate(A: SuperAlgebra):
    """("certified"|"failed", notes). Certified means: the derived algebra
    is everything, the even action on the odd part is absolutely
    irreducible, and no nonzero even ideal annihilates the odd part."""
    n = A.dim
    der = derived_algebra(A)
    if len(der) != n:
        return "failed", f"derived algebra has dimension {len(der)} < {n}"
    rep = _rep_on_odd(A)
    if not burnside_irreducible(rep, A.n1, A.field):
        return "failed", "even action on the odd part is not absolutely irreducible"
    kernel = _rep_kernel(A, rep)
    if kernel:
        bad = _largest_ideal_inside(A, kernel)
        if bad:
            return "failed", (f"{bad}-dimensional even ideal annihilates "
                              f"the odd part")
    return "certified", ""


# ---------------------------------------------------------------------------
# equivariant bilinear maps S x S -> g0


def _column_sparsity(mats, f):
    """Per-matrix column views: cols[a][j] = ((i, raw), ...) nonzero."""
    out = []
    for m in mats:
        cols = {}
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                v = f.raw(x)
                if not f.is_zero(v):
                    cols.setdefault(j, []).append((i, v))
        out.append(cols)
    return out


def _row_sparsity(mats, f):
    """Per-matrix row views: rows[a][i] = ((j, raw), ...) nonzero."""
    out = []
    for m in mats:
        rows = {}
        for i, row in enumerate(m):
            ents = [(j, f.raw(x)) for j, x in enumerate(row) if not f.is_zero(f.raw(x))]
            if ents:
                rows[i] = ents
        out.append(rows)
    return out


def _diagonal_part(cols, dim, f):
    """Diagonal of a column-sparse matrix, or None if off-diagonal terms exist."""
    diag = [f.zero()] * dim
    for j, ents in cols.items():
        for i, v in ents:
            if i != j:
                return None
            diag[j] = v
    return diag


def _diagonal_part_rows(rows, dim, f):
    diag = [f.zero()] * dim
    for i, ents in rows.items():
        for j, v in ents:
            if i != j:
                return None
            diag[i] = v
    return diag


def equivariant_map_dim(rep, adjoint, trace_gram=None, field: Field = None) -> int:
    """Dimension of the space of even-equivariant bilinear maps S x S -> g0.

    rep: matrices of the generators on S; adjoint: matrices of the same
    generators acting on g0.  The unknown is the coefficient tensor
    B[s,t,c]; invariance under every generator is intersected one
    generator at a time.  Diagonal generator pairs (a torus) are used
    first to cut the unknowns down to weight-compatible triples.
    trace_gram is accepted for interface compatibility and not needed:
    the defining system never references it.
    """
    if field is None:
        raise ValueError("field is required")
    f = field
    ds = len(rep[0]) if rep else 0
    dg = len(adjoint[0]) if adjoint else 0
    if len(rep) != len(adjoint):
        raise ValueError("rep and adjoint must list the same generators")
    rep_rows = _row_sparsity(rep, f)
    ad_cols = _column_sparsity(adjoint, f)

    torus = []
    rep_diag, ad_diag = {}, {}
    for a in range(len(rep)):
        dr = _diagonal_part_rows(rep_rows[a], ds, f)
        da = _diagonal_part(ad_cols[a], dg, f)
        if dr is not None and da is not None:
            torus.append(a)
            rep_diag[a] = dr
            ad_diag[a] = da

    # unknowns: weight-compatible triples (s,t,c)
    if torus:
        wt = [tuple(rep_diag[a][s] for a in torus) for s in range(ds)]
        rt = {}
        for c in range(dg):
            rt.setdefault(tuple(ad_diag[a][c] for a in torus), []).append(c)
        unknowns = []
        for s in range(ds):
            for t in range(ds):
                key = tuple(f.add(x, y) for x, y in zip(wt[s], wt[t]))
                for c in rt.get(key, ()):
                    unknowns.append((s, t, c))
    else:
        unknowns = [(s, t, c) for s in range(ds) for t in range(ds) for c in range(dg)]
    if not unknowns:
        return 0
    uidx = {u: q for q, u in enumerate(unknowns)}

    # kernel columns over the unknowns, intersected per generator
    cols = [{q: f.one()} for q in range(len(unknowns))]
    torus_set = set(torus)
    for a in range(len(rep)):
        if a in torus_set:
            continue        # already encoded in the unknown set
        if not cols:
            break
        ra, aa = rep_rows[a], ad_cols[a]
        out_rows = {}
        out_cols = []
        for col in cols:
            acc = {}
            for q, x in col.items():
                s, t, c = unknowns[q]
                for c2, v in aa.get(c, ()):
                    key = (s, t, c2)
                    acc[key] = f.add(acc.get(key, f.zero()), f.mul(v, x))
                for s0, v in ra.get(s, ()):
                    key = (s0, t, c)
                    acc[key] = f.sub(acc.get(key, f.zero()), f.mul(v, x))
                for t0, v in ra.get(t, ()):
                    key = (s, t0, c)
                    acc[key] = f.sub(acc.get(key, f.zero()), f.mul(v, x))
            cleaned = {}
            for key, v in acc.items():
                if not f.is_zero(v):
                    cleaned[out_rows.setdefault(key, len(out_rows))] = v
            out_cols.append(cleaned)
        if not out_rows:
            continue
        # constraint matrix M (rows x cols); keep the kernel of M
        nr, nc = len(out_rows), len(out_cols)
        if f.p:
            M = np.zeros((nr, nc), dtype=np.int64)
            for j, col in enumerate(out_cols):
                for r, v in col.items():
                    M[r, j] = int(v) % f.p
            null = nullspace_modp(M, f.p)
            null = [[f.of_int(int(x)) for x in row] for row in null]
        else:
            M = [[f.zero()] * nc for _ in range(nr)]
            for j, col in enumerate(out_cols):
                for r, v in col.items():
                    M[r][j] = v
            null = nullspace_field(M, f)
        new_cols = []
        for coeffs in null:
            vec = {}
            for j, cj in enumerate(coeffs):
                if f.is_zero(cj):
                    continue
                for q, x in cols[j].items():
                    v = f.add(vec.get(q, f.zero()), f.mul(cj, x))
                    if f.is_zero(v):
                        vec.pop(q, None)
                    else:
                        vec[q] = v
            if vec:
                new_cols.append(vec)
        cols = new_cols
    return len(cols)


# ---------------------------------------------------------------------------
# isomorphism checking


def verify_isomorphism(mat, A: SuperAlgebra, B: SuperAlgebra) -> bool:
    """True iff mat (columns = images of A's basis in B's coordinates) is a
    parity-preserving bijective homomorphism of the bracket tables."""
    if A.field != B.field or (A.n0, A.n1) != (B.n0, B.n1):
        return False
    f = A.field
    n = A.dim
    rows = [[f.raw(x) for x in r] for r in mat]
    if len(rows) != n or any(len(r) != n for r in rows):
        return False
    for i in range(n):
        for j in range(n):
            if A.parity(j) != B.parity(i) and not f.is_zero(rows[i][j]):
                return False
    if f.p:
        M = np.array([[int(x) % f.p for x in r] for r in rows], dtype=np.int64)
        if rank_modp(M, f.p) != n:
            return False
        I, J, K, V, _ = B._coo()
        C1B = sparse.csr_matrix((V % f.p, (I, J * n + K)), shape=(n, n * n))
        IA, JA, KA, VA, _ = A._coo()
        C2A = sparse.csr_matrix((VA % f.p, (IA * n + JA, KA)), shape=(n * n, n))
        for i in range(n):
            u = M[:, i]
            e = np.zeros((1, n * n), dtype=np.int64)
            # E[b,k] = sum_a u_a c_B[a,b,k]
            for a in np.nonzero(u)[0]:
                blk = C1B[int(a)]
                e[0, blk.indices] = (e[0, blk.indices] + int(u[a]) * blk.data) % f.p
            E = e.reshape(n, n)
            got = matmul_modp(E.T % f.p, M, f.p)          # [k, j]
            Ti = np.asarray(C2A[i * n:(i + 1) * n].todense(), dtype=np.int64)  # [j,k]
            want = matmul_modp(M, Ti.T % f.p, f.p)        # [k, j]
            if not np.array_equal(got, want):
                return False
        return True
    # dense exact route for characteristic zero (small cases)
    if rank_field(rows, f) != n:
        return False
    for i in range(n):
        for j in range(n):
            want = [f.zero()] * n
            for k, c in A.bracket_terms(i, j).items():
                for r in range(n):
                    want[r] = f.add(want[r], f.mul(c, rows[r][k]))
            got = B.bracket_vectors([rows[r][i] for r in range(n)],
                                    [rows[r][j] for r in range(n)])
            if got != want:
                return False
    return True
