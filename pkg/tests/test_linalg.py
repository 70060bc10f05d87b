import random
from fractions import Fraction

import numpy as np
import pytest

from spinlab.fields import QQ, GF
from spinlab.linalg import (SpanSolver, RowSpace, RowSpaceModP, inv_field,
                            inv_modp, matmul_field, nullspace_field,
                            nullspace_modp, rank_field, rank_modp, rref_field,
                            rref_modp)


def rand_matrix(rng, f, rows, cols, density=0.7):
    out = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            if rng.random() < density:
                c = rng.randint(-4, 4)
                row.append(f.raw(Fraction(c, rng.choice((1, 1, 2)))) if f.p == 0
                           else f.of_int(c))
            else:
                row.append(f.zero())
        out.append(row)
    return out


def fraction_rank(rows):
    """Textbook Gaussian elimination over Fraction, as the oracle."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col, nr = 0, 0, len(m)
    nc = len(m[0]) if m else 0
    while rank < nr and col < nc:
        piv = next((r for r in range(rank, nr) if m[r][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        m[rank] = [x / m[rank][col] for x in m[rank]]
        for r in range(nr):
            if r != rank and m[r][col]:
                c = m[r][col]
                m[r] = [a - c * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def test_rank_and_nullspace_match_fraction_oracle():
    rng = random.Random(5)
    for trial in range(25):
        rows = rand_matrix(rng, QQ, rng.randint(1, 7), rng.randint(1, 7))
        want = fraction_rank(rows)
        assert rank_field(rows, QQ) == want
        null = nullspace_field(rows, QQ)
        assert len(null) == len(rows[0]) - want
        for v in null:
            for r in rows:
                assert sum(a * b for a, b in zip(r, v)) == 0


def test_modp_agrees_with_field_path_on_integer_matrices():
    rng = random.Random(9)
    f = GF(7)
    for trial in range(25):
        nr, nc = rng.randint(1, 8), rng.randint(1, 8)
        rows = [[rng.randrange(7) for _ in range(nc)] for _ in range(nr)]
        arr = np.array(rows, dtype=np.int64)
        assert rank_modp(arr, 7) == rank_field(rows, f)
        R, piv = rref_modp(arr, 7)
        Rf, pivf = rref_field(rows, f)
        assert [[int(x) for x in row] for row in R[:len(piv)]] == Rf
        assert list(piv) == list(pivf)
        null = nullspace_modp(arr, 7)
        assert len(null) == nc - len(piv)
        if len(null):
            assert not ((arr @ np.array(null).T) % 7).any()


@pytest.mark.parametrize("f", [QQ, GF(5)], ids=repr)
def test_inverse(f):
    rng = random.Random(3)
    found = 0
    while found < 10:
        n = rng.randint(1, 6)
        A = rand_matrix(rng, f, n, n, density=0.9)
        if (rank_field(A, f) if f.p == 0
                else rank_modp(np.array(A, dtype=np.int64), f.p)) < n:
            continue
        found += 1
        if f.p:
            Ai = inv_modp(np.array(A, dtype=np.int64), f.p)
            assert (np.array(A) @ Ai % f.p == np.eye(n, dtype=np.int64)).all()
        else:
            Ai = inv_field(A, f)
            prod = matmul_field(A, Ai, f)
            assert prod == [[f.one() if i == j else f.zero() for j in range(n)]
                            for i in range(n)]


def test_singular_inverse_raises():
    with pytest.raises(ValueError):
        inv_field([[1, 2], [2, 4]], QQ)
    with pytest.raises(ValueError):
        inv_modp(np.array([[1, 2], [2, 4]], dtype=np.int64), 5)


@pytest.mark.parametrize("f", [QQ, GF(5)], ids=repr)
def test_rowspace_membership(f):
    sp = RowSpace(f, 3)
    assert sp.insert([[f.of_int(1), f.of_int(2), f.zero()]]) == 1
    assert sp.insert([[f.of_int(2), f.of_int(4), f.zero()]]) == 0
    assert sp.dim == 1
    assert sp.contains([f.of_int(-3), f.of_int(-6), f.zero()])
    assert not sp.contains([f.one(), f.zero(), f.zero()])
    assert sp.insert([[f.zero(), f.zero(), f.one()]]) == 1
    basis = sp.basis()
    assert len(basis) == 2


def test_rowspace_modp_matches_generic():
    rng = random.Random(1)
    f = GF(5)
    for _ in range(10):
        vecs = [[rng.randrange(5) for _ in range(6)] for _ in range(5)]
        generic = RowSpace(f, 6)
        fast = RowSpaceModP(5, 6)
        for v in vecs:
            generic.insert([[f.of_int(x) for x in v]])
            fast.insert([v])
        assert generic.dim == fast.dim
        probe = [rng.randrange(5) for _ in range(6)]
        assert generic.contains([f.of_int(x) for x in probe]) == \
            fast.contains(probe)


@pytest.mark.parametrize("f", [QQ, GF(7)], ids=repr)
def test_span_solver_coords(f):
    rows = [[f.of_int(1), f.of_int(1), f.zero()],
            [f.zero(), f.of_int(2), f.of_int(1)],
            [f.of_int(1), f.of_int(3), f.of_int(1)]]   # row2 = row0 + row1
    sol = SpanSolver(f, rows)
    assert sol.rank == 2
    target = [f.of_int(2), f.of_int(4), f.of_int(1)]   # 2*row0 + row1
    coeffs = sol.coords(target)
    assert coeffs is not None
    recon = [f.zero()] * 3
    for c, row in zip(coeffs, rows):
        recon = [f.add(a, f.mul(c, b)) for a, b in zip(recon, row)]
    assert recon == target
    assert sol.coords([f.one(), f.zero(), f.one()]) is None
