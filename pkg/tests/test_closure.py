import random

import pytest

from conftest import Q
from titsalt.closure import (
    basis_algebra_closure,
    basis_algebra_closure_star,
    is_abelian_closure,
    is_unipotent_closure,
    module_via_nullspace,
)
from titsalt.fields import QQ
from titsalt.matrix import Matrix, Subspace

I2 = Matrix.identity(QQ, 2)
U = Q([[1, 1], [0, 1]])
D = Q([[2, 0], [0, 3]])
E12 = Q([[0, 1], [0, 0]])
W = Q([[0, 1], [1, 0]])


def test_module_via_nullspace_examples():
    assert module_via_nullspace([U], Matrix.zeros(QQ, 2)).dim == 2
    assert module_via_nullspace([U], Q([[1, 2], [3, 4]])).dim == 0
    assert module_via_nullspace([U], E12).basis == [(1, 0)]
    assert module_via_nullspace([W], E12).dim == 0


def test_basis_algebra_closure_examples():
    assert basis_algebra_closure([I2], [I2]).elements == [I2]
    assert len(basis_algebra_closure([U], [U])) == 2
    assert len(basis_algebra_closure([D], [D])) == 2
    assert len(basis_algebra_closure([], [U])) == 0


def test_star_examples():
    assert len(basis_algebra_closure_star([Matrix.zeros(QQ, 2)], [I2])) == 0
    assert basis_algebra_closure_star([E12], [I2]).elements == [E12]
    assert len(basis_algebra_closure_star([E12], [W])) == 4


def test_predicate_examples():
    assert is_abelian_closure([I2], [I2])
    assert is_abelian_closure([D], [D])
    assert not is_abelian_closure([U], [Q([[1, 0], [2, 1]])])
    assert is_unipotent_closure([I2], [I2])
    assert is_unipotent_closure([U], [U])
    assert not is_unipotent_closure([U], [W])
    with pytest.raises(ValueError, match="index 0"):
        is_unipotent_closure([D], [D])


def random_invertible(rng, n, lo=-2, hi=2):
    while True:
        g = Q([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if g.det() != 0:
            return g


def random_instance(rng):
    n = rng.randint(1, 4)
    kind = rng.choice(["any", "triangular", "monomial"])
    if kind == "triangular":
        def mk():
            return Q([[rng.choice([1, 2, -1]) if i == j else (rng.randint(-1, 1) if j > i else 0)
                       for j in range(n)] for i in range(n)])
    elif kind == "monomial":
        def mk():
            perm = list(range(n))
            rng.shuffle(perm)
            return Q([[rng.choice([1, -1, 2]) if perm[i] == j else 0 for j in range(n)] for i in range(n)])
    else:
        def mk():
            return random_invertible(rng, n)
    S = [mk() for _ in range(rng.randint(1, 3))]
    K = [mk() for _ in range(rng.randint(1, 2))]
    return n, K, S


def test_closure_invariance_random():
    rng = random.Random(17)
    for _ in range(40):
        n, K, S = random_instance(rng)
        B = basis_algebra_closure(K, S)
        assert B.saturation_steps <= n * n and len(B) <= n * n
        for b in B:
            assert b.det() != 0
            for g in S:
                assert B.contains(g.inverse() * b * g)
                assert B.contains(g * b * g.inverse())
            for c in B:
                assert B.contains(b * c)


def test_star_closure_invariance_random():
    rng = random.Random(23)
    for _ in range(30):
        n, K, S = random_instance(rng)
        one = Matrix.identity(QQ, n)
        Kt = [k - one for k in K]
        B = basis_algebra_closure_star(Kt, S)
        for b in B:
            assert not b.is_zero()
            for g in S:
                assert B.contains(g.inverse() * b * g)


def test_module_maximality_random():
    """Any T-invariant subspace inside the nullspace lies inside the returned module."""
    rng = random.Random(29)
    for _ in range(30):
        n = rng.randint(2, 4)
        d = rng.randint(1, n - 1)
        # T preserves W0 = span(e_1..e_d): block upper triangular in column convention
        T = []
        for _ in range(2):
            while True:
                g = Q([[0 if (i >= d and j < d) else rng.randint(-2, 2) for j in range(n)] for i in range(n)])
                if g.det() != 0:
                    break
            T.append(g)
        C = random_invertible(rng, n)
        T = [C * g * C.inverse() for g in T]
        W0 = Subspace(QQ, n, [[C[i, j] for i in range(n)] for j in range(d)])
        # x annihilates W0: x = M * (projection killing W0)
        rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        x = Q(rows)
        killer = C * Q([[1 if (i == j and i >= d) else 0 for j in range(n)] for i in range(n)]) * C.inverse()
        x = x * killer
        for g in T:
            assert W0.is_invariant(g)
        Umod = module_via_nullspace(T, x)
        assert Umod.contains_subspace(W0)
        for g in T:
            assert Umod.is_invariant(g)
