import random

import pytest

from conftest import Q
from titsalt.congruence import build_whom
from titsalt.decision import (
    FALSE,
    TRUE,
    UNDECIDED,
    Analysis,
    Decision,
    check_small_characteristic,
    decide,
    explore_basis,
    explore_basis_traced,
    flag_preserved,
    is_abelian_by_finite,
    is_central_by_finite,
    is_completely_reducible_sf,
    is_nilpotent_by_finite,
    is_solvable,
    is_solvable_by_finite,
)
from titsalt.fields import QQ, FunctionField, RingInfo, finite_field
from titsalt.matrix import Matrix

G19X = FunctionField(finite_field(19), "x")


def test_explore_basis_examples():
    assert explore_basis([Matrix.identity(QQ, 3)], [Matrix.identity(QQ, 3)])
    A = [Q([[1, 2], [0, 1]]), Q([[1, 0], [2, 1]])]
    ok, trace = explore_basis_traced(A, A)
    assert not ok and trace.frames[0].u1_dim == 0
    assert (A[0] * A[1] - A[1] * A[0]) == Q([[4, 0], [0, -4]])
    B = [Q([[1, 1], [0, 2]]), Q([[3, 0], [0, 1]])]
    ok, trace = explore_basis_traced(B, B)
    assert ok and trace.depth == 1
    assert [f.dim for f in trace.leaves] == [1, 1]
    assert flag_preserved(trace, B)


def random_block_triangular(rng, n):
    sizes = []
    while sum(sizes) < n:
        sizes.append(rng.randint(1, n - sum(sizes)))
    starts = [sum(sizes[:i]) for i in range(len(sizes))]
    block_of = [i for i, s in enumerate(sizes) for _ in range(s)]

    def mk(scalar_blocks):
        rows = []
        for i in range(n):
            r = []
            for j in range(n):
                bi, bj = block_of[i], block_of[j]
                if bi > bj:
                    r.append(0)
                elif bi == bj:
                    r.append(scalar_blocks[bi] if i == j else 0)
                else:
                    r.append(rng.randint(-2, 2))
            rows.append(r)
        return Q(rows)

    del starts
    return [mk([rng.choice([1, 2, -1, 3]) for _ in sizes]) for _ in range(rng.randint(1, 3))]


def test_flag_property_random():
    rng = random.Random(41)
    hits = 0
    for _ in range(25):
        n = rng.randint(1, 4)
        A = random_block_triangular(rng, n)
        while True:
            C = Q([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            if C.det() != 0:
                break
        A = [C * a * C.inverse() for a in A]
        ok, trace = explore_basis_traced(A, A)
        assert ok
        hits += 1
        assert trace.depth <= n
        assert sum(f.dim for f in trace.leaves) == n
        flag = trace.flag()
        assert [W.dim for W in flag] == sorted(W.dim for W in flag) and flag[-1].dim == n
        assert flag_preserved(trace, A)
    assert hits == 25


def test_predicates_on_small_groups():
    bs = [Q([[1, 1], [0, 1]]), Q([[2, 0], [0, 1]])]
    assert is_solvable_by_finite(bs).verdict == TRUE
    assert is_solvable(bs).verdict == TRUE
    assert is_nilpotent_by_finite(bs).verdict == FALSE
    free = [Q([[1, 2], [0, 1]]), Q([[1, 0], [2, 1]])]
    assert is_solvable_by_finite(free).verdict == FALSE
    one = [Matrix.identity(QQ, 2)]
    for prop in ("solvable-by-finite", "solvable", "nilpotent-by-finite", "abelian-by-finite", "central-by-finite"):
        assert decide(prop, one).verdict == TRUE
    uni = [Q([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), Q([[1, 0, 0], [0, 1, 1], [0, 0, 1]])]
    assert is_nilpotent_by_finite(uni).verdict == TRUE
    assert is_abelian_by_finite(uni).verdict == FALSE
    assert is_abelian_by_finite([Q([[2, 0], [0, 3]]), Q([[0, 1], [1, 0]])]).verdict == TRUE
    assert is_central_by_finite([Q([[2, 0], [0, 2]])]).verdict == TRUE
    assert is_central_by_finite([Q([[0, 1], [-1, 0]])]).verdict == TRUE
    nc = [Q([[1, 1], [0, 1]]), Q([[1, 0], [0, -1]])]
    an = Analysis(nc, prime=5)
    assert Q([[1, 5], [0, 1]]) in an.K
    assert is_central_by_finite(an).verdict == FALSE


def test_complete_reducibility_examples():
    assert is_completely_reducible_sf([Q([[2, 0], [0, 3]])]).verdict == TRUE
    assert is_completely_reducible_sf([Q([[1, 1], [0, 1]])]).verdict == FALSE
    free = [Q([[1, 2], [0, 1]]), Q([[1, 0], [2, 1]])]
    d = is_completely_reducible_sf(free)
    assert d.verdict == UNDECIDED and d.reason == "criterion requires SF"
    S = [Matrix.parse(G19X, [["x", "0"], ["0", "x^2"]]), Matrix.parse(G19X, [["0", "1"], ["1", "0"]])]
    an = Analysis(S)
    assert an.kernel.image.order % 19
    assert is_completely_reducible_sf(an).verdict == TRUE
    prior = is_abelian_by_finite([Q([[2, 0], [0, 3]])])
    d = is_completely_reducible_sf([Q([[2, 0], [0, 3]])], prior=prior)
    assert d.verdict == TRUE and d.certificate.get("shortcut") == "K_u trivial"


def test_finite_sl25_image_not_solvable(corpus):
    G = corpus("sl2_gf5_const")
    an = Analysis(G.generators)
    assert is_solvable_by_finite(an).verdict == TRUE
    assert is_solvable(an).verdict == FALSE


def test_small_characteristic_check():
    ring0 = RingInfo("rationals", 0, 1)
    ring2 = RingInfo("function_field", 2, (1,))
    assert check_small_characteristic([], ring0)
    assert check_small_characteristic([Q([[1, 1], [0, 1]])], ring0)
    assert not check_small_characteristic([Q([[1, 1], [0, 1]])], ring2)
    assert check_small_characteristic([Q([[2, 0], [0, 3]])], ring2)


def test_small_characteristic_refusal():
    F = FunctionField(finite_field(2), "x")
    # the unipotent generator lies in the kernel and is not diagonalizable
    S = [Matrix.parse(F, [["1", "x+1"], ["0", "1"]]), Matrix.parse(F, [["x", "0"], ["0", "1"]])]
    d = is_solvable_by_finite(S)
    assert d.verdict == UNDECIDED and d.reason == "W-homomorphism unavailable"
    diag = [Matrix.parse(F, [["x", "0"], ["0", "1"]]), Matrix.parse(F, [["1", "0"], ["0", "x+1"]])]
    assert is_solvable_by_finite(diag).verdict == TRUE


def test_char_p_scope():
    S = [Matrix.parse(G19X, [["x", "1"], ["0", "1"]])]
    d = is_nilpotent_by_finite(S)
    assert d.verdict == UNDECIDED and d.reason == "out of method scope"


def test_partial_image_refutes_or_defers(corpus):
    G = corpus("sl3z")
    an = Analysis(G.generators, prime=7, cap=2000)
    d = is_solvable_by_finite(an)
    assert not an.complete and d.verdict == FALSE
    heis = corpus("heisenberg")
    d = is_solvable_by_finite(Analysis(heis.generators, prime=11, cap=100))
    assert d.verdict == UNDECIDED and d.reason == "image too large"


def test_fast_path_only_refutes():
    free = [Q([[1, 2], [0, 1]]), Q([[1, 0], [2, 1]])]
    d = is_solvable_by_finite(Analysis(free, prime=5, fast_path_bound=10))
    assert d.verdict == FALSE and d.reason == "fast path"
    bs = [Q([[1, 1], [0, 1]]), Q([[2, 0], [0, 1]])]
    d = is_solvable_by_finite(Analysis(bs, fast_path_bound=1))
    assert d.verdict == TRUE


def test_decision_rejects_bad_verdict():
    with pytest.raises(ValueError):
        Decision("maybe", "solvable")


CHAIN = ["central-by-finite", "abelian-by-finite", "nilpotent-by-finite", "solvable-by-finite"]


@pytest.mark.parametrize("name", ["bs12", "heisenberg", "scalar", "monomial_q", "noncentral", "sl2z", "sqrt_x"])
def test_implication_chain_and_solvability(corpus, name):
    G = corpus(name)
    an = Analysis(G.generators)
    v = {p: decide(p, an).verdict for p in CHAIN + ["solvable"]}
    for stronger, weaker in zip(CHAIN, CHAIN[1:]):
        if v[stronger] == TRUE:
            assert v[weaker] != FALSE
    if v["solvable"] == TRUE:
        assert v["solvable-by-finite"] == TRUE


def test_kernel_torsion_is_unipotent(corpus):
    """SW spot-check: normal generators of finite order are unipotent."""
    from titsalt.matrix import is_unipotent

    for name in ("scalar", "monomial_q", "bs12", "sl2z"):
        G = corpus(name)
        an = Analysis(G.generators)
        for k in an.K:
            x = k
            for _ in range(12):
                if x.is_identity():
                    assert is_unipotent(k)
                    break
                x = x * k


def test_whom_reuse_across_predicates(corpus):
    G = corpus("heisenberg")
    psi = build_whom(G.generators, prime=5)
    an = Analysis(G.generators, whom=psi)
    is_nilpotent_by_finite(an)
    is_abelian_by_finite(an)
    assert an.whom is psi and an.kernel.image.order == 125
