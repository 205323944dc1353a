"""Enveloping algebras of normal closures.

``basis_algebra_closure(K, S)`` returns a basis, made of group elements, of
the algebra spanned by the normal closure of ``<K>`` in ``G = <S>``.  The
star variant does the same for the (possibly non-unital) algebra generated
by the conjugates of ``K`` and never inverts anything.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .fields import Field
from .matrix import Matrix, Subspace, is_nilpotent, is_unipotent, nullspace


class _Echelon:
    """Incrementally maintained semi-echelon basis of a span of vectors."""

    def __init__(self, F: Field):
        self.F = F
        self.rows: list[tuple[int, list]] = []

    def reduce(self, v) -> list:
        F = self.F
        v = list(v)
        for c, row in self.rows:
            f = v[c]
            if not F.is_zero(f):
                v = [x if F.is_zero(y) else F.sub(x, F.mul(f, y)) for x, y in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        return all(self.F.is_zero(x) for x in self.reduce(v))

    def add(self, v) -> bool:
        """Insert ``v``; return True when the span grew."""
        F = self.F
        v = self.reduce(v)
        for c, x in enumerate(v):
            if not F.is_zero(x):
                inv = F.inv(x)
                self.rows.append((c, [F.mul(inv, y) for y in v]))
                return True
        return False

    @property
    def dim(self) -> int:
        return len(self.rows)


@dataclass
class AlgebraBasis:
    """Linearly independent matrices spanning a conjugation-closed algebra.

    ``variant`` is ``"group"`` (basis elements lie in the normal closure of
    ``<K>``) or ``"star"``.  ``saturated`` is the conjugation-saturated
    generating set and ``saturation_steps`` counts its span-growth steps.
    """

    field: Field
    n: int
    elements: list
    variant: str
    saturated: list = field(default_factory=list)
    saturation_steps: int = 0
    _ech: _Echelon = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def contains(self, m: Matrix) -> bool:
        return self._ech.contains(m.vector())

    def is_commutative(self) -> bool:
        B = self.elements
        return all(B[i].commutes_with(B[j]) for i in range(len(B)) for j in range(i + 1, len(B)))


def _conjugators(S):
    out = []
    for g in S:
        gi = g.inverse()
        out.append((g, gi))
        out.append((gi, g))
    return out


def _saturate_and_spin(F, n, K, S, star: bool, with_inverses: bool) -> AlgebraBasis:
    ech = _Echelon(F)
    A: list[Matrix] = []
    queue: deque = deque()

    def offer(m: Matrix, inverse: bool) -> bool:
        if not ech.add(m.vector()):
            return False
        A.append(m)
        queue.append(m)
        if inverse:
            # k^-1 is a polynomial in k, so the generated algebra is unchanged
            # by adjoining only the inverses of span-enlarging elements.
            offer(m.inverse(), False)
        return True

    for k in K:
        if star and k.is_zero():
            continue
        offer(k, with_inverses)

    conj = _conjugators(S)
    steps = 0
    while queue:
        a = queue.popleft()
        for g, gi in conj:
            if offer(gi * a * g, False):
                steps += 1
    assert len(A) <= n * n and steps <= n * n, "saturation exceeded n^2 span-growth steps"
    saturated = list(A)

    # spin up: right products by the saturated set until the span is closed
    basis = list(A)
    frontier = deque(basis)
    while frontier:
        b = frontier.popleft()
        for a in saturated:
            c = b * a
            if ech.add(c.vector()):
                basis.append(c)
                frontier.append(c)
    return AlgebraBasis(F, n, basis, "star" if star else "group", saturated, steps, ech)


def basis_algebra_closure(K, S) -> AlgebraBasis:
    """Basis of the enveloping algebra of the normal closure of ``<K>`` in ``<S>``.

    Every basis element is a product of conjugates of elements of ``K`` and
    their inverses.  An empty ``K`` gives the empty basis.
    """
    S = list(S)
    F, n = S[0].field, S[0].n
    return _saturate_and_spin(F, n, list(K), S, star=False, with_inverses=True)


def basis_algebra_closure_star(K, S) -> AlgebraBasis:
    """Basis of the algebra generated by all ``<S>``-conjugates of ``K``.

    Members of ``K`` may be singular; zero matrices are dropped and an empty
    basis stands for the zero algebra.
    """
    S = list(S)
    F, n = S[0].field, S[0].n
    return _saturate_and_spin(F, n, list(K), S, star=True, with_inverses=False)


def module_via_nullspace(T, x: Matrix, T_inv=None) -> Subspace:
    """Largest ``<T>``-invariant subspace of the nullspace of ``x``."""
    T = list(T)
    if T_inv is None:
        T_inv = [g.inverse() for g in T]
    W = nullspace(x)
    while W.dim:
        # {v in W : g v in W and g^-1 v in W} for every g in T
        new = W
        for g, gi in zip(T, T_inv):
            new = new.intersect(W.image(gi)).intersect(W.image(g))
        if new.dim == W.dim:
            return W
        W = new
    return W


def is_abelian_closure(K, S) -> bool:
    """True iff the normal closure of ``<K>`` in ``<S>`` is abelian."""
    K = [k for k in K if not k.is_identity()]
    if not K:
        return True
    return basis_algebra_closure(K, S).is_commutative()


def nilpotency_check(B: AlgebraBasis) -> bool:
    """True iff the algebra spanned by ``B`` is nilpotent of index at most n."""
    if not B.elements:
        return True
    F, n = B.field, B.n
    P = list(B.elements)
    for _ in range(n):
        ech = _Echelon(F)
        nxt = []
        for p in P:
            for b in B.elements:
                c = p * b
                if ech.add(c.vector()):
                    nxt.append(c)
        if not nxt:
            return True
        P = nxt
    return False


def is_unipotent_closure(K, S) -> bool:
    """True iff the normal closure of ``<K>`` in ``<S>`` is unipotent.

    Every element of ``K`` must be unipotent.
    """
    K = list(K)
    for i, k in enumerate(K):
        if not is_unipotent(k):
            raise ValueError(f"non-unipotent matrix at index {i}")
    S = list(S)
    F, n = S[0].field, S[0].n
    one = Matrix.identity(F, n)
    Kt = [k - one for k in K]
    B = basis_algebra_closure_star(Kt, S)
    if len(B) > n * (n - 1) // 2:
        return False
    if any(not is_nilpotent(b) for b in B.elements):
        return False
    return nilpotency_check(B)
