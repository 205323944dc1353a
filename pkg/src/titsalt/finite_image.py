"""Finite images: breadth-first enumeration, Cayley-graph presentations and
kernel normal generators.

Matrices over GF(q), q = p^d, are flattened to (n*d) x (n*d) matrices over
GF(p) through the regular representation of GF(q), so every group element
is a small integer numpy array and products are ``a @ b % p``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .matrix import Matrix

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**6

Word = tuple  # of (generator index, +1 | -1)


class ImageTooLarge(RuntimeError):
    """Raised when the enumerated image exceeds the element cap."""

    def __init__(self, count: int, cap: int, partial: "EnumeratedGroup"):
        super().__init__(f"image too large for enumeration: more than {cap} elements ({count} found)")
        self.count = count
        self.cap = cap
        self.partial = partial


# ---------------------------------------------------------------------------
# flattening


def flatten(g: Matrix) -> np.ndarray:
    """Image of ``g`` under GL(n, q) -> GL(n*d, p)."""
    E = g.field
    d = E.prime_degree
    if d == 1:
        return np.array(g.rows, dtype=np.int64)
    n = g.n
    out = np.zeros((n * d, n * d), dtype=np.int64)
    cache = {}
    for i, r in enumerate(g.rows):
        for j, a in enumerate(r):
            blk = cache.get(a)
            if blk is None:
                blk = cache[a] = E.to_prime_block(a)
            out[i * d:(i + 1) * d, j * d:(j + 1) * d] = blk
    return out


def mod_inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    m = [[int(x) for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] % p)
        m[c], m[piv] = m[piv], m[c]
        s = pow(m[c][c], -1, p)
        m[c] = [x * s % p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[c])]
    return np.array([row[n:] for row in m], dtype=np.int64)


class _Keyer:
    """Canonical hash keys for flattened matrices."""

    def __init__(self, p: int, N: int):
        self.p, self.N = p, N
        if N * N * np.log2(p) < 62:
            self.weights = np.array([p**i for i in range(N * N)], dtype=np.int64)
        else:
            self.weights = None
            self.dtype = np.uint8 if p < 256 else np.uint16 if p < 65536 else np.int64

    def keys(self, arr: np.ndarray) -> list:
        flat = arr.reshape(arr.shape[0], -1)
        if self.weights is not None:
            return (flat @ self.weights).tolist()
        flat = np.ascontiguousarray(flat.astype(self.dtype))
        return [row.tobytes() for row in flat]

    def key(self, a: np.ndarray):
        return self.keys(a[None])[0]


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class EnumeratedGroup:
    """A finite matrix group with its Cayley table and BFS spanning tree.

    ``edges[u, j]`` is the index of ``element[u] * gens[j]`` (``-1`` where an
    incomplete enumeration never expanded ``u``); ``parent[v]`` and
    ``label[v] = (j, e)`` record ``element[v] = element[parent[v]] * gens[j]**e``.
    """

    p: int
    N: int
    gens: list
    elements: np.ndarray
    index: dict
    parent: np.ndarray
    label: list
    edges: np.ndarray
    complete: bool = True
    keyer: _Keyer = field(repr=False, default=None)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def __len__(self) -> int:
        return self.order

    def lookup(self, a: np.ndarray) -> int:
        return self.index[self.keyer.key(a % self.p)]

    def word(self, v: int) -> Word:
        out = []
        while v:
            out.append(self.label[v])
            v = int(self.parent[v])
        return tuple(reversed(out))

    def evaluate(self, w: Word) -> np.ndarray:
        a = np.eye(self.N, dtype=np.int64)
        invs = {}
        for j, e in w:
            if e == 1:
                g = self.gens[j]
            else:
                g = invs.get(j)
                if g is None:
                    g = invs[j] = mod_inverse(self.gens[j], self.p)
            a = a @ g % self.p
        return a

    def is_identity(self, a: np.ndarray) -> bool:
        return bool(np.array_equal(a % self.p, np.eye(self.N, dtype=np.int64)))


def _bfs(gens: list, p: int, cap: int | None, keyer: _Keyer, with_inverses: bool, record: bool):
    N = gens[0].shape[0] if gens else 0
    ident = np.eye(N, dtype=np.int64)
    slots = []
    for j, g in enumerate(gens):
        slots.append((j, 1, g % p))
        if with_inverses:
            slots.append((j, -1, mod_inverse(g, p)))
    chunks = [ident[None]]
    index = {keyer.key(ident): 0}
    parent = [-1]
    label = [None]
    edges = [[-1] * len(gens)] if record else None
    frontier = [0]
    flat = ident[None]
    count = 1
    truncated = False
    while frontier and not truncated:
        if len(chunks) > 1:
            flat = np.concatenate(chunks)
            chunks = [flat]
        F = flat[frontier]
        prods = [F @ g % p for _, _, g in slots]
        keys = [keyer.keys(pr) for pr in prods]
        new = []
        rows = []
        for ii, u in enumerate(frontier):
            for s, (j, e, _) in enumerate(slots):
                k = keys[s][ii]
                v = index.get(k)
                if v is None:
                    if cap is not None and count >= cap:
                        truncated = True
                        break
                    v = count
                    count += 1
                    index[k] = v
                    parent.append(u)
                    label.append((j, e))
                    rows.append(prods[s][ii])
                    new.append(v)
                    if record:
                        edges.append([-1] * len(gens))
                if record and e == 1:
                    edges[u][j] = v
            if truncated:
                break
        if rows:
            chunks.append(np.array(rows, dtype=np.int64))
        frontier = new
    elements = np.concatenate(chunks) if len(chunks) > 1 else chunks[0]
    return elements, index, parent, label, edges, truncated


def enumerate_image(gens: list, cap: int = DEFAULT_CAP) -> EnumeratedGroup:
    """Breadth-first enumeration of ``<gens>`` for matrices over a finite field.

    ``gens`` are :class:`Matrix` objects over a finite field (or already
    flattened numpy arrays with ``p`` taken from the first Matrix).
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    E = gens[0].field
    p = E.characteristic
    arrs = [flatten(g) for g in gens]
    N = arrs[0].shape[0]
    keyer = _Keyer(p, N)
    elements, index, parent, label, edges, truncated = _bfs(arrs, p, cap, keyer, True, True)
    EG = EnumeratedGroup(p, N, arrs, elements, index, np.array(parent), label,
                         np.array(edges, dtype=np.int64).reshape(len(elements), len(arrs)),
                         complete=not truncated, keyer=keyer)
    if truncated:
        raise ImageTooLarge(EG.order, cap, EG)
    return EG


# ---------------------------------------------------------------------------
# presentations


def free_reduce(w) -> Word:
    out: list = []
    for j, e in w:
        if out and out[-1][0] == j and out[-1][1] == -e:
            out.pop()
        else:
            out.append((j, e))
    return tuple(out)


def invert_word(w: Word) -> Word:
    return tuple((j, -e) for j, e in reversed(w))


@dataclass
class Presentation:
    """Relators of the Cayley-graph presentation, one per non-tree edge.

    ``edges[k] = (u, j, v)`` is the Cayley edge producing ``relators[k]``.
    """

    ngens: int
    relators: list
    edges: list


def _is_tree_edge(EG: EnumeratedGroup, u: int, j: int, v: int) -> bool:
    return (EG.parent[v] == u and EG.label[v] == (j, 1)) or (EG.parent[u] == v and EG.label[u] == (j, -1))


def cayley_presentation(EG: EnumeratedGroup, check: bool = True) -> Presentation:
    """Relators ``word(u) g_j word(v)^-1`` for every non-tree edge ``u -> v = u g_j``."""
    relators, edges, seen = [], [], set()
    words: dict = {}

    def word(i):
        w = words.get(i)
        if w is None:
            w = words[i] = EG.word(i)
        return w

    for u in range(EG.order):
        for j in range(EG.ngens):
            v = int(EG.edges[u, j])
            if v < 0 or _is_tree_edge(EG, u, j, v):
                continue
            rel = free_reduce(word(u) + ((j, 1),) + invert_word(word(v)))
            if rel in seen:
                continue
            seen.add(rel)
            relators.append(rel)
            edges.append((u, j, v))
    if check:
        for rel in relators[:: max(1, len(relators) // 200)]:
            if not EG.is_identity(EG.evaluate(rel)):
                raise AssertionError("relator does not evaluate to the identity")
    return Presentation(EG.ngens, relators, edges)


def evaluate_word(w: Word, S: list, S_inv: list | None = None) -> Matrix:
    """Evaluate a word at the original generators by iterated multiplication."""
    if S_inv is None:
        S_inv = [g.inverse() for g in S]
    a = Matrix.identity(S[0].field, S[0].n)
    for j, e in w:
        a = a * (S[j] if e == 1 else S_inv[j])
    return a


# ---------------------------------------------------------------------------
# kernel generators


@dataclass
class KernelData:
    """Normal generators of the congruence kernel plus provenance counts."""

    whom: object
    image: EnumeratedGroup
    presentation: Presentation
    generators: list
    raw_count: int
    complete: bool
    cap: int
    timings: dict

    def summary(self) -> dict:
        return {
            "image_order": self.image.order,
            "image_complete": self.complete,
            "relator_count": len(self.presentation.relators),
            "kernel_generators_before_dedup": self.raw_count,
            "kernel_generators_after_dedup": len(self.generators),
            "cap": self.cap,
        }


def compute_kernel(S: list, whom, cap: int = DEFAULT_CAP, allow_partial: bool = False,
                   verify: bool = True) -> KernelData:
    """Enumerate the image, read off relators and evaluate them at ``S``.

    Relator ``word(u) g_j word(v)^-1`` is evaluated as ``L[u] g_j L[v]^-1``
    where ``L`` holds the tree-path products, built once per element.  With
    ``allow_partial`` a capped enumeration still yields valid (but possibly
    insufficient) kernel elements from the explored part of the Cayley graph.
    """
    t0 = time.perf_counter()
    images = [whom(g) for g in S]
    try:
        EG = enumerate_image(images, cap)
        complete = True
    except ImageTooLarge as exc:
        if not allow_partial:
            raise
        EG, complete = exc.partial, False
    t1 = time.perf_counter()
    pres = cayley_presentation(EG)
    t2 = time.perf_counter()

    S_inv = [g.inverse() for g in S]
    F, n = S[0].field, S[0].n
    ident = Matrix.identity(F, n)
    lift = [ident] * EG.order
    lift_inv = [ident] * EG.order
    for v in range(1, EG.order):
        u = int(EG.parent[v])
        j, e = EG.label[v]
        step, step_inv = (S[j], S_inv[j]) if e == 1 else (S_inv[j], S[j])
        lift[v] = lift[u] * step
        lift_inv[v] = step_inv * lift_inv[u]

    K, seen, raw = [], set(), 0
    for u, j, v in pres.edges:
        k = lift[u] * S[j] * lift_inv[v]
        if k.is_identity():
            continue
        raw += 1
        if k in seen:
            continue
        seen.add(k)
        K.append(k)
    t3 = time.perf_counter()
    if verify:
        tgt_ident = Matrix.identity(whom.target, n)
        for k in K:
            if whom(k) != tgt_ident:
                raise AssertionError("kernel generator does not map to the identity")
    timings = {"enumerate": t1 - t0, "presentation": t2 - t1, "evaluate_relators": t3 - t2,
               "verify_kernel": time.perf_counter() - t3}
    log.info("image order %d, %d relators, %d kernel generators", EG.order, len(pres.relators), len(K))
    return KernelData(whom, EG, pres, K, raw, complete, cap, timings)


def normal_generators(S: list, whom, cap: int = DEFAULT_CAP) -> list:
    """Normal generators of the congruence kernel ``ker(whom) ∩ <S>``."""
    return compute_kernel(S, whom, cap).generators


# ---------------------------------------------------------------------------
# finite group analysis


class _Ops:
    def __init__(self, EG: EnumeratedGroup):
        self.p, self.N = EG.p, EG.N
        self.keyer = EG.keyer or _Keyer(EG.p, EG.N)
        self.ident = np.eye(EG.N, dtype=np.int64)

    def mul(self, a, b):
        return a @ b % self.p

    def inv(self, a):
        return mod_inverse(a, self.p)

    def key(self, a):
        return self.keyer.key(a)

    def is_identity(self, a) -> bool:
        return bool(np.array_equal(a, self.ident))

    def comm(self, a, b):
        return self.inv(a) @ self.inv(b) % self.p @ a % self.p @ b % self.p

    def closure(self, gens: list) -> dict:
        if not gens:
            return {self.key(self.ident): self.ident}
        elements, index, *_ = _bfs(gens, self.p, None, self.keyer, False, False)
        return index

    def normal_closure(self, gens: list, by: list) -> tuple[list, dict]:
        """Generators and key set of the normal closure of ``gens`` under ``by``."""
        ngens: list = []
        elems = self.closure([])
        for g in gens:
            if self.key(g) not in elems:
                ngens.append(g)
                elems = self.closure(ngens)
        changed = True
        while changed:
            changed = False
            for c in list(ngens):
                for h in by:
                    x = self.inv(h) @ c % self.p @ h % self.p
                    if self.key(x) not in elems:
                        ngens.append(x)
                        elems = self.closure(ngens)
                        changed = True
        return ngens, elems

    def derived_orders(self, gens: list) -> list[int]:
        """Orders along the derived series of ``<gens>`` until it stabilizes."""
        gens = [g for g in gens if not self.is_identity(g)]
        order = len(self.closure(gens))
        orders = [order]
        while order > 1:
            comms = [self.comm(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
            comms = [c for c in comms if not self.is_identity(c)]
            gens, elems = self.normal_closure(comms, gens)
            if len(elems) == order:
                break
            order = len(elems)
            orders.append(order)
        return orders


def derived_series_orders(EG: EnumeratedGroup) -> list[int]:
    return _Ops(EG).derived_orders(list(EG.gens))


def is_solvable_finite(EG: EnumeratedGroup) -> bool:
    """True iff the derived series of the enumerated group reaches the identity."""
    return derived_series_orders(EG)[-1] == 1


def conjugacy_classes(EG: EnumeratedGroup) -> list[list[int]]:
    ops = _Ops(EG)
    gens = [g % EG.p for g in EG.gens]
    invs = [ops.inv(g) for g in gens]
    seen = np.zeros(EG.order, dtype=bool)
    classes = []
    for i in range(EG.order):
        if seen[i]:
            continue
        seen[i] = True
        cls, stack = [i], [i]
        while stack:
            x = EG.elements[stack.pop()]
            for g, gi in zip(gens, invs):
                y = EG.index[ops.key(gi @ x % EG.p @ g % EG.p)]
                if not seen[y]:
                    seen[y] = True
                    cls.append(y)
                    stack.append(y)
        classes.append(cls)
    return classes


def solvable_radical_index(EG: EnumeratedGroup, max_order: int = 50000) -> int:
    """Index of the subgroup generated by elements with solvable normal closure."""
    if EG.order > max_order:
        raise ValueError(f"solvable radical computation limited to order {max_order}")
    ops = _Ops(EG)
    radical_gens: list = []
    radical = ops.closure([])
    for cls in conjugacy_classes(EG):
        x = EG.elements[cls[0]]
        if ops.key(x) in radical:
            continue
        members = [EG.elements[i] for i in cls]
        ngens, _ = ops.normal_closure(members, [])
        if ops.derived_orders(ngens)[-1] == 1:
            radical_gens.append(x)
            radical_gens_closed, radical = ops.normal_closure(radical_gens, [g % EG.p for g in EG.gens])
            radical_gens = radical_gens_closed
    return EG.order // len(radical)
