"""Dense univariate polynomials over an exact field.

A polynomial is a tuple of coefficients, constant term first, with no
trailing zeros; ``()`` is the zero polynomial.  Every function takes the
coefficient field ``F`` as its first argument (see :mod:`titsalt.fields`).
"""

from __future__ import annotations

import random
from math import gcd as igcd

from gmpy2 import mpq

Poly = tuple

# ---------------------------------------------------------------------------
# basic arithmetic


def trim(F, a) -> Poly:
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return tuple(a)


def degree(a: Poly) -> int:
    return len(a) - 1


def lead(a: Poly):
    return a[-1]


def const(F, c) -> Poly:
    return () if F.is_zero(c) else (c,)


def one(F) -> Poly:
    return (F.one,)


def gen(F) -> Poly:
    return (F.zero, F.one)


def add(F, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    fadd = F.add
    for i, c in enumerate(b):
        out[i] = fadd(out[i], c)
    return trim(F, out) if len(a) == len(b) else tuple(out)


def neg(F, a: Poly) -> Poly:
    return tuple(F.neg(c) for c in a)


def sub(F, a: Poly, b: Poly) -> Poly:
    return add(F, a, neg(F, b))


def scale(F, a: Poly, c) -> Poly:
    if F.is_zero(c):
        return ()
    return trim(F, [F.mul(x, c) for x in a])


def mul(F, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    fadd, fmul, is_zero = F.add, F.mul, F.is_zero
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = fadd(out[i + j], fmul(x, y))
    return trim(F, out)


def shift(F, a: Poly, k: int) -> Poly:
    return (F.zero,) * k + a if a else ()


def divmod_(F, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), a
    inv_lc = F.inv(b[-1])
    r = list(a)
    q = [F.zero] * (len(a) - db)
    fsub, fmul = F.sub, F.mul
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if F.is_zero(c):
            continue
        c = fmul(c, inv_lc)
        q[k - db] = c
        for j in range(db + 1):
            r[k - db + j] = fsub(r[k - db + j], fmul(c, b[j]))
    return trim(F, q), trim(F, r[:db])


def rem(F, a: Poly, b: Poly) -> Poly:
    return divmod_(F, a, b)[1]


def exquo(F, a: Poly, b: Poly) -> Poly:
    q, r = divmod_(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def monic(F, a: Poly) -> Poly:
    if not a or F.eq(a[-1], F.one):
        return a
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a: Poly, b: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) == ()``."""
    while b:
        a, b = b, rem(F, a, b)
    return monic(F, a)


def xgcd(F, a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = one(F), ()
    t0, t1 = (), one(F)
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return (), (), ()
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def lcm(F, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    return monic(F, mul(F, exquo(F, a, gcd(F, a, b)), b))


def deriv(F, a: Poly) -> Poly:
    return trim(F, [F.mul(F.from_int(i), c) for i, c in enumerate(a)][1:])


def evaluate(F, a: Poly, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def evaluate_mapped(E, a: Poly, x, phi):
    """Evaluate ``a`` at ``x`` in field ``E`` after mapping coefficients by ``phi``."""
    acc = E.zero
    for c in reversed(a):
        acc = E.add(E.mul(acc, x), phi(c))
    return acc


def powmod(F, a: Poly, e: int, m: Poly) -> Poly:
    result = rem(F, one(F), m)
    base = rem(F, a, m)
    while e:
        if e & 1:
            result = rem(F, mul(F, result, base), m)
        e >>= 1
        if e:
            base = rem(F, mul(F, base, base), m)
    return result


def from_ints(F, coeffs) -> Poly:
    return trim(F, [F.from_int(int(c)) for c in coeffs])


# ---------------------------------------------------------------------------
# integer polynomials


def resultant(F, a: Poly, b: Poly):
    """Resultant over a field by the Euclidean recurrence."""
    if not a or not b:
        return F.zero
    res = F.one
    while len(b) > 1:
        da, db = len(a) - 1, len(b) - 1
        r = rem(F, a, b)
        if not r:
            return F.zero
        if da * db % 2:
            res = F.neg(res)
        res = F.mul(res, F.pow(b[-1], da - (len(r) - 1)))
        a, b = b, r
    return F.mul(res, F.pow(b[0], len(a) - 1))


def discriminant(f) -> int:
    """Discriminant of a monic integer polynomial given low-to-high."""
    from .fields import QQ

    f = from_ints(QQ, f)
    if not f or f[-1] != 1:
        raise ValueError("discriminant needs a monic polynomial")
    k = len(f) - 1
    if k == 1:
        return 1
    r = resultant(QQ, f, deriv(QQ, f))
    sign = -1 if (k * (k - 1) // 2) % 2 else 1
    assert r.denominator == 1
    return sign * int(r.numerator)


def cyclotomic(c: int) -> tuple[int, ...]:
    """Integer coefficients of the c-th cyclotomic polynomial."""
    from .fields import QQ

    num = from_ints(QQ, [-1] + [0] * (c - 1) + [1])
    for d in range(1, c):
        if c % d == 0:
            num = exquo(QQ, num, from_ints(QQ, cyclotomic(d)))
    return tuple(int(x) for x in num)


def cyclotomic_index(f) -> int | None:
    """Return c when ``f`` equals the c-th cyclotomic polynomial, else None."""
    f = tuple(int(x) for x in f)
    k = len(f) - 1
    for c in range(1, 2 * k * k + 3):
        if _totient(c) == k and cyclotomic(c) == f:
            return c
    return None


def _totient(n: int) -> int:
    return sum(1 for i in range(1, n + 1) if igcd(i, n) == 1)


def content_denominator(F, a: Poly) -> int:
    """lcm of coefficient denominators for a polynomial over QQ."""
    d = 1
    for c in a:
        d = d * c.denominator // igcd(d, int(c.denominator))
    return int(d)


# ---------------------------------------------------------------------------
# factorization over finite fields


def squarefree_decomposition(F, f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree factorization of a monic polynomial over a finite field."""
    p = F.characteristic
    out: list[tuple[Poly, int]] = []
    c = gcd(F, f, deriv(F, f))
    w = exquo(F, f, c)
    i = 1
    while len(w) > 1:
        y = gcd(F, w, c)
        fac = exquo(F, w, y)
        if len(fac) > 1:
            out.append((fac, i))
        w, c = y, exquo(F, c, y)
        i += 1
    if len(c) > 1:
        root = trim(F, [F.pth_root(c[j]) for j in range(0, len(c), p)])
        out.extend((g, m * p) for g, m in squarefree_decomposition(F, root))
    return out


def distinct_degree(F, f: Poly) -> list[tuple[Poly, int]]:
    q = F.order
    x = gen(F)
    out = []
    rest = f
    h = rem(F, x, rest)
    i = 1
    while len(rest) - 1 >= 2 * i:
        h = powmod(F, h, q, rest)
        g = gcd(F, rest, sub(F, h, x))
        if len(g) > 1:
            out.append((g, i))
            rest = exquo(F, rest, g)
            h = rem(F, h, rest)
        i += 1
    if len(rest) > 1:
        out.append((rest, len(rest) - 1))
    return out


def equal_degree(F, f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    q = F.order
    while True:
        a = trim(F, [F.random(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        if q % 2:
            b = sub(F, powmod(F, a, (q**d - 1) // 2, f), one(F))
        else:
            b, t = (), a
            for _ in range(F.prime_degree * d):
                b = add(F, b, t)
                t = rem(F, mul(F, t, t), f)
        g = gcd(F, b, f)
        if 1 < len(g) < len(f):
            return equal_degree(F, g, d, rng) + equal_degree(F, exquo(F, f, g), d, rng)


def sort_key(F, g: Poly):
    return (len(g), tuple(F.sort_key(c) for c in reversed(g)))


def factor(F, f: Poly, seed: int = 0) -> list[Poly]:
    """Monic irreducible factors of ``f`` over a finite field, with multiplicity.

    Factors are sorted by degree and then lexicographically by coefficients
    (leading coefficient first).  Randomness is drawn from ``random.Random(seed)``.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    f = monic(F, f)
    rng = random.Random(seed)
    out: list[Poly] = []
    for g, m in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for e in equal_degree(F, h, d, rng):
                out.extend([e] * m)
    out.sort(key=lambda g: sort_key(F, g))
    return out


def is_irreducible(F, f: Poly) -> bool:
    if len(f) < 2:
        return False
    f = monic(F, f)
    if len(gcd(F, f, deriv(F, f))) > 1:
        return False
    dd = distinct_degree(F, f)
    return len(dd) == 1 and dd[0][1] == len(f) - 1


def first_irreducible(F, d: int) -> Poly:
    """Smallest monic irreducible polynomial of degree d over a finite field."""
    q = F.order
    for idx in range(q**d):
        coeffs = []
        k = idx
        for _ in range(d):
            k, r = divmod(k, q)
            coeffs.append(F.element(r))
        f = tuple(coeffs) + (F.one,)
        if d == 1 or (not F.is_zero(f[0]) and is_irreducible(F, f)):
            return f
    raise AssertionError("no irreducible polynomial found")


def to_qq(coeffs) -> Poly:
    from .fields import QQ

    return trim(QQ, [mpq(c) for c in coeffs])
