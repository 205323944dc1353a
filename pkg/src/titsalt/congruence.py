"""Congruence homomorphisms onto finite matrix groups.

Four constructions, by the shape of the entry field F:

* ``psi1``  F = Q: reduction modulo an odd prime p not dividing mu.
* ``psi2``  F = Q(a): coefficientwise reduction mod p, a sent to a root of
  an irreducible factor of the minimal polynomial mod p.
* ``psi3``  F = P(x): substitute x = alpha with mu(alpha) != 0, then reduce
  as above when char F = 0 (p > n).
* ``psi4``  F = P(x)(b): substitute, reduce the minimal polynomial of b and
  send b to a root of one of its irreducible factors.

The kernel ideal determines which admissibility clause certifies the map;
the facts checked are stored on the certificate and can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Callable

from gmpy2 import is_prime

from . import poly as P
from .fields import (
    QQ,
    AlgFunctionField,
    Field,
    FiniteExtension,
    FunctionField,
    NumberField,
    PrimeField,
    RingInfo,
    clear_denominators,
    constant_denominator,
    discriminant,
    format_poly,
)
from .matrix import Matrix


class WHomomorphismUnavailable(ValueError):
    """No admissible congruence map for this characteristic and dimension."""


class CertificateViolation(ArithmeticError):
    """An entry's denominator vanishes under the congruence map."""


@dataclass(frozen=True)
class AdmissibilityCertificate:
    """``clause`` is ``"i"`` (char p > n), ``"ii"`` (Dedekind, p odd, unramified)
    or ``"small-characteristic"`` (needs the normal-generator check)."""

    clause: str
    facts: tuple[tuple[str, bool], ...]

    def ok(self) -> bool:
        return all(v for _, v in self.facts)

    def to_json(self) -> dict:
        return {"clause": self.clause, "checks": {k: v for k, v in self.facts}}


@dataclass(frozen=True)
class WHomomorphism:
    variant: str
    source: Field
    target: Field
    p: int
    n: int
    ring: RingInfo
    certificate: AdmissibilityCertificate
    point: str | None = None
    factor: str | None = None
    sw: bool = True
    elem_map: Callable = field(repr=False, compare=False, default=None)

    def __call__(self, g: Matrix) -> Matrix:
        return apply_whom(self, g)

    @property
    def small_characteristic(self) -> bool:
        return self.certificate.clause == "small-characteristic"

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "p": self.p,
            "point": self.point,
            "factor": self.factor,
            "target": self.target.describe(),
            "target_order": self.target.order,
            "mu": self.ring.mu_str,
            **self.certificate.to_json(),
        }


def apply_whom(psi: WHomomorphism, g: Matrix) -> Matrix:
    return g.map(psi.elem_map, psi.target)


# ---------------------------------------------------------------------------
# choices


def _odd_primes():
    p = 3
    while True:
        if is_prime(p):
            yield p
        p += 2


def select_prime(mu: int, n: int, need_gt_n: bool = False, forbidden=frozenset(), avoid: int = 1) -> int:
    """Smallest odd prime not dividing ``mu`` or ``avoid``, outside ``forbidden``."""
    mu, avoid = abs(int(mu)), abs(int(avoid))
    for p in _odd_primes():
        if need_gt_n and p <= n:
            continue
        if p in forbidden or (mu and mu % p == 0) or (avoid and avoid % p == 0):
            continue
        return p
    raise AssertionError("unreachable")


def _int_search():
    yield 0
    for k in count(1):
        yield k
        yield -k


def candidate_points(mu, P_field: Field):
    """Non-roots of ``mu`` in search order, as ``(E, alpha)`` with alpha in E >= P."""
    if not P_field.is_finite:
        for k in _int_search():
            a = P_field.from_int(k)
            if not P_field.is_zero(P.evaluate(P_field, mu, a)):
                yield P_field, a
        return
    for j in count(1):
        if j == 1:
            E, emb = P_field, (lambda c: c)
        else:
            E = FiniteExtension(P_field, P.first_irreducible(P_field, j), var="w", check=False)
            emb = E.embed
        for idx in range(E.order):
            a = E.element(idx)
            if not E.is_zero(P.evaluate_mapped(E, mu, a, emb)):
                yield E, a


def select_point(mu, P_field: Field):
    """First ``alpha`` with ``mu(alpha) != 0``: 0, 1, -1, 2, ... or in GF(q), GF(q^2), ..."""
    return next(candidate_points(mu, P_field))


# ---------------------------------------------------------------------------
# element maps


def _reduce_q(p: int):
    def red(c):
        d = int(c.denominator) % p
        if not d:
            raise CertificateViolation(f"denominator of {c} vanishes mod {p}")
        return int(c.numerator) * pow(d, -1, p) % p

    return red


def _root_of_factor(E: Field, g, var: str):
    """Field containing a root of the monic irreducible ``g`` over ``E``, the root, and E's embedding."""
    if len(g) == 2:
        return E, E.neg(g[0]), (lambda c: c)
    Ext = FiniteExtension(E, g, var=var, check=False)
    return Ext, Ext.gen, Ext.embed


def _number_field_map(K: NumberField, p: int, seed: int):
    """Reduction of Q(a) modulo p with a sent to a root of the first factor of f mod p."""
    Fp = PrimeField(p)
    factors = P.factor(Fp, P.from_ints(Fp, K.int_poly), seed)
    g = factors[0]
    E, root, emb = _root_of_factor(Fp, g, "z")
    red = _reduce_q(p)
    powers = [E.one]
    for _ in range(K.deg - 1):
        powers.append(E.mul(powers[-1], root))

    def phi(c):
        acc = E.zero
        for b, r in zip(c, powers):
            if b:
                acc = E.add(acc, E.mul(emb(red(b)), r))
        return acc

    return E, phi, format_poly(Fp, g, "t")


def _function_field_map(L: FunctionField, E: Field, phi_base, a):
    def phi(c):
        num, den = c
        d = P.evaluate_mapped(E, den, a, phi_base)
        if E.is_zero(d):
            raise CertificateViolation("denominator vanishes at the substitution point")
        return E.div(P.evaluate_mapped(E, num, a, phi_base), d)

    return phi


def _alg_map(F: AlgFunctionField, E: Field, phi_L, seed: int):
    ftil = P.trim(E, [phi_L(c) for c in F.modulus])
    g = P.factor(E, ftil, seed)[0]
    Ext, root, emb = _root_of_factor(E, g, "u")
    powers = [Ext.one]
    for _ in range(F.deg - 1):
        powers.append(Ext.mul(powers[-1], root))

    def phi(c):
        acc = Ext.zero
        for ci, r in zip(c, powers):
            if not F.base.is_zero(ci):
                acc = Ext.add(acc, Ext.mul(emb(phi_L(ci)), r))
        return acc

    return Ext, phi, format_poly(E, g, "t")


def _maps_all(phi, mats) -> bool:
    try:
        for g in mats:
            for e in g.entries():
                phi(e)
    except (CertificateViolation, ZeroDivisionError):
        return False
    return True


# ---------------------------------------------------------------------------
# construction


def build_whom(S, descriptor: Field | None = None, *, prime: int | None = None, point: str | None = None,
               force_gt_n: bool = False, seed: int = 0, max_retries: int = 50) -> WHomomorphism:
    """Construct an admissible congruence homomorphism for ``<S>``."""
    S = list(S)
    F = descriptor if descriptor is not None else S[0].field
    n = S[0].n
    ring = clear_denominators(S)
    mats = S + [g.inverse() for g in S]

    if prime is not None and not is_prime(prime):
        raise ValueError(f"{prime} is not prime")

    if F.kind == "rationals":
        p = prime or select_prime(ring.mu, n, force_gt_n)
        if ring.mu % p == 0:
            raise ValueError(f"prime {p} divides the denominator datum {ring.mu}")
        cert = _char0_certificate(p, n, [("p does not divide mu", True)], [("p odd", p % 2 == 1)])
        psi = WHomomorphism("psi1", F, PrimeField(p), p, n, ring, cert, elem_map=_reduce_q(p))
        return _checked(psi, mats)

    if F.kind == "number_field":
        c = P.cyclotomic_index(F.int_poly)
        avoid = c if c is not None else discriminant(F.int_poly)
        p = prime or select_prime(ring.mu, n, force_gt_n, avoid=avoid)
        if ring.mu % p == 0:
            raise ValueError(f"prime {p} divides the denominator datum {ring.mu}")
        if c is not None:
            ded = [("p odd", p % 2 == 1), (f"p does not divide lcm(mu, {c})", (ring.mu * c) % p != 0)]
        else:
            ded = [("p odd", p % 2 == 1), ("p does not divide disc f", avoid % p != 0)]
        E, phi, fac = _number_field_map(F, p, seed)
        cert = _char0_certificate(p, n, [("p does not divide mu", True)], ded)
        psi = WHomomorphism("psi2", F, E, p, n, ring, cert, factor=fac, elem_map=phi)
        return _checked(psi, mats)

    if F.kind in ("function_field", "alg_function_field"):
        return _build_function_field(F, S, mats, n, ring, prime, point, seed, max_retries)

    raise WHomomorphismUnavailable(f"no congruence construction for {F.describe()}")


def _char0_certificate(p, n, map_facts, dedekind_facts=None) -> AdmissibilityCertificate:
    """Clause (ii) when the Dedekind facts hold, else clause (i) when p > n."""
    map_facts = tuple(map_facts)
    if dedekind_facts is not None and all(v for _, v in dedekind_facts):
        extra = (("p > n", True),) if p > n else ()
        return AdmissibilityCertificate("ii", map_facts + tuple(dedekind_facts) + extra)
    if p > n:
        return AdmissibilityCertificate("i", map_facts + (("p > n", True),))
    return AdmissibilityCertificate("small-characteristic", map_facts + (("p > n", False),))


def _checked(psi: WHomomorphism, mats) -> WHomomorphism:
    if not _maps_all(psi.elem_map, mats):
        raise CertificateViolation(f"{psi.variant} with p = {psi.p} is undefined on some generator entry")
    return psi


def _build_function_field(F, S, mats, n, ring, prime, point, seed, max_retries):
    L = F if isinstance(F, FunctionField) else F.base
    Pf = L.base
    char = F.characteristic
    mu = ring.mu
    variant = "psi3" if isinstance(F, FunctionField) else "psi4"

    if point is not None:
        a0 = Pf.parse(point)
        if Pf.is_zero(P.evaluate(Pf, mu, a0)):
            raise ValueError(f"substitution point {point} is a root of mu = {ring.mu_str}")
        points = iter([(Pf, a0)])
    else:
        points = candidate_points(mu, Pf)

    for attempt, (Ealpha, alpha) in enumerate(points):
        if attempt >= max_retries:
            break
        if char:
            if prime is not None and prime != char:
                raise ValueError(f"prime override {prime} differs from the characteristic {char}")
            p = char
            emb = (lambda c: c) if Ealpha is Pf else Ealpha.embed
            phi_L = _function_field_map(L, Ealpha, emb, alpha)
            facts = [("char R = p > n", p > n), ("mu(alpha) != 0", True)]
            E, a_fmt = Ealpha, Ealpha.format(alpha)
            candidates = [(p, E, phi_L, facts)]
        else:
            candidates = _char0_candidates(L, Pf, alpha, ring, n, prime, seed)
            a_fmt = Pf.format(alpha)
        for p, E, phi_L, facts in candidates:
            factor = None
            phi = phi_L
            if variant == "psi4":
                try:
                    E, phi, factor = _alg_map(F, E, phi_L, seed)
                except (CertificateViolation, ZeroDivisionError):
                    continue
            if not _maps_all(phi, mats):
                continue
            cert = _char0_certificate(p, n, facts) if char == 0 else _char_p_certificate(facts, p, n)
            return WHomomorphism(variant, F, E, p, n, ring, cert, point=a_fmt, factor=factor, elem_map=phi)
    raise WHomomorphismUnavailable("no admissible substitution point found within the retry bound")


def _char_p_certificate(facts, p, n):
    clause = "i" if p > n else "small-characteristic"
    return AdmissibilityCertificate(clause, tuple(facts))


def _char0_candidates(L, Pf, alpha, ring, n, prime, seed):
    """Primes p > n for a point alpha over Q or a number field, with the composed map."""
    mu_a = P.evaluate(Pf, ring.mu, alpha)
    if Pf is QQ:
        avoid = int(mu_a.numerator) * int(mu_a.denominator) * ring.const_den
    else:
        avoid = constant_denominator(Pf, mu_a) * ring.const_den
    tried = set()
    for _ in range(20):
        if prime is not None:
            p = prime
            if prime in tried:
                return
        else:
            p = select_prime(1, n, need_gt_n=True, forbidden=tried, avoid=avoid)
        tried.add(p)
        if Pf is QQ:
            E, phi_P = PrimeField(p), _reduce_q(p)
        else:
            E, phi_P, _ = _number_field_map(Pf, p, seed)
        try:
            a = phi_P(alpha)
            ok = not E.is_zero(phi_P(mu_a))
        except CertificateViolation:
            continue
        if not ok:
            continue
        facts = [("mu(alpha) != 0 mod p", True),
                 ("p does not divide constant denominators", ring.const_den % p != 0),
                 ("p odd (clause ii via composition)", p % 2 == 1)]
        yield p, E, _function_field_map(L, E, phi_P, a), facts


def verify_certificate(psi: WHomomorphism, S) -> bool:
    """Replay the stored checks against freshly recomputed data."""
    ring = clear_denominators(list(S))
    if ring.mu != psi.ring.mu:
        return False
    p, n = psi.p, psi.n
    for name, value in psi.certificate.facts:
        if name == "p odd":
            ok = p % 2 == 1
        elif name == "p does not divide mu":
            ok = ring.mu % p != 0
        elif name == "p does not divide disc f":
            ok = discriminant(psi.source.int_poly) % p != 0
        elif name.startswith("p does not divide lcm(mu, "):
            c = int(name.rsplit(" ", 1)[1].rstrip(")"))
            ok = ring.mu * c % p != 0
        elif name == "p odd (clause ii via composition)":
            ok = p % 2 == 1
        elif name in ("p > n", "char R = p > n"):
            ok = p > n
        elif name == "p does not divide constant denominators":
            ok = ring.const_den % p != 0
        else:
            ok = value
        if ok != value:
            return False
    mats = list(S) + [g.inverse() for g in S]
    return _maps_all(psi.elem_map, mats)
