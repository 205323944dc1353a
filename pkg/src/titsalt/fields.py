"""Exact fields: Q, number fields, finite fields, univariate function fields
and their finite (algebraic) extensions.

Elements are plain immutable Python values (``mpq``, ``int``, tuples) so
they hash and compare by canonical coordinates; all arithmetic goes
through the owning :class:`Field` object.

=====================  ==========================================
field                  element representation
=====================  ==========================================
``Rationals``          ``gmpy2.mpq``
``PrimeField(p)``      ``int`` in ``range(p)``
``SimpleExtension``    coefficient tuple on the power basis
``FunctionField``      ``(numerator, denominator)`` polynomials,
                       coprime, denominator monic
=====================  ==========================================
"""

from __future__ import annotations

import ast
import operator
import re
from dataclasses import dataclass
from functools import reduce
from math import gcd as igcd

import numpy as np
from gmpy2 import mpq

from . import poly as P


class FieldError(ValueError):
    """Invalid field description or element."""


def _ilcm(a: int, b: int) -> int:
    return abs(a * b) // igcd(a, b) if a and b else 0


_SIMPLE = re.compile(r"-?\d+(/\d+)?")
_ATOM = re.compile(r"-?(\d+(/\d+)?|[A-Za-z_]\w*(\^\d+)?)")


def format_poly(F, coeffs, var: str) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if F.is_zero(c):
            continue
        cs = F.format(c)
        mon = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mon:
            term = cs
        elif cs == "1":
            term = mon
        elif cs == "-1":
            term = "-" + mon
        elif _SIMPLE.fullmatch(cs):
            term = f"{cs}*{mon}"
        else:
            term = f"({cs})*{mon}"
        terms.append(term)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


class Field:
    """Common interface; subclasses bind fast arithmetic callables."""

    kind = ""
    characteristic = 0
    is_finite = False

    def is_zero(self, a) -> bool:
        return not a

    def eq(self, a, b) -> bool:
        return a == b

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def dot(self, r, c):
        return reduce(self.add, map(self.mul, r, c), self.zero)

    def canonicalize(self, a):
        return a

    def names(self) -> dict:
        return {}

    def parse(self, text: str):
        return parse_element(self, text)

    def format(self, a) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.describe()

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(repr(self.to_json()))


class Rationals(Field):
    kind = "rationals"

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)
        self.add = operator.add
        self.sub = operator.sub
        self.mul = operator.mul
        self.neg = operator.neg

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def dot(self, r, c):
        return sum(map(operator.mul, r, c), self.zero)

    def from_int(self, k):
        return mpq(k)

    def canonicalize(self, a):
        return mpq(a)

    def denominator(self, a) -> int:
        return int(a.denominator)

    def format(self, a) -> str:
        return str(a)

    def describe(self) -> str:
        return "Q"

    def to_json(self) -> dict:
        return {"type": "rationals"}


QQ = Rationals()


class _FiniteMixin:
    is_finite = True

    def elements(self):
        return (self.element(i) for i in range(self.order))

    def random(self, rng):
        return self.element(rng.randrange(self.order))

    def sort_key(self, a) -> int:
        return self.index(a)

    def pth_root(self, a):
        return self.pow(a, self.order // self.characteristic)

    def prime_basis(self) -> list:
        return [self.element(self.characteristic**k) for k in range(self.prime_degree)]

    def to_prime_block(self, a) -> np.ndarray:
        """Matrix of right multiplication by ``a`` over the prime field (rows = basis images)."""
        return np.array([self.prime_coords(self.mul(b, a)) for b in self.prime_basis()], dtype=np.int64)


class PrimeField(_FiniteMixin, Field):
    kind = "finite_field"

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = self.characteristic = self.order = p
        self.prime_degree = 1
        self.zero, self.one = 0, 1
        self.add = lambda a, b: (a + b) % p
        self.sub = lambda a, b: (a - b) % p
        self.mul = lambda a, b: a * b % p
        self.neg = lambda a: -a % p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p) if e >= 0 else pow(self.inv(a), -e, self.p)

    def dot(self, r, c):
        return sum(map(operator.mul, r, c)) % self.p

    def from_int(self, k):
        return int(k) % self.p

    def canonicalize(self, a):
        return int(a) % self.p

    def element(self, i: int) -> int:
        return i

    def index(self, a) -> int:
        return a

    def prime_coords(self, a) -> list[int]:
        return [a]

    def to_prime_block(self, a):
        return np.array([[a]], dtype=np.int64)

    def format(self, a) -> str:
        return str(a)

    def describe(self) -> str:
        return f"GF({self.p})"

    def to_json(self) -> dict:
        return {"type": "finite_field", "p": self.p}


class SimpleExtension(Field):
    """``base[t] / (modulus)`` for a monic irreducible ``modulus``."""

    kind = "extension"

    def __init__(self, base: Field, modulus, var: str):
        modulus = P.trim(base, modulus)
        if len(modulus) < 3:
            raise FieldError("extension modulus must have degree at least 2")
        if not base.eq(modulus[-1], base.one):
            raise FieldError("extension modulus must be monic")
        self.base = base
        self.modulus = modulus
        self.deg = len(modulus) - 1
        self.var = var
        self.characteristic = base.characteristic
        self.zero = ()
        self.one = (base.one,)
        self.gen = (base.zero, base.one)

    def add(self, a, b):
        return P.add(self.base, a, b)

    def sub(self, a, b):
        return P.sub(self.base, a, b)

    def neg(self, a):
        return P.neg(self.base, a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        prod = P.mul(self.base, a, b)
        return P.rem(self.base, prod, self.modulus) if len(prod) > self.deg else prod

    def dot(self, r, c):
        B = self.base
        acc = ()
        for a, b in zip(r, c):
            if a and b:
                acc = P.add(B, acc, P.mul(B, a, b))
        return P.rem(B, acc, self.modulus) if len(acc) > self.deg else acc

    def inv(self, a):
        if not a:
            raise ZeroDivisionError(f"division by zero in {self.describe()}")
        g, s, _ = P.xgcd(self.base, a, self.modulus)
        if len(g) != 1:
            raise FieldError(f"modulus of {self.describe()} is reducible")
        return s

    def from_int(self, k):
        return P.const(self.base, self.base.from_int(k))

    def embed(self, c):
        return P.const(self.base, c)

    def canonicalize(self, a):
        return P.rem(self.base, P.trim(self.base, [self.base.canonicalize(c) for c in a]), self.modulus)

    def coords(self, a) -> list:
        return list(a) + [self.base.zero] * (self.deg - len(a))

    def from_coords(self, cs):
        return P.trim(self.base, cs)

    def names(self) -> dict:
        out = {k: self.embed(v) for k, v in self.base.names().items()}
        out[self.var] = self.gen
        return out

    def format(self, a) -> str:
        return format_poly(self.base, a, self.var)

    def modulus_str(self) -> str:
        return format_poly(self.base, self.modulus, "t")

    def describe(self) -> str:
        return f"{self.base.describe()}[{self.var}]/({format_poly(self.base, self.modulus, self.var)})"

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "base": self.base.to_json(),
            "poly": [self.base.format(c) for c in self.modulus],
            "var": self.var,
        }


class NumberField(SimpleExtension):
    """Q(a) with a monic irreducible integer minimal polynomial, power-basis coordinates."""

    kind = "number_field"

    def __init__(self, poly, var: str = "a", check: bool = True):
        ints = [int(c) for c in poly]
        if any(mpq(c) != int(mpq(c)) for c in poly):
            raise FieldError("number field polynomial must have integer coefficients")
        if len(ints) < 3:
            raise FieldError("number field polynomial must have degree at least 2")
        if ints[-1] != 1:
            raise FieldError("number field polynomial must be monic")
        if check:
            import sympy

            t = sympy.Symbol("t")
            if not sympy.Poly(list(reversed(ints)), t, domain="QQ").is_irreducible:
                raise FieldError(f"{format_poly(QQ, P.to_qq(ints), 't')} is reducible over Q")
        super().__init__(QQ, P.to_qq(ints), var)
        self.int_poly = tuple(ints)

    def coord_denominator(self, a) -> int:
        d = 1
        for c in a:
            d = _ilcm(d, int(c.denominator))
        return d

    def describe(self) -> str:
        return f"Q({self.var}), {format_poly(QQ, self.modulus, self.var)} = 0"

    def to_json(self) -> dict:
        return {"type": "number_field", "poly": list(self.int_poly), "var": self.var}


class FiniteExtension(_FiniteMixin, SimpleExtension):
    """GF(q^d) as ``base[t]/(f)``; ``base`` may itself be an extension."""

    kind = "finite_field"

    def __init__(self, base: Field, modulus, var: str = "z", check: bool = True):
        super().__init__(base, modulus, var)
        if check and not P.is_irreducible(base, self.modulus):
            raise FieldError(f"{format_poly(base, self.modulus, var)} is reducible over {base.describe()}")
        self.p = base.characteristic
        self.order = base.order**self.deg
        self.prime_degree = base.prime_degree * self.deg

    def element(self, i: int):
        q = self.base.order
        cs = []
        while i:
            i, r = divmod(i, q)
            cs.append(self.base.element(r))
        return P.trim(self.base, cs)

    def index(self, a) -> int:
        q = self.base.order
        return sum(self.base.index(c) * q**i for i, c in enumerate(a))

    def prime_coords(self, a) -> list[int]:
        out = []
        for c in self.coords(a):
            out.extend(self.base.prime_coords(c))
        return out

    def describe(self) -> str:
        return f"GF({self.order})=" + super().describe()

    def to_json(self) -> dict:
        if isinstance(self.base, PrimeField):
            return {"type": "finite_field", "p": self.p, "poly": [int(c) for c in self.modulus], "var": self.var}
        return super().to_json()


class FunctionField(Field):
    """Rational functions ``P(x)`` in one variable over ``base``."""

    kind = "function_field"

    def __init__(self, base: Field, var: str = "x"):
        if isinstance(base, FunctionField) or isinstance(base, AlgFunctionField):
            raise FieldError("multivariate function fields are not supported")
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        b1 = (base.one,)
        self._poly_one = b1
        self.zero = ((), b1)
        self.one = (b1, b1)
        self.gen = ((base.zero, base.one), b1)

    def is_zero(self, a) -> bool:
        return not a[0]

    def _make(self, num, den):
        B = self.base
        if not num:
            return self.zero
        if len(den) > 1:
            g = P.gcd(B, num, den)
            if len(g) > 1:
                num, den = P.exquo(B, num, g), P.exquo(B, den, g)
        c = den[-1]
        if not B.eq(c, B.one):
            ci = B.inv(c)
            num, den = P.scale(B, num, ci), P.scale(B, den, ci)
        return (num, den)

    def add(self, a, b):
        B = self.base
        an, ad = a
        bn, bd = b
        if ad == bd:
            n = P.add(B, an, bn)
            if len(ad) == 1:
                return (n, ad) if n else self.zero
            return self._make(n, ad)
        return self._make(P.add(B, P.mul(B, an, bd), P.mul(B, bn, ad)), P.mul(B, ad, bd))

    def neg(self, a):
        return (P.neg(self.base, a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        B = self.base
        an, ad = a
        bn, bd = b
        if not an or not bn:
            return self.zero
        if len(ad) == 1 and len(bd) == 1:
            return (P.mul(B, an, bn), ad)
        g1 = P.gcd(B, an, bd)
        g2 = P.gcd(B, bn, ad)
        if len(g1) > 1:
            an, bd = P.exquo(B, an, g1), P.exquo(B, bd, g1)
        if len(g2) > 1:
            bn, ad = P.exquo(B, bn, g2), P.exquo(B, ad, g2)
        return self._make_monic(P.mul(B, an, bn), P.mul(B, ad, bd))

    def _make_monic(self, num, den):
        B = self.base
        c = den[-1]
        if not B.eq(c, B.one):
            ci = B.inv(c)
            num, den = P.scale(B, num, ci), P.scale(B, den, ci)
        return (num, den)

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError(f"division by zero in {self.describe()}")
        return self._make_monic(a[1], a[0])

    def from_int(self, k):
        return (P.const(self.base, self.base.from_int(k)), self._poly_one)

    def embed(self, c):
        return (P.const(self.base, c), self._poly_one)

    def from_poly(self, num):
        return (P.trim(self.base, num), self._poly_one)

    def canonicalize(self, a):
        B = self.base
        num = P.trim(B, [B.canonicalize(c) for c in a[0]])
        den = P.trim(B, [B.canonicalize(c) for c in a[1]])
        if not den:
            raise ZeroDivisionError("zero denominator")
        return self._make(num, den)

    def names(self) -> dict:
        out = {k: self.embed(v) for k, v in self.base.names().items()}
        out[self.var] = self.gen
        return out

    def format(self, a) -> str:
        num = format_poly(self.base, a[0], self.var)
        if len(a[1]) == 1:
            return num
        den = format_poly(self.base, a[1], self.var)
        wrap = lambda s: s if _ATOM.fullmatch(s) else f"({s})"  # noqa: E731
        return f"{wrap(num)}/{wrap(den)}"

    def describe(self) -> str:
        return f"{self.base.describe()}({self.var})"

    def to_json(self) -> dict:
        return {"type": "function_field", "base": self.base.to_json(), "var": self.var}


class AlgFunctionField(SimpleExtension):
    """Finite extension ``L(b)`` of a univariate function field ``L = P(x)``."""

    kind = "alg_function_field"

    def __init__(self, base: FunctionField, modulus, var: str = "b", check: bool = True):
        if not isinstance(base, FunctionField):
            raise FieldError("algebraic function field needs a univariate function field base")
        super().__init__(base, modulus, var)
        if any(len(c[1]) != 1 for c in self.modulus):
            raise FieldError("minimal polynomial coefficients must be polynomials in " + base.var)
        if check and base.base is QQ:
            import sympy

            x, t = sympy.symbols(f"{base.var} t")
            expr = sum(sympy.sympify(format_poly(QQ, c[0], base.var).replace("^", "**"), locals={base.var: x}) * t**i
                       for i, c in enumerate(self.modulus))
            if not sympy.Poly(expr, t, x).is_irreducible:
                raise FieldError("minimal polynomial is reducible")

    def describe(self) -> str:
        return f"{self.base.describe()}({self.var}), {format_poly(self.base, self.modulus, self.var)} = 0"

    def to_json(self) -> dict:
        return {
            "type": "alg_function_field",
            "base": self.base.to_json(),
            "poly": [self.base.format(c) for c in self.modulus],
            "var": self.var,
        }


def finite_field(p: int, poly=None, var: str = "z") -> Field:
    """GF(p) or GF(p^d) defined by an integer polynomial (low to high)."""
    F = PrimeField(p)
    if poly is None or len(poly) <= 2:
        return F
    return FiniteExtension(F, P.from_ints(F, poly), var)


# ---------------------------------------------------------------------------
# element parsing


_BINOPS = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Div: "div"}


def parse_element(F: Field, text: str):
    """Parse an arithmetic expression in the field's generator names."""
    if isinstance(text, int):
        return F.from_int(text)
    try:
        tree = ast.parse(str(text).replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise FieldError(f"cannot parse element {text!r}") from exc
    names = F.names()

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return F.from_int(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise FieldError(f"unknown symbol {node.id!r} in {text!r} over {F.describe()}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return F.neg(v) if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return F.pow(ev(node.left), _int_exponent(node.right, text))
            op = _BINOPS.get(type(node.op))
            if op is not None:
                return getattr(F, op)(ev(node.left), ev(node.right))
        raise FieldError(f"unsupported syntax in element {text!r}")

    return ev(tree.body)


def _int_exponent(node, text) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_exponent(node.operand, text)
    raise FieldError(f"exponent must be an integer in {text!r}")


# ---------------------------------------------------------------------------
# rings generated by matrix entries


@dataclass(frozen=True)
class RingInfo:
    """Localization ``(1/mu) Delta`` holding every entry of ``S`` and ``S^-1``.

    ``mu`` is an ``int`` over Q and number fields and a monic polynomial over
    the constant field for (algebraic) function fields.  ``const_den`` is the
    lcm of rational denominators of the constant-field coefficients, which a
    reduction prime must also avoid.
    """

    kind: str
    characteristic: int
    mu: object
    const_den: int = 1
    mu_str: str = "1"


def constant_denominator(B: Field, c) -> int:
    if B is QQ:
        return int(c.denominator)
    if isinstance(B, NumberField):
        return B.coord_denominator(c)
    return 1


def _entry_data(F: Field, e):
    """(denominators of a function-field entry, rational denominator)."""
    if isinstance(F, FunctionField):
        cd = 1
        for c in e[0] + e[1]:
            cd = _ilcm(cd, constant_denominator(F.base, c))
        return [e[1]], cd
    if isinstance(F, AlgFunctionField):
        dens, cd = [], 1
        for c in e:
            d, k = _entry_data(F.base, c)
            dens += d
            cd = _ilcm(cd, k)
        return dens, cd
    raise TypeError(F)


def clear_denominators(mats) -> RingInfo:
    """Denominator datum mu for the ring generated by entries of ``S`` and ``S^-1``."""
    if not mats:
        raise ValueError("need at least one matrix")
    F = mats[0].field
    entries = []
    for g in mats:
        entries.extend(g.entries())
        entries.extend(g.inverse().entries())
    if F is QQ or isinstance(F, Rationals):
        mu = reduce(_ilcm, (int(e.denominator) for e in entries), 1)
        return RingInfo(F.kind, 0, mu, 1, str(mu))
    if isinstance(F, NumberField):
        mu = reduce(_ilcm, (F.coord_denominator(e) for e in entries), 1)
        return RingInfo(F.kind, 0, mu, 1, str(mu))
    if F.is_finite:
        return RingInfo(F.kind, F.characteristic, 1, 1, "1")
    B = F.base if isinstance(F, FunctionField) else F.base.base
    mu = (B.one,)
    cd = 1
    for e in entries:
        dens, k = _entry_data(F, e)
        cd = _ilcm(cd, k)
        for d in dens:
            mu = P.lcm(B, mu, d)
    if isinstance(F, AlgFunctionField):
        for c in F.modulus:
            cd = _ilcm(cd, _entry_data(F.base, c)[1])
    var = F.var if isinstance(F, FunctionField) else F.base.var
    return RingInfo(F.kind, F.characteristic, mu, cd, format_poly(B, mu, var))


def factor_mod_p(f, p: int, seed: int = 0) -> list[tuple[int, ...]]:
    """Irreducible factors (with multiplicity) of an integer polynomial mod p."""
    F = PrimeField(p)
    f = P.from_ints(F, f)
    if not f or f[-1] != 1:
        raise ValueError("factor_mod_p expects a polynomial that is monic mod p")
    return [tuple(g) for g in P.factor(F, f, seed)]


discriminant = P.discriminant
