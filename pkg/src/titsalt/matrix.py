"""Dense exact matrices and subspaces over any :class:`~titsalt.fields.Field`.

Vectors are columns and matrices act on the left (``g * v``) throughout;
a subspace stores its basis vectors as the rows of an echelon matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2

from . import poly as P
from .fields import Field, FieldError


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    """Immutable square matrix; ``rows`` is a tuple of row tuples."""

    __slots__ = ("field", "n", "rows", "_hash")

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, F: Field, n: int) -> "Matrix":
        return cls(F, [[F.one if i == j else F.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, F: Field, n: int) -> "Matrix":
        return cls(F, [[F.zero] * n for _ in range(n)])

    @classmethod
    def diag(cls, F: Field, entries) -> "Matrix":
        n = len(entries)
        return cls(F, [[entries[i] if i == j else F.zero for j in range(n)] for i in range(n)])

    @classmethod
    def parse(cls, F: Field, rows) -> "Matrix":
        return cls(F, [[F.parse(e) for e in r] for r in rows])

    @classmethod
    def from_vector(cls, F: Field, n: int, v) -> "Matrix":
        return cls(F, [v[i * n:(i + 1) * n] for i in range(n)])

    # basic protocol -----------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.to_strings()})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        return [e for r in self.rows for e in r]

    def vector(self) -> list:
        return self.entries()

    def to_strings(self) -> list[list[str]]:
        return [[self.field.format(e) for e in r] for r in self.rows]

    def _check(self, other: "Matrix"):
        if other.field is not self.field and other.field != self.field:
            raise FieldError("matrices over different fields")
        if other.n != self.n:
            raise ValueError("dimension mismatch")

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        add = self.field.add
        return Matrix(self.field, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        sub = self.field.sub
        return Matrix(self.field, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in r] for r in self.rows])

    def __mul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        dot = self.field.dot
        cols = list(zip(*other.rows))
        return Matrix(self.field, [[dot(r, c) for c in cols] for r in self.rows])

    def scale(self, c) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in r] for r in self.rows])

    def __pow__(self, e: int) -> "Matrix":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Matrix.identity(self.field, self.n)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, zip(*self.rows))

    def is_identity(self) -> bool:
        F = self.field
        return all(F.eq(a, F.one) if i == j else F.is_zero(a)
                   for i, r in enumerate(self.rows) for j, a in enumerate(r))

    def is_zero(self) -> bool:
        return all(self.field.is_zero(a) for r in self.rows for a in r)

    def commutes_with(self, other: "Matrix") -> bool:
        return self * other == other * self

    def inverse(self) -> "Matrix":
        F = self.field
        n = self.n
        aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.rows)]
        _, pivots = _rref_inplace(F, aug, ncols=n)
        if len(pivots) < n:
            raise SingularMatrixError("matrix is singular")
        return Matrix(F, [r[n:] for r in aug])

    def conjugate(self, g: "Matrix", g_inv: "Matrix | None" = None) -> "Matrix":
        """``g^-1 * self * g``."""
        if g_inv is None:
            g_inv = g.inverse()
        return g_inv * self * g

    def commutator(self, other: "Matrix") -> "Matrix":
        """Group commutator ``self^-1 other^-1 self other``."""
        return self.inverse() * other.inverse() * self * other

    def det(self):
        F = self.field
        a = [list(r) for r in self.rows]
        n = self.n
        d = F.one
        for c in range(n):
            piv = next((r for r in range(c, n) if not F.is_zero(a[r][c])), None)
            if piv is None:
                return F.zero
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = F.neg(d)
            d = F.mul(d, a[c][c])
            inv = F.inv(a[c][c])
            for r in range(c + 1, n):
                if not F.is_zero(a[r][c]):
                    f = F.mul(a[r][c], inv)
                    a[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[r], a[c])]
        return d

    def rank(self) -> int:
        return len(rref(self.field, [list(r) for r in self.rows])[1])

    def map(self, fn, field: Field) -> "Matrix":
        return Matrix(field, [[fn(a) for a in r] for r in self.rows])


# ---------------------------------------------------------------------------
# elimination


def _rref_inplace(F: Field, rows: list[list], ncols: int | None = None):
    """Gauss-Jordan on ``rows`` in place, pivoting only within the first ``ncols`` columns."""
    if not rows:
        return rows, []
    width = len(rows[0]) if ncols is None else ncols
    is_zero, mul, sub, inv = F.is_zero, F.mul, F.sub, F.inv
    pivots = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(rows)) if not is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        if not F.eq(pr[c], F.one):
            s = inv(pr[c])
            pr = rows[r] = [mul(x, s) for x in pr]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if not is_zero(f):
                    rows[i] = [x if is_zero(y) else sub(x, mul(f, y)) for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(F: Field, rows) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of ``rows`` with zero rows dropped."""
    rows = [list(r) for r in rows]
    rows, pivots = _rref_inplace(F, rows)
    return rows[: len(pivots)], pivots


class Subspace:
    """Row space in F^n with an RREF basis."""

    __slots__ = ("field", "n", "basis", "pivots")

    def __init__(self, field: Field, n: int, rows=()):
        self.field = field
        self.n = n
        self.basis, self.pivots = rref(field, rows) if rows else ([], [])
        self.basis = [tuple(r) for r in self.basis]

    @classmethod
    def full(cls, F: Field, n: int) -> "Subspace":
        return cls(F, n, [[F.one if i == j else F.zero for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.basis == other.basis

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, n={self.n})"

    def reduce(self, v) -> list:
        F = self.field
        v = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if not F.is_zero(f):
                v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        return all(self.field.is_zero(x) for x in self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis)

    def image(self, g: Matrix) -> "Subspace":
        return Subspace(self.field, self.n, [mat_vec(self.field, g, r) for r in self.basis])

    def is_invariant(self, g: Matrix) -> bool:
        return all(self.contains(mat_vec(self.field, g, r)) for r in self.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        F, n = self.field, self.n
        if not self.basis or not other.basis:
            return Subspace(F, n)
        if other.dim == n:
            return self
        # y with other.basis * y^T = 0 cut out ``other``
        ann = right_kernel(F, other.basis, n)
        coeff = [[F.dot(r, col) for col in ann] for r in self.basis]
        ker = left_kernel(F, coeff, len(ann))
        return Subspace(F, n, [_combine(F, c, self.basis) for c in ker])

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.n, list(self.basis) + list(other.basis))

    def complement_rows(self) -> list[tuple]:
        """Standard basis vectors on the non-pivot columns."""
        F = self.field
        return [tuple(F.one if i == j else F.zero for i in range(self.n))
                for j in range(self.n) if j not in set(self.pivots)]


def mat_vec(F: Field, g: Matrix, v) -> list:
    return [F.dot(r, v) for r in g.rows]


def _combine(F: Field, coeffs, rows) -> list:
    out = [F.zero] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if not F.is_zero(c):
            out = [F.add(x, F.mul(c, y)) for x, y in zip(out, r)]
    return out


def right_kernel(F: Field, rows, ncols: int) -> list[list]:
    """Basis of {y : rows * y^T = 0}."""
    red, pivots = rref(F, rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        y = [F.zero] * ncols
        y[f] = F.one
        for r, c in zip(red, pivots):
            y[c] = F.neg(r[f])
        out.append(y)
    return out


def left_kernel(F: Field, rows, ncols: int) -> list[list]:
    """Basis of {v : v * rows = 0} for a list of rows with ``ncols`` columns."""
    if not rows:
        return []
    cols = [[r[j] for r in rows] for j in range(ncols)]
    return right_kernel(F, cols, len(rows))


def nullspace(x: Matrix) -> Subspace:
    """Nullspace ``{v : x * v = 0}``."""
    return Subspace(x.field, x.n, right_kernel(x.field, x.rows, x.n))


# ---------------------------------------------------------------------------
# polynomials of matrices


def poly_eval(F: Field, f, g: Matrix) -> Matrix:
    acc = Matrix.zeros(F, g.n)
    for c in reversed(f):
        acc = acc * g
        if not F.is_zero(c):
            acc = acc + Matrix.diag(F, [c] * g.n)
    return acc


def minimal_polynomial(g: Matrix):
    """Monic minimal polynomial as the lcm of the Krylov minimal polynomials of e_i."""
    F, n = g.field, g.n
    m = P.one(F)
    for i in range(n):
        v = [F.one if j == i else F.zero for j in range(n)]
        # first dependency in the Krylov sequence v, gv, g^2 v, ...
        krylov = [v]
        while True:
            w = mat_vec(F, g, krylov[-1])
            coeffs = left_kernel(F, krylov + [w], n)
            if coeffs:
                c = coeffs[0]
                mp = P.monic(F, P.trim(F, c))
                break
            krylov.append(w)
        m = P.lcm(F, m, mp)
    return m


def charpoly(g: Matrix):
    """Characteristic polynomial det(t - g) via Hessenberg reduction."""
    F, n = g.field, g.n
    a = [list(r) for r in g.rows]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if not F.is_zero(a[i][m - 1])), None)
        if piv is None:
            continue
        if piv != m:
            a[m], a[piv] = a[piv], a[m]
            for r in a:
                r[m], r[piv] = r[piv], r[m]
        inv = F.inv(a[m][m - 1])
        for i in range(m + 1, n):
            f = F.mul(a[i][m - 1], inv)
            if F.is_zero(f):
                continue
            a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[m])]
            for r in a:
                r[m] = F.add(r[m], F.mul(f, r[i]))
    polys = [P.one(F)]
    for k in range(1, n + 1):
        pk = P.mul(F, (F.neg(a[k - 1][k - 1]), F.one), polys[k - 1])
        prod = F.one
        for i in range(1, k):
            prod = F.mul(prod, a[k - i][k - i - 1])
            term = F.mul(prod, a[k - i - 1][k - 1])
            pk = P.sub(F, pk, P.scale(F, polys[k - i - 1], term))
        polys.append(pk)
    return polys[n]


def is_unipotent(g: Matrix) -> bool:
    x = g - Matrix.identity(g.field, g.n)
    return (x ** g.n).is_zero()


def is_nilpotent(x: Matrix) -> bool:
    return (x ** x.n).is_zero()


def is_diagonalizable(g: Matrix) -> bool:
    """Diagonalizable over the algebraic closure: minimal polynomial separable."""
    F = g.field
    m = minimal_polynomial(g)
    return len(P.gcd(F, m, P.deriv(F, m))) == 1


@dataclass(frozen=True)
class JordanParts:
    semisimple: Matrix
    unipotent: Matrix


def jordan_decomposition(g: Matrix) -> JordanParts:
    """Multiplicative Jordan decomposition ``g = g_d g_u`` in characteristic zero."""
    F, n = g.field, g.n
    if F.characteristic != 0:
        raise ValueError("jordan_decomposition needs characteristic zero")
    if F.is_zero(g.det()):
        raise SingularMatrixError("jordan_decomposition needs an invertible matrix")
    m = minimal_polynomial(g)
    s = P.exquo(F, m, P.gcd(F, m, P.deriv(F, m)))
    ds = P.deriv(F, s)
    z = g
    steps = ceil(log2(n)) + 2 if n > 1 else 2
    for _ in range(steps):
        sz = poly_eval(F, s, z)
        if sz.is_zero():
            break
        z = z - sz * poly_eval(F, ds, z).inverse()
    else:
        if not poly_eval(F, s, z).is_zero():
            raise AssertionError("Newton iteration for the semisimple part did not converge")
    return JordanParts(z, z.inverse() * g)


# ---------------------------------------------------------------------------
# block projection


@dataclass(frozen=True)
class BlockProjection:
    """Basis change adapted to an invariant subspace ``U`` of ``V = F^n``.

    The columns of ``basis`` are a basis of ``U`` followed by complement
    vectors; in these coordinates every matrix preserving ``U`` is block
    upper triangular, with ``h|_U`` top left and ``h|_{V/U}`` bottom right.
    """

    subspace: Subspace
    basis: Matrix
    basis_inv: Matrix

    @property
    def dims(self) -> tuple[int, int]:
        return self.subspace.dim, self.subspace.n - self.subspace.dim

    @property
    def complement(self) -> list:
        return [tuple(c) for c in list(zip(*self.basis.rows))[self.subspace.dim:]]

    def blocks(self, h: Matrix) -> tuple[Matrix, Matrix]:
        d = self.subspace.dim
        c = self.block_form(h)
        F = h.field
        top = Matrix(F, [r[:d] for r in c.rows[:d]])
        bottom = Matrix(F, [r[d:] for r in c.rows[d:]])
        return top, bottom

    def block_form(self, h: Matrix) -> Matrix:
        return self.basis_inv * h * self.basis


class NotInvariantError(ValueError):
    pass


def make_projection(U: Subspace) -> BlockProjection:
    F = U.field
    B = Matrix(F, list(U.basis) + U.complement_rows()).transpose()
    return BlockProjection(U, B, B.inverse())


def block_projection(U: Subspace, H):
    """Images of each ``h`` on ``U`` and on ``V/U``; empty blocks are omitted."""
    for i, h in enumerate(H):
        if not U.is_invariant(h):
            raise NotInvariantError(f"subspace not invariant under matrix at index {i}")
    if U.dim == U.n:
        return list(H), []
    if U.dim == 0:
        return [], list(H)
    proj = make_projection(U)
    pairs = [proj.blocks(h) for h in H]
    return [a for a, _ in pairs], [b for _, b in pairs]
