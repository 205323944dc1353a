"""Decision procedures for virtual solvability and its relatives.

Each predicate returns a :class:`Decision` whose verdict is ``"true"``,
``"false"`` or ``"undecided"``.  All predicates share one
:class:`Analysis`, which caches the congruence map, the finite image and the
kernel normal generators, so running several properties on the same group
costs one enumeration.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .closure import (
    AlgebraBasis,
    basis_algebra_closure,
    is_unipotent_closure,
    module_via_nullspace,
)
from .congruence import WHomomorphism, build_whom
from .fields import RingInfo
from .finite_image import (
    DEFAULT_CAP,
    KernelData,
    compute_kernel,
    is_solvable_finite,
    solvable_radical_index,
)
from .matrix import (
    Subspace,
    block_projection,
    is_diagonalizable,
    is_unipotent,
    jordan_decomposition,
    make_projection,
)

log = logging.getLogger(__name__)

TRUE, FALSE, UNDECIDED = "true", "false", "undecided"

PROPERTIES = (
    "solvable-by-finite",
    "solvable",
    "nilpotent-by-finite",
    "abelian-by-finite",
    "central-by-finite",
    "completely-reducible",
)


@dataclass
class Decision:
    verdict: str
    property: str
    certificate: dict = field(default_factory=dict)
    reason: str | None = None

    def __post_init__(self):
        if self.verdict not in (TRUE, FALSE, UNDECIDED):
            raise ValueError(f"bad verdict {self.verdict!r}")

    @property
    def is_true(self) -> bool:
        return self.verdict == TRUE

    @property
    def is_false(self) -> bool:
        return self.verdict == FALSE

    def to_json(self) -> dict:
        return {"property": self.property, "verdict": self.verdict, "reason": self.reason,
                "certificate": self.certificate}


def _verdict(b: bool) -> str:
    return TRUE if b else FALSE


# ---------------------------------------------------------------------------
# ExploreBasis


@dataclass
class RecursionFrame:
    """One call of the recursion, acting on a subquotient of dimension ``dim``.

    ``lower`` is the subspace of ``F^n`` below the subquotient and ``reps``
    are vectors of ``F^n`` lifting a basis of it.
    """

    depth: int
    dim: int
    path: str
    pair: tuple[int, int] | None = None
    u1_dim: int | None = None
    outcome: str = ""
    lower: Subspace | None = field(default=None, repr=False)
    reps: list | None = field(default=None, repr=False)
    basis_images: list | None = field(default=None, repr=False)
    generator_images: list | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {"depth": self.depth, "dim": self.dim, "path": self.path,
                "pair": list(self.pair) if self.pair else None, "u1_dim": self.u1_dim,
                "outcome": self.outcome}


@dataclass
class ExploreTrace:
    frames: list = field(default_factory=list)
    result: bool | None = None

    @property
    def leaves(self) -> list:
        return [f for f in self.frames if f.outcome == "commuting"]

    @property
    def depth(self) -> int:
        return max((f.depth for f in self.frames), default=0)

    def flag(self) -> list:
        """Increasing chain of subspaces read off the leaves (when the result is true)."""
        out = []
        for f in self.leaves:
            out.append(Subspace(f.lower.field, f.lower.n, list(f.lower.basis) + list(f.reps)))
        return out

    def digest(self) -> list:
        return [f.to_json() for f in self.frames]


def _first_noncommuting(A) -> tuple[int, int] | None:
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            if not A[i].commutes_with(A[j]):
                return i, j
    return None


def _mat_rows_times(F, rows, C) -> list:
    """Vectors ``sum_i r_i C_i`` for each coefficient list ``r``."""
    out = []
    for r in rows:
        v = [F.zero] * len(C[0])
        for c, cr in zip(r, C):
            if not F.is_zero(c):
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, cr)]
        out.append(tuple(v))
    return out


def explore_basis_traced(A, T, keep_images: bool = False) -> tuple[bool, ExploreTrace]:
    """Decide whether ``<A>`` is unipotent-by-abelian, recording every frame."""
    A, T = list(A), list(T)
    trace = ExploreTrace()
    if not A and not T:
        trace.result = True
        return True, trace
    F = (A or T)[0].field
    n = (A or T)[0].n
    ident_rows = [tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n)]

    def rec(A, T, depth, path, lower, reps) -> bool:
        m = len(reps)
        frame = RecursionFrame(depth, m, path, lower=lower, reps=reps)
        if keep_images:
            frame.basis_images, frame.generator_images = A, T
        trace.frames.append(frame)
        pair = _first_noncommuting(A)
        if pair is None:
            frame.outcome = "commuting"
            return True
        i, j = pair
        frame.pair = pair
        U1 = module_via_nullspace(T, A[i] * A[j] - A[j] * A[i])
        frame.u1_dim = U1.dim
        if U1.dim == 0:
            frame.outcome = "no-module"
            return False
        frame.outcome = "split"
        A1, A2 = block_projection(U1, A)
        T1, T2 = block_projection(U1, T)
        proj = make_projection(U1)
        top = _mat_rows_times(F, U1.basis, reps)
        bottom = _mat_rows_times(F, proj.complement, reps)
        lower2 = Subspace(F, n, list(lower.basis) + top)
        if not rec(A1, T1, depth + 1, path + "U", lower, top):
            return False
        return rec(A2, T2, depth + 1, path + "Q", lower2, bottom)

    result = rec(A, T, 0, "", Subspace(F, n), ident_rows)
    trace.result = result
    return result, trace


def explore_basis(A, T) -> bool:
    """True iff the group generated by ``A`` is unipotent-by-abelian.

    ``A`` must lie in ``<T>``; ``T`` is used to find invariant subspaces.
    """
    return explore_basis_traced(A, T)[0]


def flag_preserved(trace: ExploreTrace, mats) -> bool:
    """Every matrix maps each subspace of the reconstructed flag into itself."""
    return all(W.is_invariant(g) for W in trace.flag() for g in mats)


# ---------------------------------------------------------------------------
# shared analysis


def check_small_characteristic(K, ring: RingInfo) -> bool:
    """Normal generators all unipotent (char 0) or all diagonalizable (char p)."""
    if ring.characteristic == 0:
        return all(is_unipotent(k) for k in K)
    return all(is_diagonalizable(k) for k in K)


class Analysis:
    """Lazily computed data shared by the predicates for one group ``<S>``."""

    def __init__(self, S, *, prime: int | None = None, point: str | None = None, cap: int = DEFAULT_CAP,
                 seed: int = 0, fast_path_bound: int | None = None, whom: WHomomorphism | None = None):
        self.S = list(S)
        if not self.S:
            raise ValueError("need at least one generator")
        self.F = self.S[0].field
        self.n = self.S[0].n
        self.prime, self.point, self.cap, self.seed = prime, point, cap, seed
        self.fast_path_bound = fast_path_bound
        self._whom = whom
        self._kernel: KernelData | None = None
        self._cache: dict = {}
        self.timings: dict = {}

    def _timed(self, name, fn):
        t = time.perf_counter()
        out = fn()
        self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - t
        return out

    @property
    def whom(self) -> WHomomorphism:
        if self._whom is None:
            self._whom = self._timed("congruence", lambda: build_whom(
                self.S, prime=self.prime, point=self.point, seed=self.seed))
        return self._whom

    @property
    def kernel(self) -> KernelData:
        if self._kernel is None:
            self._kernel = compute_kernel(self.S, self.whom, self.cap, allow_partial=True)
            self.timings.update(self._kernel.timings)
        return self._kernel

    @property
    def K(self) -> list:
        return self.kernel.generators

    @property
    def complete(self) -> bool:
        return self.kernel.complete

    @property
    def characteristic(self) -> int:
        return self.F.characteristic

    def closure(self) -> AlgebraBasis:
        if "closure" not in self._cache:
            self._cache["closure"] = self._timed("closure", lambda: basis_algebra_closure(self.K, self.S))
        return self._cache["closure"]

    def jordan_split(self) -> tuple[list, list]:
        if "jordan" not in self._cache:
            Kd, Ku = [], []
            for k in self.K:
                parts = jordan_decomposition(k)
                if not parts.semisimple.is_identity():
                    Kd.append(parts.semisimple)
                if not parts.unipotent.is_identity():
                    Ku.append(parts.unipotent)
            self._cache["jordan"] = (Kd, Ku)
        return self._cache["jordan"]

    def image_solvable(self) -> bool:
        if "image_solvable" not in self._cache:
            self._cache["image_solvable"] = self._timed(
                "image_solvability", lambda: is_solvable_finite(self.kernel.image))
        return self._cache["image_solvable"]

    def certificate(self, **extra) -> dict:
        cert = {"whom": self.whom.to_json(), **self.kernel.summary(),
                "fast_path": self._cache.get("fast_path", "off")}
        cert.update(extra)
        return cert


def _analysis(S_or_analysis, **opts) -> Analysis:
    if isinstance(S_or_analysis, Analysis):
        return S_or_analysis
    return Analysis(S_or_analysis, **opts)


def _undecided(prop, an: Analysis | None, reason: str, **extra) -> Decision:
    cert = an.certificate(**extra) if an is not None and an._kernel is not None else dict(extra)
    return Decision(UNDECIDED, prop, cert, reason)


def _small_char_refusal(prop, an: Analysis) -> Decision | None:
    if not an.whom.small_characteristic:
        return None
    if not an.complete:
        return _undecided(prop, an, "image too large")
    if check_small_characteristic(an.K, an.whom.ring):
        return None
    return _undecided(prop, an, "W-homomorphism unavailable")


# ---------------------------------------------------------------------------
# predicates


def is_solvable_by_finite(S, **opts) -> Decision:
    prop = "solvable-by-finite"
    an = _analysis(S, **opts)
    if "sf" in an._cache:
        return an._cache["sf"]
    dec = _solvable_by_finite(an, prop)
    an._cache["sf"] = dec
    return dec


def _solvable_by_finite(an: Analysis, prop: str) -> Decision:
    refusal = _small_char_refusal(prop, an)
    if refusal is not None:
        return refusal
    kd = an.kernel
    if kd.complete and an.fast_path_bound is not None:
        idx = an._timed("fast_path", lambda: solvable_radical_index(kd.image))
        if idx > an.fast_path_bound:
            an._cache["fast_path"] = f"radical index {idx} > bound {an.fast_path_bound}"
            return Decision(FALSE, prop, an.certificate(radical_index=idx), "fast path")
        an._cache["fast_path"] = f"radical index {idx} <= bound {an.fast_path_bound}"
    if kd.complete and not an.K:
        return Decision(TRUE, prop, an.certificate(trace=[]), "finite group")
    B = an.closure()
    ok, trace = an._timed("explore_basis", lambda: explore_basis_traced(B.elements, an.S))
    an._cache["trace"] = trace
    cert = an.certificate(closure_dim=len(B), trace=trace.digest())
    if not ok:
        return Decision(FALSE, prop, cert)
    if not kd.complete:
        return Decision(UNDECIDED, prop, cert, "image too large")
    return Decision(TRUE, prop, cert)


def is_solvable(S, **opts) -> Decision:
    prop = "solvable"
    an = _analysis(S, **opts)
    sf = is_solvable_by_finite(an)
    if sf.verdict == FALSE:
        return Decision(FALSE, prop, sf.certificate, "not solvable-by-finite")
    if not an.complete:
        return Decision(UNDECIDED, prop, sf.certificate, "image too large")
    if sf.verdict == UNDECIDED:
        return Decision(UNDECIDED, prop, sf.certificate, sf.reason)
    solv = an.image_solvable()
    return Decision(_verdict(solv), prop, {**sf.certificate, "image_solvable": solv})


def _char0_only(prop, an: Analysis) -> Decision | None:
    if an.characteristic != 0:
        return _undecided(prop, None, "out of method scope",
                          detail="Jordan-decomposition criteria need characteristic zero")
    return None


def _partial(dec_true: bool, prop, an: Analysis, cert) -> Decision:
    """A failed check on partial kernel data is still a proof of "false"."""
    if not dec_true:
        return Decision(FALSE, prop, cert)
    if not an.complete:
        return Decision(UNDECIDED, prop, cert, "image too large")
    return Decision(TRUE, prop, cert)


def is_nilpotent_by_finite(S, **opts) -> Decision:
    prop = "nilpotent-by-finite"
    an = _analysis(S, **opts)
    if an.complete and not an.K:
        return Decision(TRUE, prop, an.certificate(), "finite group")
    bad = _char0_only(prop, an)
    if bad:
        return bad
    Kd, Ku = an.jordan_split()
    t = time.perf_counter()
    unip = is_unipotent_closure(Ku, an.S)
    checks = {"unipotent_part": unip}
    ok = unip
    if ok:
        Bd = basis_algebra_closure(Kd, an.S) if Kd else None
        ab = Bd is None or Bd.is_commutative()
        checks["semisimple_abelian"] = ab
        ok = ab
        if ok and Kd and Ku:
            Bu = basis_algebra_closure(Ku, an.S)
            cross = all(a.commutes_with(b) for a in Bd.elements for b in Bu.elements)
            checks["cross_commute"] = cross
            ok = cross
    an.timings["nilpotency_checks"] = time.perf_counter() - t
    return _partial(ok, prop, an, an.certificate(checks=checks, semisimple_parts=len(Kd), unipotent_parts=len(Ku)))


def is_abelian_by_finite(S, **opts) -> Decision:
    prop = "abelian-by-finite"
    an = _analysis(S, **opts)
    if an.complete and not an.K:
        return Decision(TRUE, prop, an.certificate(), "finite group")
    bad = _char0_only(prop, an)
    if bad:
        return bad
    B = an.closure()
    ok = an._timed("commutation", B.is_commutative)
    return _partial(ok, prop, an, an.certificate(closure_dim=len(B)))


def is_central_by_finite(S, **opts) -> Decision:
    prop = "central-by-finite"
    an = _analysis(S, **opts)
    central = all(k.commutes_with(g) for k in an.K for g in an.S)
    if central:
        if not an.complete:
            return Decision(UNDECIDED, prop, an.certificate(), "image too large")
        return Decision(TRUE, prop, an.certificate(), "finite group" if not an.K else None)
    if an.characteristic == 0:
        return Decision(FALSE, prop, an.certificate())
    # char p: non-central kernel generators only refute when G_rho is
    # completely reducible, hence torsion-free
    if not an.complete:
        return _undecided(prop, an, "image too large")
    B = an.closure()
    p = an.characteristic
    cr = B.is_commutative() and all(is_diagonalizable(b) for b in B.elements) and an.kernel.image.order % p != 0
    if cr:
        return Decision(FALSE, prop, an.certificate(kernel_completely_reducible=True))
    return _undecided(prop, an, "kernel complete reducibility not established")


def is_completely_reducible_sf(S, prior: Decision | None = None, **opts) -> Decision:
    prop = "completely-reducible"
    an = _analysis(S, **opts)
    if prior is None:
        prior = is_solvable_by_finite(an)
    if prior.property in ("solvable-by-finite", "solvable", "nilpotent-by-finite", "abelian-by-finite",
                          "central-by-finite"):
        if prior.verdict != TRUE:
            return Decision(UNDECIDED, prop, prior.certificate, "criterion requires SF")
    p = an.characteristic
    if p and not an.complete:
        return _undecided(prop, an, "image too large")
    if p and an.kernel.image.order % p == 0:
        return _undecided(prop, an, "p divides the image order")
    if p == 0 and prior.property in ("nilpotent-by-finite", "abelian-by-finite", "central-by-finite"):
        _, Ku = an.jordan_split()
        return Decision(_verdict(not Ku), prop, an.certificate(shortcut="K_u trivial"))
    if an.complete and not an.K:
        return Decision(TRUE, prop, an.certificate(), "finite group")
    B = an.closure()
    comm = B.is_commutative()
    diag = comm and all(is_diagonalizable(b) for b in B.elements)
    return Decision(_verdict(comm and diag), prop, an.certificate(closure_commutes=comm, closure_diagonalizable=diag))


PREDICATES = {
    "solvable-by-finite": is_solvable_by_finite,
    "solvable": is_solvable,
    "nilpotent-by-finite": is_nilpotent_by_finite,
    "abelian-by-finite": is_abelian_by_finite,
    "central-by-finite": is_central_by_finite,
    "completely-reducible": is_completely_reducible_sf,
}


def decide(prop: str, S, **opts) -> Decision:
    if prop not in PREDICATES:
        raise ValueError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTIES)}")
    return PREDICATES[prop](S, **opts)
