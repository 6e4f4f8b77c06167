"""Sufficient-condition tests for PP and CPP status of X^r c(X^s).

None of these consult the oracle. Each checker decides its own
hypotheses from first principles so the oracle stays independent evidence.

Elements in the reports are ranks; cube roots of unity are reported by their
index into ``ctx.mu3`` (0 for 1, 1 for omega, 2 for omega^2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (
    CNotKernelValued,
    CriterionDefect,
    DNotDividing,
    GammaDegenerate,
    MalformedTable,
    NotOneModNine,
    RNotScalarForm,
    ZeroCValue,
)
from .ff_core import FieldSpec, Mu3Context, fiber_representative
from .polyshape import Bbd3Params, Bbd3Variant, CycloTrinomial, bbd4_gamma


# ---------------------------------------------------------------------------
# Zieve
# ---------------------------------------------------------------------------

def mu_d(spec: FieldSpec, d: int, zeta: int | None = None) -> list[int]:
    """[1, zeta, ..., zeta^(d-1)] for the smallest-rank zeta of exact order d.

    For d = 3 this is the canonical (1, omega, omega^2) ordering.
    """
    if d < 1 or (spec.q - 1) % d:
        raise DNotDividing(f"{d} does not divide q-1 = {spec.q - 1}")
    if zeta is None:
        g = spec.element_of_order(d)
        prims = [spec.pow(g, j) for j in range(1, d + 1) if gcd(j, d) == 1]
        zeta = min(prims)
    out = [1]
    for _ in range(d - 1):
        out.append(spec.mul(out[-1], zeta))
    return out


@dataclass(frozen=True)
class ZieveInput:
    spec: FieldSpec
    d: int
    r: int
    h_values: tuple[int, ...]
    zeta: int | None = None

    def __post_init__(self):
        if self.d < 1 or (self.spec.q - 1) % self.d:
            raise DNotDividing(f"{self.d} does not divide q-1 = {self.spec.q - 1}")
        if len(self.h_values) != self.d:
            raise ValueError(f"need {self.d} h-values, got {len(self.h_values)}")

    @classmethod
    def from_trinomial(cls, t: CycloTrinomial) -> ZieveInput:
        return cls(t.field, 3, t.r, tuple(t.c_table), t.ctx.omega)


@dataclass(frozen=True)
class ZieveResult:
    is_pp: bool
    coprime: bool
    mu_d_image: tuple[int, ...]


def zieve_check(z: ZieveInput) -> ZieveResult:
    """X^r h(X^((q-1)/d)) permutes F_q iff gcd(r, (q-1)/d) = 1 and
    u -> u^r h(u)^((q-1)/d) permutes mu_d.

    A vanishing h-value sends a whole coset to 0, so it is an immediate no.
    """
    F = z.spec
    e = (F.q - 1) // z.d
    coprime = gcd(z.r, e) == 1
    roots = mu_d(F, z.d, z.zeta)
    image = tuple(F.mul(F.pow(u, z.r), F.pow(h, e)) for u, h in zip(roots, z.h_values))
    permutes = 0 not in z.h_values and len(set(image)) == z.d
    return ZieveResult(coprime and permutes, coprime, image)


# ---------------------------------------------------------------------------
# AGW
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AgwData:
    """Finite maps g: A -> A, g_bar: S -> S, lambda, lambda_bar: A -> S as tables."""

    A_size: int
    S_size: int
    g_map: tuple[int, ...]
    lambda_map: tuple[int, ...]
    lambda_bar_map: tuple[int, ...]
    g_bar_map: tuple[int, ...]


@dataclass(frozen=True)
class AgwResult:
    commutes: bool
    surjective: bool
    g_bijective: bool
    gbar_bijective_and_fibers_injective: bool


def _validate(a: AgwData):
    for name, table, dom, cod in (
        ("g", a.g_map, a.A_size, a.A_size),
        ("lambda", a.lambda_map, a.A_size, a.S_size),
        ("lambda_bar", a.lambda_bar_map, a.A_size, a.S_size),
        ("g_bar", a.g_bar_map, a.S_size, a.S_size),
    ):
        if len(table) != dom:
            raise MalformedTable(f"{name} has {len(table)} entries, expected {dom}")
        if any(not 0 <= v < cod for v in table):
            raise MalformedTable(f"{name} has an entry outside [0, {cod})")


def agw_check(a: AgwData) -> AgwResult:
    """Evaluate both sides of the AGW equivalence and its hypotheses.

    When the hypotheses hold the sides are compared, and disagreement raises
    :class:`CriterionDefect`.
    """
    _validate(a)
    g = np.asarray(a.g_map, dtype=np.int64)
    lam = np.asarray(a.lambda_map, dtype=np.int64)
    lam_bar = np.asarray(a.lambda_bar_map, dtype=np.int64)
    g_bar = np.asarray(a.g_bar_map, dtype=np.int64)

    commutes = bool(np.array_equal(lam_bar[g], g_bar[lam]))
    surjective = (
        len(np.unique(lam)) == a.S_size and len(np.unique(lam_bar)) == a.S_size
    )
    g_bijective = len(np.unique(g)) == a.A_size
    gbar_bijective = len(np.unique(g_bar)) == a.S_size
    fibers_injective = all(
        len(np.unique(g[lam == s])) == int((lam == s).sum()) for s in range(a.S_size)
    )
    side_ii = gbar_bijective and fibers_injective
    if commutes and surjective and g_bijective != side_ii:
        raise CriterionDefect(f"AGW sides disagree: (i)={g_bijective}, (ii)={side_ii}")
    return AgwResult(commutes, surjective, g_bijective, side_ii)


def agw_data_for(t: CycloTrinomial) -> AgwData:
    """AGW data for g = F on all of F_q.

    Labels 0..2 are the fibers of x -> x^s; label 3 is {0}, so that a map
    hitting 0 from F_q^* is still a total table. The induced g_bar is read
    off each fiber's smallest-rank representative.
    """
    ctx = t.ctx
    q = t.field.q
    lam = ctx.projection_table.copy()
    lam[0] = 3
    g = t.F_table()
    g_bar = [int(lam[g[fiber_representative(ctx, i)]]) for i in range(3)] + [3]
    lam_t = tuple(int(v) for v in lam)
    return AgwData(q, 4, tuple(int(v) for v in g), lam_t, lam_t, tuple(g_bar))


# ---------------------------------------------------------------------------
# permutation-trinomial hypotheses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bbd3Hypothesis:
    holds: bool
    witness: int
    r_coprime: bool


def bbd3_hypothesis(ctx: Mu3Context, params: Bbd3Params) -> Bbd3Hypothesis:
    """(3 delta^2 + 1)^s = 1, or ((gamma + 2)/(gamma - 1))^s = 1.

    ``r_coprime`` reports gcd(r, q-1) = 1 separately; ``holds`` is the power
    condition alone.
    """
    F = ctx.field
    if params.variant is Bbd3Variant.DELTA:
        d = params.delta
        ctx.index(d)
        witness = F.add(F.mul(3 % F.p, F.mul(d, d)), 1)
    else:
        g = params.gamma
        num, den = F.add(g, 2 % F.p), F.sub(g, 1)
        if num == 0 or den == 0:
            raise GammaDegenerate("gamma must avoid 1 and -2")
        witness = F.div(num, den)
    return Bbd3Hypothesis(
        F.pow(witness, ctx.s) == 1, witness, gcd(params.r, F.q - 1) == 1
    )


@dataclass(frozen=True)
class Bbd4Divisibility:
    holds: bool
    detail: str


def bbd4_divisibility(item: int, spec: FieldSpec) -> Bbd4Divisibility:
    """The integer fact behind each item: s even (item 1) or (p - 1) | s (items 2, 3)."""
    bbd4_gamma(item, spec)
    s = (spec.q - 1) // 3
    if item == 1:
        return Bbd4Divisibility(s % 2 == 0, f"s = {s} is {'even' if s % 2 == 0 else 'odd'}")
    ok = s % (spec.p - 1) == 0
    return Bbd4Divisibility(ok, f"p-1 = {spec.p - 1} {'divides' if ok else 'does not divide'} s = {s}")


# ---------------------------------------------------------------------------
# general fiber criterion (G1-G4)
# ---------------------------------------------------------------------------

@dataclass
class GeneralReport:
    g1: bool
    g2: bool
    g3: bool
    g4: bool
    beta: tuple[int, int, int]
    v: tuple[int | None, int | None, int | None]
    psi_bar: tuple[int, int, int] | None
    representatives: tuple[int, int, int]
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_cpp(self) -> bool:
        return self.g1 and self.g2 and self.g3 and self.g4

    @property
    def failed(self) -> list[str]:
        return [n for n in ("g1", "g2", "g3", "g4") if not getattr(self, n)]

    def to_json(self, spec: FieldSpec) -> dict:
        return {
            "g1": self.g1,
            "g2": self.g2,
            "g3": self.g3,
            "g4": self.g4,
            "beta": [spec.format(b) for b in self.beta],
            "v": list(self.v),
            "psi_bar": list(self.psi_bar) if self.psi_bar is not None else None,
        }


def _first_collision(values: np.ndarray) -> tuple[int, int] | None:
    """Indices (i, j), i < j, of the first repeat scanning left to right."""
    seen = {}
    for j, v in enumerate(values.tolist()):
        if v in seen:
            return seen[v], j
        seen[v] = j
    return None


def general_cpp_check(t: CycloTrinomial, representatives=None) -> GeneralReport:
    """Decide G1-G4 for f = X^r c(X^s), F = f + X.

    G2 and G3 enumerate the kernel K in full. ``representatives`` overrides
    the fiber representatives (default: smallest rank in each fiber).
    """
    ctx = t.ctx
    F = ctx.field
    s, q = ctx.s, F.q
    if 0 in t.c_table:
        raise ZeroCValue("c must be nonzero on mu3")
    diag: dict = {}

    g1_parts = {
        "gcd_r_s": gcd(t.r, s) == 1,
        "gcd_r_3": gcd(t.r, 3) == 1,
        "c_kernel_valued": all(F.pow(c, s) == 1 for c in t.c_table),
    }
    g1 = all(g1_parts.values())
    if not g1:
        diag["g1"] = g1_parts

    if representatives is None:
        representatives = tuple(fiber_representative(ctx, i) for i in range(3))
    else:
        representatives = tuple(int(x) for x in representatives)
        for i, rep in enumerate(representatives):
            if rep == 0 or ctx.projection_table[rep] != i:
                raise ValueError(f"{F.format(rep)} is not in fiber {i}")

    K = ctx.kernel
    e = (t.r - 1) % (q - 1)
    z_pow = F.vec_pow(K, e)
    beta, v = [], []
    g2 = g3 = True
    for i, rep in enumerate(representatives):
        b = F.mul(t.c_table[i], F.pow(rep, e))
        beta.append(b)
        inner = F.vec_add(F.vec_mul(z_pow, b), 1)
        phi = F.vec_mul(K, inner)

        zeros = np.flatnonzero(phi == 0)
        if zeros.size:
            g2 = False
            diag.setdefault("g2", []).append({"u": i, "zero_at": int(K[zeros[0]])})
        else:
            pair = _first_collision(phi)
            if pair is not None:
                g2 = False
                diag.setdefault("g2", []).append(
                    {"u": i, "collision": [int(K[pair[0]]), int(K[pair[1]])]}
                )

        vals = F.vec_pow(inner, s)
        first = int(vals[0])
        off = np.flatnonzero(vals != first)
        if first == 0 or off.size:
            g3 = False
            witness = int(K[0]) if first == 0 else int(K[off[0]])
            diag.setdefault("g3", []).append({"u": i, "witness_z": witness})
            v.append(None)
        else:
            v.append(ctx.index(first))

    if None in v:
        g4, psi_bar = False, None
    else:
        psi_bar = tuple((i + vi) % 3 for i, vi in enumerate(v))
        g4 = len(set(psi_bar)) == 3
    return GeneralReport(
        g1, g2, g3, g4, tuple(beta), tuple(v), psi_bar, representatives, diag
    )


# ---------------------------------------------------------------------------
# scalar fiber regime (H1-H2) and the constant-v family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarReport:
    k: int
    tau: tuple[int, int, int]
    v: tuple[int | None, int | None, int | None]
    psi_bar: tuple[int, int, int] | None
    psi_bar_is_permutation: bool
    h1: bool
    h2: bool

    @property
    def is_cpp(self) -> bool:
        return self.h1 and self.h2

    def to_json(self, spec: FieldSpec) -> dict:
        return {
            "k": self.k,
            "tau": [spec.format(x) for x in self.tau],
            "v": list(self.v),
            "h1": self.h1,
            "h2": self.h2,
        }


def scalar_cpp_check(t: CycloTrinomial) -> ScalarReport:
    """tau(u) = 1 + c(u) u^k, v(u) = tau(u)^s, psi_bar(u) = u v(u), for r = 1 + k s."""
    ctx = t.ctx
    F = ctx.field
    s = ctx.s
    if F.q % 9 != 1:
        raise NotOneModNine(f"q = {F.q} is not 1 mod 9")
    if (t.r - 1) % s:
        raise RNotScalarForm(f"r = {t.r} is not 1 mod s = {s}")
    if any(F.pow(c, s) != 1 for c in t.c_table):
        raise CNotKernelValued("c(u)^s must be 1 on mu3")
    k = (t.r - 1) // s
    tau = tuple(
        F.add(1, F.mul(c, F.pow(u, k))) for c, u in zip(t.c_table, ctx.mu3)
    )
    h1 = 0 not in tau
    v = tuple(ctx.index(F.pow(x, s)) if x else None for x in tau)
    if h1:
        psi_bar = tuple((i + vi) % 3 for i, vi in enumerate(v))
        perm = len(set(psi_bar)) == 3
    else:
        psi_bar, perm = None, False
    return ScalarReport(k, tau, v, psi_bar, perm, h1, perm)


@dataclass(frozen=True)
class ConstantV:
    family_certified: bool
    alpha: int | None


def constant_v_check(report: ScalarReport) -> ConstantV:
    """Constant v on mu3 makes psi_bar a rotation, hence a bijection."""
    v = report.v
    if None not in v and len(set(v)) == 1:
        return ConstantV(True, v[0])
    return ConstantV(False, None)

