"""Trinomial shapes f(X) = X^r c(X^s) and F(X) = f(X) + X.

``c`` is carried as its three values on (1, omega, omega^2); nothing
downstream needs a polynomial representative of it. :func:`dense_coefficients`
produces one by interpolation when an explicit polynomial is wanted.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DeltaNotInMu3, GammaDegenerate, HypothesisViolated
from .ff_core import FieldElement, FieldSpec, Mu3Context, make_mu3


@dataclass(frozen=True)
class CycloTrinomial:
    ctx: Mu3Context
    r: int
    c_table: tuple[int, int, int]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be a positive integer")
        if len(self.c_table) != 3:
            raise ValueError("c_table needs one value per cube root of unity")
        q = self.ctx.field.q
        if any(not 0 <= c < q for c in self.c_table):
            raise ValueError("c_table entries must be canonical ranks")

    @property
    def field(self) -> FieldSpec:
        return self.ctx.field

    @property
    def reduced_r(self) -> int:
        """Exponent in [1, q-1] inducing the same map on F_q^*."""
        return (self.r - 1) % (self.field.q - 1) + 1

    def f(self, x: int) -> int:
        if x == 0:
            return 0
        F = self.field
        i = int(self.ctx.projection_table[x])
        return F.mul(F.pow(x, self.r), self.c_table[i])

    def F(self, x: int) -> int:
        return self.field.add(self.f(x), x)

    def f_table(self) -> np.ndarray:
        """f evaluated at every rank 0..q-1."""
        F = self.field
        xs = F.all_elements()
        proj = self.ctx.projection_table
        cvals = np.asarray(self.c_table, dtype=np.int64)[np.maximum(proj, 0)]
        out = F.vec_mul(F.vec_pow(xs, self.reduced_r), cvals)
        out[0] = 0
        return out

    def F_table(self) -> np.ndarray:
        F = self.field
        return F.vec_add(self.f_table(), F.all_elements())

    def to_json(self) -> dict:
        F = self.field
        return {
            "q": F.q,
            "field": str(F),
            "r": self.r,
            "omega": F.format(self.ctx.omega),
            "c": [F.format(c) for c in self.c_table],
        }

    @classmethod
    def from_json(cls, data: dict) -> CycloTrinomial:
        from .ff_core import parse_field

        F = parse_field(data.get("field", str(data["q"])))
        ctx = make_mu3(F, data.get("omega"))
        return cls(ctx, int(data["r"]), tuple(F.parse(c) for c in data["c"]))


def eval_f(t: CycloTrinomial, x) -> int:
    return t.f(x.value if isinstance(x, FieldElement) else int(x))


def eval_F(t: CycloTrinomial, x) -> int:
    return t.F(x.value if isinstance(x, FieldElement) else int(x))


class Bbd3Variant(Enum):
    DELTA = "delta"
    GAMMA = "gamma"


@dataclass(frozen=True)
class Bbd3Params:
    variant: Bbd3Variant
    r: int
    delta: int | None = None
    gamma: int | None = None


def delta_c_value(F: FieldSpec, delta: int, u: int) -> int:
    """u^2 + delta*u + delta^2 + 1."""
    uu = F.mul(u, u)
    dd = F.mul(delta, delta)
    return F.add(F.add(uu, F.mul(delta, u)), F.add(dd, 1 % F.q))


def build_delta_family(ctx: Mu3Context, delta, r: int) -> CycloTrinomial:
    """X^r (X^{2s} + delta X^s + delta^2 + 1) for a cube root of unity delta."""
    F = ctx.field
    delta = delta.value if isinstance(delta, FieldElement) else F.parse(delta)
    if delta not in ctx.mu3:
        raise DeltaNotInMu3(f"{F.format(delta)} is not a cube root of unity in F_{F.q}")
    table = tuple(delta_c_value(F, delta, u) for u in ctx.mu3)
    return CycloTrinomial(ctx, r, table)


def build_gamma_family(ctx: Mu3Context, gamma, r: int) -> CycloTrinomial:
    """X^r (X^{2s} + X^s + gamma); on mu3 the inner factor is (gamma+2, gamma-1, gamma-1)."""
    F = ctx.field
    gamma = gamma.value if isinstance(gamma, FieldElement) else F.parse(gamma)
    at_one = F.add(gamma, 2 % F.p)
    elsewhere = F.sub(gamma, 1)
    if at_one == 0 or elsewhere == 0:
        raise GammaDegenerate("gamma must avoid 1 and -2")
    return CycloTrinomial(ctx, r, (at_one, elsewhere, elsewhere))


def bbd4_gamma(item: int, spec: FieldSpec) -> int:
    """Constant term gamma fixed by item 1, 2 or 3 of the three-item rule."""
    p, n, q = spec.p, spec.n, spec.q
    if item == 1:
        if q % 6 != 1:
            raise HypothesisViolated(1, f"q = {q} is not 1 mod 6")
        return (p - 1) // 2
    if item == 2:
        if p % 3 != 1:
            raise HypothesisViolated(2, f"p = {p} is not 1 mod 3")
        if n % 3:
            raise HypothesisViolated(2, f"q = {p}^{n} is not a power of p^3")
        return 2
    if item == 3:
        if p < 5 or p % 3 != 2:
            raise HypothesisViolated(3, f"p = {p} must be >= 5 and -1 mod 3")
        if n % 2:
            raise HypothesisViolated(3, f"q = {p}^{n} is not a power of p^2")
        return 2
    raise ValueError(f"unknown item {item}")


def interpolate_on_mu3(ctx: Mu3Context, values) -> tuple[int, int, int]:
    """Coefficients (a0, a1, a2) of the unique h of degree <= 2 with h(mu3[i]) = values[i].

    Inverse DFT on the cyclic group: a_j = 3^{-1} sum_i values[i] * omega^{-ij}.
    """
    F = ctx.field
    mu = ctx.mu3
    third = F.inv(3 % F.p)
    out = []
    for j in range(3):
        acc = 0
        for i, v in enumerate(values):
            acc = F.add(acc, F.mul(v, mu[(-i * j) % 3]))
        out.append(F.mul(acc, third))
    return tuple(out)


def dense_coefficients(t: CycloTrinomial, plus_x: bool = False) -> list[tuple[int, int]]:
    """Sparse (exponent, coefficient) list of f, or of f + X with ``plus_x``.

    Exponents are r, r+s, r+2s as written, not reduced mod q-1. Zero
    coefficients are dropped.
    """
    F = t.field
    s = t.ctx.s
    terms: dict[int, int] = {}
    for j, a in enumerate(interpolate_on_mu3(t.ctx, t.c_table)):
        e = t.r + j * s
        terms[e] = F.add(terms.get(e, 0), a)
    if plus_x:
        terms[1] = F.add(terms.get(1, 0), 1)
    return sorted((e, c) for e, c in terms.items() if c)


def eval_dense(spec: FieldSpec, terms, x: int) -> int:
    acc = 0
    for e, c in terms:
        acc = spec.add(acc, spec.mul(c, spec.pow(x, e)))
    return acc


def format_dense(spec: FieldSpec, terms) -> str:
    parts = []
    for e, c in sorted(terms, reverse=True):
        coef = "" if c == 1 else spec.format(c)
        if spec.n > 1 and coef:
            coef = f"({coef})"
        mono = "X" if e == 1 else ("1" if e == 0 else f"X^{e}")
        parts.append(coef + mono if mono != "1" or not coef else coef)
    return " + ".join(parts) or "0"
