"""Parameter sweeps: scalar-family certificates, sharpness scans, census.

Work is split per field order q. With ``workers > 1`` the orders are farmed
out to a process pool, and results are always merged in ascending q.
"""
from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd

from .criteria import (
    Bbd3Params,
    bbd3_hypothesis,
    constant_v_check,
    general_cpp_check,
    scalar_cpp_check,
)
from .errors import NotOneModNine
from .ff_core import FieldSpec, Mu3Context, field_of_order, is_prime, make_mu3, parse_field, prime_power
from .oracle import check_image_table, check_pp_cpp
from .polyshape import Bbd3Variant, CycloTrinomial, build_delta_family

log = logging.getLogger(__name__)

EXHAUSTIVE_R_LIMIT = 256
SAMPLED_R_COUNT = 50
CENSUS_Q_LIMIT = 10_000


@dataclass(frozen=True)
class DeltaCandidate:
    delta: int
    admissible: bool
    witness: int


def enumerate_delta(ctx: Mu3Context) -> list[DeltaCandidate]:
    """Each cube root of unity with the verdict on (3 delta^2 + 1)^s = 1."""
    out = []
    for d in ctx.mu3:
        hyp = bbd3_hypothesis(ctx, Bbd3Params(Bbd3Variant.DELTA, r=1, delta=d))
        out.append(DeltaCandidate(d, hyp.holds, hyp.witness))
    return out


def context_for_delta(spec: FieldSpec, delta: int) -> Mu3Context:
    """mu3 ordered as (1, delta, delta^2) when delta != 1, canonical otherwise."""
    return make_mu3(spec, delta if delta != 1 else None)


@dataclass
class Certificate:
    """One CPP instance: parameters, criterion evidence, oracle verdict.

    Scalar certificates carry ``k`` and ``tau``; general ones carry ``beta``.
    ``delta`` is None when c was given directly rather than by the delta family.
    """

    spec: FieldSpec
    delta: int | None
    r: int
    omega: int
    c_table: tuple[int, int, int]
    v: tuple[int, int, int]
    psi_bar: tuple[int, int, int]
    criterion: str
    checks: dict
    oracle_confirmed: bool
    k: int | None = None
    tau: tuple[int, ...] | None = None
    beta: tuple[int, ...] | None = None
    alpha: int | None = None

    def trinomial(self) -> CycloTrinomial:
        return CycloTrinomial(make_mu3(self.spec, self.omega), self.r, self.c_table)

    def to_json(self) -> dict:
        F = self.spec
        fmt = F.format
        out = {
            **F.to_json(),
            "delta": fmt(self.delta) if self.delta is not None else None,
            "r": self.r,
            "omega": fmt(self.omega),
            "c": [fmt(c) for c in self.c_table],
            "criterion": self.criterion,
        }
        if self.k is not None:
            out["k"] = self.k
        if self.tau is not None:
            out["tau"] = [fmt(x) for x in self.tau]
        if self.beta is not None:
            out["beta"] = [fmt(x) for x in self.beta]
        out.update({
            "v": list(self.v),
            "psi_bar": list(self.psi_bar),
            "alpha": self.alpha,
            "checks": self.checks,
            "oracle_confirmed": self.oracle_confirmed,
        })
        return out

    @classmethod
    def from_json(cls, data: dict) -> Certificate:
        F = parse_field(data["field"])

        def elems(key):
            return tuple(F.parse(x) for x in data[key]) if data.get(key) is not None else None

        return cls(
            spec=F,
            delta=F.parse(data["delta"]) if data.get("delta") is not None else None,
            r=int(data["r"]),
            omega=F.parse(data["omega"]),
            c_table=elems("c"),
            v=tuple(data["v"]),
            psi_bar=tuple(data["psi_bar"]),
            criterion=data["criterion"],
            checks=dict(data["checks"]),
            oracle_confirmed=bool(data["oracle_confirmed"]),
            k=data.get("k"),
            tau=elems("tau"),
            beta=elems("beta"),
            alpha=data.get("alpha"),
        )


def certify_scalar(t: CycloTrinomial, delta: int | None) -> Certificate | None:
    """Run the scalar criterion; on a pass, run the oracle and build a certificate."""
    rep = scalar_cpp_check(t)
    if not rep.is_cpp:
        log.debug("q=%d delta=%s r=%d: h1=%s h2=%s", t.field.q, delta, t.r, rep.h1, rep.h2)
        return None
    const = constant_v_check(rep)
    return Certificate(
        spec=t.field,
        delta=delta,
        r=t.r,
        omega=t.ctx.omega,
        c_table=t.c_table,
        v=rep.v,
        psi_bar=rep.psi_bar,
        criterion="scalar",
        checks={"h1": rep.h1, "h2": rep.h2, "constant_v": const.family_certified},
        oracle_confirmed=check_pp_cpp(t).is_cpp,
        k=rep.k,
        tau=rep.tau,
        alpha=const.alpha,
    )


def certify_general(t: CycloTrinomial, delta: int | None) -> Certificate | None:
    """As :func:`certify_scalar`, through the general fiber criterion."""
    rep = general_cpp_check(t)
    if not rep.is_cpp:
        log.debug("q=%d r=%d: failed %s", t.field.q, t.r, rep.failed)
        return None
    return Certificate(
        spec=t.field,
        delta=delta,
        r=t.r,
        omega=t.ctx.omega,
        c_table=t.c_table,
        v=rep.v,
        psi_bar=rep.psi_bar,
        criterion="general",
        checks={"g1": rep.g1, "g2": rep.g2, "g3": rep.g3, "g4": rep.g4},
        oracle_confirmed=check_pp_cpp(t).is_cpp,
        beta=rep.beta,
    )


def reverify(cert: Certificate) -> bool:
    """Re-run the certificate's criterion and the oracle from its parameters."""
    t = cert.trinomial()
    again = (certify_scalar if cert.criterion == "scalar" else certify_general)(t, cert.delta)
    return again is not None and again.to_json() == cert.to_json()


def scan_scalar_families(spec: FieldSpec, k_max: int) -> list[Certificate]:
    """Certificates for every admissible delta and k in [1, k_max], r = 1 + k s."""
    if spec.q % 9 != 1:
        raise NotOneModNine(f"q = {spec.q} is not 1 mod 9")
    base = make_mu3(spec)
    out = []
    for cand in enumerate_delta(base):
        if not cand.admissible:
            continue
        ctx = context_for_delta(spec, cand.delta)
        for k in range(1, k_max + 1):
            t = build_delta_family(ctx, cand.delta, 1 + k * ctx.s)
            cert = certify_scalar(t, cand.delta)
            if cert is not None:
                out.append(cert)
    return out


def field_orders(q_min: int, q_max: int, modulus: int, prime_powers: bool = False) -> list[int]:
    """Orders q in range with q = 1 mod ``modulus``; primes only unless asked."""
    qs = []
    for q in range(max(q_min, 2), q_max + 1):
        if q % modulus != 1:
            continue
        if is_prime(q) or (prime_powers and prime_power(q) is not None):
            qs.append(q)
    return qs


def _map_ordered(func, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _scan_one(args):
    q, k_max = args
    return scan_scalar_families(field_of_order(q), k_max)


def scan_range(q_min: int, q_max: int, k_max: int, *, prime_powers: bool = False,
               workers: int = 1) -> list[Certificate]:
    qs = field_orders(q_min, q_max, 9, prime_powers)
    chunks = _map_ordered(_scan_one, [(q, k_max) for q in qs], workers)
    return [c for chunk in chunks for c in chunk]


# ---------------------------------------------------------------------------
# sharpness scan outside q = 1 mod 9
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FailureRecord:
    spec: FieldSpec
    delta: int
    r: int
    collision: tuple[int, int]
    image: int
    preimages: tuple[int, ...]
    reason: str

    def trinomial(self) -> CycloTrinomial:
        return build_delta_family(context_for_delta(self.spec, self.delta), self.delta, self.r)

    def reverify(self) -> bool:
        t = self.trinomial()
        x1, x2 = self.collision
        return x1 != x2 and t.F(x1) == t.F(x2) == self.image

    def to_json(self) -> dict:
        fmt = self.spec.format
        return {
            **self.spec.to_json(),
            "delta": fmt(self.delta),
            "r": self.r,
            "collision": [fmt(x) for x in self.collision],
            "image": fmt(self.image),
            "preimages": [fmt(x) for x in self.preimages],
            "reason": self.reason,
        }


def r_values_for(q: int) -> list[int]:
    """Units mod q-1: all of them up to q = 256, else the first 50 ascending."""
    units = (r for r in range(1, q) if gcd(r, q - 1) == 1)
    if q <= EXHAUSTIVE_R_LIMIT:
        return list(units)
    out = []
    for r in units:
        out.append(r)
        if len(out) == SAMPLED_R_COUNT:
            break
    return out


def _failures_for(q: int) -> list[FailureRecord]:
    spec = field_of_order(q)
    out = []
    for delta in make_mu3(spec).mu3:
        ctx = context_for_delta(spec, delta)
        for r in r_values_for(q):
            t = build_delta_family(ctx, delta, r)
            verdict = check_image_table(spec, t.F_table())
            if verdict.is_bijection:
                continue
            out.append(FailureRecord(
                spec, delta, r, verdict.collision, verdict.image, verdict.preimages,
                "HitsZeroTwice" if verdict.image == 0 else "NotInjective",
            ))
    return out


def counterexample_scan(q_min: int, q_max: int, *, workers: int = 1) -> list[FailureRecord]:
    """Oracle failures of f + X for the delta family at every prime power q
    with q = 1 mod 3 but q != 1 mod 9."""
    if q_min > q_max:
        raise ValueError("q_min must not exceed q_max")
    qs = [q for q in field_orders(q_min, q_max, 3, prime_powers=True) if q % 9 != 1]
    return [rec for chunk in _map_ordered(_failures_for, qs, workers) for rec in chunk]


def scan_metadata() -> dict:
    return {
        "r_enumeration": f"all units mod q-1 for q <= {EXHAUSTIVE_R_LIMIT}, "
                         f"first {SAMPLED_R_COUNT} ascending above",
    }


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------

CENSUS_COLUMNS = ("q", "p", "n", "s", "admissible_delta", "scalar_certified",
                  "oracle_cpp", "discrepancies")


@dataclass
class CensusRow:
    q: int
    p: int
    n: int
    s: int
    admissible_delta: int
    scalar_certified: int
    oracle_cpp: int
    discrepancies: int
    problems: list = field(default_factory=list)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("problems")
        return d


def _census_row(args) -> CensusRow:
    q, k_max = args
    spec = field_of_order(q)
    base = make_mu3(spec)
    cands = enumerate_delta(base)
    row = CensusRow(q, spec.p, spec.n, base.s, sum(c.admissible for c in cands), 0, 0, 0)
    gated = q % 9 != 1
    for cand in cands:
        ctx = context_for_delta(spec, cand.delta)
        for k in range(1, k_max + 1):
            t = build_delta_family(ctx, cand.delta, 1 + k * ctx.s)
            is_cpp = check_pp_cpp(t).is_cpp
            row.oracle_cpp += is_cpp
            if gated or not cand.admissible:
                continue
            if scalar_cpp_check(t).is_cpp:
                row.scalar_certified += 1
                if not is_cpp:
                    row.discrepancies += 1
                    row.problems.append((cand.delta, k))
    return row


def census(q_max: int, k_max: int = 6, *, prime_powers: bool = False,
           workers: int = 1) -> list[CensusRow]:
    """Per q = 1 mod 3 up to q_max: the delta family at r = 1 + k s, k in [1, k_max].

    ``oracle_cpp`` counts oracle-confirmed CPPs among all 3 * k_max shapes;
    ``scalar_certified`` counts scalar-criterion passes (zero when q != 1 mod 9).
    """
    if q_max > CENSUS_Q_LIMIT:
        raise ValueError(f"census is limited to q <= {CENSUS_Q_LIMIT}")
    qs = field_orders(2, q_max, 3, prime_powers)
    rows = _map_ordered(_census_row, [(q, k_max) for q in qs], workers)
    for row in rows:
        if row.discrepancies:
            log.error("q=%d: certified family failed the oracle at %s", row.q, row.problems)
    return rows


def census_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CENSUS_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row.as_dict())
    return buf.getvalue()
