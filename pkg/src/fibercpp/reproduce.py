"""Pinned worked examples: every published number recomputed and compared exactly."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable

import numpy as np

from .criteria import bbd4_divisibility, constant_v_check, general_cpp_check, scalar_cpp_check
from .ff_core import field_of_order, make_mu3
from .oracle import check_pp, check_pp_cpp
from .polyshape import (
    bbd4_gamma,
    build_delta_family,
    build_gamma_family,
    dense_coefficients,
)


@dataclass(frozen=True)
class Check:
    fixture: str
    label: str
    expected: object
    computed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.computed


def seeded_units(q: int, count: int, seed: int = 0) -> list[int]:
    """``count`` distinct r in [1, q-1] with gcd(r, q-1) = 1, drawn with a fixed seed."""
    units = [r for r in range(1, q) if gcd(r, q - 1) == 1]
    rng = np.random.default_rng(seed)
    pick = rng.choice(len(units), size=min(count, len(units)), replace=False)
    return sorted(units[i] for i in pick)


def _scalar_example(name, q, delta, k, delta_sq, c_delta, tau, v_elem, psi):
    F = field_of_order(q)
    ctx = make_mu3(F, delta)
    t = build_delta_family(ctx, delta, 1 + k * ctx.s)
    rep = scalar_cpp_check(t)
    mu = ctx.mu3
    yield Check(name, "s", (q - 1) // 3, ctx.s)
    yield Check(name, "r", 1 + k * ctx.s, t.r)
    yield Check(name, "delta^2+delta+1", 0, F.add(F.add(F.mul(delta, delta), delta), 1))
    yield Check(name, "delta^2", delta_sq, F.mul(delta, delta))
    yield Check(name, "c(delta)", c_delta, t.c_table[1])
    yield Check(name, "c(delta)^s", 1, F.pow(t.c_table[1], ctx.s))
    yield Check(name, "tau", tau, rep.tau)
    yield Check(name, "v", v_elem, tuple(mu[i] for i in rep.v))
    yield Check(name, "psi_bar", psi, tuple(mu[i] for i in rep.psi_bar))
    yield Check(name, "H1 and H2", True, rep.is_cpp)
    yield Check(name, "v constant", True, constant_v_check(rep).family_certified)
    yield Check(name, "general G1-G4", True, general_cpp_check(t).is_cpp)
    yield Check(name, "oracle CPP", True, check_pp_cpp(t).is_cpp)


def example_109(seed=0):
    # psi_bar is the identity
    return _scalar_example("109", 109, 63, 2, 45, 27, (2, 17, 64), (1, 1, 1), (1, 63, 45))


def example_163(seed=0):
    # psi_bar(u) = delta^2 u
    return _scalar_example("163", 163, 58, 3, 104, 150, (2, 151, 2), (104,) * 3, (104, 1, 58))


def example_199(seed=0):
    # psi_bar(u) = delta u
    return _scalar_example("199", 199, 106, 3, 92, 78, (2, 79, 2), (106,) * 3, (106, 92, 1))


def counterexample_7(seed=0):
    name = "7"
    F = field_of_order(7)
    ctx = make_mu3(F, 2)
    t = build_delta_family(ctx, 2, 1)
    yield Check(name, "delta^2+1", 5, F.add(F.mul(2, 2), 1))
    yield Check(name, "F dense", [(1, 6), (3, 2), (5, 1)], dense_coefficients(t, plus_x=True))
    yield Check(name, "F(0), F(3), F(4)", (0, 0, 0), (t.F(0), t.F(3), t.F(4)))
    verdict = check_pp_cpp(t)
    yield Check(name, "F permutes", False, verdict.F_is_pp)
    yield Check(name, "preimages of 0", (0, 3, 4), verdict.F.preimages if verdict.F.image == 0 else None)


def counterexample_31(seed=0):
    name = "31"
    F = field_of_order(31)
    ctx = make_mu3(F, 25)
    t = build_delta_family(ctx, 25, 7)
    yield Check(name, "delta^2", 5, F.mul(25, 25))
    yield Check(name, "delta^2+1", 6, F.add(F.mul(25, 25), 1))
    yield Check(name, "8^10, 8^20", (1, 1), (F.pow(8, 10), F.pow(8, 20)))
    yield Check(name, "8^7", 2, F.pow(8, 7))
    yield Check(name, "5^10, 5^20", (5, 25), (F.pow(5, 10), F.pow(5, 20)))
    yield Check(name, "5^7", 5, F.pow(5, 7))
    yield Check(name, "f(8)", 2, t.f(8))
    yield Check(name, "F(5), F(8)", (10, 10), (t.F(5), t.F(8)))
    verdict = check_pp_cpp(t)
    yield Check(name, "first collision", ((5, 8), 10), (verdict.F.collision, verdict.F.image))
    yield Check(name, "F permutes", False, verdict.F_is_pp)
    yield Check(name, "failed condition", ["g3", "g4"], general_cpp_check(t).failed)


def _bbd4_instance(name, q, item, gamma, n_r=5, seed=0):
    F = field_of_order(q)
    ctx = make_mu3(F)
    yield Check(name, f"item {item} gamma", gamma, bbd4_gamma(item, F))
    yield Check(name, "divisibility", True, bbd4_divisibility(item, F).holds)
    for r in seeded_units(q, n_r, seed):
        t = build_gamma_family(ctx, gamma, r)
        yield Check(name, f"f is PP (r={r})", True, check_pp(t).is_bijection)


def bbd4_13(seed=0):
    return _bbd4_instance("13", 13, 1, 6, seed=seed)


def bbd4_25(seed=0):
    return _bbd4_instance("25", 25, 3, 2, seed=seed)


def bbd4_343(seed=0):
    return _bbd4_instance("343", 343, 2, 2, seed=seed)


FIXTURES: dict[str, Callable] = {
    "109": example_109,
    "163": example_163,
    "199": example_199,
    "7": counterexample_7,
    "31": counterexample_31,
    "13": bbd4_13,
    "25": bbd4_25,
    "343": bbd4_343,
}


def run_fixtures(only=None, corrupt: str | None = None, seed: int = 0) -> list[Check]:
    """Run the selected fixtures. ``corrupt`` names a fixture whose first
    expected value is replaced by a sentinel, as a negative control."""
    names = list(FIXTURES) if not only else list(only)
    unknown = [n for n in names if n not in FIXTURES]
    if unknown:
        raise KeyError(f"unknown fixture(s): {', '.join(unknown)}")
    out = []
    for name in names:
        checks = list(FIXTURES[name](seed=seed))
        if name == corrupt:
            c = checks[0]
            checks[0] = Check(c.fixture, c.label, ("corrupted", c.expected), c.computed)
        out.extend(checks)
    return out

