from math import gcd

import numpy as np
import pytest

from fibercpp.criteria import (
    AgwData,
    ZieveInput,
    agw_check,
    agw_data_for,
    bbd3_hypothesis,
    bbd4_divisibility,
    constant_v_check,
    general_cpp_check,
    mu_d,
    scalar_cpp_check,
    zieve_check,
)
from fibercpp.errors import (
    CNotKernelValued,
    DNotDividing,
    GammaDegenerate,
    HypothesisViolated,
    MalformedTable,
    NotOneModNine,
    RNotScalarForm,
    ZeroCValue,
)
from fibercpp.ff_core import fiber_elements, field_of_order, is_prime, make_mu3, prime_power
from fibercpp.oracle import check_image_table, check_pp, check_pp_cpp
from fibercpp.polyshape import (
    Bbd3Params,
    Bbd3Variant,
    CycloTrinomial,
    build_delta_family,
    build_gamma_family,
)


def zieve_images(F, d, r, h_values, zeta=None):
    """x^r h(x^((q-1)/d)) as a table, with h read off mu_d by index."""
    roots = mu_d(F, d, zeta)
    where = {u: j for j, u in enumerate(roots)}
    e = (F.q - 1) // d
    out = [0]
    for x in range(1, F.q):
        h = h_values[where[F.pow(x, e)]]
        out.append(F.mul(F.pow(x, r), h))
    return out


class TestZieve:
    def test_mu_d(self):
        F = field_of_order(13)
        assert mu_d(F, 3) == [1, 3, 9]
        assert mu_d(F, 1) == [1]
        assert sorted(mu_d(F, 12)) == list(range(1, 13))
        with pytest.raises(DNotDividing):
            mu_d(F, 5)

    def test_example_from_trinomial(self):
        t = build_delta_family(make_mu3(field_of_order(109), 63), 63, 73)
        res = zieve_check(ZieveInput.from_trinomial(t))
        assert res.is_pp and res.coprime

    def test_zero_h_value(self):
        F = field_of_order(13)
        assert not zieve_check(ZieveInput(F, 3, 1, (1, 0, 1))).is_pp

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            ZieveInput(field_of_order(13), 3, 1, (1, 2))

    @pytest.mark.parametrize("q, d", [(13, 2), (13, 4), (13, 6), (31, 5), (25, 4), (16, 5), (37, 9)])
    def test_general_d_matches_oracle(self, q, d):
        F = field_of_order(q)
        rng = np.random.default_rng(q * 100 + d)
        for _ in range(40):
            r = int(rng.integers(1, q))
            h = tuple(int(v) for v in rng.integers(0, q, size=d))
            verdict = zieve_check(ZieveInput(F, d, r, h)).is_pp
            assert verdict == check_image_table(F, zieve_images(F, d, r, h)).is_bijection


def _agw_instance(rng, mode):
    """Random (A, S, g, lambda, lambda_bar, g_bar) with commutation and surjectivity.

    ``mode == "perm"``: g is a bijection, lambda_bar = g_bar . lambda . g^-1
    with g_bar a bijection. Otherwise lambda_bar = lambda and g sends each
    fiber into the fiber over g_bar(s), arbitrarily.
    """
    S = int(rng.integers(1, 6))
    size = int(rng.integers(1, 5))
    A = S * size
    lam = np.repeat(np.arange(S), size)
    rng.shuffle(lam)
    if mode == "perm":
        g = rng.permutation(A)
        g_bar = rng.permutation(S)
        g_inv = np.argsort(g)
        lam_bar = g_bar[lam[g_inv]]
    else:
        g_bar = rng.integers(0, S, size=S) if rng.random() < 0.5 else rng.permutation(S)
        lam_bar = lam
        g = np.empty(A, dtype=np.int64)
        for a in range(A):
            target = np.flatnonzero(lam == g_bar[lam[a]])
            g[a] = target[rng.integers(0, len(target))]
        if rng.random() < 0.5:
            # make g fiberwise injective when g_bar is a bijection
            if len(set(g_bar.tolist())) == S:
                for s in range(S):
                    src = np.flatnonzero(lam == s)
                    dst = np.flatnonzero(lam == g_bar[s])
                    g[src] = rng.permutation(dst)
    tup = lambda v: tuple(int(x) for x in v)
    return AgwData(A, S, tup(g), tup(lam), tup(lam_bar), tup(g_bar))


class TestAgw:
    def test_constructed_instances(self):
        rng = np.random.default_rng(0)
        seen = set()
        for i in range(100):
            data = _agw_instance(rng, "perm" if i % 2 else "fiber")
            res = agw_check(data)
            assert res.commutes and res.surjective
            assert res.g_bijective == res.gbar_bijective_and_fibers_injective
            assert res.g_bijective == (len(set(data.g_map)) == data.A_size)
            seen.add(res.g_bijective)
        assert seen == {True, False}

    def test_random_tables_never_raise(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            A, S = int(rng.integers(1, 8)), int(rng.integers(1, 4))
            tup = lambda n, m: tuple(int(x) for x in rng.integers(0, m, size=n))
            data = AgwData(A, S, tup(A, A), tup(A, S), tup(A, S), tup(S, S))
            agw_check(data)

    def test_small_instances(self):
        assert agw_check(AgwData(2, 2, (0, 1), (0, 1), (0, 1), (0, 1))).g_bijective
        res = agw_check(AgwData(2, 1, (0, 0), (0, 0), (0, 0), (0,)))
        assert not res.g_bijective and not res.gbar_bijective_and_fibers_injective

    def test_malformed(self):
        with pytest.raises(MalformedTable):
            agw_check(AgwData(2, 1, (0,), (0, 0), (0, 0), (0,)))
        with pytest.raises(MalformedTable):
            agw_check(AgwData(2, 1, (0, 2), (0, 0), (0, 0), (0,)))

    @pytest.mark.parametrize("q, delta, r", [(109, 63, 73), (7, 2, 1), (31, 25, 7), (13, 3, 5)])
    def test_on_trinomials_matches_oracle(self, q, delta, r):
        t = build_delta_family(make_mu3(field_of_order(q), delta), delta, r)
        res = agw_check(agw_data_for(t))
        assert res.commutes or not check_pp_cpp(t).F_is_pp
        if res.commutes:
            assert res.g_bijective == check_pp_cpp(t).F_is_pp


class TestBbd3:
    def test_delta_one_in_f13(self):
        ctx = make_mu3(field_of_order(13))
        h = bbd3_hypothesis(ctx, Bbd3Params(Bbd3Variant.DELTA, r=1, delta=1))
        assert h.witness == 4
        assert pow(4, 4, 13) == 9
        assert not h.holds

    def test_gamma_degenerate(self):
        ctx = make_mu3(field_of_order(13))
        with pytest.raises(GammaDegenerate):
            bbd3_hypothesis(ctx, Bbd3Params(Bbd3Variant.GAMMA, r=1, gamma=1))
        with pytest.raises(GammaDegenerate):
            bbd3_hypothesis(ctx, Bbd3Params(Bbd3Variant.GAMMA, r=1, gamma=11))

    def test_r_coprime_reported(self):
        ctx = make_mu3(field_of_order(109))
        h = bbd3_hypothesis(ctx, Bbd3Params(Bbd3Variant.DELTA, r=2, delta=63))
        assert not h.r_coprime

    @pytest.mark.parametrize("q", [7, 13, 19, 31, 37, 43, 61, 67, 73, 79])
    def test_implies_pp(self, q):
        F = field_of_order(q)
        ctx = make_mu3(F)
        units = [r for r in range(1, q) if gcd(r, q - 1) == 1][:6]
        for delta in ctx.mu3:
            if not bbd3_hypothesis(ctx, Bbd3Params(Bbd3Variant.DELTA, 1, delta=delta)).holds:
                continue
            for r in units:
                assert check_pp(build_delta_family(ctx, delta, r)).is_bijection
        for gamma in range(q):
            if gamma in (1, q - 2):
                continue
            if bbd3_hypothesis(ctx, Bbd3Params(Bbd3Variant.GAMMA, 1, gamma=gamma)).holds:
                for r in units:
                    assert check_pp(build_gamma_family(ctx, gamma, r)).is_bijection


class TestBbd4:
    QUALIFYING = {
        1: [q for q in range(2, 1001) if prime_power(q) and q % 6 == 1],
        2: [q for q in range(2, 1001) if prime_power(q) and prime_power(q)[0] % 3 == 1
            and prime_power(q)[1] % 3 == 0],
        3: [q for q in range(2, 1001) if prime_power(q) and prime_power(q)[0] >= 5
            and prime_power(q)[0] % 3 == 2 and prime_power(q)[1] % 2 == 0],
    }

    @pytest.mark.parametrize("item", [1, 2, 3])
    def test_holds_wherever_item_applies(self, item):
        qs = self.QUALIFYING[item]
        assert qs
        for q in qs:
            assert bbd4_divisibility(item, field_of_order(q)).holds, q

    def test_343(self):
        assert 343 in self.QUALIFYING[2]
        assert bbd4_divisibility(2, field_of_order(343)).detail == "p-1 = 6 divides s = 114"

    def test_violation(self):
        with pytest.raises(HypothesisViolated):
            bbd4_divisibility(2, field_of_order(13))


class TestGeneral:
    def test_identity_like_example(self):
        t = CycloTrinomial(make_mu3(field_of_order(13)), 1, (1, 1, 1))
        rep = general_cpp_check(t)
        assert rep.is_cpp
        assert rep.v == (1, 1, 1)
        assert t.ctx.mu3[1] == 3
        assert check_pp_cpp(t).is_cpp

    def test_31_fails_g3_g4(self):
        t = build_delta_family(make_mu3(field_of_order(31), 25), 25, 7)
        rep = general_cpp_check(t)
        assert rep.failed == ["g3", "g4"]
        assert "g3" in rep.diagnostics

    def test_zero_c(self):
        with pytest.raises(ZeroCValue):
            general_cpp_check(CycloTrinomial(make_mu3(field_of_order(13)), 1, (1, 0, 1)))

    def test_bad_representative(self):
        t = CycloTrinomial(make_mu3(field_of_order(13)), 1, (1, 1, 1))
        with pytest.raises(ValueError):
            general_cpp_check(t, representatives=(1, 1, 1))

    @pytest.mark.parametrize("q", [7, 13, 19, 31, 37, 43, 61, 109, 127])
    def test_sound_against_oracle(self, q):
        ctx = make_mu3(field_of_order(q))
        for delta in ctx.mu3:
            for r in range(1, min(q, 40)):
                t = build_delta_family(ctx, delta, r)
                if 0 in t.c_table:
                    continue
                if general_cpp_check(t).is_cpp:
                    assert check_pp_cpp(t).is_cpp


class TestScalar:
    def test_109(self):
        t = build_delta_family(make_mu3(field_of_order(109), 63), 63, 73)
        rep = scalar_cpp_check(t)
        assert rep.k == 2 and rep.tau == (2, 17, 64) and rep.v == (0, 0, 0)
        assert rep.is_cpp
        cv = constant_v_check(rep)
        assert cv.family_certified and cv.alpha == 0

    def test_k_zero_allowed(self):
        t = build_delta_family(make_mu3(field_of_order(109), 63), 63, 1)
        assert scalar_cpp_check(t).k == 0

    def test_errors(self):
        ctx13 = make_mu3(field_of_order(13))
        with pytest.raises(NotOneModNine):
            scalar_cpp_check(CycloTrinomial(ctx13, 1, (1, 1, 1)))
        ctx = make_mu3(field_of_order(109))
        with pytest.raises(RNotScalarForm):
            scalar_cpp_check(CycloTrinomial(ctx, 2, (1, 1, 1)))
        with pytest.raises(CNotKernelValued):
            bad = next(c for c in range(2, 109) if pow(c, 36, 109) != 1)
            scalar_cpp_check(CycloTrinomial(ctx, 1, (bad, 1, 1)))

    def test_tau_zero_fails_h1(self):
        ctx = make_mu3(field_of_order(109))
        rep = scalar_cpp_check(CycloTrinomial(ctx, 1, (108, 1, 1)))
        assert not rep.h1 and not rep.is_cpp and rep.psi_bar is None

    def test_constant_v_negative(self):
        ctx = make_mu3(field_of_order(109))
        for c in range(1, 109):
            if pow(c, 36, 109) != 1:
                continue
            rep = scalar_cpp_check(CycloTrinomial(ctx, 1, (c, 1, 1)))
            cv = constant_v_check(rep)
            assert cv.family_certified == (None not in rep.v and len(set(rep.v)) == 1)


def _kernel_values(ctx):
    return [int(x) for x in ctx.kernel]


@pytest.mark.parametrize("q", [q for q in range(7, 201) if is_prime(q) and q % 3 == 1])
def test_representative_independence(q):
    ctx = make_mu3(field_of_order(q))
    fibers = [fiber_elements(ctx, i) for i in range(3)]
    K = _kernel_values(ctx)
    rng = np.random.default_rng(q)
    for delta in ctx.mu3:
        for r in (1, 5, 7, 1 + ctx.s):
            t = build_delta_family(ctx, delta, r)
            if 0 in t.c_table:
                continue
            base = general_cpp_check(t)
            js = range(ctx.s) if ctx.s <= 24 else rng.choice(ctx.s, 24, replace=False)
            for j in js:
                reps = tuple(int(f[j]) for f in fibers)
                other = general_cpp_check(t, representatives=reps)
                assert (other.g2, other.g3) == (base.g2, base.g3)
                if base.g3:
                    assert other.v == base.v
    assert len(K) == ctx.s


@pytest.mark.parametrize("q", [q for q in range(19, 800) if is_prime(q) and q % 9 == 1])
def test_scalar_transition(q):
    F = field_of_order(q)
    ctx = make_mu3(F)
    kernel_c = [c for c in range(1, q) if F.pow(c, ctx.s) == 1][:6]
    for k in range(0, 4):
        r = 1 + k * ctx.s
        for c0 in kernel_c:
            for c1 in kernel_c[:3]:
                t = CycloTrinomial(ctx, r, (c0, c1, 1))
                sc = scalar_cpp_check(t)
                if not sc.h1:
                    continue
                gen = general_cpp_check(t)
                assert gen.v == sc.v
                assert gen.psi_bar == sc.psi_bar
                assert gen.is_cpp == sc.is_cpp
