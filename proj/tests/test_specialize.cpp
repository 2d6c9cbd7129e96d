#include <doctest.h>

#include <random>

#include "parmot/specialize.hpp"

using namespace parmot;

namespace {

LaurentPoly gen(const RingCtx& c, int v, int e = 1) {
    return LaurentPoly::gen_pow(c.nvars(), v, e);
}

GradedSeries random_series(std::mt19937& rng, const RingCtx& c, Trunc t, bool zero_const) {
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<int> qe(-2, 2);
    std::uniform_int_distribution<int> num(-3, 3);
    GradedSeries s(t, c.nvars());
    for (int r = zero_const ? 1 : 0; r <= t.r_max; ++r) {
        for (int d = 0; d <= std::min(t.z_max, 2); ++d) {
            if (coin(rng) == 0) continue;
            int cc = num(rng);
            if (cc == 0) continue;
            // even qh powers keep the P-image parity-clean
            ScalarFraction f{gen(c, c.qh(), 2 * qe(rng)) * LaurentPoly::constant(c.nvars(), cc)};
            if (c.genus() > 0 && coin(rng) == 0) f *= ScalarFraction(gen(c, c.alpha(0), 1));
            s.add_term(GammaExponent(r), d, f);
        }
    }
    return s;
}

}  // namespace

TEST_CASE("E on generators and the universal L-function") {
    RingCtx c(2);
    const int n = c.nvars();
    // E(q) = uv
    ScalarFraction q{gen(c, c.qh(), 2)};
    CHECK(specialize_value(q, SpecTarget::E, c) ==
          ScalarFraction(gen(c, c.uh(), 2) * gen(c, c.vh(), 2)));

    // E(L)(z) = (1-uz)^g (1-vz)^g
    ScalarFraction l{l_univ(c)};
    LaurentPoly u = gen(c, c.uh(), 2), v = gen(c, c.vh(), 2), z = gen(c, c.z());
    LaurentPoly expect =
        ((LaurentPoly::constant(n, 1) - u * z) * (LaurentPoly::constant(n, 1) - v * z))
            .pow(c.genus());
    CHECK(specialize_value(l, SpecTarget::E, c) == ScalarFraction(expect));
}

TEST_CASE("P on E-images: u = v = t") {
    RingCtx c(1);
    const int n = c.nvars();
    LaurentPoly u = gen(c, c.uh(), 2), v = gen(c, c.vh(), 2), z = gen(c, c.z());
    LaurentPoly t = gen(c, c.t(), 1);
    ScalarFraction f{(LaurentPoly::constant(n, 1) - u * z) *
                     (LaurentPoly::constant(n, 1) - v * z)};
    ScalarFraction expect{(LaurentPoly::constant(n, 1) - t * z) *
                          (LaurentPoly::constant(n, 1) - t * z)};
    CHECK(specialize_value(f, SpecTarget::P, c) == expect);

    // odd residual half-powers are rejected
    ScalarFraction bad{gen(c, c.uh(), 1)};
    CHECK_THROWS_AS(specialize_value(bad, SpecTarget::P, c), std::domain_error);
    CHECK_THROWS_AS(specialize_value(bad, SpecTarget::E, c), std::domain_error);
}

TEST_CASE("direct specialized series equal the substitution route") {
    for (int delta = 0; delta <= 1; ++delta) {
        GenFunParams p;
        p.g = 1;
        p.delta = delta;
        if (delta > 0) p.points = {"p"};
        p.trunc = {2, 12};
        RingCtx c = p.ring();
        GradedSeries univ = build_omega(OmegaKind::Univ, p);
        for (auto target : {SpecTarget::E, SpecTarget::P}) {
            GradedSeries direct = omega_specialized(p, target);
            GradedSeries via = specialize_value(univ, target, c);
            INFO("delta ", delta, " target ", target == SpecTarget::E ? "E" : "P");
            REQUIRE(direct.terms().size() == via.terms().size());
            for (auto& [key, coeff] : direct.terms())
                CHECK(coeff == via.get_or_zero(key.first, key.second));
        }
    }
}

TEST_CASE("rank-1 stack class specializations") {
    for (int g = 1; g <= 2; ++g) {
        StackQuery q;
        q.g = g;
        q.divisor.points = {{"p", 2, 2}};
        q.kind = QueryKind::Full;
        q.eps = 1;
        q.gamma = GammaExponent(1, {{{0, 1}, 1}});
        q.zeta.entries[{0, 1}] = {Rational(1), Rational(2)};
        q.d = -2;
        q.trunc = {1, 24};
        RingCtx c(g);
        const int n = c.nvars();

        // P-value: t^{2g} (1-t)^{2g} / (t^2 - 1)
        ScalarFraction pval = e_p_conn(q, SpecTarget::P);
        LaurentPoly t = gen(c, c.t(), 1);
        ScalarFraction expect =
            ScalarFraction(LaurentPoly::gen_pow(n, c.t(), 2 * g) *
                           (LaurentPoly::constant(n, 1) - t).pow(2 * g)) /
            ScalarFraction(LaurentPoly::gen_pow(n, c.t(), 2) - LaurentPoly::constant(n, 1));
        CHECK(pval == expect);

        // E-value of the zero class is zero
        StackQuery qz = q;
        qz.d = -1;  // violates the degree constraint
        CHECK(e_p_conn(qz, SpecTarget::E).is_zero());

        // u <-> v symmetry of the E-image
        ScalarFraction ev = e_p_conn(q, SpecTarget::E);
        ScalarFraction swapped(ev.nvars());
        {
            std::map<int, ScalarFraction> swap_uv;
            swap_uv.emplace(c.uh(), ScalarFraction(gen(c, c.vh(), 1)));
            swap_uv.emplace(c.vh(), ScalarFraction(gen(c, c.uh(), 1)));
            swapped = ev.substitute(swap_uv);
        }
        CHECK(swapped == ev);

        // commutation with the kernel-side route
        CHECK(e_p_conn_direct(q, SpecTarget::E) == ev);
        CHECK(e_p_conn_direct(q, SpecTarget::P) == pval);
    }
}

TEST_CASE("specialization commutes with ring and plethystic operations") {
    RingCtx c(1);
    Trunc t{2, 4};
    std::mt19937 rng(321);
    for (auto target : {SpecTarget::E, SpecTarget::P}) {
        for (int i = 0; i < 8; ++i) {
            GradedSeries a = random_series(rng, c, t, true);
            GradedSeries b = random_series(rng, c, t, true);
            CHECK(specialize_value(a + b, target, c) ==
                  specialize_value(a, target, c) + specialize_value(b, target, c));
            CHECK(specialize_value(a * b, target, c) ==
                  specialize_value(a, target, c) * specialize_value(b, target, c));
            CHECK(specialize_value(adams(a, 2), target, c) ==
                  adams(specialize_value(a, target, c), 2));
            CHECK(specialize_value(pleth_exp(a), target, c) ==
                  pleth_exp(specialize_value(a, target, c)));
            CHECK(specialize_value(pleth_log(pleth_exp(a)), target, c) ==
                  pleth_log(pleth_exp(specialize_value(a, target, c))));
            auto pred = [](const GammaExponent& g, int d) { return (g.rank() + d) % 2 == 0; };
            CHECK(specialize_value(filter_terms(a, pred), target, c) ==
                  filter_terms(specialize_value(a, target, c), pred));
        }
    }
}
