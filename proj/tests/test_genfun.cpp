#include <doctest.h>

#include <stdexcept>

#include "parmot/genfun.hpp"

using namespace parmot;

namespace {

ScalarFraction one(const RingCtx& c) { return ScalarFraction::one(c.nvars()); }

ScalarFraction qh_pow(const RingCtx& c, int e) {
    return ScalarFraction(LaurentPoly::gen_pow(c.nvars(), c.qh(), e));
}

// z-coefficient slices of a Laurent polynomial
std::map<int, LaurentPoly> z_slices(const RingCtx& c, const LaurentPoly& p) {
    std::map<int, LaurentPoly> out;
    for (auto& [m, coef] : p.terms()) {
        Monomial mm = m;
        int zd = mm[c.z()];
        mm[c.z()] = 0;
        auto it = out.find(zd);
        if (it == out.end()) it = out.emplace(zd, LaurentPoly::zero(c.nvars())).first;
        it->second.add_term(mm, coef);
    }
    return out;
}

// Verify that a z-expansion really expands the given rational function:
// (sum_d c_d z^d) * den - num must vanish at every z-degree the truncation
// still controls.
void check_expansion_against_fraction(const RingCtx& c, const GenFunParams& p,
                                      const GammaExponent& g,
                                      const GradedSeries& series, const ScalarFraction& fr) {
    const int n = c.nvars();
    int den_deg = 0;
    for (auto& [m, coef] : fr.den().terms()) den_deg = std::max(den_deg, m[c.z()]);
    const int safe = p.trunc.z_max - den_deg;

    ScalarFraction total = ScalarFraction::zero(n);
    for (int d = 0; d <= p.trunc.z_max; ++d) {
        ScalarFraction cd = series.get_or_zero(g, d);
        if (cd.is_zero()) continue;
        for (int v : cd.den().used_vars()) CHECK(v != c.z());  // z lives in the grading only
        for (int v : cd.num().used_vars()) CHECK(v != c.z());
        total += cd * ScalarFraction(LaurentPoly::gen_pow(n, c.z(), d));
    }
    ScalarFraction resid = total * ScalarFraction(fr.den()) - ScalarFraction(fr.num());
    auto slices = z_slices(c, resid.num());
    for (auto& [zd, poly] : slices) {
        if (zd <= safe) {
            INFO("z-degree ", zd);
            CHECK(poly.is_zero());
        }
    }
}

}  // namespace

TEST_CASE("universal L-function: genus 0 and 1, functional equation") {
    RingCtx c0(0);
    CHECK(l_univ(c0).is_one());

    RingCtx c1(1);
    const int n = c1.nvars();
    LaurentPoly a = LaurentPoly::gen_pow(n, c1.alpha(0), 1);
    LaurentPoly ainv = LaurentPoly::gen_pow(n, c1.alpha(0), -1);
    LaurentPoly q = LaurentPoly::gen_pow(n, c1.qh(), 2);
    LaurentPoly z = LaurentPoly::gen_pow(n, c1.z(), 1);
    LaurentPoly expect = (LaurentPoly::constant(n, 1) - a * z) *
                         (LaurentPoly::constant(n, 1) - q * ainv * z);
    CHECK(l_univ(c1) == expect);

    // L(q^{-1} z^{-1}) = q^{-g} z^{-2g} L(z), symbolically, for g = 1..3
    for (int g = 1; g <= 3; ++g) {
        RingCtx c(g);
        const int nv = c.nvars();
        ScalarFraction l{l_univ(c)};
        std::map<int, ScalarFraction> assign;
        Monomial m(nv, 0);
        m[c.qh()] = -2;
        m[c.z()] = -1;
        assign.emplace(c.z(), ScalarFraction(LaurentPoly::monomial(nv, m, 1)));
        ScalarFraction lhs = l.substitute(assign);
        Monomial mm(nv, 0);
        mm[c.qh()] = -2 * g;
        mm[c.z()] = -2 * g;
        ScalarFraction rhs = ScalarFraction(LaurentPoly::monomial(nv, mm, 1)) * l;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("f_mu: empty, single-row, and formal-denominator sanity") {
    RingCtx c(2);
    const int n = c.nvars();
    CHECK(f_mu(c, Partition()) == one(c));

    // f_{(m)} = prod_k (1 - a_k^{-1}) / (1 - a_k^{-1} z^m)
    for (int m = 1; m <= 3; ++m) {
        ScalarFraction expect = one(c);
        for (int k = 0; k < 2; ++k) {
            LaurentPoly ak = LaurentPoly::gen_pow(n, c.alpha(k), -1);
            LaurentPoly zm = LaurentPoly::gen_pow(n, c.z(), m);
            expect *= ScalarFraction(LaurentPoly::constant(n, 1) - ak) /
                      ScalarFraction(LaurentPoly::constant(n, 1) - ak * zm);
        }
        CHECK(f_mu(c, Partition({m})) == expect);
    }

    // equal parts produce z-free unit factors (1 - q^{i-j}); verify the
    // fraction is well-formed and nonzero for small 2-row shapes
    for (auto mu : {Partition({1, 1}), Partition({2, 1}), Partition({2, 2})}) {
        ScalarFraction f = f_mu(c, mu);
        CHECK(!f.is_zero());
    }

    CHECK_THROWS_AS(f_mu(c, Partition({1, 1, 1, 1, 1, 1, 1})), std::length_error);
}

TEST_CASE("omega constant terms are 1") {
    for (auto kind : {OmegaKind::Univ, OmegaKind::Hlv, OmegaKind::Sch, OmegaKind::EPoly,
                      OmegaKind::PPoly}) {
        GenFunParams p;
        p.g = 1;
        p.delta = 1;
        p.points = {"p"};
        p.trunc = {1, 12};
        GradedSeries s = build_omega(kind, p);
        CHECK(s.constant_term() == one(p.ring()));
    }
}

TEST_CASE("omega_univ rank-1 term matches its closed form, D empty") {
    // coefficient at w^1: (-qh)^{2g} L(z q^{-1}) / ((z^2-1)(1-q))
    for (int g = 1; g <= 2; ++g) {
        GenFunParams p;
        p.g = g;
        p.delta = 0;
        p.trunc = {1, 16};
        RingCtx c = p.ring();
        const int n = c.nvars();
        GradedSeries s = build_omega(OmegaKind::Univ, p);

        LaurentPoly num = l_univ_at(c, 1, -2) * LaurentPoly::gen_pow(n, c.qh(), 2 * g);
        LaurentPoly z2 = LaurentPoly::gen_pow(n, c.z(), 2);
        LaurentPoly q = LaurentPoly::gen_pow(n, c.qh(), 2);
        LaurentPoly den = (z2 - LaurentPoly::constant(n, 1)) * (LaurentPoly::constant(n, 1) - q);
        check_expansion_against_fraction(c, p, GammaExponent(1), s,
                                         ScalarFraction(num, den));
    }
}

TEST_CASE("per-partition expansions match the exact scalar fractions") {
    // strong oracle for the factor-inventory expansion machinery, D empty
    GenFunParams p;
    p.g = 1;
    p.delta = 1;
    p.trunc = {3, 18};
    RingCtx c = p.ring();
    for (auto kind : {OmegaKind::Univ, OmegaKind::Hlv, OmegaKind::Sch}) {
        for (auto mu : {Partition({1}), Partition({2}), Partition({1, 1}), Partition({2, 1})}) {
            GradedSeries term = build_omega_mu_term(kind, p, mu);
            ScalarFraction fr = omega_term_scalar(kind, p, mu);
            INFO("kind ", (int)kind, " mu ", mu.to_string());
            check_expansion_against_fraction(c, p, GammaExponent(mu.size()), term, fr);
        }
    }
}

TEST_CASE("substitution identity per partition (scalar part)") {
    // univ term with w -> w q^{-delta/2} equals hlv term with a -> a z, z -> z^2
    for (int g = 1; g <= 2; ++g) {
        for (int delta = 0; delta <= 2; ++delta) {
            GenFunParams p;
            p.g = g;
            p.delta = delta;
            p.trunc = {3, 10};
            RingCtx c = p.ring();
            const int n = c.nvars();
            for (int m = 0; m <= 3; ++m) {
                for (auto& mu : partitions_of(m)) {
                    ScalarFraction lhs = omega_term_scalar(OmegaKind::Univ, p, mu) *
                                         qh_pow(c, -delta * mu.size());
                    ScalarFraction hlv = omega_term_scalar(OmegaKind::Hlv, p, mu);
                    std::map<int, ScalarFraction> assign;
                    LaurentPoly z = LaurentPoly::gen_pow(n, c.z(), 1);
                    for (int i = 0; i < g; ++i)
                        assign.emplace(c.alpha(i),
                                       ScalarFraction(LaurentPoly::gen_pow(n, c.alpha(i), 1) * z));
                    assign.emplace(c.z(), ScalarFraction(LaurentPoly::gen_pow(n, c.z(), 2)));
                    ScalarFraction rhs = hlv.substitute(assign);
                    INFO("g ", g, " delta ", delta, " mu ", mu.to_string());
                    CHECK(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("hlv mu=(1) term: direct N-ratio evaluation") {
    GenFunParams p;
    p.g = 1;
    p.delta = 0;
    p.trunc = {1, 10};
    RingCtx c = p.ring();
    const int n = c.nvars();
    // N_{(1)}(u) = (1 - u q)(z - u^{-1}); ratio at u = a^{-1} over u = 1
    LaurentPoly onep = LaurentPoly::constant(n, 1);
    LaurentPoly q = LaurentPoly::gen_pow(n, c.qh(), 2);
    LaurentPoly z = LaurentPoly::gen_pow(n, c.z(), 1);
    LaurentPoly a = LaurentPoly::gen_pow(n, c.alpha(0), 1);
    LaurentPoly ainv = LaurentPoly::gen_pow(n, c.alpha(0), -1);
    ScalarFraction expect = ScalarFraction((onep - ainv * q) * (z - a)) /
                            ScalarFraction((onep - q) * (z - onep));
    CHECK(omega_term_scalar(OmegaKind::Hlv, p, Partition({1})) == expect);
}

TEST_CASE("kernels: zero constant term and the rank-1 value at z=1") {
    for (int g = 1; g <= 2; ++g) {
        GenFunParams p;
        p.g = g;
        p.delta = 0;
        p.trunc = {1, 20};
        RingCtx c = p.ring();
        const int n = c.nvars();
        Kernels k = dt_kernels(p);
        CHECK(k.h_univ.constant_term().is_zero());
        CHECK(k.h_sch.constant_term().is_zero());

        EvalZOneResult ev = eval_z_one(k.h_univ, 5);
        REQUIRE(ev.ok());
        // rank-1 value: L(1)/(q-1)
        ScalarFraction expect =
            ScalarFraction(l_univ_at(c, 0, 0)) /
            ScalarFraction(LaurentPoly::gen_pow(n, c.qh(), 2) - LaurentPoly::constant(n, 1));
        CHECK(ev.value.at(GammaExponent(1)) == expect);
    }
}

TEST_CASE("Mellit identity at desk scale, with and without a marked point") {
    GenFunParams p;
    p.g = 1;
    p.delta = 0;
    p.trunc = {2, 24};
    MellitReport rep = check_mellit(p, 5);
    CHECK(!rep.inconclusive);
    CHECK(rep.all_equal);

    GenFunParams p1;
    p1.g = 1;
    p1.delta = 1;
    p1.points = {"p"};
    p1.trunc = {2, 24};
    MellitReport rep1 = check_mellit(p1, 5);
    CHECK(!rep1.inconclusive);
    CHECK(rep1.all_equal);

    // r_max = 0 is a vacuous pass (both kernels have no nonzero classes)
    GenFunParams p0;
    p0.g = 1;
    p0.delta = 0;
    p0.trunc = {0, 8};
    MellitReport rep0 = check_mellit(p0, 3);
    CHECK(!rep0.inconclusive);
    CHECK(rep0.all_equal);
}

TEST_CASE("alpha-denominators of f_mu cancel in every stored Sch coefficient") {
    GenFunParams p;
    p.g = 1;
    p.delta = 1;
    p.trunc = {2, 14};
    RingCtx c = p.ring();
    const int n = c.nvars();
    GradedSeries s = build_omega(OmegaKind::Sch, p);

    // strip unit binomials (1 - a^{-1} q^m) by exact division of both sides
    auto strip = [&](ScalarFraction f) {
        bool progress = true;
        while (progress) {
            progress = false;
            for (int m = -2 * p.trunc.r_max; m <= 2 * p.trunc.r_max; ++m) {
                Monomial mono(n, 0);
                mono[c.alpha(0)] = -1;
                mono[c.qh()] = 2 * m;
                LaurentPoly cand =
                    LaurentPoly::constant(n, 1) - LaurentPoly::monomial(n, mono, 1);
                auto qd = try_exact_divide(f.den(), cand);
                auto qn = try_exact_divide(f.num(), cand);
                if (qd && qn) {
                    f = ScalarFraction(*qn, *qd);
                    progress = true;
                }
            }
        }
        return f;
    };

    for (auto& [key, coeff] : s.terms()) {
        ScalarFraction red = strip(coeff);
        for (int v : red.den().used_vars()) {
            INFO("gamma ", key.first.to_string(), " zdeg ", key.second);
            CHECK(v == c.qh());
        }
    }
}

TEST_CASE("admissibility: (q-1)(1-z) Log Omega_hlv has polynomial coefficients") {
    GenFunParams p;
    p.g = 1;
    p.delta = 1;
    p.trunc = {2, 14};
    RingCtx c = p.ring();
    const int n = c.nvars();
    GradedSeries lg = pleth_log(build_omega(OmegaKind::Hlv, p));
    GradedSeries one_minus_z = GradedSeries::one(p.trunc, n);
    one_minus_z.add_term(GammaExponent(), 1, ScalarFraction::constant(n, -1));
    ScalarFraction qm1 =
        ScalarFraction(LaurentPoly::gen_pow(n, c.qh(), 2) - LaurentPoly::constant(n, 1));
    GradedSeries adm = (one_minus_z * lg) * qm1;
    for (auto& [key, coeff] : adm.terms()) {
        ScalarFraction red = coeff.deep_reduce();
        INFO("gamma ", key.first.to_string(), " zdeg ", key.second, " -> ", red.to_string(c));
        CHECK(red.is_polynomial());
    }
}
