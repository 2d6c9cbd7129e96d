#include <doctest.h>

#include <random>
#include <stdexcept>

#include "parmot/moduli.hpp"

using namespace parmot;

namespace {

DivisorSpec one_point(int n, int nprime) {
    DivisorSpec d;
    d.points = {{"p", n, nprime}};
    return d;
}

GammaExponent flags(int r, std::initializer_list<std::pair<int, int>> jm) {
    GammaExponent g(r);
    for (auto& [j, m] : jm) g.parts[{0, j}] = m;
    return g;
}

// random class over a fixed divisor, flags j <= 3
GammaExponent random_gamma(std::mt19937& rng, int npoints, int max_rank) {
    std::uniform_int_distribution<int> rd(0, max_rank);
    int r = rd(rng);
    GammaExponent g(r);
    std::uniform_int_distribution<int> jd(1, 3);
    for (int x = 0; x < npoints; ++x) {
        int left = r;
        while (left > 0) {
            int j = jd(rng);
            std::uniform_int_distribution<int> md(1, left);
            int m = md(rng);
            g.parts[{x, j}] += m;
            left -= m;
        }
    }
    // merge duplicates already handled by map +=; re-validate
    std::map<std::pair<int, int>, int> cleaned;
    for (auto& [k, m] : g.parts)
        if (m > 0) cleaned[k] = m;
    return GammaExponent(r, cleaned);
}

ScalarFraction qh_pow(const RingCtx& c, int e) {
    return ScalarFraction(LaurentPoly::gen_pow(c.nvars(), c.qh(), e));
}

}  // namespace

TEST_CASE("class predicates: full, resonance, summand closure") {
    DivisorSpec d = one_point(2, 2);
    NormalForm zeta;
    zeta.entries[{0, 1}] = {Rational(1), Rational(0)};
    zeta.entries[{0, 2}] = {Rational(2), Rational(0)};

    auto p_full = class_predicates(flags(2, {{1, 1}, {2, 1}}), d, zeta);
    CHECK(p_full.full_at.count(0));
    CHECK(p_full.nonresonant_at.count(0));
    CHECK(p_full.admissible);

    auto p_nonfull = class_predicates(flags(2, {{1, 2}}), d, zeta);
    CHECK(!p_nonfull.full_at.count(0));
    CHECK(!p_nonfull.admissible);

    // equal top coefficients -> resonant
    NormalForm res;
    res.entries[{0, 1}] = {Rational(3), Rational(0)};
    res.entries[{0, 2}] = {Rational(3), Rational(1)};
    auto p_res = class_predicates(flags(2, {{1, 1}, {2, 1}}), d, res);
    CHECK(!p_res.nonresonant_at.count(0));
    CHECK(!p_res.admissible);

    // missing zeta entry is an error
    NormalForm partial;
    partial.entries[{0, 1}] = {Rational(1), Rational(0)};
    CHECK_THROWS_AS(class_predicates(flags(2, {{1, 1}, {2, 1}}), d, partial),
                    std::out_of_range);

    // summand closure: gamma1 + gamma2 admissible => each admissible
    std::mt19937 rng(17);
    NormalForm nz;
    for (int j = 1; j <= 3; ++j) nz.entries[{0, j}] = {Rational(j), Rational(0)};
    for (int i = 0; i < 300; ++i) {
        GammaExponent g1 = random_gamma(rng, 1, 2);
        GammaExponent g2 = random_gamma(rng, 1, 2);
        auto sum = class_predicates(g1 + g2, d, nz);
        if (sum.admissible) {
            CHECK(class_predicates(g1, d, nz).admissible);
            CHECK(class_predicates(g2, d, nz).admissible);
        }
    }
}

TEST_CASE("star products") {
    DivisorSpec d = one_point(1, 1);
    NormalForm zeta;
    zeta.entries[{0, 1}] = {Rational(3, 2)};
    CHECK(star_residues(GammaExponent(), d, zeta) == 0);
    CHECK(star_residues(flags(1, {{1, 1}}), d, zeta) == Rational(3, 2));

    // undefined residue when n' < n
    DivisorSpec dp = one_point(2, 1);
    NormalForm zp;
    zp.entries[{0, 1}] = {Rational(1)};
    CHECK_THROWS_AS(star_residues(flags(1, {{1, 1}}), dp, zp), std::domain_error);

    // bilinearity on random data
    std::mt19937 rng(23);
    NormalForm nz;
    for (int j = 1; j <= 3; ++j) {
        Rational r(2 * j + 1, 3);
        r.canonicalize();
        nz.entries[{0, j}] = {r};
    }
    Weights w;
    for (int j = 1; j <= 3; ++j) {
        Rational r(j, 7);
        r.canonicalize();
        w.sigma[{0, j}] = r;
    }
    for (int i = 0; i < 200; ++i) {
        GammaExponent g1 = random_gamma(rng, 1, 3);
        GammaExponent g2 = random_gamma(rng, 1, 3);
        CHECK(star_residues(g1 + g2, d, nz) ==
              star_residues(g1, d, nz) + star_residues(g2, d, nz));
        CHECK(star_weights(g1 + g2, w) == star_weights(g1, w) + star_weights(g2, w));
    }
}

TEST_CASE("chi in both modes") {
    for (int g = 0; g <= 3; ++g) {
        for (int n = 1; n <= 3; ++n) {
            DivisorSpec d = one_point(n, n);
            int delta = n - 1;
            // r = 1, full mode: (2g-2) - delta
            CHECK(chi_of(flags(1, {{1, 1}}), d, g, ChiMode::Full) == (2 * g - 2) - delta);
            CHECK(chi_of(GammaExponent(), d, g, ChiMode::Full) == 0);
        }
    }

    // the x-contribution of a full class: 2 n_x sum_{i<j} r_i r_j = n_x r (r-1)
    for (int r = 1; r <= 4; ++r) {
        int n = 3, g = 2;
        DivisorSpec d = one_point(n, n);
        GammaExponent full(r);
        for (int j = 1; j <= r; ++j) full.parts[{0, j}] = 1;
        long base = (2 * g - 2) * r * r - (n - 1) * r;
        CHECK(chi_of(full, d, g, ChiMode::Full) == base + (long)n * r * (r - 1));
    }

    // D' = D: partial mode equals full mode
    std::mt19937 rng(31);
    DivisorSpec d;
    d.points = {{"p", 2, 2}, {"q", 3, 3}};
    for (int i = 0; i < 200; ++i) {
        GammaExponent g = random_gamma(rng, 2, 3);
        CHECK(chi_of(g, d, 2, ChiMode::Full) == chi_of(g, d, 2, ChiMode::Partial));
    }

    // 2 beta(gamma) - delta rk = chi with beta = (g-1)r^2 + sum n_y sum_{i<j} ...
    for (int i = 0; i < 200; ++i) {
        GammaExponent g = random_gamma(rng, 2, 3);
        long r = g.rank();
        long cross = 0;
        for (int x = 0; x < 2; ++x) {
            std::vector<int> mults;
            for (auto& [k, m] : g.parts)
                if (k.first == x) mults.push_back(m);
            long c = 0;
            for (size_t a = 0; a < mults.size(); ++a)
                for (size_t b = a + 1; b < mults.size(); ++b) c += (long)mults[a] * mults[b];
            cross += d.points[x].n * c;
        }
        long beta = (2 - 1) * r * r + cross;  // genus 2: (g-1) = 1
        long delta = d.deg() - (long)d.points.size();
        CHECK(2 * beta - delta * r == chi_of(g, d, 2, ChiMode::Full));
    }
}

TEST_CASE("Euler pairing and the additivity defect of chi") {
    DivisorSpec d = one_point(1, 1);
    CHECK(euler_pairing(GammaExponent(), 0, GammaExponent(), 0, d, 2) == 0);

    // rank-1 vs rank-1 without flags: (1-g) + d2 - d1
    DivisorSpec empty;
    for (int g = 0; g <= 3; ++g)
        CHECK(euler_pairing(GammaExponent(1), 3, GammaExponent(1), -2, empty, g) ==
              (1 - g) + (-2) - 3);

    // -chi_Hom(gamma2, twist(gamma1)) - chi_Hom(gamma1, gamma2)
    //   = (chi(gamma1+gamma2) - chi(gamma1) - chi(gamma2)) / 2
    // (the printed form of the lemma has the two sides' roles swapped)
    std::mt19937 rng(47);
    DivisorSpec dd;
    dd.points = {{"p", 3, 2}, {"q", 2, 1}};
    std::uniform_int_distribution<long> deg(-5, 5);
    for (int g = 0; g <= 2; ++g) {
        for (int i = 0; i < 350; ++i) {
            GammaExponent g1 = random_gamma(rng, 2, 3);
            GammaExponent g2 = random_gamma(rng, 2, 3);
            long d1 = deg(rng), d2 = deg(rng);
            long twist = (long)(dd.deg() - dd.deg_prime()) * g1.rank();
            long lhs = -euler_pairing(g2, d2, g1, d1 - twist, dd, g) -
                       euler_pairing(g1, d1, g2, d2, dd, g);
            long rhs = (chi_of(g1 + g2, dd, g, ChiMode::Partial) -
                        chi_of(g1, dd, g, ChiMode::Partial) -
                        chi_of(g2, dd, g, ChiMode::Partial)) /
                       2;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("stabilization bound") {
    // r = 1, zeta = 0, eps = 1, g = 1, deg D = 2 -> 0 + margin
    StackQuery q;
    q.g = 1;
    q.divisor = one_point(2, 2);
    q.eps = 1;
    q.gamma = flags(1, {{1, 1}});
    q.zeta.entries[{0, 1}] = {Rational(0), Rational(0)};
    long b0 = stabilization_bound(q);
    CHECK(b0 <= 1);  // 0 plus the fixed margin
    CHECK(b0 >= 0);

    // monotone in |zeta|
    long prev = b0;
    for (int k = 1; k <= 4; ++k) {
        q.zeta.entries[{0, 1}] = {Rational(0), Rational(3 * k)};
        long b = stabilization_bound(q);
        CHECK(b >= prev);
        prev = b;
    }

    // l clamps at 0 for g = 0, deg D = 1
    StackQuery q0;
    q0.g = 0;
    q0.divisor = one_point(1, 1);
    q0.eps = 1;
    q0.gamma = flags(2, {{1, 1}, {2, 1}});
    q0.zeta.entries[{0, 1}] = {Rational(1)};
    q0.zeta.entries[{0, 2}] = {Rational(-1)};
    CHECK(stabilization_bound(q0) <= 2);  // (r-1)l/2 = 0
}

TEST_CASE("conn_class: rank-1 oracle, vanishing, and the empty class") {
    for (int g = 1; g <= 2; ++g) {
        for (int n = 1; n <= 2; ++n) {
            StackQuery q;
            q.g = g;
            q.divisor = one_point(n, n);
            q.kind = QueryKind::Full;
            q.eps = 1;
            q.gamma = flags(1, {{1, 1}});
            std::vector<Rational> coeffs(n, Rational(0));
            coeffs.back() = Rational(2);  // residue
            coeffs.front() = coeffs.front() + Rational(n > 1 ? 1 : 0);
            if (n == 1) coeffs[0] = Rational(2);
            q.zeta.entries[{0, 1}] = coeffs;
            q.d = -2;
            q.trunc = {1, 24};

            RingCtx c(g);
            const int nv = c.nvars();
            ScalarFraction expect =
                ScalarFraction(LaurentPoly::gen_pow(nv, c.qh(), 2 * g) * l_univ_at(c, 0, 0)) /
                ScalarFraction(LaurentPoly::gen_pow(nv, c.qh(), 2) -
                               LaurentPoly::constant(nv, 1));
            INFO("g ", g, " n ", n);
            CHECK(conn_class(q).value == expect);

            // degree constraint violated -> exactly zero
            q.d = -1;
            CHECK(conn_class(q).value.is_zero());

            // empty class -> 1
            StackQuery q0 = q;
            q0.gamma = GammaExponent();
            CHECK(conn_class(q0).value.is_one());
        }
    }
}

TEST_CASE("conn_class rejects inadmissible classes") {
    StackQuery q;
    q.g = 1;
    q.divisor = one_point(2, 2);
    q.kind = QueryKind::Full;
    q.eps = 1;
    q.gamma = flags(2, {{1, 2}});  // not full at an irregular point
    q.zeta.entries[{0, 1}] = {Rational(1), Rational(1)};
    q.trunc = {2, 24};
    CHECK_THROWS_AS(conn_class(q), std::domain_error);
}

TEST_CASE("graded class stabilizes and matches the z=1 driver") {
    // rank 2, full flags at an irregular point, connections
    StackQuery q;
    q.g = 1;
    q.divisor = one_point(2, 2);
    q.kind = QueryKind::Full;
    q.eps = 1;
    q.gamma = flags(2, {{1, 1}, {2, 1}});
    q.zeta.entries[{0, 1}] = {Rational(1), Rational(1)};
    q.zeta.entries[{0, 2}] = {Rational(2), Rational(2)};
    q.d = -3;  // eps d + (1 + 2) = 0
    q.trunc = {2, 34};

    ClassResult graded = graded_class_stabilized(q);
    ClassResult direct = conn_class(q);
    CHECK(graded.value == direct.value);
    CHECK(graded.witness_n >= 0);
    CHECK(graded.witness_n <= stabilization_bound(q) + 2);

    // explicit-shift route agrees once stabilized
    CHECK(graded_class(q, graded.witness_n) == direct.value);
    CHECK(graded_class(q, graded.witness_n + 1) == direct.value);
}

TEST_CASE("nonpositive graded classes: empty class and rank-1 Higgs") {
    // gamma = 0, d = 0 -> 1
    StackQuery q;
    q.g = 1;
    q.divisor = one_point(2, 1);  // D' < D
    q.kind = QueryKind::NonpositiveGraded;
    q.eps = 0;
    q.gamma = GammaExponent();
    q.d = 0;
    q.trunc = {1, 20};
    CHECK(graded_class(q, 0).is_one());

    // rank-1: the extraction reproduces the Omega_sch series coefficients
    q.gamma = flags(1, {{1, 1}});
    q.zeta.entries[{0, 1}] = {Rational(1)};
    RingCtx c(1);
    GenFunParams p;
    p.g = 1;
    p.points = {"p"};
    p.delta = q.divisor.delta();
    p.trunc = q.trunc;
    p.j_max = 1;
    GradedSeries omega = build_omega(OmegaKind::Sch, p);
    long chi = chi_of(q.gamma, q.divisor, q.g, ChiMode::Partial);
    for (long k = 0; k <= 3; ++k) {
        q.d = -k;
        ScalarFraction got = graded_class(q, 0);
        GammaExponent gk(1);
        gk.parts[{0, 1}] = 1;
        ScalarFraction expect = qh_pow(c, (int)chi) * ((chi % 2) ? -omega.coefficient(gk, (int)k)
                                                                 : omega.coefficient(gk, (int)k));
        CHECK(got == expect);
    }
}

TEST_CASE("nilpotent pair classes") {
    Trunc t{2, 16};
    // mu = 0 -> 1
    GradedSeries e = nilpotent_pair_class(1, 1, Partition(), {"p"}, t);
    CHECK(e.constant_term().is_one());
    CHECK(e.terms().size() == 1);

    // summing (-qh)^{r^2 delta} times the per-mu series reproduces Omega_sch
    GenFunParams p;
    p.g = 1;
    p.points = {"p"};
    p.delta = 1;
    p.trunc = t;
    RingCtx c = p.ring();
    GradedSeries sum(t, c.nvars());
    for (int m = 0; m <= t.r_max; ++m) {
        for (auto& mu : partitions_of(m)) {
            GradedSeries term = nilpotent_pair_class(1, 1, mu, {"p"}, t);
            long r2d = (long)m * m * p.delta;
            ScalarFraction w = qh_pow(c, (int)r2d);
            if (r2d % 2) w = -w;
            sum += term * w;
        }
    }
    CHECK(sum == build_omega(OmegaKind::Sch, p));
}

TEST_CASE("ddp dimension formula and the rank-1 table row") {
    CHECK(ddp_dimension(Partition({1, 1}), 2, 1) == 6);
    CHECK(ddp_dimension(Partition({1}), 2, 1) == 2);
    CHECK(ddp_dimension(Partition({1}), 5, 3) == 6);  // 2(g-1)+2

    DdpResult r = ddp_poincare(1, 2, 1, Trunc{1, 24});
    CHECK(r.d_val == 2);
    CHECK(r.h_is_polynomial);
    // H = t^{2g} (1-t)^{2g} = t^2 (1-t)^2 at g=1 (signed Poincare convention)
    RingCtx c(1);
    const int nv = c.nvars();
    LaurentPoly tt = LaurentPoly::gen_pow(nv, c.t(), 1);
    LaurentPoly expect = tt * tt * (LaurentPoly::constant(nv, 1) - tt) *
                         (LaurentPoly::constant(nv, 1) - tt);
    CHECK(r.h == ScalarFraction(expect));
    // the printed identity asks for support [0, 2d]; the computed H sits on
    // [d, 2d] and is reversal-symmetric only within its support
    CHECK(!r.palindromic);
    CHECK(r.palindromic_support);
}
