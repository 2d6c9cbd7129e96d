#include "parmot/genfun.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "parmot/kernel_cache.hpp"

namespace parmot {

std::string GenFunParams::cache_key() const {
    std::ostringstream os;
    os << "g" << g << ";d" << delta << ";r" << trunc.r_max << ";z" << trunc.z_max
       << ";j" << flag_cap() << ";D";
    for (auto& p : points) os << "," << p;
    return os.str();
}

LaurentPoly l_univ(const RingCtx& ctx) { return l_univ_at(ctx, 1, 0); }

// L^univ with z replaced by the monomial z^{ze} qh^{qe}:
//   prod_i (1 - a_i z^{ze} qh^{qe}) (1 - a_i^{-1} z^{ze} qh^{qe+2}).
LaurentPoly l_univ_at(const RingCtx& ctx, int ze, int qe) {
    const int n = ctx.nvars();
    LaurentPoly acc = LaurentPoly::constant(n, 1);
    for (int i = 0; i < ctx.genus(); ++i) {
        Monomial m1(n, 0), m2(n, 0);
        m1[ctx.alpha(i)] = 1;
        m1[ctx.z()] = ze;
        m1[ctx.qh()] = qe;
        m2[ctx.alpha(i)] = -1;
        m2[ctx.z()] = ze;
        m2[ctx.qh()] = qe + 2;
        LaurentPoly b1 = LaurentPoly::constant(n, 1) - LaurentPoly::monomial(n, m1, 1);
        LaurentPoly b2 = LaurentPoly::constant(n, 1) - LaurentPoly::monomial(n, m2, 1);
        acc *= b1 * b2;
    }
    return acc;
}

LaurentPoly n_mu_at_alpha_inv(const RingCtx& ctx, const Partition& mu, int i) {
    const int n = ctx.nvars();
    LaurentPoly acc = LaurentPoly::constant(n, 1);
    for (int row = 0; row < mu.length(); ++row) {
        for (int col = 0; col < mu.parts()[row]; ++col) {
            int a = mu.arm(row, col), l = mu.leg(row, col);
            // (z^a - alpha_i^{-1} q^{1+l}) (z^{a+1} - alpha_i q^l)
            Monomial za(n, 0), m1(n, 0), zb(n, 0), m2(n, 0);
            za[ctx.z()] = a;
            m1[ctx.alpha(i)] = -1;
            m1[ctx.qh()] = 2 * (1 + l);
            zb[ctx.z()] = a + 1;
            m2[ctx.alpha(i)] = 1;
            m2[ctx.qh()] = 2 * l;
            acc *= (LaurentPoly::monomial(n, za, 1) - LaurentPoly::monomial(n, m1, 1)) *
                   (LaurentPoly::monomial(n, zb, 1) - LaurentPoly::monomial(n, m2, 1));
        }
    }
    return acc;
}

namespace {

// ---------------------------------------------------------------------------
// Per-partition factor product: a unit scalar, a net z-monomial shift, plain
// polynomial factors, and inverse binomials expanded as geometric series.
// The denominator inventory stays explicit; no general series division.
// ---------------------------------------------------------------------------
class FactorProduct {
public:
    explicit FactorProduct(const RingCtx& ctx)
        : ctx_(ctx), unit_(ScalarFraction::one(ctx.nvars())), z_shift_(0) {}

    void mul_unit(const ScalarFraction& f) { unit_ *= f; }
    void mul_sign(long s) {
        if (s % 2) unit_ *= ScalarFraction::constant(ctx_.nvars(), -1);
    }
    // Multiply by a single monomial; its z-part moves into the shift.
    void mul_monomial(Monomial m, const Rational& c = 1) {
        z_shift_ += m[ctx_.z()];
        m[ctx_.z()] = 0;
        unit_ *= ScalarFraction(LaurentPoly::monomial(ctx_.nvars(), m, c));
    }

    void mul_poly(const LaurentPoly& p) {
        if (p.is_zero()) throw std::logic_error("FactorProduct: zero factor");
        int m0 = p.min_exponents()[ctx_.z()];
        if (m0 != 0) {
            Monomial sh(ctx_.nvars(), 0);
            sh[ctx_.z()] = -m0;
            z_shift_ += m0;
            num_polys_.push_back(p.shift(sh));
        } else {
            num_polys_.push_back(p);
        }
    }

    // Multiply by 1/b where b has exactly two monomial terms (or one, in
    // which case it is a unit). The z-constant part after extracting the
    // lower-z side is a unit in the q-localized ring.
    void mul_inv_binomial(const LaurentPoly& b) {
        if (b.terms().size() == 1) {
            auto& [m, c] = *b.terms().begin();
            Monomial inv = m;
            for (int& e : inv) e = -e;
            mul_monomial(inv, Rational(1) / c);
            return;
        }
        if (b.terms().size() != 2)
            throw std::logic_error("FactorProduct: inverse factor is not a binomial");
        auto it = b.terms().begin();
        auto [mA, cA] = *it++;
        auto [mB, cB] = *it;
        int zA = mA[ctx_.z()], zB = mB[ctx_.z()];
        if (zA == zB) {
            // z-free unit after extracting z^{zA}
            Monomial sh(ctx_.nvars(), 0);
            sh[ctx_.z()] = -zA;
            z_shift_ -= zA;
            unit_ = unit_ / ScalarFraction(b.shift(sh));
            return;
        }
        // b = S + L with z-deg(S) < z-deg(L): 1/b = S^{-1} / (1 - ratio),
        // ratio = -L/S with positive z-degree.
        Monomial mS = mA, mL = mB;
        Rational cS = cA, cL = cB;
        if (zA > zB) {
            std::swap(mS, mL);
            std::swap(cS, cL);
        }
        Monomial invS = mS;
        for (int& e : invS) e = -e;
        mul_monomial(invS, Rational(1) / cS);
        Monomial mr(ctx_.nvars(), 0);
        for (int i = 0; i < ctx_.nvars(); ++i) mr[i] = mL[i] - mS[i];
        int step = mr[ctx_.z()];
        mr[ctx_.z()] = 0;
        geoms_.push_back({LaurentPoly::monomial(ctx_.nvars(), mr, -cL / cS), step});
    }

    // Exact rational-function value of the whole product (no expansion).
    ScalarFraction as_fraction() const {
        const int n = ctx_.nvars();
        ScalarFraction f = unit_;
        Monomial zm(n, 0);
        zm[ctx_.z()] = z_shift_;
        f *= ScalarFraction(LaurentPoly::monomial(n, zm, 1));
        for (auto& p : num_polys_) f *= ScalarFraction(p);
        for (auto& [ratio, step] : geoms_) {
            Monomial mr = ratio.terms().begin()->first;
            mr[ctx_.z()] = step;
            LaurentPoly denom = LaurentPoly::constant(n, 1) -
                                LaurentPoly::monomial(n, mr, ratio.terms().begin()->second);
            f = f / ScalarFraction(denom);
        }
        return f;
    }

    // z-expansion: coefficients of z^0..z^{z_max}. Negative final degrees
    // must cancel exactly; anything above z_max is discarded.
    std::vector<ScalarFraction> expand(int z_max) const {
        const int n = ctx_.nvars();
        const int cap = z_max - z_shift_;
        std::vector<ScalarFraction> out(z_max + 1, ScalarFraction::zero(n));
        if (cap < 0) return out;
        std::vector<LaurentPoly> cur(cap + 1, LaurentPoly::zero(n));
        cur[0] = LaurentPoly::constant(n, 1);

        for (auto& p : num_polys_) {
            // slice the factor by z-degree
            std::map<int, LaurentPoly> slices;
            for (auto& [m, c] : p.terms()) {
                int s = m[ctx_.z()];
                Monomial mm = m;
                mm[ctx_.z()] = 0;
                auto it = slices.find(s);
                if (it == slices.end()) it = slices.emplace(s, LaurentPoly::zero(n)).first;
                it->second.add_term(mm, c);
            }
            std::vector<LaurentPoly> next(cap + 1, LaurentPoly::zero(n));
            for (int d = 0; d <= cap; ++d) {
                if (cur[d].is_zero()) continue;
                for (auto& [s, q] : slices) {
                    if (d + s > cap) break;
                    next[d + s] += cur[d] * q;
                }
            }
            cur = std::move(next);
        }
        for (auto& [ratio, step] : geoms_) {
            std::vector<LaurentPoly> pow;  // ratio^j, z-free part
            pow.push_back(LaurentPoly::constant(n, 1));
            for (int j = 1; (long)j * step <= cap; ++j) pow.push_back(pow.back() * ratio);
            std::vector<LaurentPoly> next(cap + 1, LaurentPoly::zero(n));
            for (int d = 0; d <= cap; ++d) {
                if (cur[d].is_zero()) continue;
                for (int j = 0; d + j * step <= cap; ++j) next[d + j * step] += cur[d] * pow[j];
            }
            cur = std::move(next);
        }

        for (int d = 0; d <= cap; ++d) {
            int fin = d + z_shift_;
            if (fin < 0) {
                if (!cur[d].is_zero())
                    throw std::logic_error(
                        "FactorProduct: nonzero coefficient at negative z-degree");
                continue;
            }
            if (cur[d].is_zero()) continue;
            out[fin] = unit_ * ScalarFraction(cur[d]);
        }
        return out;
    }

private:
    RingCtx ctx_;
    ScalarFraction unit_;
    int z_shift_;
    std::vector<LaurentPoly> num_polys_;
    std::vector<std::pair<LaurentPoly, int>> geoms_;  // (z-free ratio, z-step)
};

LaurentPoly one_minus(const RingCtx& ctx, const Monomial& m, const Rational& c = 1) {
    const int n = ctx.nvars();
    return LaurentPoly::constant(n, 1) - LaurentPoly::monomial(n, m, c);
}

Monomial mono(const RingCtx& ctx, std::initializer_list<std::pair<int, int>> ve) {
    Monomial m(ctx.nvars(), 0);
    for (auto& [v, e] : ve) m[v] += e;
    return m;
}

// z_i(mu) = q^{i - length} z^{mu_i} as an exponent vector, i is 1-based.
Monomial z_of_mu(const RingCtx& ctx, const Partition& mu, int i) {
    return mono(ctx, {{ctx.qh(), 2 * (i - mu.length())}, {ctx.z(), mu.part(i - 1)}});
}

struct FMuParts {
    LaurentPoly numerator;                // prefactor numerator * symmetrized sum
    std::vector<LaurentPoly> den_factors; // binomials to invert
};

// Assemble the symmetrized sum over a common denominator. The denominator
// inventory: (1 - a_k^{-1} z_i) for all i,k and, for every ordered pair
// a != b, (1 - z_a/z_b) and (1 - q a_k^{-1} z_a/z_b).
FMuParts f_mu_parts(const RingCtx& ctx, const Partition& mu) {
    if (mu.length() > 6)
        throw std::length_error("f_mu: length(mu) exceeds the factorial bound");
    const int n = ctx.nvars();
    const int len = mu.length();
    const int g = ctx.genus();
    FMuParts out{LaurentPoly::constant(n, 1), {}};
    if (len == 0) return out;

    // prefactor
    for (int i = 1; i <= len; ++i) {
        for (int k = 0; k < g; ++k) {
            out.numerator *= one_minus(ctx, mono(ctx, {{ctx.alpha(k), -1}}));
            Monomial m = z_of_mu(ctx, mu, i);
            m[ctx.alpha(k)] -= 1;
            out.den_factors.push_back(one_minus(ctx, m));
        }
    }

    // ratio monomials z_a / z_b
    auto ratio = [&](int a, int b) {
        Monomial m = z_of_mu(ctx, mu, a);
        Monomial mb = z_of_mu(ctx, mu, b);
        for (int v = 0; v < n; ++v) m[v] -= mb[v];
        return m;
    };

    // ordered pair id
    auto pair_id = [&](int a, int b) { return (a - 1) * len + (b - 1); };

    std::vector<LaurentPoly> pair_factor(len * len, LaurentPoly::zero(n));
    for (int a = 1; a <= len; ++a) {
        for (int b = 1; b <= len; ++b) {
            if (a == b) continue;
            Monomial m = ratio(a, b);
            LaurentPoly f = one_minus(ctx, m);
            out.den_factors.push_back(f);
            for (int k = 0; k < g; ++k) {
                Monomial mq = m;
                mq[ctx.qh()] += 2;
                mq[ctx.alpha(k)] -= 1;
                LaurentPoly fq = one_minus(ctx, mq);
                out.den_factors.push_back(fq);
                f *= fq;
            }
            pair_factor[pair_id(a, b)] = f;  // complement block for unused pairs
        }
    }

    std::vector<int> perm(len);
    std::iota(perm.begin(), perm.end(), 1);
    LaurentPoly sum(n);
    do {
        LaurentPoly term = LaurentPoly::constant(n, 1);
        std::vector<bool> used(len * len, false);
        for (int i = 1; i <= len; ++i) {
            for (int j = 1; j < i; ++j) {
                int a = perm[i - 1], b = perm[j - 1];
                used[pair_id(a, b)] = true;
                // numerator part of the (i, j) block
                for (int k = 0; k < g; ++k) {
                    Monomial m = ratio(a, b);
                    m[ctx.alpha(k)] -= 1;
                    term *= one_minus(ctx, m);
                }
                if (i > j + 1) {
                    Monomial m = ratio(a, b);
                    m[ctx.qh()] += 2;
                    term *= one_minus(ctx, m);
                }
            }
        }
        for (int i = 2; i <= len; ++i)
            term *= one_minus(ctx, z_of_mu(ctx, mu, perm[i - 1]));
        for (int a = 1; a <= len; ++a)
            for (int b = 1; b <= len; ++b)
                if (a != b && !used[pair_id(a, b)]) term *= pair_factor[pair_id(a, b)];
        sum += term;
    } while (std::next_permutation(perm.begin(), perm.end()));

    out.numerator *= sum;
    return out;
}

// Instantiated Macdonald coefficient: z-degree -> z-free polynomial, with the
// first parameter sent to z^{zscale} and the second to the given monomial.
std::map<int, LaurentPoly> instantiate_param(const RingCtx& ctx, const ParamPoly& c,
                                             int zscale, const Monomial& second) {
    std::map<int, LaurentPoly> out;
    const int n = ctx.nvars();
    for (auto& [e, v] : c.coef) {
        Monomial m(n, 0);
        for (int i = 0; i < n; ++i) m[i] = second[i] * e.second;
        auto it = out.find(zscale * e.first);
        if (it == out.end()) it = out.emplace(zscale * e.first, LaurentPoly::zero(n)).first;
        it->second.add_term(m, v);
    }
    return out;
}

// Weak compositions of total into exactly slots parts (parts may be zero).
void weak_compositions(int total, int slots, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
    if (slots == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int first = total; first >= 0; --first) {
        cur.push_back(first);
        weak_compositions(total - first, slots - 1, cur, out);
        cur.pop_back();
    }
}

struct MuWeights {
    long pairing, n_mu, n_mu_conj, size;
};
MuWeights weights_of(const Partition& mu) {
    return {Partition::pairing(mu, mu), mu.n_stat(), mu.conjugate().n_stat(), mu.size()};
}

// Macdonald parameter convention per kind: z-power scale and the image of the
// second parameter.
int h_zscale(OmegaKind k) {
    return (k == OmegaKind::Hlv || k == OmegaKind::Sch) ? 1 : 2;
}
Monomial h_second(const RingCtx& ctx, OmegaKind k) {
    switch (k) {
        case OmegaKind::EPoly: return mono(ctx, {{ctx.uh(), 2}, {ctx.vh(), 2}});
        case OmegaKind::PPoly: return mono(ctx, {{ctx.t(), 2}});
        default: return mono(ctx, {{ctx.qh(), 2}});
    }
}

// All factors of the mu-term except the Macdonald ones.
FactorProduct scalar_factors(OmegaKind kind, const GenFunParams& p, const Partition& mu) {
    const RingCtx ctx = p.ring();
    const int n = ctx.nvars();
    const int g = p.g, delta = p.delta;
    MuWeights wt = weights_of(mu);
    FactorProduct fp(ctx);

    auto each_box = [&](auto&& fn) {
        for (int row = 0; row < mu.length(); ++row)
            for (int col = 0; col < mu.parts()[row]; ++col)
                fn(mu.arm(row, col), mu.leg(row, col));
    };

    switch (kind) {
        case OmegaKind::Univ: {
            fp.mul_sign((2 * g + delta) * wt.pairing);
            fp.mul_monomial(mono(ctx, {{ctx.qh(), (int)((2 * g + delta) * wt.pairing)},
                                       {ctx.z(), (int)(2 * delta * wt.n_mu_conj)}}));
            each_box([&](int a, int l) {
                fp.mul_poly(l_univ_at(ctx, 2 * a + 1, -2 * (l + 1)));
                fp.mul_inv_binomial(LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), 2 * a + 2}}), 1) -
                                    LaurentPoly::monomial(n, mono(ctx, {{ctx.qh(), 2 * l}}), 1));
                fp.mul_inv_binomial(LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), 2 * a}}), 1) -
                                    LaurentPoly::monomial(n, mono(ctx, {{ctx.qh(), 2 * l + 2}}), 1));
            });
            break;
        }
        case OmegaKind::Hlv:
        case OmegaKind::Sch: {
            if (kind == OmegaKind::Hlv) {
                fp.mul_sign(delta * wt.size);
                fp.mul_monomial(mono(ctx, {{ctx.qh(), (int)(2 * delta * wt.n_mu)},
                                           {ctx.z(), (int)(delta * wt.n_mu_conj)}}));
            } else {
                fp.mul_sign(delta * wt.pairing);
                fp.mul_monomial(mono(ctx, {{ctx.qh(), (int)(delta * wt.pairing)},
                                           {ctx.z(), (int)(delta * wt.n_mu_conj)}}));
            }
            for (int i = 0; i < g; ++i) fp.mul_poly(n_mu_at_alpha_inv(ctx, mu, i));
            each_box([&](int a, int l) {
                fp.mul_inv_binomial(LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), a}}), 1) -
                                    LaurentPoly::monomial(n, mono(ctx, {{ctx.qh(), 2 * (1 + l)}}), 1));
                fp.mul_inv_binomial(LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), a + 1}}), 1) -
                                    LaurentPoly::monomial(n, mono(ctx, {{ctx.qh(), 2 * l}}), 1));
            });
            if (kind == OmegaKind::Sch && !mu.empty()) {
                FMuParts fm = f_mu_parts(ctx, mu);
                fp.mul_poly(fm.numerator);
                for (auto& d : fm.den_factors) fp.mul_inv_binomial(d);
            }
            break;
        }
        case OmegaKind::EPoly: {
            fp.mul_sign((2 * g + delta) * wt.pairing);
            fp.mul_monomial(mono(ctx, {{ctx.uh(), (int)((2 * g + delta) * wt.pairing)},
                                       {ctx.vh(), (int)((2 * g + delta) * wt.pairing)},
                                       {ctx.z(), (int)(2 * delta * wt.n_mu_conj)}}));
            each_box([&](int a, int l) {
                LaurentPoly b1 = one_minus(
                    ctx, mono(ctx, {{ctx.z(), 2 * a + 1}, {ctx.uh(), -2 * l}, {ctx.vh(), -2 * (l + 1)}}));
                LaurentPoly b2 = one_minus(
                    ctx, mono(ctx, {{ctx.z(), 2 * a + 1}, {ctx.uh(), -2 * (l + 1)}, {ctx.vh(), -2 * l}}));
                fp.mul_poly(b1.pow(g) * b2.pow(g));
                fp.mul_inv_binomial(
                    LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), 2 * a + 2}}), 1) -
                    LaurentPoly::monomial(n, mono(ctx, {{ctx.uh(), 2 * l}, {ctx.vh(), 2 * l}}), 1));
                fp.mul_inv_binomial(
                    LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), 2 * a}}), 1) -
                    LaurentPoly::monomial(n, mono(ctx, {{ctx.uh(), 2 * l + 2}, {ctx.vh(), 2 * l + 2}}), 1));
            });
            break;
        }
        case OmegaKind::PPoly: {
            fp.mul_monomial(mono(ctx, {{ctx.t(), (int)(delta * wt.size)}}));
            each_box([&](int a, int l) {
                fp.mul_sign(delta);
                fp.mul_monomial(mono(ctx, {{ctx.t(), 2 * l * delta}, {ctx.z(), 2 * a * delta}}));
                LaurentPoly b = LaurentPoly::monomial(n, mono(ctx, {{ctx.t(), 2 * l + 1}}), 1) -
                                LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), 2 * a + 1}}), 1);
                fp.mul_poly(b.pow(2 * g));
                fp.mul_inv_binomial(LaurentPoly::monomial(n, mono(ctx, {{ctx.t(), 2 * l + 2}}), 1) -
                                    LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), 2 * a}}), 1));
                fp.mul_inv_binomial(LaurentPoly::monomial(n, mono(ctx, {{ctx.t(), 2 * l}}), 1) -
                                    LaurentPoly::monomial(n, mono(ctx, {{ctx.z(), 2 * a + 2}}), 1));
            });
            break;
        }
    }
    return fp;
}

}  // namespace

ScalarFraction f_mu(const RingCtx& ctx, const Partition& mu) {
    FMuParts fm = f_mu_parts(ctx, mu);
    ScalarFraction f(fm.numerator);
    for (auto& d : fm.den_factors) f = f / ScalarFraction(d);
    return f;
}

ScalarFraction omega_term_scalar(OmegaKind kind, const GenFunParams& p, const Partition& mu) {
    return scalar_factors(kind, p, mu).as_fraction();
}

GradedSeries build_omega_mu_term(OmegaKind kind, const GenFunParams& p, const Partition& mu) {
    const RingCtx ctx = p.ring();
    const int n = ctx.nvars();
    GradedSeries series(p.trunc, n);
    const int npts = (int)p.points.size();
    const int jcap = p.flag_cap();
    const int sz = mu.size();

    std::vector<ScalarFraction> scalar = scalar_factors(kind, p, mu).expand(p.trunc.z_max);

    // Macdonald coefficients per sorted content, instantiated once.
    const SymFunc& h = hhl_modified_macdonald(mu);
    std::map<Partition, std::map<int, LaurentPoly>> inst;
    for (auto& [lam, c] : h.terms)
        inst[lam] = instantiate_param(ctx, c, h_zscale(kind), h_second(ctx, kind));

    std::vector<std::vector<int>> comps;
    if (npts > 0) {
        if (jcap == 0) {
            if (sz == 0) comps.push_back({});
        } else {
            std::vector<int> cur;
            weak_compositions(sz, jcap, cur, comps);
        }
        if (comps.empty()) return series;
    }

    // iterate over tuples of compositions, one per point
    std::vector<size_t> idx(std::max(npts, 1), 0);
    const size_t ncomp = npts > 0 ? comps.size() : 1;
    while (true) {
        // gamma and the product of Macdonald z-polynomials
        GammaExponent gamma(sz);
        std::map<int, LaurentPoly> hprod;
        hprod.emplace(0, LaurentPoly::constant(n, 1));
        bool dead = false;
        for (int x = 0; x < npts && !dead; ++x) {
            const std::vector<int>& kappa = comps[idx[x]];
            std::vector<int> srt;
            for (int j = 0; j < (int)kappa.size(); ++j) {
                if (kappa[j] > 0) {
                    gamma.parts[{x, j + 1}] = kappa[j];
                    srt.push_back(kappa[j]);
                }
            }
            std::sort(srt.begin(), srt.end(), std::greater<int>());
            auto it = inst.find(Partition(srt));
            if (it == inst.end() || it->second.empty()) {
                dead = true;
                break;
            }
            std::map<int, LaurentPoly> next;
            for (auto& [d1, c1] : hprod)
                for (auto& [d2, c2] : it->second) {
                    if (d1 + d2 > p.trunc.z_max) continue;
                    auto jt = next.find(d1 + d2);
                    if (jt == next.end())
                        jt = next.emplace(d1 + d2, LaurentPoly::zero(n)).first;
                    jt->second += c1 * c2;
                }
            hprod = std::move(next);
        }
        if (!dead) {
            for (auto& [hd, hc] : hprod) {
                if (hc.is_zero()) continue;
                ScalarFraction hfrac{hc};
                for (int d = 0; d + hd <= p.trunc.z_max; ++d) {
                    if (scalar[d].is_zero()) continue;
                    series.add_term(gamma, d + hd, scalar[d] * hfrac);
                }
            }
        }
        // next tuple
        int x = 0;
        for (; x < npts; ++x) {
            if (++idx[x] < ncomp) break;
            idx[x] = 0;
        }
        if (npts == 0 || x == npts) break;
    }
    return series;
}

GradedSeries build_omega(OmegaKind kind, const GenFunParams& p) {
    GradedSeries series(p.trunc, p.ring().nvars());
    for (int sz = 0; sz <= p.trunc.r_max; ++sz)
        for (const Partition& mu : partitions_of(sz))
            series += build_omega_mu_term(kind, p, mu);
    return series;
}

namespace {
std::mutex g_hooks_mtx;
KernelLoader g_loader;
KernelSaver g_saver;
}  // namespace

void set_kernel_cache_hooks(KernelLoader loader, KernelSaver saver) {
    std::lock_guard<std::mutex> lock(g_hooks_mtx);
    g_loader = std::move(loader);
    g_saver = std::move(saver);
}

void clear_kernel_cache_hooks() {
    std::lock_guard<std::mutex> lock(g_hooks_mtx);
    g_loader = nullptr;
    g_saver = nullptr;
}

Kernels dt_kernels(const GenFunParams& p) {
    static std::mutex mtx;
    static std::map<std::string, Kernels> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(p.cache_key());
        if (it != cache.end()) return it->second;
    }

    KernelLoader loader;
    KernelSaver saver;
    {
        std::lock_guard<std::mutex> lock(g_hooks_mtx);
        loader = g_loader;
        saver = g_saver;
    }

    const int n = p.ring().nvars();
    Kernels k{GradedSeries::zero(p.trunc, n), GradedSeries::zero(p.trunc, n),
              GradedSeries::zero(p.trunc, n)};
    bool loaded = loader && loader(p, k);
    if (!loaded) {
        GradedSeries omega_u = build_omega(OmegaKind::Univ, p);
        GradedSeries omega_s = build_omega(OmegaKind::Sch, p);

        GradedSeries one_minus_z2 = GradedSeries::one(p.trunc, n);
        one_minus_z2.add_term(GammaExponent(), 2, ScalarFraction::constant(n, -1));
        GradedSeries one_minus_z = GradedSeries::one(p.trunc, n);
        one_minus_z.add_term(GammaExponent(), 1, ScalarFraction::constant(n, -1));

        // fully reduce the stored coefficients so that a cache round-trip
        // reconstructs identical representations
        auto reduced = [n, &p](const GradedSeries& s) {
            GradedSeries out(p.trunc, n);
            for (auto& [key, c] : s.terms()) out.add_term(key.first, key.second, c.deep_reduce());
            return out;
        };
        k.h_univ = reduced(one_minus_z2 * pleth_log(omega_u));
        k.log_omega_sch = reduced(pleth_log(omega_s));
        k.h_sch = reduced(one_minus_z * k.log_omega_sch);
        if (saver) saver(p, k);
    }

    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(p.cache_key(), k);
    return k;
}

MellitReport check_mellit(const GenFunParams& p, int tail_window) {
    MellitReport rep;
    rep.experimental_genus_zero = (p.g == 0);
    Kernels k = dt_kernels(p);
    EvalZOneResult lhs = eval_z_one(k.h_univ, tail_window);
    EvalZOneResult rhs = eval_z_one(k.h_sch, tail_window);
    const RingCtx ctx = p.ring();

    if (!lhs.ok() || !rhs.ok()) {
        rep.inconclusive = true;
        for (auto& g : lhs.failures)
            rep.entries.push_back({g, MellitReport::Status::Inconclusive, "", ""});
        for (auto& g : rhs.failures)
            rep.entries.push_back({g, MellitReport::Status::Inconclusive, "", ""});
        return rep;
    }

    std::map<GammaExponent, std::pair<ScalarFraction, ScalarFraction>> both;
    const int n = ctx.nvars();
    for (auto& [g, v] : lhs.value) both.emplace(g, std::make_pair(v, ScalarFraction::zero(n)));
    for (auto& [g, v] : rhs.value) {
        auto it = both.find(g);
        if (it == both.end())
            both.emplace(g, std::make_pair(ScalarFraction::zero(n), v));
        else
            it->second.second = v;
    }
    rep.all_equal = true;
    for (auto& [g, pr] : both) {
        bool eq = pr.first == pr.second;
        if (!eq) rep.all_equal = false;
        rep.entries.push_back({g, eq ? MellitReport::Status::Equal : MellitReport::Status::Unequal,
                               pr.first.to_string(ctx), pr.second.to_string(ctx)});
    }
    return rep;
}

}  // namespace parmot
