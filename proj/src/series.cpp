#include "parmot/series.hpp"

#include <stdexcept>

namespace parmot {

namespace {
void check_compat(const GradedSeries& a, const GradedSeries& b) {
    if (!(a.trunc() == b.trunc()))
        throw std::invalid_argument("GradedSeries: truncation mismatch");
    if (a.nvars() != b.nvars())
        throw std::invalid_argument("GradedSeries: coefficient ring mismatch");
}

int moebius(int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            m = -m;
        }
    }
    if (n > 1) m = -m;
    return m;
}
}  // namespace

void GradedSeries::add_term(const GammaExponent& g, int zdeg, const ScalarFraction& c) {
    if (c.is_zero()) return;
    if (g.rank() > trunc_.r_max || zdeg > trunc_.z_max) return;
    if (zdeg < 0) throw std::domain_error("GradedSeries: negative z-degree");
    auto key = std::make_pair(g, zdeg);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ScalarFraction GradedSeries::get_or_zero(const GammaExponent& g, int zdeg) const {
    auto it = terms_.find({g, zdeg});
    return it == terms_.end() ? ScalarFraction::zero(nvars_) : it->second;
}

ScalarFraction GradedSeries::coefficient(const GammaExponent& g, int zdeg) const {
    if (g.rank() > trunc_.r_max || zdeg < 0 || zdeg > trunc_.z_max)
        throw std::out_of_range("GradedSeries::coefficient: query outside truncation");
    return get_or_zero(g, zdeg);
}

GradedSeries operator+(const GradedSeries& a, const GradedSeries& b) {
    check_compat(a, b);
    GradedSeries r = a;
    for (auto& [k, c] : b.terms()) r.add_term(k.first, k.second, c);
    return r;
}

GradedSeries operator-(const GradedSeries& a, const GradedSeries& b) {
    check_compat(a, b);
    GradedSeries r = a;
    for (auto& [k, c] : b.terms()) r.add_term(k.first, k.second, -c);
    return r;
}

GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) {
    check_compat(a, b);
    GradedSeries r(a.trunc(), a.nvars());
    for (auto& [ka, ca] : a.terms()) {
        for (auto& [kb, cb] : b.terms()) {
            if (ka.first.rank() + kb.first.rank() > a.trunc().r_max) continue;
            if (ka.second + kb.second > a.trunc().z_max) continue;
            r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        }
    }
    return r;
}

GradedSeries GradedSeries::operator*(const ScalarFraction& c) const {
    GradedSeries r(trunc_, nvars_);
    for (auto& [k, cc] : terms_) r.add_term(k.first, k.second, cc * c);
    return r;
}

GradedSeries invert_unit(const GradedSeries& a) {
    ScalarFraction c0 = a.constant_term();
    if (c0.is_zero())
        throw std::domain_error("invert_unit: constant term is not a unit");
    // A = c0 (1 - X) with X proper; 1/A = (1/c0) sum X^k.
    ScalarFraction inv0 = ScalarFraction::one(a.nvars()) / c0;
    GradedSeries x = GradedSeries::one(a.trunc(), a.nvars()) - a * inv0;
    GradedSeries acc = GradedSeries::one(a.trunc(), a.nvars());
    GradedSeries p = GradedSeries::one(a.trunc(), a.nvars());
    while (true) {
        p *= x;
        if (p.is_zero()) break;
        acc += p;
    }
    return acc * inv0;
}

GradedSeries adams(const GradedSeries& a, int n) {
    if (n < 1) throw std::invalid_argument("adams: n must be >= 1");
    GradedSeries r(a.trunc(), a.nvars());
    for (auto& [k, c] : a.terms())
        r.add_term(k.first.scaled(n), k.second * n, c.psi(n));
    return r;
}

namespace {

GradedSeries ordinary_exp(const GradedSeries& b) {
    GradedSeries acc = GradedSeries::one(b.trunc(), b.nvars());
    GradedSeries p = GradedSeries::one(b.trunc(), b.nvars());
    Rational fact = 1;
    for (int k = 1;; ++k) {
        p *= b;
        if (p.is_zero()) break;
        fact *= k;
        acc += p * ScalarFraction::constant(b.nvars(), Rational(1) / fact);
    }
    return acc;
}

GradedSeries ordinary_log(const GradedSeries& a) {
    GradedSeries x = a - GradedSeries::one(a.trunc(), a.nvars());
    GradedSeries acc = GradedSeries::zero(a.trunc(), a.nvars());
    GradedSeries p = GradedSeries::one(a.trunc(), a.nvars());
    for (int k = 1;; ++k) {
        p *= x;
        if (p.is_zero()) break;
        Rational c = Rational((k % 2) ? 1 : -1, k);
        c.canonicalize();
        acc += p * ScalarFraction::constant(a.nvars(), c);
    }
    return acc;
}

}  // namespace

GradedSeries pleth_exp(const GradedSeries& a) {
    if (!a.constant_term().is_zero())
        throw std::domain_error("pleth_exp: nonzero constant term");
    GradedSeries b = GradedSeries::zero(a.trunc(), a.nvars());
    for (int n = 1;; ++n) {
        GradedSeries an = adams(a, n);
        if (an.is_zero()) break;
        b += an * ScalarFraction::constant(a.nvars(), Rational(1, n));
    }
    return ordinary_exp(b);
}

GradedSeries pleth_log(const GradedSeries& a) {
    if (!a.constant_term().is_one())
        throw std::domain_error("pleth_log: constant term must be 1");
    GradedSeries l = ordinary_log(a);
    GradedSeries acc = GradedSeries::zero(a.trunc(), a.nvars());
    for (int n = 1;; ++n) {
        GradedSeries an = adams(l, n);
        if (an.is_zero()) {
            // adams(l, n) vanishes for all larger n as well: the minimal
            // effective weight (rank + zdeg) of l scales by n.
            break;
        }
        int mu = moebius(n);
        if (mu != 0) {
            Rational c(mu, n);
            c.canonicalize();
            acc += an * ScalarFraction::constant(a.nvars(), c);
        }
    }
    return acc;
}

GradedSeries power_structure(const GradedSeries& f, const ScalarFraction& a) {
    return pleth_exp(pleth_log(f) * a);
}

GradedSeries rescale_w(const GradedSeries& a, const ScalarFraction& c, int k, long* dropped) {
    if (!(c.den().is_one() && c.num().is_single_monomial()))
        throw std::invalid_argument("rescale_w: scale must be a single monomial");
    GradedSeries r(a.trunc(), a.nvars());
    long drops = 0;
    for (auto& [key, coeff] : a.terms()) {
        int rk = key.first.rank();
        int zdeg = key.second + k * rk;
        if (zdeg < 0) throw std::domain_error("rescale_w: term pushed below z^0");
        if (zdeg > a.trunc().z_max) {
            drops++;
            continue;
        }
        r.add_term(key.first, zdeg, coeff * c.pow(rk));
    }
    if (dropped) *dropped = drops;
    return r;
}

GradedSeries filter_terms(const GradedSeries& a,
                          const std::function<bool(const GammaExponent&, int)>& pred) {
    GradedSeries r(a.trunc(), a.nvars());
    for (auto& [key, coeff] : a.terms())
        if (pred(key.first, key.second)) r.add_term(key.first, key.second, coeff);
    return r;
}

EvalZOneResult eval_z_one(const GradedSeries& a, int window) {
    if (window < 1) throw std::invalid_argument("eval_z_one: window must be >= 1");
    EvalZOneResult out;
    std::map<GammaExponent, ScalarFraction> sums;
    std::map<GammaExponent, bool> tainted;
    const int lo = a.trunc().z_max - window;
    for (auto& [key, coeff] : a.terms()) {
        auto it = sums.find(key.first);
        if (it == sums.end())
            it = sums.emplace(key.first, ScalarFraction::zero(a.nvars())).first;
        it->second += coeff;
        if (key.second >= lo) tainted[key.first] = true;
    }
    for (auto& [g, bad] : tainted)
        if (bad) out.failures.push_back(g);
    if (out.failures.empty()) out.value = std::move(sums);
    return out;
}

}  // namespace parmot
