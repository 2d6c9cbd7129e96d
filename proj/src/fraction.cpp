#include "parmot/fraction.hpp"

#include <sstream>

namespace parmot {

namespace {

// Univariate polynomials over Z as exponent -> coefficient maps, primitive
// remainder sequences keep the coefficients bounded. Inputs are Laurent
// slices, shifted to minimum exponent 0 first (monomials are units).
using UniPoly = std::map<int, mpz_class>;

int uni_deg(const UniPoly& p) { return p.empty() ? -1 : p.rbegin()->first; }

UniPoly uni_from_slice(const std::map<int, Rational>& slice) {
    if (slice.empty()) return {};
    mpz_class lcm = 1;
    for (auto& [e, c] : slice) {
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
        lcm = l;
    }
    int lo = slice.begin()->first;
    UniPoly out;
    for (auto& [e, c] : slice) {
        Rational v = c * Rational(lcm);
        v.canonicalize();
        out[e - lo] = v.get_num();
    }
    return out;
}

void uni_make_primitive(UniPoly& p) {
    if (p.empty()) return;
    mpz_class g = 0;
    for (auto& [e, c] : p) {
        mpz_class ng;
        mpz_gcd(ng.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        g = ng;
    }
    if (g == 0) return;
    if (p.rbegin()->second < 0) g = -g;
    if (g == 1) return;
    for (auto& [e, c] : p) c /= g;
}

// pseudo-remainder of a by b (b nonzero), made primitive
UniPoly uni_prem(UniPoly a, const UniPoly& b) {
    const int db = uni_deg(b);
    const mpz_class lb = b.rbegin()->second;
    while (uni_deg(a) >= db) {
        const int sh = uni_deg(a) - db;
        const mpz_class la = a.rbegin()->second;
        UniPoly next;
        for (auto& [e, c] : a) next[e] = c * lb;
        for (auto& [e, c] : b) {
            auto [it, ins] = next.emplace(e + sh, -c * la);
            if (!ins) it->second -= c * la;
        }
        for (auto it = next.begin(); it != next.end();) {
            if (it->second == 0) it = next.erase(it);
            else ++it;
        }
        a = std::move(next);
    }
    uni_make_primitive(a);
    return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    uni_make_primitive(a);
    uni_make_primitive(b);
    while (!b.empty()) {
        UniPoly r = uni_prem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

LaurentPoly uni_to_poly(const UniPoly& p, int nvars, int v) {
    LaurentPoly r(nvars);
    for (auto& [e, c] : p) {
        Monomial m(nvars, 0);
        m[v] = e;
        r.add_term(m, Rational(c));
    }
    return r;
}

// gcd of a univariate denominator with every univariate slice of the
// numerator grouped by the remaining variables.
LaurentPoly uni_gcd_with_num(const LaurentPoly& den, const LaurentPoly& num, int v) {
    UniPoly g = uni_from_slice(den.as_univariate(v));
    for (auto& [rest, slice] : num.split_by_other_vars(v)) {
        if (uni_deg(g) <= 0) break;
        g = uni_gcd(std::move(g), uni_from_slice(slice));
    }
    return uni_to_poly(g, den.nvars(), v);
}

// integer-content-1, positive leading coefficient, min exponents 0;
// returns the scalar and monomial pulled out (to be folded into the
// numerator side of the ambient fraction).
struct FactorNorm {
    LaurentPoly factor;   // normalized factor, or constant 1 if trivial
    Rational scale;       // original = scale * x^{shift} * factor
    Monomial shift;
};

// Exact divisibility test for two-term factors in O(terms): p is divisible
// by the binomial cL x^{mL} + cS x^{mS} iff the weighted sum along every
// exponent line e + Z (mL - mS) vanishes (substituting x^{mL-mS} = -cS/cL).
bool binomial_divides(const LaurentPoly& p, const LaurentPoly& f) {
    auto it = f.terms().begin();
    const Monomial& mS = it->first;
    const Rational cS = it->second;
    ++it;
    const Monomial& mL = it->first;
    const Rational cL = it->second;
    const int n = p.nvars();

    Monomial d(n);
    for (int i = 0; i < n; ++i) d[i] = mL[i] - mS[i];
    int pivot = -1;
    for (int i = 0; i < n; ++i)
        if (d[i] != 0) {
            pivot = i;
            break;
        }
    if (pivot < 0) return false;  // not a genuine binomial direction
    Rational s = -cS / cL;        // root in the line variable y = x^d
    if (d[pivot] < 0) {
        for (int& e : d) e = -e;
        s = Rational(1) / s;
    }

    std::map<Monomial, Rational> lines;
    std::map<long, Rational> pow_cache;
    auto s_pow = [&](long k) {
        auto itp = pow_cache.find(k);
        if (itp != pow_cache.end()) return itp->second;
        Rational r = 1;
        long a = k < 0 ? -k : k;
        Rational base = k < 0 ? Rational(1) / s : s;
        for (long i = 0; i < a; ++i) r *= base;
        pow_cache.emplace(k, r);
        return r;
    };
    Monomial key(n);
    for (auto& [m, c] : p.terms()) {
        long k = m[pivot] >= 0 ? m[pivot] / d[pivot]
                               : -((-m[pivot] + d[pivot] - 1) / d[pivot]);
        for (int i = 0; i < n; ++i) key[i] = m[i] - (int)k * d[i];
        auto [itl, ins] = lines.emplace(key, c * s_pow(k));
        if (!ins) itl->second += c * s_pow(k);
    }
    for (auto& [k, v] : lines)
        if (v != 0) return false;
    return true;
}

FactorNorm normalize_factor(const LaurentPoly& f) {
    const int n = f.nvars();
    FactorNorm out{LaurentPoly::constant(n, 1), Rational(1), Monomial(n, 0)};
    if (f.is_zero()) throw std::domain_error("ScalarFraction: zero denominator factor");
    Monomial lo = f.min_exponents();
    bool any = false;
    for (int e : lo) any = any || (e != 0);
    LaurentPoly g = f;
    if (any) {
        Monomial neg = lo;
        for (int& e : neg) e = -e;
        g = f.shift(neg);
        out.shift = lo;
    }
    mpz_class num_gcd = 0, den_lcm = 1;
    for (auto& [m, c] : g.terms()) {
        mpz_class ng, dl;
        mpz_gcd(ng.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(dl.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        num_gcd = ng;
        den_lcm = dl;
    }
    Rational unit(num_gcd, den_lcm);
    unit.canonicalize();
    if (g.terms().rbegin()->second < 0) unit = -unit;
    out.scale = unit;
    Rational inv = Rational(1) / unit;
    out.factor = g * inv;
    return out;
}

}  // namespace

ScalarFraction::ScalarFraction(LaurentPoly num, LaurentPoly den)
    : num_(std::move(num)), den_(LaurentPoly::constant(num_.nvars(), 1)) {
    if (den.is_zero()) throw std::domain_error("ScalarFraction: zero denominator");
    push_factor(den, 1);
    force_reduce();
}

ScalarFraction::ScalarFraction(LaurentPoly num, FactorMap factors, LaurentPoly den_product)
    : num_(std::move(num)), factors_(std::move(factors)), den_(std::move(den_product)) {
    maybe_reduce();
}

void ScalarFraction::push_factor(const LaurentPoly& f, int mult) {
    if (mult == 0 || f.is_one()) return;
    FactorNorm fn = normalize_factor(f);
    // fold the unit part into the numerator: num / (s x^m)^mult
    Rational s = Rational(1);
    for (int i = 0; i < mult; ++i) s /= fn.scale;
    Monomial sh(num_.nvars(), 0);
    for (int i = 0; i < num_.nvars(); ++i) sh[i] = -fn.shift[i] * mult;
    num_ = num_.shift(sh) * s;
    if (!fn.factor.is_constant()) {
        factors_[fn.factor] += mult;
        for (int i = 0; i < mult; ++i) den_ *= fn.factor;
    }
}

void ScalarFraction::maybe_reduce() {
    if (num_.is_zero()) {
        factors_.clear();
        den_ = LaurentPoly::constant(num_.nvars(), 1);
        return;
    }
    long total_mult = 0;
    for (auto& [f, m] : factors_) total_mult += m;
    if (total_mult >= 14 || den_.terms().size() >= 64 || num_.terms().size() >= 768)
        force_reduce();
}

void ScalarFraction::force_reduce() {
    const int n = num_.nvars();
    if (num_.is_zero()) {
        factors_.clear();
        den_ = LaurentPoly::constant(n, 1);
        return;
    }
    // factor-by-factor cancellation; binomials get the cheap certificate first
    bool changed = false;
    for (auto it = factors_.begin(); it != factors_.end();) {
        const bool binom = it->first.terms().size() == 2;
        while (it->second > 0) {
            if (binom && !binomial_divides(num_, it->first)) break;
            auto q = try_exact_divide(num_, it->first);
            if (!q) break;
            num_ = std::move(*q);
            it->second--;
            changed = true;
        }
        it = it->second == 0 ? factors_.erase(it) : ++it;
    }
    if (changed) {
        den_ = LaurentPoly::constant(n, 1);
        for (auto& [f, m] : factors_)
            for (int i = 0; i < m; ++i) den_ *= f;
    }

    // univariate denominators: divide out the remaining exact gcd
    if (!den_.is_constant()) {
        auto used = den_.used_vars();
        if (used.size() == 1) {
            LaurentPoly g = uni_gcd_with_num(den_, num_, used[0]);
            if (!g.is_constant()) {
                auto qd = try_exact_divide(den_, g);
                auto qn = try_exact_divide(num_, g);
                if (qd && qn) {
                    LaurentPoly new_den = std::move(*qd);
                    num_ = std::move(*qn);
                    factors_.clear();
                    den_ = LaurentPoly::constant(n, 1);
                    push_factor(new_den, 1);
                }
            }
        }
    }
}

ScalarFraction ScalarFraction::operator-() const {
    ScalarFraction r = *this;
    r.num_ = -r.num_;
    return r;
}

ScalarFraction operator+(const ScalarFraction& a, const ScalarFraction& b) {
    if (a.num_.is_zero()) return b;
    if (b.num_.is_zero()) return a;
    // common denominator: factorwise max multiplicity
    ScalarFraction::FactorMap lcm = a.factors_;
    for (auto& [f, m] : b.factors_) {
        auto [it, ins] = lcm.emplace(f, m);
        if (!ins) it->second = std::max(it->second, m);
    }
    LaurentPoly na = a.num_, nb = b.num_;
    LaurentPoly cp_a = LaurentPoly::constant(a.num_.nvars(), 1);
    for (auto& [f, m] : lcm) {
        auto ia = a.factors_.find(f);
        int ma = ia == a.factors_.end() ? 0 : ia->second;
        for (int i = 0; i < m - ma; ++i) {
            na *= f;
            cp_a *= f;
        }
        auto ib = b.factors_.find(f);
        int mb = ib == b.factors_.end() ? 0 : ib->second;
        for (int i = 0; i < m - mb; ++i) nb *= f;
    }
    LaurentPoly den = a.den_ * cp_a;
    return ScalarFraction(na + nb, std::move(lcm), std::move(den));
}

ScalarFraction operator-(const ScalarFraction& a, const ScalarFraction& b) { return a + (-b); }

ScalarFraction operator*(const ScalarFraction& a, const ScalarFraction& b) {
    if (a.num_.is_zero() || b.num_.is_zero()) return ScalarFraction::zero(a.num_.nvars());
    ScalarFraction::FactorMap fs = a.factors_;
    for (auto& [f, m] : b.factors_) fs[f] += m;
    return ScalarFraction(a.num_ * b.num_, std::move(fs), a.den_ * b.den_);
}

ScalarFraction operator/(const ScalarFraction& a, const ScalarFraction& b) {
    if (b.is_zero()) throw std::domain_error("ScalarFraction: division by zero fraction");
    ScalarFraction r(a.num_.nvars());
    r.num_ = a.num_ * b.den_;
    r.factors_ = a.factors_;
    r.den_ = a.den_;
    r.push_factor(b.num_, 1);
    r.force_reduce();
    return r;
}

ScalarFraction ScalarFraction::pow(int e) const {
    const int n = nvars();
    if (e == 0) return one(n);
    if (e < 0) return one(n) / pow(-e);
    FactorMap fs = factors_;
    for (auto& [f, m] : fs) m *= e;
    return ScalarFraction(num_.pow(e), std::move(fs), den_.pow(e));
}

ScalarFraction ScalarFraction::psi(int n) const {
    // scaling exponents preserves the factor normalization
    ScalarFraction r(num_.nvars());
    r.num_ = num_.psi(n);
    for (auto& [f, m] : factors_) r.push_factor(f.psi(n), m);
    r.maybe_reduce();
    return r;
}

ScalarFraction ScalarFraction::substitute(const std::map<int, ScalarFraction>& assignment) const {
    const int n = nvars();
    auto subst_poly = [&](const LaurentPoly& p) {
        ScalarFraction acc = ScalarFraction::zero(n);
        for (auto& [m, c] : p.terms()) {
            ScalarFraction term = ScalarFraction::constant(n, c);
            for (int v = 0; v < n; ++v) {
                if (m[v] == 0) continue;
                auto it = assignment.find(v);
                if (it == assignment.end()) {
                    term *= ScalarFraction(LaurentPoly::gen_pow(n, v, m[v]));
                } else {
                    if (it->second.is_zero() && m[v] < 0)
                        throw std::domain_error("substitute: negative power of zero");
                    term *= it->second.pow(m[v]);
                }
            }
            acc += term;
        }
        return acc;
    };
    ScalarFraction sn = subst_poly(num_);
    ScalarFraction sd = subst_poly(den_);
    if (sd.is_zero())
        throw std::domain_error("substitute: denominator vanishes under assignment");
    return sn / sd;
}

ScalarFraction ScalarFraction::deep_reduce() const {
    if (factors_.empty()) return *this;
    ScalarFraction r = *this;
    r.force_reduce();
    if (r.factors_.empty()) return r;
    auto q = try_exact_divide(r.num_, r.den_);
    if (q) return ScalarFraction(std::move(*q));
    return r;
}

std::string ScalarFraction::to_string(const RingCtx& ctx) const {
    if (factors_.empty()) return num_.to_string(ctx);
    std::ostringstream os;
    os << "(" << num_.to_string(ctx) << ")/(" << den_.to_string(ctx) << ")";
    return os.str();
}

}  // namespace parmot
