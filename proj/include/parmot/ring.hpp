#ifndef PARMOT_RING_HPP
#define PARMOT_RING_HPP

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parmot {

using Rational = mpq_class;

// Fixed generator set for the scalar coefficient ring:
//   qh a1 .. ag z uh vh t
// qh, uh, vh are the square roots of q, u, v; t is the Poincare variable.
// The count of a-generators (the genus) is fixed at ring construction.
class RingCtx {
public:
    explicit RingCtx(int genus) : g_(genus) {
        if (genus < 0) throw std::invalid_argument("RingCtx: genus must be >= 0");
    }

    int genus() const { return g_; }
    int nvars() const { return g_ + 5; }

    int qh() const { return 0; }
    int alpha(int i) const {  // 0-based, i < genus
        if (i < 0 || i >= g_) throw std::out_of_range("RingCtx::alpha");
        return 1 + i;
    }
    int z() const { return g_ + 1; }
    int uh() const { return g_ + 2; }
    int vh() const { return g_ + 3; }
    int t() const { return g_ + 4; }

    std::string var_name(int v) const {
        if (v == qh()) return "qh";
        if (v >= 1 && v <= g_) return "a" + std::to_string(v);
        if (v == z()) return "z";
        if (v == uh()) return "uh";
        if (v == vh()) return "vh";
        if (v == t()) return "t";
        throw std::out_of_range("RingCtx::var_name");
    }

    bool operator==(const RingCtx& o) const { return g_ == o.g_; }

private:
    int g_;
};

// Integer exponent vector; negative exponents allowed.
using Monomial = std::vector<int>;

// Graded-lexicographic order over the fixed generator list.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        long da = 0, db = 0;
        for (int e : a) da += e;
        for (int e : b) db += e;
        if (da != db) return da < db;
        return a < b;
    }
};

// Sparse multivariate Laurent polynomial with exact rational coefficients.
// No stored zero coefficients; the term map is the canonical form.
class LaurentPoly {
public:
    using TermMap = std::map<Monomial, Rational, GradedLexLess>;

    explicit LaurentPoly(int nvars) : nvars_(nvars) {}

    static LaurentPoly zero(int nvars) { return LaurentPoly(nvars); }
    static LaurentPoly constant(int nvars, const Rational& c) {
        LaurentPoly p(nvars);
        if (c != 0) p.terms_.emplace(Monomial(nvars, 0), c);
        return p;
    }
    static LaurentPoly monomial(int nvars, const Monomial& m, const Rational& c) {
        if ((int)m.size() != nvars) throw std::invalid_argument("LaurentPoly::monomial size");
        LaurentPoly p(nvars);
        if (c != 0) p.terms_.emplace(m, c);
        return p;
    }
    // x_v^e
    static LaurentPoly gen_pow(int nvars, int v, int e) {
        Monomial m(nvars, 0);
        m[v] = e;
        return monomial(nvars, m, 1);
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->second == 1 &&
               is_const_mono(terms_.begin()->first);
    }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && is_const_mono(terms_.begin()->first));
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("LaurentPoly::constant_value on non-constant");
        return terms_.begin()->second;
    }
    // Coefficient of the all-zero monomial.
    Rational constant_term() const {
        auto it = terms_.find(Monomial(nvars_, 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool is_single_monomial() const { return terms_.size() == 1; }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    LaurentPoly operator-() const {
        LaurentPoly r(nvars_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        check_same(a, b);
        LaurentPoly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        check_same(a, b);
        LaurentPoly r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        check_same(a, b);
        LaurentPoly r(a.nvars_);
        if (a.terms_.empty() || b.terms_.empty()) return r;
        // flat accumulation: one sort-and-merge beats per-term tree inserts
        std::vector<std::pair<Monomial, Rational>> prods;
        prods.reserve(a.terms_.size() * b.terms_.size());
        Monomial m(a.nvars_);
        for (auto& [ma, ca] : a.terms_) {
            for (auto& [mb, cb] : b.terms_) {
                for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
                prods.emplace_back(m, ca * cb);
            }
        }
        std::sort(prods.begin(), prods.end(), [](const auto& x, const auto& y) {
            return GradedLexLess{}(x.first, y.first);
        });
        auto it = prods.begin();
        while (it != prods.end()) {
            auto jt = it + 1;
            Rational c = std::move(it->second);
            while (jt != prods.end() && jt->first == it->first) {
                c += jt->second;
                ++jt;
            }
            if (c != 0) r.terms_.emplace_hint(r.terms_.end(), std::move(it->first), std::move(c));
            it = jt;
        }
        return r;
    }
    LaurentPoly& operator+=(const LaurentPoly& b) { return *this = *this + b; }
    LaurentPoly& operator-=(const LaurentPoly& b) { return *this = *this - b; }
    LaurentPoly& operator*=(const LaurentPoly& b) { return *this = *this * b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const Rational& c) {
        LaurentPoly r(a.nvars_);
        if (c == 0) return r;
        for (auto& [m, cc] : a.terms_) r.terms_.emplace(m, cc * c);
        return r;
    }

    bool operator==(const LaurentPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
    // arbitrary strict order, used for keying factor multisets
    bool operator<(const LaurentPoly& o) const { return terms_ < o.terms_; }

    LaurentPoly pow(int e) const {
        if (e < 0) throw std::invalid_argument("LaurentPoly::pow: negative exponent");
        LaurentPoly r = constant(nvars_, 1);
        LaurentPoly base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    // Adams operation on monomial generators: every x^e becomes x^{n e}.
    LaurentPoly psi(int n) const {
        LaurentPoly r(nvars_);
        for (auto& [m, c] : terms_) {
            Monomial mm = m;
            for (int& e : mm) e *= n;
            r.terms_.emplace(std::move(mm), c);
        }
        return r;
    }

    // Per-variable minimum exponent over the support (0 for missing variables
    // of an empty polynomial).
    Monomial min_exponents() const {
        Monomial lo(nvars_, 0);
        bool first = true;
        for (auto& [m, c] : terms_) {
            if (first) { lo = m; first = false; continue; }
            for (int i = 0; i < nvars_; ++i)
                if (m[i] < lo[i]) lo[i] = m[i];
        }
        return lo;
    }

    LaurentPoly shift(const Monomial& by) const {
        LaurentPoly r(nvars_);
        for (auto& [m, c] : terms_) {
            Monomial mm = m;
            for (int i = 0; i < nvars_; ++i) mm[i] += by[i];
            r.terms_.emplace(std::move(mm), c);
        }
        return r;
    }

    // Variables with a nonzero exponent somewhere in the support.
    std::vector<int> used_vars() const {
        std::vector<bool> used(nvars_, false);
        for (auto& [m, c] : terms_)
            for (int i = 0; i < nvars_; ++i)
                if (m[i] != 0) used[i] = true;
        std::vector<int> out;
        for (int i = 0; i < nvars_; ++i)
            if (used[i]) out.push_back(i);
        return out;
    }

    // View the polynomial as univariate in variable v, coefficients keyed by
    // the exponent of v. Remaining variables must not occur (checked).
    std::map<int, Rational> as_univariate(int v) const {
        std::map<int, Rational> out;
        for (auto& [m, c] : terms_) {
            for (int i = 0; i < nvars_; ++i)
                if (i != v && m[i] != 0)
                    throw std::logic_error("LaurentPoly::as_univariate: not univariate");
            out[m[v]] += c;
        }
        return out;
    }

    // Group terms by the exponents of all variables other than v; each group
    // is a univariate polynomial in v.
    std::map<Monomial, std::map<int, Rational>> split_by_other_vars(int v) const {
        std::map<Monomial, std::map<int, Rational>> out;
        for (auto& [m, c] : terms_) {
            Monomial rest = m;
            int e = rest[v];
            rest[v] = 0;
            out[rest][e] = c;
        }
        return out;
    }

    std::string to_string(const RingCtx& ctx) const;

private:
    static bool is_const_mono(const Monomial& m) {
        for (int e : m) if (e != 0) return false;
        return true;
    }
    static void check_same(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.nvars_ != b.nvars_)
            throw std::invalid_argument("LaurentPoly: variable count mismatch");
    }

    int nvars_;
    TermMap terms_;
};

// Exact division a / b in the Laurent polynomial ring. Returns std::nullopt
// when b does not divide a.
std::optional<LaurentPoly> try_exact_divide(const LaurentPoly& a, const LaurentPoly& b);

}  // namespace parmot

#endif
