#ifndef PARMOT_SERIES_HPP
#define PARMOT_SERIES_HPP

#include <functional>
#include <map>
#include <vector>

#include "parmot/fraction.hpp"
#include "parmot/gamma.hpp"

namespace parmot {

struct Trunc {
    int r_max = 2;
    int z_max = 40;
    bool operator==(const Trunc&) const = default;
};

// Truncated formal series sum_{gamma, d} c_{gamma,d} w^gamma z^d with
// ScalarFraction coefficients. Stored coefficients carry no z; the z-degree
// lives in the key. Out-of-truncation queries are hard errors, never zeros.
class GradedSeries {
public:
    using Key = std::pair<GammaExponent, int>;

    GradedSeries(Trunc trunc, int nvars) : trunc_(trunc), nvars_(nvars) {}

    static GradedSeries zero(Trunc t, int nvars) { return GradedSeries(t, nvars); }
    static GradedSeries one(Trunc t, int nvars) {
        GradedSeries s(t, nvars);
        s.add_term(GammaExponent(), 0, ScalarFraction::one(nvars));
        return s;
    }

    const Trunc& trunc() const { return trunc_; }
    int nvars() const { return nvars_; }
    const std::map<Key, ScalarFraction>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Adds c at (gamma, zdeg); silently drops out-of-truncation terms (the
    // truncation contract) and zero coefficients.
    void add_term(const GammaExponent& g, int zdeg, const ScalarFraction& c);

    ScalarFraction coefficient(const GammaExponent& g, int zdeg) const;
    ScalarFraction constant_term() const { return get_or_zero(GammaExponent(), 0); }
    ScalarFraction get_or_zero(const GammaExponent& g, int zdeg) const;

    friend GradedSeries operator+(const GradedSeries& a, const GradedSeries& b);
    friend GradedSeries operator-(const GradedSeries& a, const GradedSeries& b);
    friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b);
    GradedSeries& operator+=(const GradedSeries& b) { return *this = *this + b; }
    GradedSeries& operator-=(const GradedSeries& b) { return *this = *this - b; }
    GradedSeries& operator*=(const GradedSeries& b) { return *this = *this * b; }
    GradedSeries operator*(const ScalarFraction& c) const;

    bool operator==(const GradedSeries& o) const {
        return trunc_ == o.trunc_ && terms_ == o.terms_;
    }

private:
    Trunc trunc_;
    int nvars_;
    std::map<Key, ScalarFraction> terms_;
};

// B with A * B = 1 up to truncation; requires a nonzero constant term.
GradedSeries invert_unit(const GradedSeries& a);

// Plethystic Adams operation: (gamma, d, c) -> (n gamma, n d, psi_n(c)),
// overflow terms dropped.
GradedSeries adams(const GradedSeries& a, int n);

// Exp(A) = exp(sum_n adams(A, n)/n); requires zero constant term.
GradedSeries pleth_exp(const GradedSeries& a);

// Log, the inverse of Exp via Moebius inversion; requires constant term 1.
GradedSeries pleth_log(const GradedSeries& a);

// Pow(f, A) = Exp(A Log f).
GradedSeries power_structure(const GradedSeries& f, const ScalarFraction& a);

// Coefficient at w^gamma multiplied by c^{rk gamma}, z-degree shifted by
// k * rk gamma. c must be a single-monomial fraction. Terms pushed past z_max
// are dropped and counted in *dropped (if given); terms pushed below 0 are an
// error.
GradedSeries rescale_w(const GradedSeries& a, const ScalarFraction& c, int k,
                       long* dropped = nullptr);

GradedSeries filter_terms(const GradedSeries& a,
                          const std::function<bool(const GammaExponent&, int)>& pred);

// z = 1 evaluation with a vanishing-tail certificate: for every stored gamma,
// the coefficients at zdeg in [z_max - window, z_max] must vanish.
struct EvalZOneResult {
    std::map<GammaExponent, ScalarFraction> value;
    std::vector<GammaExponent> failures;  // offending gammas, empty on success
    bool ok() const { return failures.empty(); }
};
EvalZOneResult eval_z_one(const GradedSeries& a, int window);

}  // namespace parmot

#endif
