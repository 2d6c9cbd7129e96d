#ifndef PARMOT_FRACTION_HPP
#define PARMOT_FRACTION_HPP

#include <map>

#include "parmot/ring.hpp"

namespace parmot {

// Ratio of sparse Laurent polynomials, the carrier of all series coefficients.
//
// The denominator is kept as a multiset of normalized factors (the pipeline
// only ever divides by explicit unit factors, so the factorization arrives
// for free). Reduction is factor-by-factor exact division plus a univariate
// gcd pass; equality is decided by cross-multiplication and never depends on
// the reduction state. The materialized denominator is primitive with a
// positive leading coefficient.
class ScalarFraction {
public:
    using FactorMap = std::map<LaurentPoly, int>;  // factor -> multiplicity

    explicit ScalarFraction(int nvars)
        : num_(LaurentPoly::zero(nvars)), den_(LaurentPoly::constant(nvars, 1)) {}
    ScalarFraction(LaurentPoly num, LaurentPoly den);
    /*implicit*/ ScalarFraction(LaurentPoly p)
        : num_(std::move(p)), den_(LaurentPoly::constant(num_.nvars(), 1)) {}

    static ScalarFraction zero(int nvars) { return ScalarFraction(nvars); }
    static ScalarFraction one(int nvars) {
        return ScalarFraction(LaurentPoly::constant(nvars, 1));
    }
    static ScalarFraction constant(int nvars, const Rational& c) {
        return ScalarFraction(LaurentPoly::constant(nvars, c));
    }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    int nvars() const { return num_.nvars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && factors_.empty(); }
    bool is_polynomial() const { return factors_.empty(); }

    ScalarFraction operator-() const;
    friend ScalarFraction operator+(const ScalarFraction& a, const ScalarFraction& b);
    friend ScalarFraction operator-(const ScalarFraction& a, const ScalarFraction& b);
    friend ScalarFraction operator*(const ScalarFraction& a, const ScalarFraction& b);
    friend ScalarFraction operator/(const ScalarFraction& a, const ScalarFraction& b);
    ScalarFraction& operator+=(const ScalarFraction& b) { return *this = *this + b; }
    ScalarFraction& operator-=(const ScalarFraction& b) { return *this = *this - b; }
    ScalarFraction& operator*=(const ScalarFraction& b) { return *this = *this * b; }
    ScalarFraction& operator/=(const ScalarFraction& b) { return *this = *this / b; }

    ScalarFraction pow(int e) const;

    // Equality by cross-multiplication, independent of reduction state.
    bool operator==(const ScalarFraction& o) const { return num_ * o.den_ == o.num_ * den_; }
    bool operator!=(const ScalarFraction& o) const { return !(*this == o); }

    // Adams operation: every generator x replaced by x^n in num and den.
    ScalarFraction psi(int n) const;

    // Image under the ring homomorphism sending each generator to the given
    // fraction. Throws if a substituted denominator vanishes.
    ScalarFraction substitute(const std::map<int, ScalarFraction>& assignment) const;

    // Attempt full reduction (denominator divided out when possible).
    ScalarFraction deep_reduce() const;

    std::string to_string(const RingCtx& ctx) const;

private:
    ScalarFraction(LaurentPoly num, FactorMap factors, LaurentPoly den_product);
    void push_factor(const LaurentPoly& f, int mult);  // updates den_ incrementally
    void force_reduce();
    void maybe_reduce();

    LaurentPoly num_;
    FactorMap factors_;  // normalized non-constant factors
    LaurentPoly den_;    // product of the factors, kept in sync
};

}  // namespace parmot

#endif
