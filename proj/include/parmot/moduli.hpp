#ifndef PARMOT_MODULI_HPP
#define PARMOT_MODULI_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parmot/genfun.hpp"

namespace parmot {

// Divisor data: per point a pole bound n_x >= 1 and a fixed-level 0 <= n'_x <= n_x.
struct DivisorSpec {
    struct Point {
        std::string label;
        int n = 1;
        int nprime = 1;  // n'_x
    };
    std::vector<Point> points;

    void validate() const;
    int deg() const;                  // deg D = sum n_x
    int deg_prime() const;            // deg D' = sum n'_x
    bool full_level() const;          // D' == D
    std::vector<int> support_prime() const;  // indices with n'_x > 0
    int delta() const;                // deg D - |D'|
    int delta_full() const;           // deg D - |D|
};

// Formal normal form data: per (point index, flag j >= 1) the coefficient
// vector of length n'_x, deepest pole coefficient first (order n_x down to
// order n_x - n'_x + 1). The residue is the order-1 coefficient, defined only
// when n'_x = n_x.
struct NormalForm {
    std::map<std::pair<int, int>, std::vector<Rational>> entries;

    const std::vector<Rational>& at(int x, int j) const;
    Rational top(int x, int j) const;      // order-n_x coefficient
    Rational residue(const DivisorSpec& div, int x, int j) const;
    void validate(const DivisorSpec& div) const;  // vector lengths match n'_x
};

// Parabolic weights sigma_{x,j}, finitely many stored per point.
struct Weights {
    std::map<std::pair<int, int>, Rational> sigma;

    Rational at(int x, int j) const;
    void validate(const DivisorSpec& div) const;
};

enum class QueryKind { Full, SemistableFull, SemistablePartial, NonpositiveGraded };

struct StackQuery {
    int g = 1;
    DivisorSpec divisor;
    GammaExponent gamma;
    long d = 0;
    Rational eps = 0;
    NormalForm zeta;
    std::optional<Weights> sigma;
    QueryKind kind = QueryKind::Full;
    Trunc trunc;
    int tail_window = 5;
};

struct ClassPredicates {
    std::set<int> full_at;
    std::set<int> nonresonant_at;
    bool admissible = false;
};
ClassPredicates class_predicates(const GammaExponent& gamma, const DivisorSpec& div,
                                 const NormalForm& zeta);

// gamma * zeta (residues) and gamma * sigma.
Rational star_residues(const GammaExponent& gamma, const DivisorSpec& div,
                       const NormalForm& zeta);
Rational star_weights(const GammaExponent& gamma, const Weights& sigma);

enum class ChiMode { Full, Partial };
long chi_of(const GammaExponent& gamma, const DivisorSpec& div, int g, ChiMode mode);

// Euler form chi(Hom(E,F)) for parabolic bundles of classes (gamma1,d1),
// (gamma2,d2) over the same divisor.
long euler_pairing(const GammaExponent& g1, long d1, const GammaExponent& g2, long d2,
                   const DivisorSpec& div, int g);

// Degree-shift bound beyond which graded extraction stabilizes.
long stabilization_bound(const StackQuery& q);

struct ClassResult {
    ScalarFraction value;
    Trunc trunc_used;
    int tail_window = 0;
    long witness_n = -1;  // stabilization witness when applicable
    bool experimental_genus_zero = false;

    ClassResult() : value(ScalarFraction::zero(1)) {}
};

// Motivic class of the stack per the z = 1 theorem drivers (full /
// semistable-full / semistable-partial dispatch).
ClassResult conn_class(const StackQuery& q);

// The same Exp-coefficient extraction against a chosen kernel family
// (universal, E- or P-specialized); conn_class is the Univ instance.
ScalarFraction theorem_driver(const StackQuery& q, OmegaKind omega_kind);

// Graded (z-series) extraction with explicit shift N.
ScalarFraction graded_class(const StackQuery& q, long n_shift);

// graded_class stabilized in N: starts at stabilization_bound, increases
// until two consecutive values agree, records the witness.
ClassResult graded_class_stabilized(const StackQuery& q);

// Generating series of nilpotent-pair classes for a fixed Jordan type: the
// single-mu term of the Schiffmann-side series, reweighted by
// qh^{delta(<mu,mu> - |mu|^2)}.
GradedSeries nilpotent_pair_class(int g, int delta, const Partition& mu,
                                  const std::vector<std::string>& points, Trunc trunc,
                                  int j_max = 0);

struct DdpResult {
    ScalarFraction h;        // Poincare-specialized stack class times (t^2-1)
    long d_val = 0;          // d(1^r, n, g)
    bool palindromic = false;          // t^{2 d_val} H(1/t) = H(t), exactly as stated
    bool palindromic_support = false;  // reversal within the support of H
    bool h_is_polynomial = false;
    long witness_attempts = 1;  // sigma regeneration attempts used

    DdpResult() : h(ScalarFraction::zero(1)) {}
};
DdpResult ddp_poincare(int g, int n, int r, Trunc trunc, int tail_window = 5);

long ddp_dimension(const Partition& mu, int n, int g);  // d(mu, n, g)

}  // namespace parmot

#endif
