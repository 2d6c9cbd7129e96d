#ifndef PARMOT_GENFUN_HPP
#define PARMOT_GENFUN_HPP

#include <string>
#include <vector>

#include "parmot/partition.hpp"
#include "parmot/series.hpp"
#include "parmot/symfunc.hpp"

namespace parmot {

struct GenFunParams {
    int g = 1;                        // genus
    std::vector<std::string> points;  // ordered labels of D
    int delta = 0;                    // irregularity weight
    Trunc trunc;
    int j_max = 0;  // flag-index cap per point; 0 means trunc.r_max

    int flag_cap() const { return j_max > 0 ? j_max : trunc.r_max; }
    RingCtx ring() const { return RingCtx(g); }
    std::string cache_key() const;
};

// L^univ = prod_{i=1}^{2g} (1 - alpha_i z) with alpha_{i+g} = q alpha_i^{-1};
// degree 2g in z, constant term 1.
LaurentPoly l_univ(const RingCtx& ctx);

// L^univ evaluated at z = z^{ze} * qh^{qe} (monomial substitution).
LaurentPoly l_univ_at(const RingCtx& ctx, int ze, int qe);

// N_mu(u; z, q) at u = alpha_i^{-1}, as a polynomial (product over boxes of
// (z^a - alpha_i^{-1} q^{1+l})(z^{a+1} - alpha_i q^l)).
LaurentPoly n_mu_at_alpha_inv(const RingCtx& ctx, const Partition& mu, int i);

// The symmetrized rational function of the Schiffmann rewriting, specialized
// at z_i(mu) = q^{-l(mu)+i} z^{mu_i}, as a single reduced fraction.
// Requires length(mu) <= 6.
ScalarFraction f_mu(const RingCtx& ctx, const Partition& mu);

enum class OmegaKind {
    Univ,  // modified-Macdonald generating function, H(w; z^2, q)
    Hlv,   // irregular HLV form, H(w; z, q), N-ratio weights
    Sch,   // Schiffmann form: Hlv times f_mu, (-qh)^{delta<mu,mu>} weight
    EPoly,     // E-specialized universal form (variables uh, vh)
    PPoly,     // Poincare-specialized form (variable t)
};

// Truncated z-expansion of the chosen generating function.
GradedSeries build_omega(OmegaKind kind, const GenFunParams& p);

// The single-partition term of the chosen generating function.
GradedSeries build_omega_mu_term(OmegaKind kind, const GenFunParams& p, const Partition& mu);

// Scalar part of the per-partition term (everything except the Macdonald
// factors), as an exact rational function in qh, z, alpha. Used by the
// substitution-identity checks.
ScalarFraction omega_term_scalar(OmegaKind kind, const GenFunParams& p, const Partition& mu);

struct Kernels {
    GradedSeries h_univ;  // (1 - z^2) Log Omega_univ
    GradedSeries h_sch;   // (1 - z) Log Omega_sch
    GradedSeries log_omega_sch;  // Log Omega_sch = (1-z)^{-1} h_sch
};
Kernels dt_kernels(const GenFunParams& p);

struct MellitReport {
    enum class Status { Equal, Unequal, Inconclusive };
    struct Entry {
        GammaExponent gamma;
        Status status;
        std::string lhs, rhs;  // canonical coefficient text (z=1 values)
    };
    std::vector<Entry> entries;
    bool all_equal = false;
    bool inconclusive = false;
    bool experimental_genus_zero = false;
};

// Coefficientwise z=1 comparison of the two kernels, gated by vanishing-tail
// certificates.
MellitReport check_mellit(const GenFunParams& p, int tail_window = 5);

}  // namespace parmot

#endif
