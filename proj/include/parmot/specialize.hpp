#ifndef PARMOT_SPECIALIZE_HPP
#define PARMOT_SPECIALIZE_HPP

#include "parmot/moduli.hpp"

namespace parmot {

// E: qh -> uh vh, alpha_i -> uh^2 (so q -> uv, alpha_i -> u).
// P: E followed by uh, vh -> t^{1/2}; implemented as the exponent rewrite
//    qh^e -> t^e, alpha_i^e -> t^e, uh^e -> t^{e/2}, vh^e -> t^{e/2}
//    (odd uh/vh exponents signal a parity bug and are rejected).
enum class SpecTarget { E, P };

// Image under the specialization homomorphism, without integrality checks.
ScalarFraction specialize_raw(const ScalarFraction& f, SpecTarget target, const RingCtx& ctx);

// Image with the boundary assertion: powers of u, v (resp. t) integral, i.e.
// uh/vh exponents even under E, all rewrites valid under P.
ScalarFraction specialize_value(const ScalarFraction& f, SpecTarget target, const RingCtx& ctx);
GradedSeries specialize_value(const GradedSeries& s, SpecTarget target, const RingCtx& ctx);

// The specialized generating function built directly from its closed form.
// Equals the substitution image of the universal series.
GradedSeries omega_specialized(const GenFunParams& p, SpecTarget target);

// Specialized stack class: substitution image of conn_class. The alternative
// route through the specialized kernels is exposed for cross-checking.
ScalarFraction e_p_conn(const StackQuery& q, SpecTarget target);
ScalarFraction e_p_conn_direct(const StackQuery& q, SpecTarget target);

// Canonical text of a specialized value in the whole variables u, v, t
// (half-power exponents must be even; checked).
std::string uv_text(const ScalarFraction& f, const RingCtx& ctx);

}  // namespace parmot

#endif
