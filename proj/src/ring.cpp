#include "parmot/ring.hpp"

#include <sstream>

namespace parmot {

std::string LaurentPoly::to_string(const RingCtx& ctx) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Descending graded-lex for readability and canonical bytes.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Monomial& m = it->first;
        Rational c = it->second;
        bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        if (neg) c = -c;
        std::string mono;
        for (int v = 0; v < nvars_; ++v) {
            if (m[v] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ctx.var_name(v);
            if (m[v] != 1) mono += "^" + std::to_string(m[v]);
        }
        if (mono.empty()) {
            os << c.get_str();
        } else if (c == 1) {
            os << mono;
        } else {
            os << c.get_str() << "*" << mono;
        }
    }
    return os.str();
}

std::optional<LaurentPoly> try_exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) return std::nullopt;
    const int n = a.nvars();
    if (a.is_zero()) return LaurentPoly::zero(n);

    // Shift both to the non-negative orthant; plain multivariate division by
    // the leading term then terminates (monomial orders are well-orders).
    Monomial la = a.min_exponents(), lb = b.min_exponents();
    Monomial neg_la = la, neg_lb = lb;
    for (int i = 0; i < n; ++i) { neg_la[i] = -la[i]; neg_lb[i] = -lb[i]; }
    LaurentPoly ra = a.shift(neg_la);
    LaurentPoly rb = b.shift(neg_lb);

    const auto& lead_b = *rb.terms().rbegin();
    LaurentPoly q(n);
    LaurentPoly rem = ra;
    while (!rem.is_zero()) {
        const auto& lead_r = *rem.terms().rbegin();
        Monomial qm(n);
        for (int i = 0; i < n; ++i) {
            qm[i] = lead_r.first[i] - lead_b.first[i];
            if (qm[i] < 0) return std::nullopt;  // not divisible
        }
        LaurentPoly term = LaurentPoly::monomial(n, qm, lead_r.second / lead_b.second);
        q += term;
        rem -= term * rb;
    }
    // Undo the shifts: a/b = (ra / rb) shifted by la - lb.
    Monomial sh(n);
    for (int i = 0; i < n; ++i) sh[i] = la[i] - lb[i];
    return q.shift(sh);
}

}  // namespace parmot
