#ifndef PARMOT_SYMFUNC_HPP
#define PARMOT_SYMFUNC_HPP

#include <map>
#include <utility>

#include "parmot/partition.hpp"
#include "parmot/ring.hpp"

namespace parmot {

// Polynomial in the two Macdonald parameters ("first" pairs with z, "second"
// pairs with q in the eigenvalue convention nabla H = (-1)^|mu| q^n(mu)
// z^n(mu') H).
struct ParamPoly {
    std::map<std::pair<int, int>, Rational> coef;  // (first_exp, second_exp) -> c

    bool is_zero() const { return coef.empty(); }
    void add(int e1, int e2, const Rational& c) {
        if (c == 0) return;
        auto [it, ins] = coef.emplace(std::make_pair(e1, e2), c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) coef.erase(it);
        }
    }
    ParamPoly swapped() const {
        ParamPoly r;
        for (auto& [e, c] : coef) r.add(e.second, e.first, c);
        return r;
    }
    Rational eval_at_one() const {
        Rational s = 0;
        for (auto& [e, c] : coef) s += c;
        return s;
    }
    bool operator==(const ParamPoly&) const = default;
};

// Symmetric function in the monomial basis with ParamPoly coefficients.
// Homogeneous of the stated degree; coefficient of w^kappa is the entry at
// sort(kappa), independent of any variable cap.
struct SymFunc {
    int degree = 0;
    std::map<Partition, ParamPoly> terms;

    // Coefficient of the monomial w^kappa for a weak composition kappa.
    ParamPoly m_coefficient(const std::vector<int>& kappa) const;
};

// Modified Macdonald polynomial in the paper's argument order, computed by
// filling enumeration with the inv/maj statistics. Results are memoized; the
// computation is pure. |mu| is capped (default 8, resource error beyond).
const SymFunc& hhl_modified_macdonald(const Partition& mu, int size_bound = 8);

}  // namespace parmot

#endif
