#include "parmot/specialize.hpp"

#include <stdexcept>

namespace parmot {

namespace {

LaurentPoly e_image(const LaurentPoly& p, const RingCtx& ctx) {
    const int n = ctx.nvars();
    LaurentPoly out(n);
    for (auto& [m, c] : p.terms()) {
        Monomial mm = m;
        int qe = mm[ctx.qh()];
        mm[ctx.qh()] = 0;
        mm[ctx.uh()] += qe;
        mm[ctx.vh()] += qe;
        for (int i = 0; i < ctx.genus(); ++i) {
            int ae = mm[ctx.alpha(i)];
            mm[ctx.alpha(i)] = 0;
            mm[ctx.uh()] += 2 * ae;
        }
        out.add_term(mm, c);
    }
    return out;
}

LaurentPoly p_image(const LaurentPoly& p, const RingCtx& ctx, bool* parity_ok) {
    const int n = ctx.nvars();
    LaurentPoly out(n);
    for (auto& [m, c] : p.terms()) {
        Monomial mm = m;
        int te = mm[ctx.t()];
        te += mm[ctx.qh()];
        mm[ctx.qh()] = 0;
        for (int i = 0; i < ctx.genus(); ++i) {
            te += mm[ctx.alpha(i)];
            mm[ctx.alpha(i)] = 0;
        }
        int ue = mm[ctx.uh()], ve = mm[ctx.vh()];
        if ((ue % 2 != 0 || ve % 2 != 0) && parity_ok) *parity_ok = false;
        te += ue / 2 + ve / 2;
        mm[ctx.uh()] = ue % 2;  // residual half-power, flagged above
        mm[ctx.vh()] = ve % 2;
        mm[ctx.t()] = te;
        out.add_term(mm, c);
    }
    return out;
}

bool uv_even(const LaurentPoly& p, const RingCtx& ctx) {
    for (auto& [m, c] : p.terms())
        if (m[ctx.uh()] % 2 != 0 || m[ctx.vh()] % 2 != 0) return false;
    return true;
}

}  // namespace

ScalarFraction specialize_raw(const ScalarFraction& f, SpecTarget target, const RingCtx& ctx) {
    if (target == SpecTarget::E)
        return ScalarFraction(e_image(f.num(), ctx), e_image(f.den(), ctx));
    bool ok = true;
    LaurentPoly num = p_image(f.num(), ctx, &ok);
    LaurentPoly den = p_image(f.den(), ctx, &ok);
    if (!ok)
        throw std::domain_error("specialize: fractional residual power of t (parity bug upstream)");
    if (den.is_zero()) throw std::domain_error("specialize: denominator vanishes");
    return ScalarFraction(std::move(num), std::move(den));
}

ScalarFraction specialize_value(const ScalarFraction& f, SpecTarget target, const RingCtx& ctx) {
    ScalarFraction out = specialize_raw(f, target, ctx);
    if (target == SpecTarget::E) {
        if (!uv_even(out.num(), ctx) || !uv_even(out.den(), ctx))
            throw std::domain_error(
                "specialize: fractional residual power of u/v (parity bug upstream)");
    }
    return out;
}

GradedSeries specialize_value(const GradedSeries& s, SpecTarget target, const RingCtx& ctx) {
    GradedSeries out(s.trunc(), s.nvars());
    for (auto& [key, c] : s.terms())
        out.add_term(key.first, key.second, specialize_raw(c, target, ctx));
    return out;
}

GradedSeries omega_specialized(const GenFunParams& p, SpecTarget target) {
    return build_omega(target == SpecTarget::E ? OmegaKind::EPoly : OmegaKind::PPoly, p);
}

ScalarFraction e_p_conn(const StackQuery& q, SpecTarget target) {
    return specialize_value(conn_class(q).value, target, RingCtx(q.g));
}

ScalarFraction e_p_conn_direct(const StackQuery& q, SpecTarget target) {
    return theorem_driver(q, target == SpecTarget::E ? OmegaKind::EPoly : OmegaKind::PPoly);
}

std::string uv_text(const ScalarFraction& f, const RingCtx& ctx) {
    const int n = ctx.nvars();
    auto halve = [&](const LaurentPoly& p) {
        LaurentPoly out(n);
        for (auto& [m, c] : p.terms()) {
            if (m[ctx.qh()] != 0)
                throw std::domain_error("uv_text: unspecialized qh power");
            if (m[ctx.uh()] % 2 != 0 || m[ctx.vh()] % 2 != 0)
                throw std::domain_error("uv_text: fractional power of u or v");
            Monomial mm = m;
            mm[ctx.uh()] /= 2;
            mm[ctx.vh()] /= 2;
            out.add_term(mm, c);
        }
        return out;
    };
    auto text = [&](const LaurentPoly& p) {
        if (p.is_zero()) return std::string("0");
        std::string s;
        bool first = true;
        for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
            Rational c = it->second;
            bool neg = c < 0;
            s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
            first = false;
            if (neg) c = -c;
            std::string mono;
            for (int v = 0; v < n; ++v) {
                int e = it->first[v];
                if (e == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += v == ctx.uh() ? "u" : (v == ctx.vh() ? "v" : ctx.var_name(v));
                if (e != 1) mono += "^" + std::to_string(e);
            }
            if (mono.empty()) s += c.get_str();
            else if (c == 1) s += mono;
            else s += c.get_str() + "*" + mono;
        }
        return s;
    };
    ScalarFraction g(halve(f.num()), halve(f.den()));
    if (g.is_polynomial()) return text(g.num());
    return "(" + text(g.num()) + ")/(" + text(g.den()) + ")";
}

}  // namespace parmot
