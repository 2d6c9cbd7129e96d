#ifndef PARMOT_GAMMA_HPP
#define PARMOT_GAMMA_HPP

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace parmot {

// Element of the monoid Gamma_D: a rank together with flag jump
// multiplicities r_{x,j} indexed by (point, flag index j >= 1), subject to
// sum_j r_{x,j} = r for every point that carries entries. Points are kept as
// small integer ids (their position in the declared point list).
struct GammaExponent {
    int r = 0;
    std::map<std::pair<int, int>, int> parts;  // (point, j) -> multiplicity, entries > 0

    GammaExponent() = default;
    explicit GammaExponent(int rank) : r(rank) {
        if (rank < 0) throw std::invalid_argument("GammaExponent: negative rank");
    }
    GammaExponent(int rank, std::map<std::pair<int, int>, int> p)
        : r(rank), parts(std::move(p)) {
        validate();
    }

    void validate() const {
        std::map<int, int> per_point;
        for (auto& [key, m] : parts) {
            if (key.second < 1) throw std::invalid_argument("GammaExponent: flag index < 1");
            if (m <= 0) throw std::invalid_argument("GammaExponent: multiplicity <= 0");
            per_point[key.first] += m;
        }
        for (auto& [x, s] : per_point)
            if (s != r) throw std::invalid_argument("GammaExponent: flag sum != rank");
    }

    int rank() const { return r; }
    bool is_zero() const { return r == 0; }
    int mult(int point, int j) const {
        auto it = parts.find({point, j});
        return it == parts.end() ? 0 : it->second;
    }

    friend GammaExponent operator+(const GammaExponent& a, const GammaExponent& b) {
        GammaExponent s;
        s.r = a.r + b.r;
        s.parts = a.parts;
        for (auto& [k, m] : b.parts) {
            s.parts[k] += m;
            if (s.parts[k] == 0) s.parts.erase(k);
        }
        return s;
    }

    // a - b inside the monoid; nullopt-like via bool, result valid only if true.
    static bool try_subtract(const GammaExponent& a, const GammaExponent& b,
                             GammaExponent& out) {
        if (b.r > a.r) return false;
        GammaExponent d;
        d.r = a.r - b.r;
        d.parts = a.parts;
        for (auto& [k, m] : b.parts) {
            auto it = d.parts.find(k);
            if (it == d.parts.end() || it->second < m) return false;
            it->second -= m;
            if (it->second == 0) d.parts.erase(it);
        }
        // Monoid membership of the difference (per-point sums).
        std::map<int, int> per_point;
        for (auto& [k, m] : d.parts) per_point[k.first] += m;
        for (auto& [x, s] : per_point)
            if (s != d.r) return false;
        out = std::move(d);
        return true;
    }

    GammaExponent scaled(int n) const {
        GammaExponent s;
        s.r = r * n;
        for (auto& [k, m] : parts) s.parts[k] = m * n;
        return s;
    }

    auto operator<=>(const GammaExponent&) const = default;

    std::string to_string() const {
        std::string s = "(r=" + std::to_string(r);
        for (auto& [k, m] : parts)
            s += ", x" + std::to_string(k.first) + "." + std::to_string(k.second) + ":" +
                 std::to_string(m);
        return s + ")";
    }
};

}  // namespace parmot

#endif
