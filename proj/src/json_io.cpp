#include "parmot/json_io.hpp"

#include <sstream>

namespace parmot {

namespace {
Json poly_struct(const LaurentPoly& p) {
    Json arr = Json::array();
    for (auto& [m, c] : p.terms()) {
        Json term = Json::array();
        term.push_back(c.get_str());
        term.push_back(m);
        arr.push_back(term);
    }
    return arr;
}

LaurentPoly poly_from_struct(const Json& j, int nvars) {
    LaurentPoly p(nvars);
    for (auto& term : j) {
        Rational c(term.at(0).get<std::string>());
        c.canonicalize();
        Monomial m = term.at(1).get<Monomial>();
        if ((int)m.size() != nvars) throw std::invalid_argument("poly_from_struct: bad monomial");
        p.add_term(m, c);
    }
    return p;
}
}  // namespace

Json fraction_to_json(const ScalarFraction& f, const RingCtx& ctx) {
    return Json(f.to_string(ctx));
}

Json fraction_struct(const ScalarFraction& f) {
    Json j;
    j["num"] = poly_struct(f.num());
    j["den"] = poly_struct(f.den());
    return j;
}

ScalarFraction fraction_from_struct(const Json& j, int nvars) {
    return ScalarFraction(poly_from_struct(j.at("num"), nvars),
                          poly_from_struct(j.at("den"), nvars));
}

Json gamma_to_json(const GammaExponent& g, const std::vector<std::string>& points) {
    Json j;
    j["r"] = g.rank();
    Json parts = Json::array();
    for (auto& [key, m] : g.parts) {
        Json entry = Json::array();
        entry.push_back(key.first < (int)points.size() ? Json(points[key.first])
                                                       : Json(key.first));
        entry.push_back(key.second);
        entry.push_back(m);
        parts.push_back(entry);
    }
    j["parts"] = parts;
    return j;
}

Json series_to_json(const GradedSeries& s, const RingCtx& ctx,
                    const std::vector<std::string>& points, bool structural) {
    Json j;
    j["trunc"] = {{"r_max", s.trunc().r_max}, {"z_max", s.trunc().z_max}};
    Json terms = Json::array();
    for (auto& [key, c] : s.terms()) {
        Json t;
        t["gamma"] = gamma_to_json(key.first, points);
        t["zdeg"] = key.second;
        t["coeff"] = structural ? fraction_struct(c) : fraction_to_json(c, ctx);
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

GradedSeries series_from_json(const Json& j, int nvars,
                              const std::vector<std::string>& points) {
    Trunc t{j.at("trunc").at("r_max").get<int>(), j.at("trunc").at("z_max").get<int>()};
    GradedSeries s(t, nvars);
    std::map<std::string, int> point_index;
    for (int i = 0; i < (int)points.size(); ++i) point_index[points[i]] = i;
    for (auto& term : j.at("terms")) {
        GammaExponent g;
        g.r = term.at("gamma").at("r").get<int>();
        for (auto& entry : term.at("gamma").at("parts")) {
            int x = entry.at(0).is_string() ? point_index.at(entry.at(0).get<std::string>())
                                            : entry.at(0).get<int>();
            g.parts[{x, entry.at(1).get<int>()}] = entry.at(2).get<int>();
        }
        g.validate();
        s.add_term(g, term.at("zdeg").get<int>(),
                   fraction_from_struct(term.at("coeff"), nvars));
    }
    return s;
}

Json mellit_report_to_json(const MellitReport& r, const std::vector<std::string>& points) {
    Json j;
    j["all_equal"] = r.all_equal;
    j["inconclusive"] = r.inconclusive;
    if (r.experimental_genus_zero) j["experimental"] = "genus 0 outside the proven range";
    Json entries = Json::array();
    for (auto& e : r.entries) {
        Json je;
        je["gamma"] = gamma_to_json(e.gamma, points);
        je["status"] = e.status == MellitReport::Status::Equal
                           ? "equal"
                           : (e.status == MellitReport::Status::Unequal ? "unequal"
                                                                        : "inconclusive");
        if (e.status != MellitReport::Status::Inconclusive) {
            je["lhs"] = e.lhs;
            je["rhs"] = e.rhs;
        }
        entries.push_back(je);
    }
    j["per_gamma"] = entries;
    return j;
}

std::string content_hash(const std::string& payload) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace parmot
