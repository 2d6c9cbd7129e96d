#ifndef PARMOT_JSON_IO_HPP
#define PARMOT_JSON_IO_HPP

#include <json.hpp>

#include "parmot/moduli.hpp"

namespace parmot {

using Json = nlohmann::ordered_json;

// Canonical textual coefficient plus a lossless structural form (used by the
// kernel cache, which must round-trip exactly).
Json fraction_to_json(const ScalarFraction& f, const RingCtx& ctx);
Json fraction_struct(const ScalarFraction& f);
ScalarFraction fraction_from_struct(const Json& j, int nvars);

Json gamma_to_json(const GammaExponent& g, const std::vector<std::string>& points);

// Series schema:
// {trunc:{r_max,z_max}, terms:[{gamma:{r,parts:[[x,j,mult]...]}, zdeg, coeff}...]}
Json series_to_json(const GradedSeries& s, const RingCtx& ctx,
                    const std::vector<std::string>& points, bool structural = false);
GradedSeries series_from_json(const Json& j, int nvars,
                              const std::vector<std::string>& points);

Json mellit_report_to_json(const MellitReport& r, const std::vector<std::string>& points);

// FNV-1a over a string; stable content hash for the kernel cache.
std::string content_hash(const std::string& payload);

}  // namespace parmot

#endif
