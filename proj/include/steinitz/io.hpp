#pragma once
// JSON forms of the lab's inputs, reports and certificates. Readers are
// strict: unknown fields and wrong types raise ParseError.

#include <string>
#include <string_view>

#include <json.hpp>

#include "steinitz/counterexample.hpp"
#include "steinitz/domain.hpp"
#include "steinitz/hilbert.hpp"
#include "steinitz/koethe.hpp"
#include "steinitz/nuclearity.hpp"
#include "steinitz/series.hpp"

namespace steinitz::io {

using Json = nlohmann::ordered_json;

// ParseError carries line and column of the first offending byte.
Json parse_json(std::string_view text);
std::string dump(const Json& j);

Json to_json(const SeriesSpec& spec);
SeriesSpec series_from_json(const Json& j);

Json to_json(const KoetheMatrix& a);
KoetheMatrix koethe_from_json(const Json& j);

Json to_json(const DiscScale& scale);
DiscScale scale_from_json(const Json& j);

// {"matrix": [[...]], "domain_weights": [...], "codomain_weights": [...]};
// weights default to 1.
Json to_json(const LinearMap& map);
LinearMap map_from_json(const Json& j);

Json to_json(const GammaReport& r);
Json to_json(const AffineSubspace& s);
Json to_json(const DistanceReport& r);
Json to_json(const NonconvexityVerdict& v);

Json to_json(const BadSeriesCertificate& cert);
BadSeriesCertificate certificate_from_json(const Json& j);

}  // namespace steinitz::io
