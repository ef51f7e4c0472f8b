#include "steinitz/io.hpp"

#include <initializer_list>

#include "steinitz/errors.hpp"

namespace steinitz::io {

namespace {

void only_fields(const Json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ParseError(std::string(what) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(std::string(what) + ": unknown field \"" + key + "\"");
  }
}

const Json& field(const Json& j, std::string_view what, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string(what) + ": missing field \"" + name + "\"");
  return *it;
}

double number(const Json& j, std::string_view what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, std::string_view what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(std::string(what) + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

Vector vec(const Json& j, std::string_view what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of numbers");
  Vector v;
  for (const Json& x : j) v.push_back(number(x, what));
  return v;
}

std::vector<Vector> vecs(const Json& j, std::string_view what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of arrays");
  std::vector<Vector> out;
  for (const Json& x : j) out.push_back(vec(x, what));
  return out;
}

std::vector<std::size_t> counts(const Json& j, std::string_view what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of integers");
  std::vector<std::size_t> out;
  for (const Json& x : j) out.push_back(count(x, what));
  return out;
}

template <class F>
auto wrap(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json stream_json(const ScalarStream& s) {
  Json j;
  j["family"] = to_string(s.family);
  switch (s.family) {
    case Family::power:
    case Family::alternating_power: j["alpha"] = s.alpha; break;
    case Family::geometric: j["ratio"] = s.ratio; break;
    case Family::finite: j["values"] = s.values; return j;
  }
  j["scale"] = s.scale;
  return j;
}

ScalarStream stream_from(const Json& j) {
  const std::string what = "stream";
  const Json& fam = field(j, what, "family");
  if (!fam.is_string()) throw ParseError("stream: family must be a string");
  const std::string f = fam.get<std::string>();
  const auto scale = [&] { return j.contains("scale") ? number(j["scale"], "stream.scale") : 1.0; };
  if (f == "power" || f == "alternating_power") {
    only_fields(j, what, {"family", "alpha", "scale"});
    const double alpha = number(field(j, what, "alpha"), "stream.alpha");
    return f == "power" ? ScalarStream::power(alpha, scale())
                        : ScalarStream::alternating_power(alpha, scale());
  }
  if (f == "geometric") {
    only_fields(j, what, {"family", "ratio", "scale"});
    return ScalarStream::geometric(number(field(j, what, "ratio"), "stream.ratio"), scale());
  }
  if (f == "finite") {
    only_fields(j, what, {"family", "values"});
    return ScalarStream::finite(vec(field(j, what, "values"), "stream.values"));
  }
  throw ParseError("stream: unknown family \"" + f + "\"");
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Recover line and column from the byte offset.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + " column " + std::to_string(col) + ": " +
                     e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const SeriesSpec& spec) {
  Json j;
  j["dimension"] = spec.dimension;
  Json comps = Json::array();
  for (const Component& c : spec.components)
    comps.push_back(Json{{"direction", c.direction}, {"stream", stream_json(c.stream)}});
  j["components"] = comps;
  return j;
}

SeriesSpec series_from_json(const Json& j) {
  only_fields(j, "series", {"dimension", "components"});
  SeriesSpec spec;
  spec.dimension = count(field(j, "series", "dimension"), "series.dimension");
  const Json& comps = field(j, "series", "components");
  if (!comps.is_array()) throw ParseError("series.components: expected an array");
  for (const Json& c : comps) {
    only_fields(c, "component", {"direction", "stream"});
    spec.components.push_back({vec(field(c, "component", "direction"), "component.direction"),
                               wrap("stream", [&] { return stream_from(field(c, "component", "stream")); })});
  }
  return spec;
}

Json to_json(const KoetheMatrix& a) {
  Json j;
  j["family"] = to_string(a.family);
  switch (a.family) {
    case GridFamily::power: break;
    case GridFamily::constant: j["c"] = a.constant; break;
    case GridFamily::geometric: j["rates"] = a.rates; break;
    case GridFamily::table: j["rows"] = a.rows; break;
  }
  return j;
}

KoetheMatrix koethe_from_json(const Json& j) {
  const Json& fam = field(j, "koethe", "family");
  if (!fam.is_string()) throw ParseError("koethe: family must be a string");
  const std::string f = fam.get<std::string>();
  return wrap("koethe", [&] {
    if (f == "power") {
      only_fields(j, "koethe", {"family"});
      return KoetheMatrix::power();
    }
    if (f == "constant") {
      only_fields(j, "koethe", {"family", "c"});
      return KoetheMatrix::constant_grid(j.contains("c") ? number(j["c"], "koethe.c") : 1.0);
    }
    if (f == "geometric") {
      only_fields(j, "koethe", {"family", "rates"});
      return KoetheMatrix::geometric(j.contains("rates") ? vec(j["rates"], "koethe.rates") : Vector{});
    }
    if (f == "table") {
      only_fields(j, "koethe", {"family", "rows"});
      return KoetheMatrix::tabulated(vecs(field(j, "koethe", "rows"), "koethe.rows"));
    }
    throw ParseError("koethe: unknown family \"" + f + "\"");
  });
}

Json to_json(const DiscScale& scale) {
  Json j;
  j["truncation_dim"] = scale.truncation_dim;
  Json w = Json::array();
  for (const WeightedHilbert& d : scale.discs) w.push_back(d.weights());
  j["weights"] = w;
  j["rescale_factors"] = scale.rescale_factors;
  j["raw_links"] = scale.raw_links;
  return j;
}

DiscScale scale_from_json(const Json& j) {
  only_fields(j, "scale", {"truncation_dim", "weights", "rescale_factors", "raw_links"});
  DiscScale s;
  s.truncation_dim = count(field(j, "scale", "truncation_dim"), "scale.truncation_dim");
  for (Vector& w : vecs(field(j, "scale", "weights"), "scale.weights")) {
    if (w.size() != s.truncation_dim) throw ParseError("scale.weights: row length differs from truncation_dim");
    s.discs.push_back(wrap("scale.weights", [&] { return WeightedHilbert(std::move(w)); }));
  }
  if (j.contains("rescale_factors")) s.rescale_factors = vec(j["rescale_factors"], "scale.rescale_factors");
  if (j.contains("raw_links")) s.raw_links = vec(j["raw_links"], "scale.raw_links");
  return s;
}

Json to_json(const LinearMap& map) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < map.matrix().rows(); ++r) {
    const auto row = map.matrix().row(r);
    rows.push_back(Vector(row.begin(), row.end()));
  }
  return Json{{"matrix", rows},
              {"domain_weights", map.domain().weights()},
              {"codomain_weights", map.codomain().weights()}};
}

LinearMap map_from_json(const Json& j) {
  only_fields(j, "map", {"matrix", "domain_weights", "codomain_weights"});
  const std::vector<Vector> rows = vecs(field(j, "map", "matrix"), "map.matrix");
  if (rows.empty() || rows.front().empty()) throw ParseError("map.matrix: empty matrix");
  for (const Vector& r : rows)
    if (r.size() != rows.front().size()) throw ParseError("map.matrix: ragged rows");
  return wrap("map", [&] {
    const Matrix m = Matrix::from_rows(rows);
    Vector dw = j.contains("domain_weights") ? vec(j["domain_weights"], "map.domain_weights")
                                             : Vector(m.cols(), 1.0);
    Vector cw = j.contains("codomain_weights") ? vec(j["codomain_weights"], "map.codomain_weights")
                                               : Vector(m.rows(), 1.0);
    return LinearMap(m, WeightedHilbert(std::move(dw)), WeightedHilbert(std::move(cw)));
  });
}

Json to_json(const GammaReport& r) {
  return Json{{"gamma_basis", r.gamma_basis},
              {"gamma_perp_basis", r.gamma_perp_basis},
              {"conditional_vectors", r.conditional_vectors}};
}

Json to_json(const AffineSubspace& s) {
  return Json{{"offset", s.offset}, {"directions", s.directions}};
}

Json to_json(const DistanceReport& r) {
  return Json{{"shell_min", r.shell_min},
              {"lower_bound", r.lower_bound},
              {"closed", r.closed},
              {"enumerated", r.enumerated},
              {"lattice_rank", r.lattice_rank}};
}

Json to_json(const NonconvexityVerdict& v) {
  Json in = Json::array(), trunc = Json::array();
  for (bool b : v.two_a_in_cloud) in.push_back(b);
  for (bool b : v.cloud_truncated) trunc.push_back(b);
  return Json{{"replay_ok", v.replay_ok},
              {"full_sum_zero", v.full_sum_zero},
              {"two_a_in_cloud", in},
              {"cloud_distance", v.cloud_distance},
              {"cloud_truncated", trunc},
              {"group_bound", v.group_bound},
              {"group_bound_closed", v.group_bound_closed},
              {"nonconvex", v.nonconvex},
              {"note", v.note}};
}

Json to_json(const BadSeriesCertificate& cert) {
  Json tags = Json::array();
  for (std::size_t m = 1; m <= cert.representations.size(); ++m) tags.push_back(m);
  Json reps = Json::array();
  for (const auto& r : cert.representations) reps.push_back(r);
  Json subsets = Json::array();
  for (const auto& s : cert.tail_subsets) subsets.push_back(s);
  return Json{{"a", cert.a},
              {"p_weights", cert.p.weights()},
              {"b_weights", cert.b.weights()},
              {"representations", reps},
              {"tags", tags},
              {"block_starts", cert.block_starts},
              {"tail_subsets", subsets},
              {"length", cert.length},
              {"series", to_json(cert.series)}};
}

BadSeriesCertificate certificate_from_json(const Json& j) {
  const char* what = "certificate";
  only_fields(j, what,
              {"a", "p_weights", "b_weights", "representations", "tags", "block_starts",
               "tail_subsets", "length", "series"});
  BadSeriesCertificate c;
  c.a = vec(field(j, what, "a"), "certificate.a");
  c.p = wrap(what, [&] { return DiagonalSeminorm(vec(field(j, what, "p_weights"), "certificate.p_weights")); });
  c.b = wrap(what, [&] { return WeightedHilbert(vec(field(j, what, "b_weights"), "certificate.b_weights")); });
  const Json& reps = field(j, what, "representations");
  if (!reps.is_array()) throw ParseError("certificate.representations: expected an array");
  for (const Json& r : reps) c.representations.push_back(vecs(r, "certificate.representations"));
  const std::vector<std::size_t> tags = counts(field(j, what, "tags"), "certificate.tags");
  for (std::size_t m = 0; m < tags.size(); ++m)
    if (tags[m] != m + 1) throw ParseError("certificate.tags: representations must be tagged 1, 2, ...");
  if (tags.size() != c.representations.size()) throw ParseError("certificate.tags: count differs");
  c.block_starts = counts(field(j, what, "block_starts"), "certificate.block_starts");
  const Json& subs = field(j, what, "tail_subsets");
  if (!subs.is_array()) throw ParseError("certificate.tail_subsets: expected an array");
  for (const Json& s : subs) c.tail_subsets.push_back(counts(s, "certificate.tail_subsets"));
  c.length = count(field(j, what, "length"), "certificate.length");
  c.series = series_from_json(field(j, what, "series"));
  return c;
}

}  // namespace steinitz::io
