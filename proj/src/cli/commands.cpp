#include "steinitz/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "steinitz/counterexample.hpp"
#include "steinitz/domain.hpp"
#include "steinitz/errors.hpp"
#include "steinitz/io.hpp"
#include "steinitz/koethe.hpp"
#include "steinitz/nuclearity.hpp"
#include "steinitz/rearranger.hpp"

namespace steinitz::cli {

namespace {

using io::Json;

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  double epsilon = 0.5;
  std::size_t stages = 4;
  std::size_t mmax = 6;
  std::size_t horizon = 10000;
  std::size_t trials = 0;
  std::string target;
  std::string method = "staged";
  std::size_t dim = 16;
  std::size_t d = 4;
  std::size_t levels = 3;
  std::size_t stage_width = 64;
};

Json config_json(const RunConfig& c) {
  Json j{{"command", c.command}, {"input", c.input}, {"seed", c.seed}, {"tol", c.tol}};
  if (c.command == "rearrange") {
    j["target"] = c.target;
    j["method"] = c.method;
    j["stages"] = c.stages;
    j["stage_width"] = c.stage_width;
    j["horizon"] = c.horizon;
  } else if (c.command == "diagnose") {
    j["epsilon"] = c.epsilon;
    j["mmax"] = c.mmax;
    j["dim"] = c.dim;
    j["trials"] = c.trials;
  } else if (c.command == "counterexample") {
    j["d"] = c.d;
    j["levels"] = c.levels;
    j["mmax"] = c.mmax;
    j["horizon"] = c.horizon;
  }
  return j;
}

Json envelope(const RunConfig& c) {
  return Json{{"tool", "steinitz_lab"}, {"version", kVersion}, {"seed", c.seed}, {"config", config_json(c)}};
}

std::string header_line(const RunConfig& c) {
  return "steinitz_lab " + std::string(kVersion) + " seed=" + std::to_string(c.seed) +
         " config=" + config_json(c).dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SeriesSpec load_series(const std::string& path) {
  SeriesSpec spec = io::series_from_json(io::parse_json(read_file(path)));
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("series: ") + e.what());
  }
  return spec;
}

Vector parse_target(const std::string& text) {
  Vector t;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || !std::isfinite(v))
      throw ParseError("--target: \"" + item + "\" is not a number");
    t.push_back(v);
  }
  if (t.empty()) throw ParseError("--target: empty vector");
  return t;
}

std::string verdict_text(const NuclearityVerdict& v) {
  if (!v.nuclear)
    return "notNuclearWithin(" + std::to_string(v.n_max) + ", " + std::to_string(v.m_max) + ")";
  const long shift = static_cast<long>(v.witness[0]) - 1;
  bool uniform = true;
  for (std::size_t n = 1; n <= v.witness.size(); ++n)
    uniform = uniform && static_cast<long>(v.witness[n - 1]) - static_cast<long>(n) == shift;
  if (uniform) return "nuclear, m(n)=n+" + std::to_string(shift);
  std::string s = "nuclear, m=(";
  for (std::size_t n = 0; n < v.witness.size(); ++n)
    s += (n ? "," : "") + std::to_string(v.witness[n]);
  return s + ")";
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
  const SeriesSpec spec = load_series(c.input);
  const GammaReport g = gamma(spec);
  const AffineSubspace dom = domain_of_sums(spec, c.tol);
  Json j = envelope(c);
  Json comps = Json::array();
  for (const Component& comp : spec.components) comps.push_back(to_string(classify_stream(comp.stream)));
  j["convergence"] = comps;
  j["gamma"] = io::to_json(g);
  j["domain"] = io::to_json(dom);
  out << io::dump(j);
  return kOk;
}

int cmd_rearrange(const RunConfig& c, std::ostream& out) {
  const SeriesSpec spec = load_series(c.input);
  const Vector target = parse_target(c.target);
  if (target.size() != spec.dimension)
    throw ParseError("--target has " + std::to_string(target.size()) + " coordinates, series has " +
                     std::to_string(spec.dimension));
  PermutationStream stream;
  if (c.method == "riemann") {
    if (spec.dimension != 1 || spec.components.size() != 1)
      throw InvalidArgument("riemann method needs a one-component series in R^1");
    ScalarStream s = spec.components[0].stream;
    const double dir = spec.components[0].direction[0];
    if (s.family == Family::finite) {
      for (double& v : s.values) v *= dir;
    } else {
      s.scale *= dir;
    }
    if (c.stages > 0) stream = riemann_rearrange(s, target[0], c.horizon);
  } else if (c.method == "staged") {
    const DiscScale scale = build_hs_scale(KoetheMatrix::power(), spec.dimension, 3);
    RearrangeOptions opt;
    opt.seed = c.seed;
    opt.stage_width = c.stage_width;
    stream = rearrange_to_target(spec, target, scale, c.stages, opt);
  } else {
    throw ParseError("--method must be staged or riemann");
  }
  write_stream(out, stream, {header_line(c)});
  return kOk;
}

void write_table(std::ostream& out, const Vector& sv, double eps) {
  out << "n,delta_n,v_n,n^eps*v_n\n";
  for (std::size_t n = 1; n <= sv.size(); ++n) {
    const double v = volume_number_from_singular_values(sv, n);
    out << n << ',' << fmt(sv[n - 1]) << ',' << fmt(v) << ','
        << fmt(std::pow(static_cast<double>(n), eps) * v) << '\n';
  }
}

int cmd_diagnose(const RunConfig& c, std::ostream& out) {
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw InvalidArgument("--epsilon must lie in (0, 1)");
  const Json j = io::parse_json(read_file(c.input));
  if (!j.is_object()) throw ParseError("diagnose: expected a JSON object");
  out << "# " << header_line(c) << '\n';
  if (j.contains("matrix")) {
    const LinearMap map = io::map_from_json(j);
    const Vector sv = singular_values(map);
    write_table(out, sv, c.epsilon);
    if (c.trials > 0) {
      out << "# bruteforce";
      for (std::size_t n = 1; n <= sv.size(); ++n)
        out << ' ' << fmt(volume_number_bruteforce(map, n, c.trials, c.seed));
      out << '\n';
    }
    return kOk;
  }
  const KoetheMatrix a = io::koethe_from_json(j);
  if (a.family == GridFamily::table)
    throw UndecidableFamily("diagnose: tabulated Koethe matrices have no certified tail");
  a.validate();
  const DiscScale scale = build_hs_scale(a, c.dim, 2);
  write_table(out, singular_values(LinearMap::identity(scale.disc(1), scale.disc(2))), c.epsilon);
  const NuclearityVerdict v = nuclearity_test(a, c.mmax, 2 * c.mmax, c.tol);
  out << "# verdict: " << verdict_text(v) << '\n';
  return kOk;
}

BadSeriesCertificate replay_certificate(const Json& doc) {
  const Json& cj = doc.contains("certificate") ? doc["certificate"] : doc;
  const BadSeriesCertificate loaded = io::certificate_from_json(cj);
  BadSeriesCertificate rebuilt;
  try {
    rebuilt = build_bad_series(loaded.a, loaded.representations, loaded.b, loaded.p);
  } catch (const Error& e) {
    throw CertificateReplayFailed(std::string("representations do not rebuild: ") + e.what());
  }
  if (!(rebuilt.series == loaded.series) || rebuilt.block_starts != loaded.block_starts ||
      rebuilt.tail_subsets != loaded.tail_subsets || rebuilt.length != loaded.length)
    throw CertificateReplayFailed("stored series differs from the one rebuilt from its representations");
  return loaded;
}

int cmd_counterexample(const RunConfig& c, std::ostream& out) {
  Json j = envelope(c);
  BadSeriesCertificate cert;
  if (!c.input.empty()) {
    cert = replay_certificate(io::parse_json(read_file(c.input)));
  } else {
    const LadderInstance inst = build_ladder(c.d, c.levels);
    cert = build_bad_series(inst.a, inst.representations, inst.b, inst.p);
    const GenerationReport gen = check_generation(inst.group, inst.b, c.levels, 2);
    Json generated = Json::array();
    for (bool b : gen.generated) generated.push_back(b);
    Json levels = Json::array();
    for (std::size_t n = 1; n <= inst.levels; ++n) {
      const FinGenGroup gn = prefix_group(inst.group, inst.generators_at_level[n - 1]);
      Json lj = io::to_json(distance_p(inst.a, gn, inst.p, inst.p(inst.a)));
      lj["level"] = n;
      lj["guaranteed"] = inst.level_bounds[n - 1];
      levels.push_back(lj);
    }
    j["ladder"] = Json{{"generated", generated}, {"levels", levels}};
  }
  const NonconvexityVerdict v =
      verify_nonconvexity(cert, std::min(c.mmax, cert.representations.size()), c.horizon);
  j["certificate"] = io::to_json(cert);
  j["verdict"] = io::to_json(v);
  out << io::dump(j);
  return kOk;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err);

int cmd_batch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Json manifest = io::parse_json(read_file(c.input));
  if (!manifest.is_array()) throw ParseError("batch: manifest must be an array of argument lists");
  std::vector<std::vector<std::string>> jobs;
  for (const Json& job : manifest) {
    if (!job.is_array()) throw ParseError("batch: each job must be an array of strings");
    std::vector<std::string> args;
    for (const Json& a : job) {
      if (!a.is_string()) throw ParseError("batch: each job must be an array of strings");
      args.push_back(a.get<std::string>());
    }
    if (!args.empty() && args[0] == "batch") throw ParseError("batch: nested batch jobs are not allowed");
    jobs.push_back(std::move(args));
  }
  std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STEINITZ_LAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) workers = std::min<std::size_t>(workers, static_cast<std::size_t>(cap));
  }
  workers = std::min(workers, std::max<std::size_t>(1, jobs.size()));

  std::vector<std::string> outs(jobs.size()), errs(jobs.size());
  std::vector<int> codes(jobs.size(), 0);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      std::ostringstream o, e;
      codes[i] = run(jobs[i], o, e);
      outs[i] = o.str();
      errs[i] = e.str();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int code = kOk;
  out << "# " << header_line(c) << '\n';
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::string line;
    for (const auto& a : jobs[i]) line += (line.empty() ? "" : " ") + a;
    out << "### job " << i + 1 << " exit=" << codes[i] << " args: " << line << '\n' << outs[i];
    err << errs[i];
    if (code == kOk && codes[i] != kOk) code = codes[i];
  }
  return code;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "analyze") return cmd_analyze(c, out);
  if (c.command == "rearrange") return cmd_rearrange(c, out);
  if (c.command == "diagnose") return cmd_diagnose(c, out);
  if (c.command == "counterexample") return cmd_counterexample(c, out);
  if (c.command == "batch") return cmd_batch(c, out, err);
  throw ParseError("unknown command " + c.command);
}

void print_functional(std::ostream& err, const Vector& f) {
  err << "separating functional: [";
  for (std::size_t i = 0; i < f.size(); ++i) err << (i ? ", " : "") << fmt(f[i]);
  err << "]\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Rearrangement, nuclearity and counterexample lab for vector series", "steinitz_lab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  const auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", c.input, "Input file");
    if (needs_input) in->required();
    sub->add_option("--output", c.output, "Output file (default stdout)");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--tol", c.tol, "Summation / tail tolerance")->check(CLI::PositiveNumber);
  };
  auto* analyze = app.add_subcommand("analyze", "Gamma, its annihilator and the domain of sums");
  common(analyze, true);

  auto* rearrange = app.add_subcommand("rearrange", "Permutation stream converging to a target");
  common(rearrange, true);
  rearrange->add_option("--target", c.target, "Target point, comma separated")->required();
  rearrange->add_option("--stages", c.stages, "Number of stages (riemann: 0 disables)");
  rearrange->add_option("--method", c.method, "staged or riemann");
  rearrange->add_option("--horizon", c.horizon, "Terms emitted by the riemann method");
  rearrange->add_option("--stage-width", c.stage_width, "Indices per stage unit")->check(CLI::PositiveNumber);

  auto* diagnose = app.add_subcommand("diagnose", "s-number and volume-number table");
  common(diagnose, true);
  diagnose->add_option("--epsilon", c.epsilon, "Exponent in n^eps v_n");
  diagnose->add_option("--mmax", c.mmax, "Koethe levels tested")->check(CLI::PositiveNumber);
  diagnose->add_option("--dim", c.dim, "Truncation dimension for Koethe inputs")->check(CLI::PositiveNumber);
  diagnose->add_option("--trials", c.trials, "Random frames for the brute-force volume numbers");

  auto* counter = app.add_subcommand("counterexample", "Ladder certificate or replay of one");
  common(counter, false);
  counter->add_option("--d", c.d, "Ambient dimension")->check(CLI::PositiveNumber);
  counter->add_option("--levels", c.levels, "Ladder levels")->check(CLI::PositiveNumber);
  counter->add_option("--mmax", c.mmax, "Blocks checked")->check(CLI::PositiveNumber);
  counter->add_option("--horizon", c.horizon, "Terms per enumerated tail")->check(CLI::PositiveNumber);

  auto* batch = app.add_subcommand("batch", "Run a JSON list of argument lists on a worker pool");
  common(batch, true);

  std::vector<const char*> argv{"steinitz_lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParse;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    if (c.output.empty()) return dispatch(c, out, err);
    std::ostringstream buffer;
    const int code = dispatch(c, buffer, err);
    std::ofstream file(c.output, std::ios::binary);
    if (!file) throw Error("cannot open output file " + c.output);
    file << buffer.str();
    return code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DivergentSeries& e) {
    err << "divergent series: " << e.what() << '\n';
    return kDivergent;
  } catch (const NotInDomain& e) {
    err << "target not in the domain of sums: " << e.what() << '\n';
    print_functional(err, e.separating_functional);
    return kNotInDomain;
  } catch (const UndecidableFamily& e) {
    err << "undecidable: " << e.what() << '\n';
    return kUndecidable;
  } catch (const CertificateReplayFailed& e) {
    err << "replay failed: " << e.what() << '\n';
    return kReplayFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace steinitz::cli
