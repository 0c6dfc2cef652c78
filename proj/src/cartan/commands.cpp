#include "cartan/commands.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cartan/compactness.hpp"
#include "cartan/error.hpp"
#include "cartan/json_io.hpp"
#include "cartan/metrics.hpp"
#include "cartan/testfns.hpp"

#ifndef CARTAN_VERSION_STRING
#define CARTAN_VERSION_STRING "0.0.0"
#endif

namespace cartan {

using jsonio::Json;

const char* tool_version() { return CARTAN_VERSION_STRING; }

int identity_exit_code(const IdentityResiduals& r, double tolerance) {
  const double worst = std::max({r.involution, r.exchange, r.differential_at_p, r.differential_at_0,
                                 r.alternate_form, r.determinant_identity});
  return (worst > tolerance || !(worst == worst) || r.self_map_failures > 0) ? 1 : 0;
}

namespace {

struct Context {
  std::string command;
  Json config;
  Json analysis;
  std::optional<std::uint64_t> seed;
  RunOptions options;
  std::string hash;
};

const Json& analysis_of(const Json& config) {
  static const Json kEmpty = Json::object();
  return config.contains("analysis") ? config.at("analysis") : kEmpty;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Context make_context(const std::string& command, const std::string& text, const RunOptions& options) {
  Context ctx{command, jsonio::parse(text), Json::object(), std::nullopt, options, ""};
  if (!ctx.config.is_object()) fail(ErrorKind::Parse, "config must be a JSON object");
  if (options.seed) ctx.config["seed"] = *options.seed;
  if (ctx.config.contains("seed")) {
    const Json& s = ctx.config.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      fail(ErrorKind::Parse, "seed must be a non-negative integer");
    ctx.seed = s.get<std::uint64_t>();
  }
  if (options.samples) ctx.config["analysis"]["samples"] = *options.samples;
  ctx.analysis = analysis_of(ctx.config);
  if (!ctx.analysis.is_object()) fail(ErrorKind::Parse, "\"analysis\" must be an object");

  // Worker count never changes results, so it stays out of the hash.
  nlohmann::json canonical = nlohmann::json::parse(ctx.config.dump());
  if (canonical.contains("analysis")) canonical["analysis"].erase("workers");
  ctx.hash = hex64(jsonio::fnv1a(command + "\n" + canonical.dump()));
  return ctx;
}

std::uint64_t require_seed(const Context& ctx) {
  if (!ctx.seed) fail(ErrorKind::InvalidArgument, ctx.command + " samples randomly and needs a seed");
  return *ctx.seed;
}

double number_or(const Json& a, const char* key, double fallback) {
  if (!a.contains(key)) return fallback;
  if (!a.at(key).is_number()) fail(ErrorKind::Parse, std::string("analysis.") + key + " must be a number");
  return a.at(key).get<double>();
}

std::size_t count_or(const Json& a, const char* key, std::size_t fallback) {
  if (!a.contains(key)) return fallback;
  const Json& v = a.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(ErrorKind::Parse, std::string("analysis.") + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> reals_or(const Json& a, const char* key, std::vector<double> fallback) {
  if (!a.contains(key)) return fallback;
  const Json& v = a.at(key);
  if (!v.is_array()) fail(ErrorKind::Parse, std::string("analysis.") + key + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(ErrorKind::Parse, std::string("analysis.") + key + " must be a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<TestCase> case_or_none(const Json& a) {
  if (!a.contains("case")) return std::nullopt;
  const Json& c = a.at("case");
  if (c.is_number_integer() && c.get<int>() >= 1 && c.get<int>() <= 3) return static_cast<TestCase>(c.get<int>());
  if (c.is_string()) {
    for (TestCase t : {TestCase::LogCase1, TestCase::RootCase2, TestCase::RootCase3})
      if (c.get<std::string>() == test_case_name(t)) return t;
  }
  fail(ErrorKind::Parse, "analysis.case must be 1, 2, 3 or a case name");
}

Domain domain_of(const Context& ctx) {
  if (!ctx.config.contains("domain")) fail(ErrorKind::Parse, "config: missing \"domain\"");
  return jsonio::parse_domain(ctx.config.at("domain"));
}

HoloMap map_of(const Context& ctx, const Domain& d) {
  if (!ctx.config.contains("map")) fail(ErrorKind::Parse, "config: missing \"map\"");
  return jsonio::parse_map(d, ctx.config.at("map"));
}

CVec vector_field(const Json& a, const char* key) {
  if (!a.contains(key)) fail(ErrorKind::Parse, std::string("analysis: missing \"") + key + "\"");
  return jsonio::parse_vector(a.at(key));
}

Json header(const Context& ctx) {
  Json h = Json::object();
  h["tool"] = "cartan";
  h["version"] = tool_version();
  h["command"] = ctx.command;
  h["config_hash"] = ctx.hash;
  h["seed"] = ctx.seed ? Json(*ctx.seed) : Json(nullptr);
  return h;
}

std::string csv_preamble(const Context& ctx, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream os;
  os << "# tool cartan " << tool_version() << "\n# command " << ctx.command << "\n# config_hash " << ctx.hash
     << "\n# seed " << (ctx.seed ? std::to_string(*ctx.seed) : "none") << "\n";
  for (const auto& [k, v] : extra) os << "# " << k << " " << v << "\n";
  return os.str();
}

std::string fmt(double x) { return jsonio::format_double(x); }

Report finish(const Context& ctx, Json body, const std::string& csv, int exit_code = 0) {
  if (ctx.options.format == OutputFormat::Csv) return {csv, "", exit_code};
  Json out = header(ctx);
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return {jsonio::dump(out) + "\n", "", exit_code};
}

Report cmd_metric(const Context& ctx) {
  const Domain d = domain_of(ctx);
  const Point z{vector_field(ctx.analysis, "z")};
  check_length(d, z.coords, "metric z");
  const MetricMatrix g = metric_matrix(d, z);
  Eigen::SelfAdjointEigenSolver<CMat> eig(g.gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();

  Json body = Json::object();
  body["domain"] = d.describe();
  body["z"] = jsonio::to_json(z.coords);
  body["boundary_distance"] = boundary_distance(d, z);
  body["gram"] = jsonio::to_json(g.gram);
  body["eigenvalue_range"] = Json::array({lo, hi});
  std::optional<double> h;
  if (ctx.analysis.contains("u")) {
    const Tangent u{jsonio::parse_vector(ctx.analysis.at("u"))};
    check_length(d, u.coords, "metric u");
    h = bergman_form(d, z, u);
    body["H"] = *h;
  }

  std::ostringstream csv;
  csv << csv_preamble(ctx, {{"domain", d.describe()},
                            {"eigenvalue_min", fmt(lo)},
                            {"eigenvalue_max", fmt(hi)},
                            {"H", h ? fmt(*h) : "none"}});
  csv << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < g.gram.rows(); ++r)
    for (Eigen::Index c = 0; c < g.gram.cols(); ++c)
      csv << r << "," << c << "," << fmt(g.gram(r, c).real()) << "," << fmt(g.gram(r, c).imag()) << "\n";
  return finish(ctx, body, csv.str());
}

Report cmd_check_identities(const Context& ctx) {
  Rng rng(require_seed(ctx));
  int m = 2, n = 3;
  if (ctx.config.contains("domain")) {
    const Domain d = domain_of(ctx);
    require(d.kind() == DomainKind::I, "check-identities runs on I(m,n) only");
    m = d.rows();
    n = d.cols();
  }
  const std::size_t samples = count_or(ctx.analysis, "samples", 100);
  const IdentityResiduals r = automorphism_battery(m, n, samples, rng);
  const int code = identity_exit_code(r);

  const std::vector<std::pair<const char*, double>> rows{
      {"involution", r.involution},         {"exchange", r.exchange},
      {"differential_at_p", r.differential_at_p}, {"differential_at_0", r.differential_at_0},
      {"alternate_form", r.alternate_form}, {"determinant_identity", r.determinant_identity}};
  Json body = Json::object();
  body["domain"] = Domain::type_one(m, n).describe();
  body["samples"] = r.samples;
  body["tolerance"] = kIdentityTolerance;
  Json res = Json::object();
  for (const auto& [k, v] : rows) res[k] = v;
  body["max_residual"] = res;
  body["self_map_failures"] = r.self_map_failures;
  body["passed"] = code == 0;

  std::ostringstream csv;
  csv << csv_preamble(ctx, {{"samples", std::to_string(r.samples)},
                            {"self_map_failures", std::to_string(r.self_map_failures)}});
  csv << "identity,max_residual,passed\n";
  for (const auto& [k, v] : rows) csv << k << "," << fmt(v) << "," << (v <= kIdentityTolerance ? 1 : 0) << "\n";
  return finish(ctx, body, csv.str(), code);
}

Report cmd_ratio_profile(const Context& ctx) {
  const std::uint64_t seed = require_seed(ctx);
  const Domain d = domain_of(ctx);
  const HoloMap m = map_of(ctx, d);
  SamplerSpec sampler;
  sampler.finest_exponent = static_cast<int>(count_or(ctx.analysis, "finest_exponent", 6));
  sampler.rays = count_or(ctx.analysis, "rays", sampler.rays);
  sampler.climbed_rays = count_or(ctx.analysis, "climbed_rays", sampler.climbed_rays);
  sampler.uniform_samples = count_or(ctx.analysis, "samples", sampler.uniform_samples);
  sampler.refine_iterations = static_cast<int>(count_or(ctx.analysis, "refine_iterations", 40));
  sampler.epsilons = reals_or(ctx.analysis, "epsilons", sampler.epsilons);
  sampler.workers = ctx.options.workers;
  const RatioProfile p = ratio_profile(m, sampler, seed);
  const char* verdict = verdict_name(p.verdict);

  std::map<int, double> decade_max;
  for (const auto& s : p.samples) {
    auto [it, fresh] = decade_max.emplace(delta_decade(s.delta), s.ratio);
    if (!fresh) it->second = std::max(it->second, s.ratio);
  }

  Json body = Json::object();
  body["map"] = m.describe();
  body["verdict"] = verdict;
  body["verdict_scope"] = "evidence at sampled scale";
  body["epsilons"] = sampler.epsilons;
  Json decades = Json::array();
  for (const auto& [dec, mx] : decade_max) decades.push_back(Json{{"decade", dec}, {"max_ratio", mx}});
  body["decades"] = decades;
  Json samples = Json::array();
  for (const auto& s : p.samples)
    samples.push_back(Json{{"sample_index", s.index}, {"delta", s.delta}, {"ratio", s.ratio}});
  body["samples"] = samples;

  std::ostringstream csv;
  csv << csv_preamble(ctx, {{"map", m.describe()}, {"verdict", verdict}, {"scope", "evidence at sampled scale"}});
  csv << "sample_index,delta,ratio,verdict_flag\n";
  for (const auto& s : p.samples) csv << s.index << "," << fmt(s.delta) << "," << fmt(s.ratio) << "," << verdict << "\n";
  return finish(ctx, body, csv.str());
}

Report cmd_testfn(const Context& ctx) {
  Rng rng(require_seed(ctx));
  const Domain d = domain_of(ctx);
  require(d.kind() == DomainKind::I, "testfn runs on I(m,n) only");
  const Point a{vector_field(ctx.analysis, "a_point")};
  const Tangent w{vector_field(ctx.analysis, "w")};
  const double a_param = number_or(ctx.analysis, "a_param", 1.0);
  const double rho = number_or(ctx.analysis, "rho", 0.5);
  const std::size_t samples = count_or(ctx.analysis, "samples", 1000);
  const auto forced = case_or_none(ctx.analysis);
  const auto r_sequence = reals_or(ctx.analysis, "r_sequence", {0.9, 0.99, 0.999, 0.9999});

  const TestFunction f = build_general(d, a, w, a_param, forced);
  const double seminorm = sampled_seminorm(f, samples, rng);
  const double decay = decay_on_compact(f, rho, samples, rng);
  const double ratio = ratio_at(f, a, w);
  const double mn = d.rows() + d.cols();

  // Decay along the diagonal family with the same case and direction.
  std::vector<double> decay_seq;
  CVec base_w = CVec::Zero(d.dimension());
  if (f.test_case() == TestCase::LogCase1) base_w(0) = 1.0;
  else if (f.test_case() == TestCase::RootCase2) base_w(1) = 1.0;
  else base_w(d.cols() + 1) = 1.0;
  for (double r : r_sequence) {
    const TestFunction g = build_diagonal_case(d, r, {base_w}, a_param, f.test_case());
    Rng local(*ctx.seed);
    decay_seq.push_back(decay_on_compact(g, rho, samples, local));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < decay_seq.size(); ++i) decreasing = decreasing && decay_seq[i] <= decay_seq[i - 1];

  Json body = Json::object();
  body["domain"] = d.describe();
  body["test_case"] = test_case_name(f.test_case());
  body["r"] = f.r();
  body["a_param"] = a_param;
  body["pre_maps"] = f.pre_maps().size();
  Json bounded = Json{{"sampled_seminorm", seminorm}, {"samples", samples}};
  if (f.test_case() == TestCase::LogCase1) {
    bounded["bound"] = 4.0 / std::sqrt(mn);
    bounded["within_bound"] = seminorm <= 4.0 / std::sqrt(mn);
  }
  body["bounded"] = bounded;
  Json decay_json = Json{{"rho", rho}, {"sup_abs", decay}, {"r_sequence", r_sequence}, {"sup_abs_sequence", decay_seq},
                         {"decreasing", decreasing}};
  body["decay"] = decay_json;
  Json ratio_json = Json{{"ratio", ratio}};
  if (f.test_case() == TestCase::LogCase1) ratio_json["lower_bound_limit"] = std::sqrt(1.0 / (3.0 * mn)) * a_param / (a_param + 1.0);
  body["non_vanishing"] = ratio_json;

  std::ostringstream csv;
  csv << csv_preamble(ctx, {{"domain", d.describe()}, {"test_case", test_case_name(f.test_case())}});
  csv << "check,value\n";
  csv << "sampled_seminorm," << fmt(seminorm) << "\n";
  csv << "decay_sup_abs," << fmt(decay) << "\n";
  for (std::size_t i = 0; i < r_sequence.size(); ++i)
    csv << "decay_at_r=" << fmt(r_sequence[i]) << "," << fmt(decay_seq[i]) << "\n";
  csv << "ratio," << fmt(ratio) << "\n";
  return finish(ctx, body, csv.str());
}

Report cmd_sequence_probe(const Context& ctx) {
  const std::uint64_t seed = require_seed(ctx);
  const Domain d = domain_of(ctx);
  const HoloMap m = map_of(ctx, d);
  TestFamily family;
  family.a_param = number_or(ctx.analysis, "a_param", 1.0);
  family.forced_case = case_or_none(ctx.analysis);
  const auto r_grid = reals_or(ctx.analysis, "r_grid", {0.9, 0.99, 0.999, 0.9999});
  const std::size_t samples = count_or(ctx.analysis, "samples", 200);
  const auto probe = sequence_probe(m, family, r_grid, samples, seed, ctx.options.workers);

  Json body = Json::object();
  body["map"] = m.describe();
  body["image_bounded_away"] = probe.empty();
  Json rows = Json::array();
  for (const auto& p : probe)
    rows.push_back(Json{{"r", p.r},
                        {"delta", p.delta},
                        {"factor", p.factor},
                        {"test_case", test_case_name(p.test_case)},
                        {"target_ratio", p.target_ratio},
                        {"estimate", p.estimate}});
  body["sequence"] = rows;

  std::ostringstream csv;
  csv << csv_preamble(ctx, {{"map", m.describe()}, {"image_bounded_away", probe.empty() ? "true" : "false"}});
  csv << "r,delta,factor,test_case,target_ratio,estimate\n";
  for (const auto& p : probe)
    csv << fmt(p.r) << "," << fmt(p.delta) << "," << p.factor << "," << test_case_name(p.test_case) << ","
        << fmt(p.target_ratio) << "," << fmt(p.estimate) << "\n";
  return finish(ctx, body, csv.str());
}

Report error_report(const std::string& command, const char* tag, const std::string& message) {
  Json rec = Json::object();
  rec["error"] = tag;
  rec["message"] = message;
  rec["command"] = command;
  rec["tool"] = "cartan";
  rec["version"] = tool_version();
  return {"", jsonio::dump(rec) + "\n", 2};
}

}  // namespace

Report run_command(const std::string& command, const std::string& config_text, const RunOptions& options) {
  try {
    const Context ctx = make_context(command, config_text, options);
    if (command == "metric") return cmd_metric(ctx);
    if (command == "check-identities") return cmd_check_identities(ctx);
    if (command == "ratio-profile") return cmd_ratio_profile(ctx);
    if (command == "testfn") return cmd_testfn(ctx);
    if (command == "sequence-probe") return cmd_sequence_probe(ctx);
    return error_report(command, "invalid-argument", "unknown command \"" + command + "\"");
  } catch (const Error& e) {
    return error_report(command, error_tag(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_report(command, "parse-error", e.what());
  }
}

}  // namespace cartan
