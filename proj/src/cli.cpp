#include "dysmooth/cli.hpp"

#include "dysmooth/analysis.hpp"
#include "dysmooth/cascade.hpp"
#include "dysmooth/catalog.hpp"
#include "dysmooth/error.hpp"
#include "dysmooth/report.hpp"
#include "dysmooth/sample_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

namespace dysmooth {

namespace {

const char* to_string(Command c) {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::certify: return "certify";
    case Command::cascade: return "cascade";
    case Command::verify: return "verify";
  }
  return "?";
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::svg: return "svg";
  }
  return "?";
}

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end)
    throw validation_error("argument", fmt::format("{} expects an integer, got '{}'", what, text));
  return v;
}

// "coef:e1,e2,..."
CatalogFunction::Monomial parse_term(const std::string& text, int d) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw validation_error("argument", fmt::format("--term '{}' must look like coef:e1,...,e{}", text, d));
  CatalogFunction::Monomial term;
  try {
    std::size_t used = 0;
    term.coefficient = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("coef");
  } catch (const std::exception&) {
    throw validation_error("argument", fmt::format("--term '{}': bad coefficient", text));
  }
  std::stringstream rest(text.substr(colon + 1));
  for (std::string e; std::getline(rest, e, ',');) term.exponents.push_back(parse_int(e, "--term exponent"));
  if (static_cast<int>(term.exponents.size()) != d)
    throw validation_error("argument", fmt::format("--term '{}' has {} exponents, expected d = {}", text,
                                                   term.exponents.size(), d));
  return term;
}

CatalogFunction make_function(const RunConfig& c) {
  const std::string& name = *c.function;
  if (name == "poly") {
    if (c.terms.empty()) throw validation_error("argument", "poly needs at least one --term coef:e1,...,ed");
    std::vector<CatalogFunction::Monomial> terms;
    for (const auto& t : c.terms) terms.push_back(parse_term(t, c.d));
    return CatalogFunction::poly(c.d, std::move(terms));
  }
  if (name == "abs-power") {
    if (c.center.size() != 1) throw validation_error("argument", "abs-power takes a scalar --center");
    return CatalogFunction::abs_power(c.d, c.axis - 1, c.center.front(), c.alpha);
  }
  if (name == "radial-power") return CatalogFunction::radial_power(c.d, c.center, c.alpha);
  if (name == "diag-bilinear") return CatalogFunction::diag_bilinear(c.d);
  if (name == "weierstrass-truncated" || name == "weierstrass")
    return CatalogFunction::weierstrass(c.d, c.a, c.b, c.m);
  throw validation_error("argument",
                         fmt::format("unknown function '{}' (poly, abs-power, radial-power, diag-bilinear, "
                                     "weierstrass-truncated)",
                                     name));
}

FunctionSource make_source(const RunConfig& c) {
  if (c.function.has_value() == c.input.has_value())
    throw validation_error("argument", "give exactly one of --function or --input");
  if (c.input) return FunctionSource(load_samples(*c.input));
  return FunctionSource(make_function(c));
}

Json config_json(const RunConfig& c) {
  Json doc;
  doc["command"] = to_string(c.command);
  if (c.command != Command::certify) {
    if (c.function) {
      Json f;
      f["name"] = *c.function;
      if (*c.function == "poly") f["terms"] = c.terms;
      if (*c.function == "abs-power") f["axis"] = c.axis;
      if (*c.function == "abs-power" || *c.function == "radial-power") {
        f["center"] = c.center;
        f["alpha"] = c.alpha;
      }
      if (*c.function == "weierstrass-truncated" || *c.function == "weierstrass") {
        f["a"] = c.a;
        f["b"] = c.b;
        f["m"] = c.m;
      }
      doc["function"] = std::move(f);
    } else {
      doc["input"] = c.input.value_or("");
    }
    doc["d"] = c.d;
  }
  if (c.command == Command::certify)
    doc["r"] = {c.r.lo, c.r.hi};
  else
    doc["r"] = c.r.lo;
  if (c.command == Command::certify) doc["d_max"] = c.d;
  if (c.command == Command::cascade) {
    doc["n"] = c.n.lo;
    doc["u"] = c.u;
    doc["i"] = c.i;
    doc["t"] = c.t;
    doc["stages"] = c.stages;
  } else if (c.command != Command::certify) {
    doc["n"] = {c.n.lo, c.n.hi};
  }
  if (c.command == Command::analyze || c.command == Command::verify) doc["weighting"] = c.weighting;
  if (c.command == Command::verify) {
    doc["dirs"] = c.dirs;
    doc["base_res"] = c.base_res;
    doc["dir_res"] = c.dir_res;
  }
  doc["seed"] = c.seed;
  doc["format"] = to_string(c.format);
  return doc;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (!c.out) {
    out << text;
    return;
  }
  std::ofstream file(*c.out, std::ios::binary);
  if (!file) throw validation_error("io", fmt::format("cannot open '{}' for writing", *c.out));
  file << text;
  if (!file) throw validation_error("io", fmt::format("write to '{}' failed", *c.out));
}

void run_analyze(const RunConfig& c, std::ostream& out) {
  const auto source = make_source(c);
  const int r = c.r.lo;
  const auto weighting = parse_weighting(c.weighting);
  const auto profile = modulus_profile(source, r, c.n.lo, c.n.hi);

  std::optional<DecayFit> fit;
  Json fit_json;
  try {
    fit = fit_exponent(profile);
    fit_json = to_json(*fit);
  } catch (const Error& e) {
    fit_json = {{"error", e.code()}, {"message", e.what()}};
  }
  if (c.format == OutputFormat::svg)
    return emit(c, decay_svg(profile, fit, fmt::format("{} r={} d={}", source.is_analytic() ? source.function().name() : "samples", r, profile.d)), out);
  if (c.format == OutputFormat::csv) return emit(c, profile_csv(profile), out);

  const auto saturation = saturation_test(profile, r);
  Json geometric;
  try {
    geometric = to_json(geometric_decay_check(profile, r));
  } catch (const Error& e) {
    geometric = {{"error", e.code()}, {"message", e.what()}};
  }
  // Bound right-hand sides at t = 2^-n, using only the levels in the profile.
  Json bounds = Json::array();
  bool tail_truncated = false, coverage = false, clamped = false;
  const double sup = source.is_analytic() ? sup_norm_estimate(source, c.n.hi, 64) : profile.scale;
  for (int n = c.n.lo; n <= c.n.hi; ++n) {
    const auto b = omega_bound_rhs(profile, n, std::ldexp(1.0, -n), sup, weighting);
    tail_truncated |= b.tail_truncated;
    coverage |= b.coverage_warning;
    clamped |= b.n0.clamped;
    bounds.push_back(to_json(b));
  }
  Json result;
  result["profile"] = to_json(profile);
  result["fit"] = std::move(fit_json);
  result["saturation"] = to_json(saturation);
  result["geometric_decay"] = std::move(geometric);
  result["bounds"] = std::move(bounds);
  Json flags = {{"weighting", c.weighting},
                {"tail_truncated", tail_truncated},
                {"coverage_warning", coverage},
                {"n0_clamped", clamped},
                {"sup_norm", source.is_analytic() ? "estimate" : "max over samples"}};
  emit(c, dump(envelope("analyze", config_json(c), std::move(flags), std::move(result))), out);
}

void run_certify(const RunConfig& c, std::ostream& out) {
  if (c.format == OutputFormat::svg) throw validation_error("argument", "certify supports json and csv output");
  if (c.d < 1 || c.d > 4) throw capacity_error(fmt::format("dimension {} outside 1..4", c.d));
  std::vector<CertificateRow> rows;
  for (int r = c.r.lo; r <= c.r.hi; ++r) rows.push_back(certify_order(r, c.d));
  if (c.format == OutputFormat::csv) return emit(c, certify_csv(rows), out);
  Json result = Json::array();
  bool all = true;
  for (const auto& row : rows) {
    result.push_back(to_json(row));
    all = all && row.pass;
  }
  Json flags = {{"exact_arithmetic", true}, {"lebesgue_tolerance", 1e-6}, {"all_pass", all}};
  emit(c, dump(envelope("certify", config_json(c), std::move(flags), std::move(result))), out);
}

void run_cascade(const RunConfig& c, std::ostream& out) {
  if (c.format == OutputFormat::svg) throw validation_error("argument", "cascade supports json and csv output");
  const auto source = make_source(c);
  if (c.n.lo != c.n.hi) throw validation_error("argument", "cascade takes a single level --n");
  if (static_cast<int>(c.u.size()) != source.dimension())
    throw validation_error("argument", fmt::format("--u has {} coordinates, expected {}", c.u.size(), source.dimension()));
  const auto report = cascade_reconstruct(source, c.u, c.i - 1, c.t, c.r.lo, c.n.lo, c.stages);
  if (c.format == OutputFormat::csv) return emit(c, cascade_csv(report), out);
  Json flags = {{"samples_per_axis_per_cell", kSamplesPerOrder * c.r.lo},
                {"stage0_annihilated", report.stage0_annihilated},
                {"margins_nonnegative", report.margins_nonnegative}};
  emit(c, dump(envelope("cascade", config_json(c), std::move(flags), to_json(report))), out);
}

void run_verify(const RunConfig& c, std::ostream& out) {
  const auto source = make_source(c);
  VerificationOptions options;
  options.n_lo = c.n.lo;
  options.n_hi = c.n.hi;
  options.weighting = parse_weighting(c.weighting);
  options.omega.dir_count = c.dirs;
  options.omega.base_res = c.base_res;
  options.omega.seed = c.seed;
  options.directional_res = c.dir_res;
  const auto report = theorem_verification(source, c.r.lo, options);
  if (c.format == OutputFormat::svg)
    return emit(c, decay_svg(report.profile, report.fit, fmt::format("{} r={} d={}", report.function, report.r, report.d)), out);
  if (c.format == OutputFormat::csv) return emit(c, verification_csv(report), out);
  bool tail_truncated = false, coverage = false;
  for (const auto& row : report.rows) {
    tail_truncated |= row.bound.tail_truncated;
    coverage |= row.bound.coverage_warning;
  }
  Json flags = {{"weighting", c.weighting},
                {"tail_truncated", tail_truncated},
                {"coverage_warning", coverage},
                {"omega", "lower estimate"},
                {"sup_norm", "estimate"}};
  emit(c, dump(envelope("verify", config_json(c), std::move(flags), to_json(report))), out);
}

}  // namespace

LevelRange parse_level_range(const std::string& text) {
  static const std::regex pattern(R"(^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern))
    throw validation_error("argument", fmt::format("range '{}' must look like a..b or a", text));
  LevelRange range;
  range.lo = parse_int(m[1].str(), "range");
  range.hi = m[2].matched ? parse_int(m[2].str(), "range") : range.lo;
  if (range.hi < range.lo) throw validation_error("argument", fmt::format("range '{}' is empty", text));
  return range;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Discrete moduli of smoothness on dyadic meshes", "dysmooth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig c;
  std::string function, input, r_text = "2", n_text, format = "json", out_path;
  std::vector<double> center, u;

  auto* analyze = app.add_subcommand("analyze", "Psi profile, decay fit, saturation class, geometric decay");
  auto* certify = app.add_subcommand("certify", "exact lemma-matrix certificates over an order range");
  auto* cascade = app.add_subcommand("cascade", "spline cascade on the basic cube for (u, i, t)");
  auto* verify = app.add_subcommand("verify", "empirical ratios of omega estimates to the bound right-hand sides");

  auto add_source = [&](CLI::App* sub) {
    auto* f = sub->add_option("--function", function, "catalog function");
    auto* in = sub->add_option("--input", input, "sample file (JSON)");
    f->excludes(in);
    sub->add_option("--d", c.d, "dimension");
    sub->add_option("--axis", c.axis, "abs-power axis (1-based)");
    sub->add_option("--center", center, "center (scalar or comma list)")->delimiter(',');
    sub->add_option("--alpha", c.alpha, "exponent");
    sub->add_option("--term", c.terms, "poly term coef:e1,...,ed (repeatable)");
    sub->add_option("--a", c.a, "weierstrass amplitude ratio");
    sub->add_option("--b", c.b, "weierstrass frequency ratio");
    sub->add_option("--m", c.m, "weierstrass terms");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--r", r_text, "order (certify: range a..b)");
    sub->add_option("--seed", c.seed, "seed");
    sub->add_option("--format", format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
    sub->add_option("--out", out_path, "output path (default stdout)");
  };
  for (auto* sub : {analyze, cascade, verify}) {
    add_source(sub);
    sub->add_option("--n", n_text, "level range a..b (cascade: single level)")->required();
  }
  for (auto* sub : {analyze, certify, cascade, verify}) add_common(sub);
  certify->add_option("--d", c.d, "largest dimension for the d-dimensional constants");
  for (auto* sub : {analyze, verify})
    sub->add_option("--weighting", c.weighting, "theorem or proof")->check(CLI::IsMember({"theorem", "proof"}));
  verify->add_option("--dirs", c.dirs, "direction count");
  verify->add_option("--base-res", c.base_res, "base lattice resolution");
  verify->add_option("--dir-res", c.dir_res, "directional estimate resolution");
  cascade->add_option("--u", u, "base point, comma list")->delimiter(',')->required();
  cascade->add_option("--i", c.i, "difference axis (1-based)");
  cascade->add_option("--t", c.t, "step")->required();
  cascade->add_option("--stages", c.stages, "largest stage K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    std::ostringstream sink;
    app.exit(e, out, sink);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw validation_error("argument", e.what());
  }

  if (analyze->parsed()) c.command = Command::analyze;
  if (certify->parsed()) c.command = Command::certify;
  if (cascade->parsed()) c.command = Command::cascade;
  if (verify->parsed()) c.command = Command::verify;
  if (!function.empty()) c.function = function;
  if (!input.empty()) c.input = input;
  if (!center.empty()) c.center = center;
  c.u = u;
  c.r = parse_level_range(r_text);
  if (c.command != Command::certify && c.r.lo != c.r.hi)
    throw validation_error("argument", fmt::format("--r takes a single order for {}", to_string(c.command)));
  if (c.command == Command::certify) {
    if (certify->count("--d") == 0) c.d = 3;
  } else {
    c.n = parse_level_range(n_text);
  }
  c.format = format == "csv" ? OutputFormat::csv : format == "svg" ? OutputFormat::svg : OutputFormat::json;
  if (!out_path.empty()) c.out = out_path;
  return c;
}

void run(const RunConfig& config, std::ostream& out) {
  switch (config.command) {
    case Command::analyze: return run_analyze(config, out);
    case Command::certify: return run_certify(config, out);
    case Command::cascade: return run_cascade(config, out);
    case Command::verify: return run_verify(config, out);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto fail = [&](int status, const char* kind, const std::string& code, const std::string& message) {
    nlohmann::json doc = {{"error", {{"kind", kind}, {"code", code}, {"message", message}, {"exit", status}}}};
    err << doc.dump() << "\n";
    return status;
  };
  try {
    const auto config = parse_args(argc, argv, out);
    if (!config) return 0;
    run(*config, out);
    return 0;
  } catch (const Error& e) {
    const int status = e.kind() == ErrorKind::validation ? 2 : e.kind() == ErrorKind::capacity ? 3 : 4;
    return fail(status, to_string(e.kind()), e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(4, "invariant", "unexpected", e.what());
  }
}

}  // namespace dysmooth
