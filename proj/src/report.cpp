#include "dysmooth/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dysmooth {

namespace {

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json index_json(const MultiIndex& k) { return Json(std::vector<std::int64_t>(k.begin(), k.end())); }

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

Json envelope(std::string_view command, Json config, Json flags, Json result) {
  Json doc;
  doc["tool"] = "dysmooth";
  doc["version"] = std::string(kVersion);
  doc["command"] = std::string(command);
  doc["config"] = std::move(config);
  doc["flags"] = std::move(flags);
  doc["result"] = std::move(result);
  return doc;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json to_json(const ModulusProfile& profile) {
  Json levels = Json::array();
  for (int n = profile.n_min; n <= profile.n_max(); ++n) {
    const auto i = static_cast<std::size_t>(n - profile.n_min);
    Json row;
    row["n"] = n;
    row["psi"] = profile.psi[i];
    row["per_axis"] = profile.per_axis[i];
    if (i < profile.argmax.size()) {
      const auto& a = profile.argmax[i];
      row["argmax"] = {{"axis", a.axis + 1}, {"index", index_json(a.index)}, {"value", a.value}};
    }
    levels.push_back(std::move(row));
  }
  Json doc;
  doc["r"] = profile.r;
  doc["d"] = profile.d;
  doc["n_min"] = profile.n_min;
  doc["n_max"] = profile.n_max();
  doc["scale"] = profile.scale;
  doc["zero_threshold"] = profile.zero_threshold();
  doc["levels"] = std::move(levels);
  return doc;
}

Json to_json(const DecayFit& fit) {
  return {{"alpha", fit.alpha},
          {"M", fit.M},
          {"residual", fit.residual},
          {"window", {fit.window_lo, fit.window_hi}},
          {"levels_used", fit.levels_used}};
}

Json to_json(const SaturationVerdict& verdict) {
  return {{"class", to_string(verdict.verdict)}, {"scaled_psi", verdict.scaled}, {"evidence", verdict.evidence}};
}

Json to_json(const GeometricDecay& check) {
  return {{"lambda", check.lambda}, {"mu", check.mu}, {"equivalence", check.equivalence}};
}

Json to_json(const BoundReport& bound) {
  return {{"n", bound.n},
          {"t", bound.t},
          {"n0", bound.n0.value},
          {"n0_clamped", bound.n0.clamped},
          {"axis_rhs", bound.axis_rhs},
          {"middle_sum", bound.middle_sum},
          {"omega_rhs", bound.omega_rhs},
          {"omega1_rhs", optional_json(bound.omega1_rhs)},
          {"sup_norm_estimate", bound.sup_norm},
          {"tail_truncated", bound.tail_truncated},
          {"coverage_warning", bound.coverage_warning},
          {"weighting", to_string(bound.weighting)}};
}

Json to_json(const ConstantLedger& ledger) {
  Json doc;
  doc["r"] = ledger.r;
  doc["d"] = ledger.d;
  doc["det_abs"] = ledger.det_abs.str();
  doc["inv_inf_norm"] = to_string(ledger.inv_inf_norm);
  doc["lebesgue_1d"] = ledger.lebesgue_1d;
  doc["lemma_c_1d"] = ledger.lemma_c_1d;
  doc["lemma_c_dd"] = ledger.lemma_c_dd;
  doc["lemma_c_by_dimension"] = ledger.breakdown.by_dimension;
  doc["assembly"] = ledger.breakdown.assembly;
  doc["empirical"] = {{"label", "measured lower bounds on the true constants' needs"},
                      {"M1", optional_json(ledger.empirical_M1)},
                      {"M2", optional_json(ledger.empirical_M2)},
                      {"M", optional_json(ledger.empirical_M)}};
  return doc;
}

Json to_json(const CascadeReport& report) {
  Json stages = Json::array();
  for (const auto& s : report.stages) {
    stages.push_back({{"k", s.k},
                      {"diff_norm", s.k == 0 ? Json(nullptr) : Json(s.diff_norm)},
                      {"reconstruction_error", optional_json(s.recon_error)},
                      {"psi_prev", optional_json(s.psi_prev)},
                      {"bound", optional_json(s.bound)},
                      {"margin", optional_json(s.margin)}});
  }
  Json doc;
  doc["cube"] = {{"n", report.cube.n},
                 {"anchor", index_json(report.cube.anchor)},
                 {"side", report.cube.side()},
                 {"half_open", report.cube.half_open}};
  doc["u"] = report.u;
  doc["axis"] = report.axis + 1;
  doc["t"] = report.t;
  doc["r"] = report.r;
  doc["n"] = report.n;
  doc["max_stage"] = report.max_stage;
  doc["samples_per_axis_per_cell"] = kSamplesPerOrder * report.r;
  // reconstruction errors share one lattice at the stage-K density
  doc["recon_samples_per_axis"] = std::int64_t{kSamplesPerOrder} * report.r << report.max_stage;
  doc["lemma_constant"] = report.lemma_constant;
  doc["stages"] = std::move(stages);
  doc["psi_final"] = optional_json(report.psi_final);
  doc["scale"] = report.scale;
  doc["delta_stage0"] = report.delta_stage0;
  doc["stage0_annihilated"] = report.stage0_annihilated;
  doc["delta_f"] = optional_json(report.delta_f);
  doc["telescoped_bound"] = report.telescoped_bound;
  doc["bound_holds"] = report.bound_holds ? Json(*report.bound_holds) : Json(nullptr);
  doc["margins_nonnegative"] = report.margins_nonnegative;
  return doc;
}

Json to_json(const VerificationReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"n", row.n},
                    {"t", row.t},
                    {"psi", row.psi},
                    {"omega_estimate", row.omega_hat},
                    {"directional", row.directional},
                    {"bound", to_json(row.bound)},
                    {"axis_ratio", row.axis_ratio},
                    {"omega_ratio", row.omega_ratio},
                    {"omega1_ratio", optional_json(row.omega1_ratio)}});
  }
  Json doc;
  doc["function"] = report.function;
  doc["r"] = report.r;
  doc["d"] = report.d;
  doc["levels"] = {report.options.n_lo, report.options.n_hi};
  doc["weighting"] = to_string(report.options.weighting);
  doc["omega_options"] = {{"dir_count", report.options.omega.dir_count},
                          {"base_res", report.options.omega.base_res},
                          {"seed", report.options.omega.seed},
                          {"steps_per_octave", report.options.omega.steps_per_octave},
                          {"min_step_exponent", report.options.omega.min_step_exponent},
                          {"directional_res", report.options.directional_res}};
  doc["sup_norm_estimate"] = report.sup_norm;
  doc["profile"] = to_json(report.profile);
  doc["fit"] = report.fit ? to_json(*report.fit) : Json(nullptr);
  doc["rows"] = std::move(rows);
  doc["omega_ratio_slope"] = report.omega_ratio_slope;
  doc["axis_ratio_slope"] = report.axis_ratio_slope;
  doc["non_trending"] = report.non_trending;
  doc["ledger"] = to_json(report.ledger);
  if (report.witness)
    doc["bilinear_witness"] = {{"psi_max", report.witness->psi_max},
                               {"min_omega_over_t2", report.witness->min_omega_over_t2},
                               {"holds", report.witness->holds}};
  return doc;
}

CertificateRow certify_order(int r, int max_d) {
  CertificateRow row;
  row.det = verify_determinant_identity(r);
  row.ledger = make_ledger(r, max_d);
  row.c_dd = row.ledger.breakdown.by_dimension;
  row.pass = row.det.pass;
  return row;
}

Json to_json(const CertificateRow& row) {
  return {{"r", row.det.r},
          {"det_abs", BigInt(abs(row.det.det)).str()},
          {"expected_pow2", row.det.expected.str()},
          {"inv_inf_norm", to_string(row.ledger.inv_inf_norm)},
          {"lebesgue", row.ledger.lebesgue_1d},
          {"c_1d", row.ledger.lemma_c_1d},
          {"c_dd", row.c_dd},
          {"assembly", row.ledger.breakdown.assembly},
          {"status", row.pass ? "pass" : "fail"}};
}

std::string profile_csv(const ModulusProfile& profile) {
  std::string out = "n,psi,psi_scaled_2^(nr)";
  for (int j = 1; j <= profile.d; ++j) out += fmt::format(",psi_axis{}", j);
  out += "\n";
  for (int n = profile.n_min; n <= profile.n_max(); ++n) {
    const auto i = static_cast<std::size_t>(n - profile.n_min);
    out += fmt::format("{},{},{}", n, num(profile.psi[i]), num(std::ldexp(profile.psi[i], n * profile.r)));
    for (double v : profile.per_axis[i]) out += "," + num(v);
    out += "\n";
  }
  return out;
}

std::string cascade_csv(const CascadeReport& report) {
  std::string out = "k,diff_norm,reconstruction_error,psi_prev,bound,margin\n";
  for (const auto& s : report.stages)
    out += fmt::format("{},{},{},{},{},{}\n", s.k, s.k == 0 ? std::string() : num(s.diff_norm), opt_num(s.recon_error),
                       opt_num(s.psi_prev), opt_num(s.bound), opt_num(s.margin));
  return out;
}

std::string verification_csv(const VerificationReport& report) {
  std::string out = "n,t,psi,omega_estimate,axis_rhs,omega_rhs,axis_ratio,omega_ratio,omega1_ratio\n";
  for (const auto& row : report.rows)
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.n, num(row.t), num(row.psi), num(row.omega_hat),
                       num(row.bound.axis_rhs), num(row.bound.omega_rhs), num(row.axis_ratio), num(row.omega_ratio),
                       opt_num(row.omega1_ratio));
  return out;
}

std::string certify_csv(const std::vector<CertificateRow>& rows) {
  std::string out = "r,det_abs,expected_pow2,inv_inf_norm,lebesgue,c_1d,c_dd_max_d,status\n";
  for (const auto& row : rows)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", row.det.r, BigInt(abs(row.det.det)).str(), row.det.expected.str(),
                       to_string(row.ledger.inv_inf_norm), num(row.ledger.lebesgue_1d), num(row.ledger.lemma_c_1d),
                       num(row.c_dd.back()), row.pass ? "pass" : "fail");
  return out;
}

std::string decay_svg(const ModulusProfile& profile, const std::optional<DecayFit>& fit, std::string_view title) {
  constexpr double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;
  std::vector<std::pair<double, double>> pts;
  const double zero = profile.zero_threshold();
  for (int n = profile.n_min; n <= profile.n_max(); ++n)
    if (profile.at(n) > zero) pts.emplace_back(n, std::log2(profile.at(n)));

  double x0 = profile.n_min, x1 = std::max(profile.n_max(), profile.n_min + 1);
  double y0 = -1.0, y1 = 1.0;
  if (!pts.empty()) {
    y0 = y1 = pts.front().second;
    for (const auto& p : pts) {
      y0 = std::min(y0, p.second);
      y1 = std::max(y1, p.second);
    }
  }
  if (y1 - y0 < 1.0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  y0 = std::floor(y0);
  y1 = std::ceil(y1);
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  auto sy = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{3}</text>\n",
      width, height, left, title);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left, height - bottom,
                     width - right);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top,
                     height - bottom);
  for (int n = static_cast<int>(x0); n <= static_cast<int>(x1); ++n)
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n", sx(n),
                       height - bottom + 16, n);
  const int ystep = std::max(1, static_cast<int>((y1 - y0) / 8));
  for (int y = static_cast<int>(y0); y <= static_cast<int>(y1); y += ystep)
    svg += fmt::format("<text x=\"{}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n", left - 6,
                       sy(y) + 4, y);
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">n = -log2 t</text>\n"
      "<text x=\"16\" y=\"{:.2f}\" font-size=\"12\" transform=\"rotate(-90 16 {:.2f})\" "
      "text-anchor=\"middle\">log2 Psi_{}(n)</text>\n",
      (left + width - right) / 2, height - 12, (top + height - bottom) / 2, (top + height - bottom) / 2, profile.r);
  if (!pts.empty()) {
    std::string poly;
    for (const auto& p : pts) poly += fmt::format("{:.2f},{:.2f} ", sx(p.first), sy(p.second));
    poly.pop_back();
    svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\"/>\n", poly);
    for (const auto& p : pts)
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#1f5fa8\"/>\n", sx(p.first), sy(p.second));
  }
  if (fit) {
    // least-squares line over the fit window
    double sx_sum = 0, sy_sum = 0;
    int count = 0;
    for (const auto& p : pts)
      if (p.first >= fit->window_lo && p.first <= fit->window_hi) {
        sx_sum += p.first;
        sy_sum += p.second;
        ++count;
      }
    if (count > 0) {
      const double b = sy_sum / count + fit->alpha * sx_sum / count;
      auto line_y = [&](double x) { return std::clamp(b - fit->alpha * x, y0, y1); };
      svg += fmt::format(
          "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n",
          sx(fit->window_lo), sy(line_y(fit->window_lo)), sx(fit->window_hi), sy(line_y(fit->window_hi)));
      svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#c0392b\">fit: alpha = {:.4f}</text>\n",
                         width - right - 150, top + 14, fit->alpha);
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace dysmooth
