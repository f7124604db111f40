#pragma once

#include "dysmooth/analysis.hpp"
#include "dysmooth/cascade.hpp"
#include "dysmooth/certificates.hpp"
#include "dysmooth/moduli.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dysmooth {

inline constexpr std::string_view kVersion = "0.3.1";

using Json = nlohmann::ordered_json;

/// {"tool", "version", "command", "config", "flags", "result"}. No clock or
/// host data goes in, so equal inputs give byte-identical output.
Json envelope(std::string_view command, Json config, Json flags, Json result);
std::string dump(const Json& doc);

Json to_json(const ModulusProfile& profile);
Json to_json(const DecayFit& fit);
Json to_json(const SaturationVerdict& verdict);
Json to_json(const GeometricDecay& check);
Json to_json(const BoundReport& bound);
Json to_json(const ConstantLedger& ledger);
Json to_json(const CascadeReport& report);
Json to_json(const VerificationReport& report);

/// One certify row: determinant, inverse norm, Lebesgue constant and lemma
/// constants for d = 1..max_d.
struct CertificateRow {
  DeterminantCheck det;
  ConstantLedger ledger;
  std::vector<double> c_dd;
  bool pass = false;
};
CertificateRow certify_order(int r, int max_d);
Json to_json(const CertificateRow& row);

std::string profile_csv(const ModulusProfile& profile);
std::string cascade_csv(const CascadeReport& report);
std::string verification_csv(const VerificationReport& report);
std::string certify_csv(const std::vector<CertificateRow>& rows);

/// Static log2-log2 chart of (n, Psi_r(n)) with the fitted line.
std::string decay_svg(const ModulusProfile& profile, const std::optional<DecayFit>& fit, std::string_view title);

}  // namespace dysmooth
