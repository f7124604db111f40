#include "dysmooth/sample_io.hpp"

#include "dysmooth/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace dysmooth {

namespace {

constexpr std::string_view kOrder = "lex-last-fastest";

// nlohmann rejects bare NaN/Infinity tokens outright; locate the offending
// array slot so the error can still name a flat index.
std::string describe_bare_nonfinite(std::string_view text) {
  const auto key = text.find("\"values\"");
  if (key == std::string_view::npos) return {};
  const auto open = text.find('[', key);
  if (open == std::string_view::npos) return {};
  static const std::regex token(R"((^|[\[,\s])[-+]?(NaN|nan|Infinity|inf|Inf)\b)");
  const std::string tail(text.substr(open + 1));
  std::smatch m;
  if (!std::regex_search(tail, m, token)) return {};
  const auto pos = static_cast<std::size_t>(m.position(0));
  const auto close = tail.find(']');
  if (close != std::string::npos && close < pos) return {};
  std::size_t index = 0;
  for (std::size_t i = 0; i < pos; ++i)
    if (tail[i] == ',') ++index;
  if (m[1].length() > 0 && m[1].str() == ",") ++index;
  return fmt::format("non-finite value at flat index {}", index);
}

}  // namespace

std::string format_samples(const SampleField& field) {
  std::string out = fmt::format("{{\"dimension\": {}, \"level\": {}, \"order\": \"{}\", \"values\": [",
                                field.grid().dimension(), field.grid().level(), kOrder);
  const auto values = field.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt::format("{:.17g}", values[i]);
  }
  out += "]}\n";
  return out;
}

SampleField parse_samples(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    if (auto msg = describe_bare_nonfinite(text); !msg.empty()) throw validation_error("format", msg);
    throw validation_error("format", fmt::format("sample file is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw validation_error("format", "sample file must be a JSON object");
  for (const char* key : {"dimension", "level", "values"})
    if (!doc.contains(key)) throw validation_error("format", fmt::format("sample file lacks \"{}\"", key));
  if (!doc["dimension"].is_number_integer() || !doc["level"].is_number_integer())
    throw validation_error("format", "\"dimension\" and \"level\" must be integers");
  if (doc.contains("order") && doc["order"] != kOrder)
    throw validation_error("format", fmt::format("unsupported order {}, expected \"{}\"", doc["order"].dump(), kOrder));
  const auto& raw = doc["values"];
  if (!raw.is_array()) throw validation_error("format", "\"values\" must be an array");

  const DyadicGrid grid(doc["dimension"].get<int>(), doc["level"].get<int>());
  if (raw.size() != grid.size())
    throw validation_error("format", fmt::format("expected {} values for dimension {} level {}, got {}",
                                                 grid.size(), grid.dimension(), grid.level(), raw.size()));
  std::vector<double> values(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].is_number())
      throw validation_error("format", fmt::format("non-finite or non-numeric value at flat index {}: {}", i, raw[i].dump()));
    values[i] = raw[i].get<double>();
    if (!std::isfinite(values[i]))
      throw validation_error("format", fmt::format("non-finite value at flat index {}", i));
  }
  return SampleField(grid, std::move(values));
}

SampleField load_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("io", fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_samples(buffer.str());
}

void store_samples(const SampleField& field, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("io", fmt::format("cannot write {}", path.string()));
  out << format_samples(field);
}

}  // namespace dysmooth
