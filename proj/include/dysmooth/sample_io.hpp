#pragma once

#include "dysmooth/mesh.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace dysmooth {

/// Sample file format:
///   {"dimension": d, "level": n, "order": "lex-last-fastest", "values": [...]}
/// with exactly (2^n+1)^d finite values, each written with 17 significant
/// digits so a store/load round trip is bit-exact.
std::string format_samples(const SampleField& field);
SampleField parse_samples(std::string_view text);

SampleField load_samples(const std::filesystem::path& path);
void store_samples(const SampleField& field, const std::filesystem::path& path);

}  // namespace dysmooth
