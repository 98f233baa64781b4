#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aqicert/embedding.hpp"
#include "aqicert/family.hpp"

namespace aqicert {

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Family text: edge lists "u v" (0-based) with '#' comments, blocks separated
/// by "---", each optionally headed by "girth=<int> D=<int>". A declared girth
/// must match the computed one. A single block is an ordinary edge-list file.
SpaceFamily parse_family(std::string_view text);
std::string format_family(const SpaceFamily& f);
SpaceFamily read_family(const std::filesystem::path& path);

/// Explicit metric: n on the first line, then n rows of n rationals.
FiniteMetricSpace parse_metric(std::string_view text);
std::string format_metric(const FiniteMetricSpace& s);

/// Per block a line "i a k b_i" followed by |X_i| lines "x -> y". The constants
/// a and k must agree across blocks. Maps are checked against both families.
AqiEmbedding parse_embedding(std::string_view text, const SpaceFamily& domain,
                             const SpaceFamily& codomain);
std::string format_embedding(const AqiEmbedding& e);

}  // namespace aqicert
