#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuntz/invariants.hpp"
#include "cuntz/model.hpp"
#include "cuntz/walkgraph.hpp"

namespace cuntz {

enum class ConfigKind { Filter, Walsh, Walk, L2Q };

std::string to_string(ConfigKind kind);

struct LineSpec {
    AffineLine line;
    Rational s_min;
    Rational s_max;
    std::size_t samples = 100;
};

/// A parsed system file.
///
/// Filter and Walsh files carry R, B, l and either a (rows of numbers or [re, im]
/// pairs) or alpha. For Walsh files the coefficient matrix is the matrix A. Walk
/// files carry vertices, optional points, edges and weights. An l^2(Q) file is
/// {"model": "l2q"}.
struct SystemConfig {
    ConfigKind kind = ConfigKind::Filter;
    std::string name;
    std::optional<FilterSystem> filter;
    std::optional<WalkGraph> walk;
    /// User supplied candidate invariant sets (any dimension).
    std::vector<std::vector<RationalPoint>> candidate_sets;
    std::vector<LineSpec> lines;
};

/// Throws InputError naming the source, the field path and, for malformed JSON,
/// the line and column.
SystemConfig parse_system(std::string_view text, std::string_view source = "<config>");
SystemConfig load_system(const std::filesystem::path& path);

std::string to_json_text(const SystemConfig& config);
std::string to_json_text(const FilterSystem& fs);
std::string to_json_text(const WalkGraph& g);

/// Plain field-by-field comparison used by round-trip checks.
bool same_system(const FilterSystem& a, const FilterSystem& b);
bool same_config(const SystemConfig& a, const SystemConfig& b);

} // namespace cuntz
