#pragma once

#include <filesystem>
#include <string>

#include "cuntz/invariants.hpp"
#include "cuntz/io.hpp"
#include "cuntz/model.hpp"
#include "cuntz/walkgraph.hpp"

namespace cuntz::test {

inline std::filesystem::path fixture_path(const std::string& name)
{
    return std::filesystem::path(CUNTZ_FIXTURE_DIR) / (name + ".json");
}

inline SystemConfig load_fixture(const std::string& name) { return load_system(fixture_path(name)); }

inline FilterSystem load_filter(const std::string& name) { return *load_fixture(name).filter; }

inline RationalPoint pt(const std::string& text) { return RationalPoint::parse(text); }

inline WalkGraph walk_through(const FilterSystem& fs, const RationalPoint& c)
{
    return walk_from_minimal_set(fs, MinimalSet{orbit_closure(fs, c)});
}

inline std::size_t vertex(const WalkGraph& g, const RationalPoint& p) { return g.find(p).value(); }

inline std::size_t vertex(const WalkGraph& g, const std::string& id) { return g.find(std::string_view(id)).value(); }

/// One-vertex walk over `letters` letters; letter `loop` carries weight 1.
inline WalkGraph single_vertex(std::size_t letters, int loop)
{
    std::vector<std::vector<std::size_t>> targets(letters, std::vector<std::size_t>{0});
    std::vector<std::vector<Complex>> weights(letters, std::vector<Complex>{0.0});
    weights[static_cast<std::size_t>(loop)][0] = 1.0;
    return WalkGraph({{"0", std::nullopt}}, targets, weights);
}

} // namespace cuntz::test
