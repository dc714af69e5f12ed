#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cuntz::acceptance {

struct Result {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::filesystem::path fixtures;
    std::uint64_t seed = 20240611;
};

/// Runs every acceptance criterion; exceptions turn into failures.
std::vector<Result> run_all(const Options& options);

/// One "PASS"/"FAIL" line per criterion followed by a summary line.
void print(std::ostream& out, const std::vector<Result>& results);

bool all_passed(const std::vector<Result>& results);

} // namespace cuntz::acceptance
