#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cuntz::cli {

inline constexpr std::size_t max_word_length = 16;

enum ExitCode : int { ok = 0, input_error = 1, verification_failure = 2 };

struct RunConfig {
    /// Subcommand path, e.g. {"walk", "analyze"}.
    std::vector<std::string> command;
    std::optional<std::filesystem::path> system;
    /// 0 selects the subcommand default.
    std::size_t lmax = 0;
    std::size_t depth = 40;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> csv;
    std::optional<std::filesystem::path> json;
    std::optional<std::filesystem::path> emit;
    std::vector<std::string> points;
    std::vector<std::string> tests;
    std::string vertex;
    std::size_t set_index = 0;
    /// 0 selects the subcommand default.
    std::size_t samples = 0;
    double tolerance = 1e-8;
    std::filesystem::path fixtures;
};

/// Parses argv into a RunConfig. Returns an exit code instead when parsing ends the
/// program (help, version or a usage error); messages go to `out` / `err`.
struct Parsed {
    std::optional<RunConfig> config;
    int exit_code = ok;
};
Parsed parse_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes one subcommand.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cuntz::cli
