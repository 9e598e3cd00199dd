#pragma once

// Command-line front end. Reports are JSON objects with sorted keys (or a
// flat text rendering of the same object), written to `out`; diagnostics go
// to `err`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shimura::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDomainError = 2,
    kHypothesisViolation = 3,
    kVerifyMismatch = 4,
    kInternalError = 5,
};

struct RunConfig {
    std::int64_t m = 0;
    std::optional<std::int64_t> d;
    std::int64_t bound = 1000;
    std::uint64_t trial_bound = 1'000'000;
    std::uint64_t rho_budget = 10'000'000;
    bool factor = false;
    std::optional<std::vector<std::int64_t>> s_override;
    std::string output = "json";
    std::optional<std::filesystem::path> cache_dir;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shimura::cli
