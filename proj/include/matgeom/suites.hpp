#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matgeom/radon.hpp"

namespace matgeom {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kLibraryVersion = "0.1.0";

struct SuiteConfig {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::optional<double> rel_tol;     // integrator tolerance override
    std::optional<double> abs_tol;
    std::optional<std::size_t> samples;  // Monte Carlo budget override
    std::vector<std::string> suites;
    bool timing = false;  // record wall times; off keeps reports byte-stable
};

// Reads the keys of `j` on top of `base`. Unknown keys and bad types throw
// ConfigError.
SuiteConfig config_from_json(const json& j, SuiteConfig base = {});
void validate(const SuiteConfig& c);

struct SuiteReport {
    std::string id;
    std::vector<Report> reports;
    int passed = 0;
    int failed = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    std::string version = kLibraryVersion;

    bool ok() const { return failed == 0; }
};

json to_json(const SuiteReport& s);

// Suite ids in run order, without "all".
const std::vector<std::string>& suite_ids();

// Runs one suite; "all" runs every suite into a single report. Each check
// draws from its own stream of config.seed, so a check gives the same result
// alone or inside "all". A check that throws is recorded as a failure.
SuiteReport run_suite(const std::string& id, const SuiteConfig& config);

}  // namespace matgeom
