#pragma once

// Acceptance suite: reference runs with measured values, targets and margins.
// Shared by the acceptance test binary and `qrabi validate`.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "qrabi/config.hpp"

namespace qrabi::validation {

enum class Status { pass, fail, skipped };

std::string_view to_string(Status s);

struct Check {
    int criterion = 0;
    std::string name;
    std::string relation;  ///< "within", "<=", ">=", ">"
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;  ///< half-width for "within"
    double margin = 0.0;     ///< distance to failure; negative when failing
    Status status = Status::fail;
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string title;
    Status status = Status::fail;
    double seconds = 0.0;
};

struct Report {
    std::vector<Criterion> criteria;
    std::vector<Check> checks;

    /// True when nothing failed (skipped checks do not count as passes or failures).
    bool passed() const;
    nlohmann::json to_json() const;
};

struct Settings {
    config::Tolerances tolerances;
    std::uint64_t seed = 0;
    bool oracle_enabled = true;
    int workers = 1;
};

Settings settings_from(const config::RunConfig& cfg, int workers);

/// Runs every criterion; a failing or throwing criterion does not stop the others.
Report run_validation(const Settings& settings);

}  // namespace qrabi::validation
