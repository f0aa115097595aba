#pragma once

// JSON run configuration. Every physical value is in units of omega; every
// time is omega t.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qrabi/dynamics.hpp"
#include "qrabi/model.hpp"

namespace qrabi::config {

inline constexpr int kSchemaVersion = 1;

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1000.0;
    int samples = 1001;

    std::vector<double> times() const;
};

struct Sweep {
    std::string parameter;  ///< g, lambda1, lambda2, lambda (both), delta1, delta2, delta (both)
    std::vector<double> values;
};

struct SpectrumSettings {
    int levels = 12;
    int n_fock = 160;
};

struct HusimiSettings {
    int points = 201;
    std::optional<double> half_width;   ///< default 4 + 2|<a>|
    std::optional<dynamics::cplx> center;  ///< default <a>
    double t = 0.0;
};

struct Tolerances {
    double epsilon_trunc = 1e-8;
    double spectrum_abs = 2e-3;   ///< adiabatic vs exact levels, units of omega
    double rdm_max_abs = 2e-2;    ///< two-qubit matrix, adiabatic vs exact evolution
    double husimi_norm = 1e-3;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    model::ModelParams model;
    dynamics::InitialState initial;
    TimeGrid time_grid;
    std::vector<std::string> outputs{"inversion", "entropy", "coherence", "discord", "concurrence"};
    HusimiSettings husimi;
    SpectrumSettings spectrum;
    std::vector<double> bell_times;
    int bell_restarts = 8;
    Tolerances tolerances;
    std::optional<Sweep> sweep;
    std::uint64_t seed = 0;
    bool oracle_enabled = true;
};

/// Observable names accepted in "outputs".
const std::vector<std::string>& known_outputs();

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

/// "start:stop:count" or a comma list.
Sweep parse_sweep(const std::string& parameter, const std::string& spec);

/// Applies a sweep value to a copy of the model parameters.
model::ModelParams apply_sweep(const model::ModelParams& base, const std::string& parameter, double value);

}  // namespace qrabi::config
