#pragma once

// Observable time series shared by the command-line tool and the validation suite.

#include <string>
#include <vector>

#include "qrabi/dynamics.hpp"

namespace qrabi::pipeline {

/// Evaluates the named observables (see config::known_outputs) at every time.
/// Row i holds the values for times[i], in the order of `outputs`. Rows are
/// computed on `workers` threads and returned in time order.
std::vector<std::vector<double>> dynamics_series(const dynamics::EvolutionState& initial,
                                                 const std::vector<double>& times,
                                                 const std::vector<std::string>& outputs, int workers = 1);

/// Column header for an observable, with its unit.
std::string column_header(const std::string& output);

}  // namespace qrabi::pipeline
