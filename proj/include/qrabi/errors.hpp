#pragma once

#include <stdexcept>
#include <string>

namespace qrabi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parametric strength at or beyond the spectral-collapse point 2|g| >= omega.
class CollapseRegimeError : public Error {
public:
    using Error::Error;
};

/// Fock cutoff too small for the requested accuracy.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, int suggested_cutoff)
        : Error(what), suggested_cutoff_(suggested_cutoff) {}
    int suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    int suggested_cutoff_;
};

class PositivityError : public Error {
public:
    PositivityError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class NonHermitianError : public Error {
public:
    NonHermitianError(const std::string& what, double max_asymmetry)
        : Error(what), max_asymmetry_(max_asymmetry) {}
    double max_asymmetry() const noexcept { return max_asymmetry_; }

private:
    double max_asymmetry_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class UnsupportedConfigurationError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Husimi grid does not cover the support of the state.
class GridError : public Error {
public:
    GridError(const std::string& what, double normalization)
        : Error(what), normalization_(normalization) {}
    double normalization() const noexcept { return normalization_; }

private:
    double normalization_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace qrabi
