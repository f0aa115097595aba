#pragma once

#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace qrabi::qmat {

using CMatrix = Eigen::MatrixXcd;

enum class Subsystem { two_qubit, qubit, oscillator, qubit_oscillator, full };

std::string_view to_string(Subsystem s);

/// Dense density matrix tagged with the subsystem it describes.
/// Construction does not validate; call validate() where the invariants matter.
class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(CMatrix m, Subsystem label) : m_(std::move(m)), label_(label) {}

    const CMatrix& matrix() const noexcept { return m_; }
    Subsystem label() const noexcept { return label_; }
    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    std::complex<double> operator()(int i, int j) const { return m_(i, j); }

    double trace() const { return m_.trace().real(); }
    double max_asymmetry() const;

    /// Throws NonHermitianError / PositivityError / Error(trace) when outside tolerances.
    void validate(double hermitian_tol = 1e-10, double trace_tol = 1e-8,
                  double positivity_tol = 1e-8) const;

private:
    CMatrix m_;
    Subsystem label_ = Subsystem::full;
};

struct EigenSystem {
    Eigen::VectorXd values;  // descending
    CMatrix vectors;         // orthonormal columns matching values
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Rejects input whose max |M_ij - conj(M_ji)| exceeds tol.
EigenSystem hermitian_eigensystem(const CMatrix& m, double tol = 1e-8);

/// Descending eigenvalues only.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m, double tol = 1e-8);

/// Values in [-clip, 0) are zeroed; below -clip raises PositivityError.
inline constexpr double kEntropyClip = 1e-8;

/// -Tr(rho log2 rho), in bits.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const CMatrix& rho);

/// Entropy of a probability vector, in bits, with the same clipping convention.
double shannon_entropy(std::span<const double> p);

/// Reduced state over the factors listed in `keep` (ascending factor order kept).
/// `dims` are the factor dimensions, the first factor being the slowest index.
CMatrix partial_trace(const CMatrix& rho, std::span<const int> dims, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep, Subsystem label);

double purity(const DensityMatrix& rho);
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double hs_distance(const CMatrix& rho, const CMatrix& sigma);

}  // namespace qrabi::qmat
