#pragma once

// Exact reference: dense diagonalization of the full Hamiltonian on a
// truncated Fock space. Basis |s1, s2> x |n> with s_j the sigma^x labels,
// index q * (n_fock + 1) + n, q the two-qubit index. In this basis sigma^z_j
// flips label j and every matrix element is real.

#include <complex>

#include <Eigen/Dense>

#include "qrabi/dynamics.hpp"
#include "qrabi/model.hpp"
#include "qrabi/qmat.hpp"

namespace qrabi::oracle {

using cplx = std::complex<double>;

struct FullHamiltonian {
    int n_fock = 0;
    int dim = 0;
    Eigen::MatrixXd matrix;  ///< real symmetric
};

FullHamiltonian build_full_hamiltonian(const model::ModelParams& params, int n_fock);

/// Lowest k eigenvalues, ascending.
Eigen::VectorXd exact_spectrum(const FullHamiltonian& h, int k);

/// Lowest k eigenvalues at n_fock; throws ConvergenceError if doubling the
/// cutoff moves any of them by more than tol * omega.
Eigen::VectorXd converged_spectrum(const model::ModelParams& params, int k, int n_fock, double tol = 1e-8);

class SpectralPropagator {
public:
    SpectralPropagator(const FullHamiltonian& h, double omega);

    /// e^{-i H t} psi0 with t = tau / omega.
    Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double tau) const;

    const Eigen::VectorXd& energies() const { return values_; }
    const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

private:
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
    double omega_;
};

Eigen::VectorXcd exact_evolve(const FullHamiltonian& h, double omega, const Eigen::VectorXcd& psi0, double tau);

enum class OperatorKind { displacement, squeeze };

/// expm of the truncated generator alpha a^dag - alpha^* a, or
/// (xi a^dag^2 - xi^* a^2) / 2, on Fock states 0..n_fock.
Eigen::MatrixXcd brute_force_operator(OperatorKind kind, cplx parameter, int n_fock);

/// Truncated coherent state, unnormalized beyond n_fock.
Eigen::VectorXcd coherent_vector(cplx alpha, int n_fock);

Eigen::VectorXcd product_initial_state(const dynamics::InitialState& init, int n_fock);

qmat::DensityMatrix two_qubit_rdm(const Eigen::VectorXcd& psi, int n_fock);
qmat::DensityMatrix oscillator_rdm(const Eigen::VectorXcd& psi, int n_fock);

/// <P> for P |s1, s2, n> = (-1)^n |-s1, -s2, n>.
double parity_expectation(const Eigen::VectorXcd& psi, int n_fock);

}  // namespace qrabi::oracle
