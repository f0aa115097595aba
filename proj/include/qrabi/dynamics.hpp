#pragma once

// Evolution of (cos(theta)|1,1> + e^{i phi} sin(theta)|-1,-1>) x |alpha> in the
// adiabatic eigenbasis, and the reduced density matrices built from it.
//
// Times are scaled, tau = omega t. Energies carry the units of params.omega.

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "qrabi/model.hpp"
#include "qrabi/qmat.hpp"

namespace qrabi::dynamics {

using cplx = std::complex<double>;

struct InitialState {
    double theta = 0.0;
    double phi = 0.0;
    cplx alpha{};
};

struct TruncationSettings {
    double epsilon = 1e-8;   ///< allowed 1 - sum |C|^2
    int max_cutoff = 4000;   ///< automatic growth stops here
};

/// Starting cutoff max(48, ceil(|alpha|^2 + 10|alpha| + 25)) + ceil(25 r).
int default_cutoff(const model::BogoliubovFrame& frame, const InitialState& init);

/// Overlap tables and Fock-basis images of the frames, shared read-only
/// between all states evolved from one initial state.
struct KernelCache {
    int n_max = 0;
    /// M(eta_{s'} - eta_s) for every index pair i < j, keyed by pair_slot(i, j).
    std::array<Eigen::MatrixXd, 6> overlaps;
    /// Columns |r, n_s> (n <= n_max) in a Fock basis of `fock_rows` states.
    std::array<Eigen::MatrixXd, 4> frames;
    int fock_rows = 0;

    static int pair_slot(int i, int j);
};

struct EvolutionState {
    model::ModelParams params;
    model::BogoliubovFrame frame;
    std::vector<model::AdiabaticLevel> levels;
    Eigen::VectorXcd c1_plus;
    Eigen::VectorXcd c1_minus;
    Eigen::VectorXcd c2_plus;
    Eigen::VectorXcd c2_minus;
    double t = 0.0;  ///< omega t
    double truncation_residual = 0.0;
    double epsilon = 1e-8;
    std::shared_ptr<const KernelCache> cache;

    int n_max() const { return static_cast<int>(c1_plus.size()) - 1; }
    double norm_squared() const;
};

/// Smallest cutoff (grown by ~25% steps from default_cutoff) whose residual is
/// below the tolerance. A fixed params.n_max is checked, not grown.
int choose_cutoff(const model::ModelParams& params, const model::BogoliubovFrame& frame,
                  const InitialState& init, const TruncationSettings& settings = {});

/// Coefficients C^{+-}_{j,n} at t = 0. Throws TruncationError (with a
/// suggested cutoff) when the residual exceeds the tolerance.
EvolutionState initial_coefficients(const model::ModelParams& params, const InitialState& init,
                                    const TruncationSettings& settings = {});

/// Advance by dt (scaled time): pure phase rotation, additive in dt.
EvolutionState evolve(const EvolutionState& state, double dt);

/// Amplitudes c_s[n] on the frame states |s1,s2; r, n_s>, in two-qubit index order.
std::array<Eigen::VectorXcd, 4> frame_amplitudes(const EvolutionState& state);

/// 4x4 two-qubit state. Throws PositivityError below -1e-6.
qmat::DensityMatrix two_qubit_rdm(const EvolutionState& state);
qmat::DensityMatrix two_qubit_rdm(const EvolutionState& state, const std::array<Eigen::VectorXcd, 4>& c);

struct SingleQubitStates {
    qmat::DensityMatrix qubit1;  ///< keeps the first label s1
    qmat::DensityMatrix qubit2;  ///< keeps the second label s2
};

/// Element sums of the 4x4 matrix, basis order |1>, |-1>.
SingleQubitStates single_qubit_rdms(const qmat::DensityMatrix& rho4);

/// Oscillator components psi_s = sum_n c_s[n] |r, n_s>, in the Fock basis 0..n_max.
std::array<Eigen::VectorXcd, 4> oscillator_frame_states(const EvolutionState& state);

/// Qubit 1 (first label) with the oscillator; index b(s1) * (n_max + 1) + k.
qmat::DensityMatrix qubit_osc_rdm(const EvolutionState& state);

/// Oscillator state in the Fock basis 0..n_max.
qmat::DensityMatrix oscillator_rdm(const EvolutionState& state);

/// Full state vector in the product basis, index q * (n_fock + 1) + k.
Eigen::VectorXcd product_basis_state(const EvolutionState& state, int n_fock);

/// Fock-basis columns |r, n_eta> for n < cols, computed on `rows` Fock states.
Eigen::MatrixXd frame_columns(const model::BogoliubovFrame& frame, double eta, int cols, int rows);

}  // namespace qrabi::dynamics
