#pragma once

// Two-qubit Rabi model with a parametric (two-photon) oscillator term,
//   H = omega a^dag a + sum_j [ Delta_j/2 sigma^z_j + lambda_j sigma^x_j (a^dag + a) ]
//       + g (a^dag^2 + a^2),
// diagonalized in the adiabatic approximation Delta_j << omega.
//
// Qubit labels s_j = +-1 are sigma^x eigenvalues. Two-qubit states are always
// ordered |1,1>, |-1,1>, |1,-1>, |-1,-1> (first label fastest).

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace qrabi::model {

/// Index of |s1, s2> in the fixed two-qubit ordering.
constexpr int two_qubit_index(int s1, int s2) { return (s1 == 1 ? 0 : 1) + (s2 == 1 ? 0 : 2); }

/// (s1, s2) labels in index order.
inline constexpr std::array<std::array<int, 2>, 4> kTwoQubitLabels{{{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

struct ModelParams {
    double omega = 1.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double g = 0.0;
    int n_max = 0;  ///< Fock cutoff; 0 selects it automatically

    double delta_plus() const { return delta1 + delta2; }
    double delta_minus() const { return delta1 - delta2; }
    double lambda_plus() const { return lambda1 + lambda2; }
    double lambda_minus() const { return lambda1 - lambda2; }
    double lambda_s(int s1, int s2) const { return lambda1 * s1 + lambda2 * s2; }

    /// Throws on omega <= 0, |g| >= omega/2 or negative cutoff.
    void validate() const;

    /// Delta_j >= omega/4: the adiabatic approximation is degrading.
    bool adiabatic_warning() const;
};

struct BogoliubovFrame {
    double Omega = 1.0;  ///< sqrt(omega^2 - 4 g^2)
    double r = 0.0;      ///< squeeze parameter
    double mu = 1.0;     ///< cosh r
    double nu = 0.0;     ///< sinh r
    std::array<double, 4> eta{};  ///< eta_{s1,s2} in two-qubit index order
    double zeta_plus = 0.0;       ///< eta_{1,1} - eta_{-1,1}
    double zeta_minus = 0.0;      ///< eta_{1,1} - eta_{1,-1}
    double Lambda = 0.0;          ///< 2 lambda1 lambda2 / (omega + 2g)
    double collapse_proximity = 1.0;  ///< Omega / omega, -> 0 at spectral collapse
    bool near_collapse = false;

    double eta_of(int s1, int s2) const { return eta[static_cast<std::size_t>(two_qubit_index(s1, s2))]; }
};

/// Omega/omega below this raises the near_collapse flag.
inline constexpr double kNearCollapseThreshold = 0.1;

struct AdiabaticLevel {
    int n = 0;
    double E11 = 0.0;  ///< oscillator energy E_n^{1,1}
    double delta1n = 0.0;
    double delta2n = 0.0;
    double Gamma_plus = 0.0;
    double Gamma_minus = 0.0;
    double chi_plus = 0.0;
    double chi_minus = 0.0;
    double E1_plus = 0.0;
    double E1_minus = 0.0;
    double E2_plus = 0.0;
    double E2_minus = 0.0;
    double eps_plus = 0.5;
    double eps_minus = 0.5;
    double kap_plus = 0.5;
    double kap_minus = 0.5;
    double sign_plus = 1.0;   ///< Gamma_+/|Gamma_+|, +1 at zero
    double sign_minus = 1.0;  ///< Gamma_-/|Gamma_-|, +1 at zero

    /// Columns: |E1+>, |E1->, |E2+>, |E2-> in the frame basis |s1,s2; r, n_{s1,s2}>.
    Eigen::Matrix4d eigenvectors() const;
    Eigen::Vector4d energies() const { return {E1_plus, E1_minus, E2_plus, E2_minus}; }
};

BogoliubovFrame build_frame(const ModelParams& params);

/// Oscillator-frame energy E_n^{s1,s2} = (n + 1/2) Omega - omega/2 - lambda_s^2 / (omega + 2g).
double oscillator_energy(const ModelParams& params, const BogoliubovFrame& frame, int n, int s1, int s2);

/// The 4x4 block of H in the frame basis for oscillator index n.
Eigen::Matrix4d adiabatic_block(const ModelParams& params, const BogoliubovFrame& frame, int n);

AdiabaticLevel adiabatic_levels(const ModelParams& params, const BogoliubovFrame& frame, int n);

std::vector<AdiabaticLevel> adiabatic_levels_upto(const ModelParams& params,
                                                  const BogoliubovFrame& frame, int n_max);

/// Lowest `count` adiabatic energies, ascending, drawn from blocks 0..n_blocks-1.
std::vector<double> adiabatic_spectrum(const ModelParams& params, const BogoliubovFrame& frame,
                                       int count, int n_blocks);

struct ApproxLevels {
    double E1_plus = 0.0;
    double E1_minus = 0.0;
    double E2_plus = 0.0;
    double E2_minus = 0.0;
    bool zeta_warning = false;  ///< zeta^2 > 0.2: expansion unreliable
};

/// Energies with L_n(zeta^2) kept to first order in zeta^2 (linear in n).
ApproxLevels approx_levels_small_zeta(const ModelParams& params, const BogoliubovFrame& frame, int n);

/// Scaled revival time omega t_R = 2 pi k / ((2 eta_{1,0})^2 Delta~), Delta~ = Delta e^{-2 eta_{1,0}^2}.
/// Only defined for identical qubits with equal couplings.
double revival_time_estimate(const ModelParams& params, const BogoliubovFrame& frame, int k);

}  // namespace qrabi::model
