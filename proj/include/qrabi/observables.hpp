#pragma once

// Physical quantities computed from the reduced states. Two-qubit matrices use
// the order |1,1>, |-1,1>, |1,-1>, |-1,-1>; as a tensor product that is
// (second label) x (first label).

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qrabi/dynamics.hpp"
#include "qrabi/qmat.hpp"

namespace qrabi::observables {

using cplx = std::complex<double>;
using qmat::CMatrix;
using qmat::DensityMatrix;

/// <S^z_+> = rho_{1,1;1,1} - rho_{-1,-1;-1,-1}.
double population_inversion(const DensityMatrix& rho4);

/// S(rho_diag) - S(rho) in bits, in the basis the matrix is written in.
double relative_entropy_coherence(const DensityMatrix& rho);

// Kronecker order is (s2) x (s1), so `a` belongs to the second label and `b`
// to the first one, as the component formulas flip them.
struct BlochDecomposition {
    Eigen::Vector3d a = Eigen::Vector3d::Zero();  ///< Tr(rho sigma_i x I)
    Eigen::Vector3d b = Eigen::Vector3d::Zero();  ///< Tr(rho I x sigma_i)
    Eigen::Matrix3d T = Eigen::Matrix3d::Zero();  ///< Tr(rho sigma_i x sigma_j)
    /// (I + a.sigma x I + I x b.sigma + T_ij sigma_i x sigma_j) / 4
    CMatrix reconstruct() const;
};

BlochDecomposition bloch_decomposition(const DensityMatrix& rho4);

/// D_G = (|a|^2 + |T|^2 - E_max) / 4, in [0, 1/2]. Report 2 D_G.
double geometric_discord(const DensityMatrix& rho4);

/// Wootters concurrence with the sigma_y x sigma_y spin flip.
double concurrence(const DensityMatrix& rho4);

/// Generalized Bell states as rows: Phi+, Phi-, Psi+, Psi-.
Eigen::Matrix4cd bell_basis();

struct BellCoefficients {
    std::array<cplx, 4> alpha{};  ///< over Phi+, Phi-, Psi+, Psi-

    int dominant() const;
};

struct BellReconstruction {
    BellCoefficients coefficients;
    double d_min = 0.0;          ///< from the numeric search
    double d_min_closed = 0.0;   ///< sqrt(Tr rho^2 + 1 - 2 lambda_max)
    double purity = 0.0;
    bool degenerate = false;     ///< top eigenvalue gap < 1e-10
};

/// Closest pure state in Hilbert-Schmidt distance, expanded in the Bell basis.
/// Gauge: the largest coefficient is real and positive.
BellReconstruction bell_reconstruct(const DensityMatrix& rho4, std::uint64_t seed = 0, int restarts = 8);

struct QuadratureMoments {
    cplx a_mean{};
    cplx a2_mean{};
    double n_mean = 0.0;
    double v_min = 0.5;
    bool squeezed = false;  ///< v_min < 0.5
};

QuadratureMoments moments_to_variance(cplx a, cplx a2, double n);

/// From the Fock-basis oscillator matrix. Throws ConvergenceError when the top
/// Fock states carry more than 1e-8 of the weight.
QuadratureMoments quadrature_variance(const DensityMatrix& rho_osc);

/// Independent path: expectation values as sums over frame states using
/// <m|D(alpha)S(xi)|n> tables.
QuadratureMoments quadrature_variance_frame_sums(const dynamics::EvolutionState& state);

struct HusimiGrid {
    cplx center{};
    double half_width = 4.0;
    int points = 201;

    double spacing() const { return 2.0 * half_width / (points - 1); }
    cplx at(int i_re, int i_im) const;
};

/// Centered at <a> with half-width 4 + 2|<a>|.
HusimiGrid default_husimi_grid(const DensityMatrix& rho_osc);

struct HusimiField {
    HusimiGrid grid;
    Eigen::MatrixXd q;  ///< q(i_im, i_re)
    double normalization = 0.0;
    cplx peak{};
    double peak_value = 0.0;
};

/// Q(beta) = <beta|rho|beta> / pi. Throws GridError when the Riemann sum
/// differs from 1 by more than `norm_tol`.
HusimiField husimi_q(const DensityMatrix& rho_osc, const HusimiGrid& grid, int workers = 1,
                     double norm_tol = 1e-3);

/// Major maxima of a uniformly sampled series: above min + 0.5 range and at
/// least 10% of the span apart, taken greedily by height. Times ascending.
std::vector<double> detect_revivals(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace qrabi::observables
