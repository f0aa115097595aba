#pragma once

// Polynomial and overlap kernels for displaced and squeezed Fock states.
//
// Conventions: D(a) = exp(a a^dag - a^* a), S(xi) = exp((xi a^dag^2 - xi^* a^2) / 2)
// with xi = r e^{i vartheta}, so that S^dag a S = mu a + nu a^dag,
// mu = cosh r, nu = e^{i vartheta} sinh r.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qrabi::specfun {

using cplx = std::complex<double>;

/// Below this squeeze magnitude the nu -> 0 reduced formulas are used.
inline constexpr double kSqueezeBranchThreshold = 1e-6;

struct OverlapKernelArgs {
    int m = 0;
    int n = 0;
    double x = 0.0;
};

struct SqueezeDisplaceArgs {
    double r = 0.0;
    double vartheta = 0.0;
    cplx alpha{};
    int n = 0;
    double eta = 0.0;

    double mu() const;
    cplx nu() const;
};

/// ln(n!); exact table up to n = 1024, lgamma beyond.
double log_factorial(int n);

/// Generalized Laguerre polynomial L_n^{(j)}(x) by the three-term recurrence.
/// Any integer order j is accepted; the recurrence is a polynomial identity in j.
double laguerre_assoc(int n, int j, double x);

/// Physicists' Hermite polynomial H_n(z). Overflows past ~1e308; use
/// hermite_scaled when n or |z| is large.
cplx hermite(int n, cplx z);

/// value = mantissa * 2^exponent, with |mantissa| kept near 1.
struct ScaledComplex {
    cplx mantissa{};
    long exponent = 0;

    cplx value() const;
    double log_abs() const;
};

ScaledComplex hermite_scaled(int n, cplx z);

/// G_k = s^k H_k(z) / sqrt(k!) for k = 0..n_max, driven only by (z s) and s^2:
///   G_{k+1} = (2 (z s) G_k - 2 s^2 sqrt(k) G_{k-1}) / sqrt(k+1).
/// Finite and well conditioned as s -> 0 where z ~ 1/s diverges.
std::vector<cplx> normalized_hermite_sequence(int n_max, cplx zs, cplx s2);

/// M_{m,n}(x) = <m|D(x)|n> for real x.
double displaced_overlap(const OverlapKernelArgs& args);

/// Dense table M_{m,n}(x), 0 <= m, n < dim.
Eigen::MatrixXd displaced_overlap_matrix(int dim, double x);

/// <m|D(alpha)|n> for complex alpha.
cplx displacement_element(int m, cplx alpha, int n);

/// <r, n_eta | alpha> = <n| D(eta) S(xi) |alpha>, the overlap between the
/// squeezed displaced number state S^dag D^dag(eta)|n> and a coherent state.
cplx squeezed_coherent_overlap(const SqueezeDisplaceArgs& args);

/// The same overlap for every n in [0, n_max], in one recurrence pass.
std::vector<cplx> squeezed_coherent_overlaps(double r, double eta, cplx alpha, int n_max);

/// <m| D(alpha) S(xi) |n> by the finite double-Hermite sum.
cplx disp_squeeze_matrix_element(int m, cplx alpha, cplx xi, int n);

/// Block of <m|D(alpha)S(xi)|n> for m < rows, n < cols.
Eigen::MatrixXcd disp_squeeze_matrix(int rows, int cols, cplx alpha, cplx xi);

namespace detail {

// Reduced forms used below kSqueezeBranchThreshold, accurate to first order in r.
// Exposed so the two branches can be compared at the same r.
std::vector<cplx> small_squeeze_overlaps(double r, double eta, cplx alpha, int n_max);
cplx small_squeeze_element(int m, cplx alpha, cplx xi, int n);

}  // namespace detail

}  // namespace qrabi::specfun
