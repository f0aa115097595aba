#include "qrabi/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "qrabi/errors.hpp"
#include "qrabi/parallel.hpp"
#include "qrabi/specfun.hpp"

namespace qrabi::observables {

namespace {

void require_two_qubit(const DensityMatrix& rho, const char* who) {
    if (rho.dim() != 4) {
        std::ostringstream os;
        os << who << ": expected a 4x4 two-qubit matrix, got " << rho.dim();
        throw DimensionError(os.str());
    }
}

const std::array<Eigen::Matrix2cd, 4>& paulis() {
    static const std::array<Eigen::Matrix2cd, 4> p = [] {
        const cplx i(0.0, 1.0);
        std::array<Eigen::Matrix2cd, 4> m;
        m[0] << 1, 0, 0, 1;
        m[1] << 0, 1, 1, 0;
        m[2] << 0, -i, i, 0;
        m[3] << 1, 0, 0, -1;
        return m;
    }();
    return p;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& x, const Eigen::Matrix2cd& y) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            k.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
    return k;
}

}  // namespace

double population_inversion(const DensityMatrix& rho4) {
    require_two_qubit(rho4, "population_inversion");
    return rho4(0, 0).real() - rho4(3, 3).real();
}

double relative_entropy_coherence(const DensityMatrix& rho) {
    const Eigen::VectorXd d = rho.matrix().diagonal().real();
    const double s_diag = qmat::shannon_entropy(std::span<const double>(d.data(), static_cast<std::size_t>(d.size())));
    return std::max(0.0, s_diag - qmat::von_neumann_entropy(rho));
}

CMatrix BlochDecomposition::reconstruct() const {
    const auto& s = paulis();
    Eigen::Matrix4cd m = kron(s[0], s[0]);
    for (int i = 0; i < 3; ++i) {
        m += a(i) * kron(s[i + 1], s[0]) + b(i) * kron(s[0], s[i + 1]);
        for (int j = 0; j < 3; ++j)
            m += T(i, j) * kron(s[i + 1], s[j + 1]);
    }
    return m / 4.0;
}

BlochDecomposition bloch_decomposition(const DensityMatrix& rho4) {
    require_two_qubit(rho4, "bloch_decomposition");
    const auto& r = rho4.matrix();
    const double d0 = r(0, 0).real(), d1 = r(1, 1).real(), d2 = r(2, 2).real(), d3 = r(3, 3).real();
    BlochDecomposition out;
    const cplx a_sum = r(0, 2) + r(1, 3);
    const cplx b_sum = r(0, 1) + r(2, 3);
    out.a << 2.0 * a_sum.real(), -2.0 * a_sum.imag(), d0 + d1 - d2 - d3;
    out.b << 2.0 * b_sum.real(), -2.0 * b_sum.imag(), d0 - d1 + d2 - d3;

    const cplx x_plus = r(0, 3) + r(1, 2);
    const cplx x_minus = r(0, 3) - r(1, 2);
    const cplx a_diff = r(0, 2) - r(1, 3);
    const cplx b_diff = r(0, 1) - r(2, 3);
    out.T(0, 0) = 2.0 * x_plus.real();
    out.T(1, 1) = -2.0 * x_minus.real();
    out.T(2, 2) = d0 - d1 - d2 + d3;
    // The x-y and y-x entries differ: Tr(rho sigma_x x sigma_y) picks up the
    // difference of the two anti-diagonal elements, y-x their sum.
    out.T(0, 1) = -2.0 * x_minus.imag();
    out.T(1, 0) = -2.0 * x_plus.imag();
    out.T(0, 2) = 2.0 * a_diff.real();
    out.T(1, 2) = -2.0 * a_diff.imag();
    out.T(2, 0) = 2.0 * b_diff.real();
    out.T(2, 1) = -2.0 * b_diff.imag();
    return out;
}

double geometric_discord(const DensityMatrix& rho4) {
    const auto bd = bloch_decomposition(rho4);
    const Eigen::Matrix3d k = bd.a * bd.a.transpose() + bd.T * bd.T.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k, Eigen::EigenvaluesOnly);
    const double e_max = es.eigenvalues()(2);
    const double d = 0.25 * (bd.a.squaredNorm() + bd.T.squaredNorm() - e_max);
    return std::clamp(d, 0.0, 0.5);
}

double concurrence(const DensityMatrix& rho4) {
    require_two_qubit(rho4, "concurrence");
    const auto& s = paulis();
    const Eigen::Matrix4cd yy = kron(s[2], s[2]);
    const Eigen::Matrix4cd r = rho4.matrix();
    const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r * tilde, false);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("concurrence: eigensolver failed");
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        const double v = es.eigenvalues()(i).real();
        if (v < -1e-8) {
            std::ostringstream os;
            os << "concurrence: spin-flip product has eigenvalue " << v;
            throw PositivityError(os.str(), v);
        }
        lam[static_cast<std::size_t>(i)] = v < 1e-10 ? 0.0 : std::sqrt(v);
    }
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

Eigen::Matrix4cd bell_basis() {
    const cplx i(0.0, 1.0);
    const double h = 1.0 / std::numbers::sqrt2;
    Eigen::Matrix4cd b;
    b << h, 0, 0, i * h,
         h, 0, 0, -i * h,
         0, i * h, h, 0,
         0, -i * h, h, 0;
    return b;
}

int BellCoefficients::dominant() const {
    int best = 0;
    for (int k = 1; k < 4; ++k)
        if (std::abs(alpha[static_cast<std::size_t>(k)]) > std::abs(alpha[static_cast<std::size_t>(best)]))
            best = k;
    return best;
}

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;

Eigen::Vector4cd unpack(const Vec8& x) {
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k)
        v(k) = cplx(x(2 * k), x(2 * k + 1));
    return v;
}

// d^2 = Tr rho^2 + 1 - 2 <v|rho|v> for the normalized vector.
double distance_sq(const Eigen::Matrix4cd& rho, double purity, const Vec8& x) {
    const Eigen::Vector4cd v = unpack(x);
    const double nn = v.squaredNorm();
    if (nn == 0.0)
        return purity + 1.0;
    return purity + 1.0 - 2.0 * v.dot(rho * v).real() / nn;
}

Vec8 compass_search(const Eigen::Matrix4cd& rho, double purity, Vec8 x, double& best) {
    x /= x.norm();
    best = distance_sq(rho, purity, x);
    double step = 0.25;
    for (int iter = 0; iter < 200000 && step > 1e-11; ++iter) {
        bool improved = false;
        for (int k = 0; k < 8 && !improved; ++k)
            for (double dir : {1.0, -1.0}) {
                Vec8 y = x;
                y(k) += dir * step;
                y /= y.norm();
                const double f = distance_sq(rho, purity, y);
                if (f < best) {
                    best = f;
                    x = y;
                    improved = true;
                    break;
                }
            }
        if (!improved)
            step *= 0.5;
    }
    return x;
}

}  // namespace

BellReconstruction bell_reconstruct(const DensityMatrix& rho4, std::uint64_t seed, int restarts) {
    require_two_qubit(rho4, "bell_reconstruct");
    const Eigen::Matrix4cd rho = rho4.matrix();
    const auto es = qmat::hermitian_eigensystem(rho);
    BellReconstruction out;
    out.purity = qmat::purity(rho4);
    out.degenerate = es.values(0) - es.values(1) < 1e-10;
    out.d_min_closed = std::sqrt(std::max(0.0, out.purity + 1.0 - 2.0 * es.values(0)));

    Vec8 x0;
    for (int k = 0; k < 4; ++k) {
        x0(2 * k) = es.vectors(k, 0).real();
        x0(2 * k + 1) = es.vectors(k, 0).imag();
    }
    double best = 0.0;
    Vec8 best_x = compass_search(rho, out.purity, x0, best);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int rs = 0; rs < restarts; ++rs) {
        Vec8 x;
        for (int k = 0; k < 8; ++k)
            x(k) = gauss(rng);
        double f = 0.0;
        const Vec8 y = compass_search(rho, out.purity, x, f);
        if (f < best) {
            best = f;
            best_x = y;
        }
    }
    out.d_min = std::sqrt(std::max(0.0, best));

    Eigen::Vector4cd v = unpack(best_x);
    v.normalize();
    const Eigen::Vector4cd c = bell_basis().conjugate() * v;
    int k_max = 0;
    for (int k = 1; k < 4; ++k)
        if (std::abs(c(k)) > std::abs(c(k_max)))
            k_max = k;
    const cplx gauge = std::abs(c(k_max)) > 0.0 ? std::conj(c(k_max)) / std::abs(c(k_max)) : cplx(1.0);
    for (int k = 0; k < 4; ++k)
        out.coefficients.alpha[static_cast<std::size_t>(k)] = gauge * c(k);
    return out;
}

QuadratureMoments moments_to_variance(cplx a, cplx a2, double n) {
    QuadratureMoments q;
    q.a_mean = a;
    q.a2_mean = a2;
    q.n_mean = n;
    q.v_min = 0.5 + n - std::norm(a) - std::abs(a2 - a * a);
    q.squeezed = q.v_min < 0.5;
    return q;
}

QuadratureMoments quadrature_variance(const DensityMatrix& rho_osc) {
    const auto& r = rho_osc.matrix();
    const int d = rho_osc.dim();
    double tail = 0.0;
    for (int j = std::max(0, d - 3); j < d; ++j)
        tail += r(j, j).real();
    if (tail > 1e-8) {
        std::ostringstream os;
        os << "quadrature_variance: top Fock states carry weight " << tail
           << "; moment sums are not converged at cutoff " << d - 1;
        throw ConvergenceError(os.str());
    }
    cplx a{}, a2{};
    double n = 0.0;
    for (int j = 1; j < d; ++j) {
        a += std::sqrt(static_cast<double>(j)) * r(j, j - 1);
        n += j * r(j, j).real();
        if (j >= 2)
            a2 += std::sqrt(static_cast<double>(j) * (j - 1)) * r(j, j - 2);
    }
    return moments_to_variance(a, a2, n);
}

QuadratureMoments quadrature_variance_frame_sums(const dynamics::EvolutionState& state) {
    const auto c = dynamics::frame_amplitudes(state);
    const int cols = state.n_max() + 1;
    const double spread = std::expm1(2.0 * std::abs(state.frame.r));
    double eta_max = 0.0;
    for (double e : state.frame.eta)
        eta_max = std::max(eta_max, std::abs(e));
    const int k = 2 * cols + 40 + static_cast<int>(std::ceil(cols * spread + eta_max * eta_max + 10.0 * eta_max));

    cplx a{}, a2{};
    double n = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
        // <l| D(eta) S(r) |m>: row l is the frame label, column m the Fock index.
        const Eigen::MatrixXcd b = specfun::disp_squeeze_matrix(cols, k, state.frame.eta[s], state.frame.r);
        // Fock components of the frame state, then lowering applied once and twice.
        const Eigen::VectorXcd f = b.adjoint() * c[s];
        Eigen::VectorXcd af = Eigen::VectorXcd::Zero(k);
        for (int m = 1; m < k; ++m)
            af(m - 1) = std::sqrt(static_cast<double>(m)) * f(m);
        Eigen::VectorXcd aaf = Eigen::VectorXcd::Zero(k);
        for (int m = 1; m < k; ++m)
            aaf(m - 1) = std::sqrt(static_cast<double>(m)) * af(m);
        a += f.dot(af);
        a2 += f.dot(aaf);
        n += af.squaredNorm();
    }
    return moments_to_variance(a, a2, n);
}

cplx HusimiGrid::at(int i_re, int i_im) const {
    const double h = spacing();
    return center + cplx(-half_width + i_re * h, -half_width + i_im * h);
}

HusimiGrid default_husimi_grid(const DensityMatrix& rho_osc) {
    const auto& r = rho_osc.matrix();
    cplx a{};
    for (int j = 1; j < rho_osc.dim(); ++j)
        a += std::sqrt(static_cast<double>(j)) * r(j, j - 1);
    HusimiGrid g;
    g.center = a;
    g.half_width = 4.0 + 2.0 * std::abs(a);
    return g;
}

HusimiField husimi_q(const DensityMatrix& rho_osc, const HusimiGrid& grid, int workers, double norm_tol) {
    if (grid.points < 2 || !(grid.half_width > 0.0))
        throw GridError("husimi_q: grid needs at least 2 points and a positive width", 0.0);
    const int d = rho_osc.dim();
    const auto es = qmat::hermitian_eigensystem(rho_osc.matrix());
    std::vector<int> keep;
    for (int k = 0; k < d; ++k)
        if (es.values(k) > 1e-15)
            keep.push_back(k);
    Eigen::MatrixXcd u(d, static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd p(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        u.col(static_cast<Eigen::Index>(k)) = es.vectors.col(keep[k]);
        p(static_cast<Eigen::Index>(k)) = es.values(keep[k]);
    }

    const int n = grid.points;
    auto rows = parallel_map(static_cast<std::size_t>(n), workers, [&](std::size_t i_im) {
        Eigen::VectorXd row(n);
        Eigen::VectorXcd coh(d);
        for (int i_re = 0; i_re < n; ++i_re) {
            const cplx beta = grid.at(i_re, static_cast<int>(i_im));
            // <n|beta> by the ratio beta / sqrt(n)
            coh(0) = std::exp(-0.5 * std::norm(beta));
            for (int k = 1; k < d; ++k)
                coh(k) = coh(k - 1) * beta / std::sqrt(static_cast<double>(k));
            const Eigen::VectorXcd proj = u.adjoint() * coh;
            row(i_re) = p.dot(proj.cwiseAbs2()) / std::numbers::pi;
        }
        return row;
    });

    HusimiField f;
    f.grid = grid;
    f.q.resize(n, n);
    for (int i = 0; i < n; ++i)
        f.q.row(i) = rows[static_cast<std::size_t>(i)].transpose();
    const double h = grid.spacing();
    f.normalization = f.q.sum() * h * h;
    Eigen::Index ri = 0, ci = 0;
    f.peak_value = f.q.maxCoeff(&ri, &ci);
    f.peak = grid.at(static_cast<int>(ci), static_cast<int>(ri));
    if (f.q.minCoeff() < -1e-12 || f.peak_value > 1.0 / std::numbers::pi + 1e-12)
        throw GridError("husimi_q: field outside [0, 1/pi]", f.normalization);
    if (std::abs(f.normalization - 1.0) > norm_tol) {
        std::ostringstream os;
        os << "husimi_q: Riemann sum of Q is " << f.normalization
           << "; the grid does not cover the state (half-width " << grid.half_width << ")";
        throw GridError(os.str(), f.normalization);
    }
    return f;
}

std::vector<double> detect_revivals(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size())
        throw DimensionError("detect_revivals: time and value series differ in length");
    if (y.size() < 3)
        return {};
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double range = *hi - *lo;
    if (!(range > 0.0))
        return {};
    const double threshold = *lo + 0.5 * range;
    const double min_sep = 0.1 * (t.back() - t.front());

    std::vector<std::size_t> cand;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > threshold && y[i] >= y[i - 1] && y[i] > y[i + 1])
            cand.push_back(i);
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });

    std::vector<double> peaks;
    for (std::size_t i : cand) {
        const bool far = std::all_of(peaks.begin(), peaks.end(),
                                     [&](double p) { return std::abs(t[i] - p) >= min_sep; });
        if (far)
            peaks.push_back(t[i]);
    }
    std::sort(peaks.begin(), peaks.end());
    return peaks;
}

}  // namespace qrabi::observables
