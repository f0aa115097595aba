#include "qrabi/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qrabi/errors.hpp"
#include "qrabi/specfun.hpp"

namespace qrabi::model {

namespace {

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// (1/2) sqrt((chi +- Lambda)/chi) without cancellation when |Gamma| << |Lambda|.
struct MixingPair {
    double plus;
    double minus;
};

MixingPair mixing_coefficients(double gamma, double lambda, double chi) {
    if (chi == 0.0)
        return {0.5, 0.5};
    if (lambda >= 0.0) {
        return {0.5 * std::sqrt((chi + lambda) / chi),
                0.5 * std::abs(gamma) / std::sqrt(chi * (chi + lambda))};
    }
    return {0.5 * std::abs(gamma) / std::sqrt(chi * (chi - lambda)),
            0.5 * std::sqrt((chi - lambda) / chi)};
}

}  // namespace

void ModelParams::validate() const {
    if (!(omega > 0.0))
        throw ConfigError("model: omega must be positive");
    if (!(std::abs(g) < 0.5 * omega)) {
        std::ostringstream os;
        os << "model: |g| = " << std::abs(g) << " reaches omega/2 = " << 0.5 * omega
           << "; the oscillator spectrum collapses (2g/omega >= 1) and the frame does not exist";
        throw CollapseRegimeError(os.str());
    }
    if (n_max < 0)
        throw ConfigError("model: n_max must be >= 0 (0 = automatic)");
}

bool ModelParams::adiabatic_warning() const {
    return std::abs(delta1) >= 0.25 * omega || std::abs(delta2) >= 0.25 * omega;
}

BogoliubovFrame build_frame(const ModelParams& params) {
    params.validate();
    const double w = params.omega;
    const double g = params.g;
    BogoliubovFrame f;
    f.Omega = std::sqrt((w - 2.0 * g) * (w + 2.0 * g));
    // nu = sinh r carries the sign of g; mu nu = g / Omega.
    f.nu = g * std::sqrt(2.0 / (f.Omega * (w + f.Omega)));
    f.mu = std::sqrt(1.0 + f.nu * f.nu);
    f.r = std::asinh(f.nu);
    const double scale = 1.0 / std::sqrt(f.Omega * (w + 2.0 * g));
    for (std::size_t i = 0; i < kTwoQubitLabels.size(); ++i)
        f.eta[i] = params.lambda_s(kTwoQubitLabels[i][0], kTwoQubitLabels[i][1]) * scale;
    f.zeta_plus = f.eta_of(1, 1) - f.eta_of(-1, 1);
    f.zeta_minus = f.eta_of(1, 1) - f.eta_of(1, -1);
    f.Lambda = 2.0 * params.lambda1 * params.lambda2 / (w + 2.0 * g);
    f.collapse_proximity = f.Omega / w;
    f.near_collapse = f.collapse_proximity < kNearCollapseThreshold;
    return f;
}

double oscillator_energy(const ModelParams& params, const BogoliubovFrame& frame, int n, int s1, int s2) {
    const double ls = params.lambda_s(s1, s2);
    return (n + 0.5) * frame.Omega - 0.5 * params.omega - ls * ls / (params.omega + 2.0 * params.g);
}

Eigen::Matrix4d adiabatic_block(const ModelParams& params, const BogoliubovFrame& frame, int n) {
    if (n < 0)
        throw std::invalid_argument("adiabatic_block: negative block index");
    const double d1 = 0.5 * params.delta1 * specfun::displaced_overlap({n, n, -frame.zeta_plus});
    const double d2 = 0.5 * params.delta2 * specfun::displaced_overlap({n, n, -frame.zeta_minus});
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i)
        h(i, i) = oscillator_energy(params, frame, n, kTwoQubitLabels[i][0], kTwoQubitLabels[i][1]);
    h(0, 1) = h(1, 0) = d1;
    h(2, 3) = h(3, 2) = d1;
    h(0, 2) = h(2, 0) = d2;
    h(1, 3) = h(3, 1) = d2;
    return h;
}

AdiabaticLevel adiabatic_levels(const ModelParams& params, const BogoliubovFrame& frame, int n) {
    if (n < 0)
        throw std::invalid_argument("adiabatic_levels: negative block index");
    AdiabaticLevel lv;
    lv.n = n;
    lv.E11 = oscillator_energy(params, frame, n, 1, 1);
    lv.delta1n = 0.5 * params.delta1 * specfun::displaced_overlap({n, n, -frame.zeta_plus});
    lv.delta2n = 0.5 * params.delta2 * specfun::displaced_overlap({n, n, -frame.zeta_minus});
    lv.Gamma_plus = lv.delta1n + lv.delta2n;
    lv.Gamma_minus = lv.delta1n - lv.delta2n;
    const double L = frame.Lambda;
    lv.chi_plus = std::hypot(lv.Gamma_plus, L);
    lv.chi_minus = std::hypot(lv.Gamma_minus, L);
    lv.E1_plus = lv.E11 + L + lv.chi_plus;
    lv.E1_minus = lv.E11 + L - lv.chi_plus;
    lv.E2_plus = lv.E11 + L + lv.chi_minus;
    lv.E2_minus = lv.E11 + L - lv.chi_minus;
    const auto eps = mixing_coefficients(lv.Gamma_plus, L, lv.chi_plus);
    const auto kap = mixing_coefficients(lv.Gamma_minus, L, lv.chi_minus);
    lv.eps_plus = eps.plus;
    lv.eps_minus = eps.minus;
    lv.kap_plus = kap.plus;
    lv.kap_minus = kap.minus;
    lv.sign_plus = sign_of(lv.Gamma_plus);
    lv.sign_minus = sign_of(lv.Gamma_minus);
    return lv;
}

Eigen::Matrix4d AdiabaticLevel::eigenvectors() const {
    Eigen::Matrix4d v;
    v.col(0) << eps_minus, sign_plus * eps_plus, sign_plus * eps_plus, eps_minus;
    v.col(1) << eps_plus, -sign_plus * eps_minus, -sign_plus * eps_minus, eps_plus;
    v.col(2) << kap_minus, sign_minus * kap_plus, -sign_minus * kap_plus, -kap_minus;
    v.col(3) << kap_plus, -sign_minus * kap_minus, sign_minus * kap_minus, -kap_plus;
    return v;
}

std::vector<AdiabaticLevel> adiabatic_levels_upto(const ModelParams& params,
                                                  const BogoliubovFrame& frame, int n_max) {
    std::vector<AdiabaticLevel> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        out.push_back(adiabatic_levels(params, frame, n));
    return out;
}

std::vector<double> adiabatic_spectrum(const ModelParams& params, const BogoliubovFrame& frame,
                                       int count, int n_blocks) {
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(4 * n_blocks));
    for (int n = 0; n < n_blocks; ++n) {
        const auto lv = adiabatic_levels(params, frame, n);
        all.insert(all.end(), {lv.E1_plus, lv.E1_minus, lv.E2_plus, lv.E2_minus});
    }
    std::sort(all.begin(), all.end());
    if (static_cast<int>(all.size()) > count)
        all.resize(static_cast<std::size_t>(count));
    return all;
}

ApproxLevels approx_levels_small_zeta(const ModelParams& params, const BogoliubovFrame& frame, int n) {
    const double zp2 = frame.zeta_plus * frame.zeta_plus;
    const double zm2 = frame.zeta_minus * frame.zeta_minus;
    const double d10 = 0.5 * params.delta1 * std::exp(-0.5 * zp2);
    const double d20 = 0.5 * params.delta2 * std::exp(-0.5 * zm2);
    const double L = frame.Lambda;
    const double e11 = oscillator_energy(params, frame, n, 1, 1);

    // Gamma_n ~ Gamma_0 - slope n with L_n(x) ~ 1 - n x, then chi linearized about n = 0.
    auto branch = [&](double gamma0, double slope) {
        const double chi0 = std::hypot(gamma0, L);
        const double ratio = chi0 > 0.0 ? gamma0 / chi0 : sign_of(gamma0);
        return chi0 - ratio * slope * n;
    };
    const double chi_p = branch(d10 + d20, zp2 * d10 + zm2 * d20);
    const double chi_m = branch(d10 - d20, zp2 * d10 - zm2 * d20);

    ApproxLevels out;
    out.E1_plus = e11 + L + chi_p;
    out.E1_minus = e11 + L - chi_p;
    out.E2_plus = e11 + L + chi_m;
    out.E2_minus = e11 + L - chi_m;
    out.zeta_warning = zp2 > 0.2 || zm2 > 0.2;
    return out;
}

double revival_time_estimate(const ModelParams& params, const BogoliubovFrame& frame, int k) {
    if (k < 0)
        throw std::invalid_argument("revival_time_estimate: k must be >= 0");
    if (!nearly_equal(params.delta1, params.delta2) || !nearly_equal(params.lambda1, params.lambda2))
        throw UnsupportedConfigurationError(
            "revival_time_estimate: only identical qubits with equal couplings are supported");
    const double eta10 = params.lambda1 / std::sqrt(frame.Omega * (params.omega + 2.0 * params.g));
    const double delta_tilde = params.delta1 * std::exp(-2.0 * eta10 * eta10);
    const double rate = 4.0 * eta10 * eta10 * delta_tilde;
    if (k == 0)
        return 0.0;
    if (rate == 0.0)
        throw UnsupportedConfigurationError("revival_time_estimate: zero coupling or splitting has no revivals");
    return params.omega * 2.0 * std::numbers::pi * k / rate;
}

}  // namespace qrabi::model
