#include "qrabi/specfun.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qrabi::specfun {

namespace {

constexpr int kLogFactorialTableSize = 1025;
constexpr int kHermiteRescaleBits = 256;

const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
    static const auto table = [] {
        std::array<double, kLogFactorialTableSize> t{};
        t[0] = 0.0;
        for (int k = 1; k < kLogFactorialTableSize; ++k)
            t[k] = t[k - 1] + std::log(static_cast<double>(k));
        return t;
    }();
    return table;
}

void require_index(int n, const char* what) {
    if (n < 0)
        throw std::invalid_argument(std::string(what) + ": negative index");
}

// s^2 = nu / (2 mu) expressed through the squeeze parameter.
struct SqueezeFactors {
    double mu;
    cplx nu;
};

SqueezeFactors squeeze_factors(cplx xi) {
    const double r = std::abs(xi);
    const double mu = std::cosh(r);
    const cplx nu = r > 0.0 ? std::polar(std::sinh(r), std::arg(xi)) : cplx{};
    return {mu, nu};
}

}  // namespace

double SqueezeDisplaceArgs::mu() const { return std::cosh(r); }

cplx SqueezeDisplaceArgs::nu() const { return std::polar(std::sinh(r), vartheta); }

double log_factorial(int n) {
    require_index(n, "log_factorial");
    if (n < kLogFactorialTableSize)
        return log_factorial_table()[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double laguerre_assoc(int n, int j, double x) {
    require_index(n, "laguerre_assoc");
    double prev = 1.0;
    if (n == 0)
        return prev;
    double cur = 1.0 + j - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + j - x) * cur - (k + j) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx hermite(int n, cplx z) {
    require_index(n, "hermite");
    cplx prev = 1.0;
    if (n == 0)
        return prev;
    cplx cur = 2.0 * z;
    for (int k = 1; k < n; ++k) {
        const cplx next = 2.0 * z * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx ScaledComplex::value() const {
    return {std::ldexp(mantissa.real(), static_cast<int>(exponent)),
            std::ldexp(mantissa.imag(), static_cast<int>(exponent))};
}

double ScaledComplex::log_abs() const {
    return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

ScaledComplex hermite_scaled(int n, cplx z) {
    require_index(n, "hermite_scaled");
    cplx prev = 1.0;
    long exponent = 0;
    if (n == 0)
        return {prev, 0};
    cplx cur = 2.0 * z;
    const double big = std::ldexp(1.0, kHermiteRescaleBits);
    for (int k = 1; k < n; ++k) {
        const cplx next = 2.0 * z * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > big) {
            cur = {std::ldexp(cur.real(), -kHermiteRescaleBits),
                   std::ldexp(cur.imag(), -kHermiteRescaleBits)};
            prev = {std::ldexp(prev.real(), -kHermiteRescaleBits),
                    std::ldexp(prev.imag(), -kHermiteRescaleBits)};
            exponent += kHermiteRescaleBits;
        }
    }
    // Normalize the mantissa so that log_abs stays accurate.
    int e = 0;
    const double mag = std::abs(cur);
    if (mag > 0.0) {
        std::frexp(mag, &e);
        cur = {std::ldexp(cur.real(), -e), std::ldexp(cur.imag(), -e)};
        exponent += e;
    }
    return {cur, exponent};
}

std::vector<cplx> normalized_hermite_sequence(int n_max, cplx zs, cplx s2) {
    require_index(n_max, "normalized_hermite_sequence");
    std::vector<cplx> g(static_cast<std::size_t>(n_max) + 1);
    g[0] = 1.0;
    if (n_max >= 1)
        g[1] = 2.0 * zs;
    for (int k = 1; k < n_max; ++k) {
        g[k + 1] = (2.0 * zs * g[k] - 2.0 * s2 * std::sqrt(static_cast<double>(k)) * g[k - 1]) /
                   std::sqrt(static_cast<double>(k + 1));
    }
    return g;
}

double displaced_overlap(const OverlapKernelArgs& args) {
    const int m = args.m;
    const int n = args.n;
    require_index(m, "displaced_overlap");
    require_index(n, "displaced_overlap");
    const double x = args.x;
    const int lo = std::min(m, n);
    const int order = std::abs(m - n);
    // m >= n: x^{m-n}; m < n: (-x)^{n-m}.
    const double base = m >= n ? x : -x;
    const double lag = laguerre_assoc(lo, order, x * x);
    if (order == 0)
        return std::exp(-0.5 * x * x) * lag;
    if (x == 0.0)
        return 0.0;
    // Prefactor assembled in log space; sqrt(lo!/hi!) and |x|^order overflow separately.
    const double log_pref = order * std::log(std::abs(base)) - 0.5 * x * x +
                            0.5 * (log_factorial(lo) - log_factorial(std::max(m, n)));
    const double sign = (base < 0.0 && (order % 2 == 1)) ? -1.0 : 1.0;
    return sign * std::exp(log_pref) * lag;
}

Eigen::MatrixXd displaced_overlap_matrix(int dim, double x) {
    Eigen::MatrixXd out(dim, dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            out(m, n) = displaced_overlap({m, n, x});
    return out;
}

cplx displacement_element(int m, cplx alpha, int n) {
    require_index(m, "displacement_element");
    require_index(n, "displacement_element");
    const double a2 = std::norm(alpha);
    const int lo = std::min(m, n);
    const int order = std::abs(m - n);
    const double lag = laguerre_assoc(lo, order, a2);
    if (order == 0)
        return std::exp(-0.5 * a2) * lag;
    if (a2 == 0.0)
        return 0.0;
    const cplx base = m >= n ? alpha : -std::conj(alpha);
    const double log_pref = order * std::log(std::abs(base)) - 0.5 * a2 +
                            0.5 * (log_factorial(lo) - log_factorial(std::max(m, n)));
    return std::polar(std::exp(log_pref), order * std::arg(base)) * lag;
}

namespace detail {

std::vector<cplx> small_squeeze_overlaps(double r, double eta, cplx alpha, int n_max) {
    require_index(n_max, "small_squeeze_overlaps");
    std::vector<cplx> out(static_cast<std::size_t>(n_max) + 1);
    // nu -> 0: <n|D(eta)|alpha> = e^{-eta^2/2 - |alpha|^2/2 - eta alpha} (eta+alpha)^n / sqrt(n!),
    // plus the first-order squeeze term (r/2) <n|D(eta)(a^dag^2 - a^2)|alpha>.
    const cplx shift = eta + alpha;
    const cplx pref = std::exp(-0.5 * eta * eta - 0.5 * std::norm(alpha) - eta * alpha);
    std::vector<cplx> v(out.size() + 2);
    v[0] = pref;
    for (std::size_t n = 1; n < v.size(); ++n)
        v[n] = v[n - 1] * shift / std::sqrt(static_cast<double>(n));
    // D(eta) a^dag = (a^dag - eta) D(eta)
    auto raise = [eta](const std::vector<cplx>& f, std::size_t n) {
        return (n > 0 ? std::sqrt(static_cast<double>(n)) * f[n - 1] : cplx{}) - eta * f[n];
    };
    std::vector<cplx> w(v.size());
    for (std::size_t n = 0; n < w.size(); ++n)
        w[n] = raise(v, n);
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = v[n] - 0.5 * r * (alpha * alpha * v[n] - raise(w, n));
    return out;
}

// S(xi) ~ 1 + (xi a^dag^2 - xi^* a^2)/2 below the branch threshold.
cplx small_squeeze_element(int m, cplx alpha, cplx xi, int n) {
    cplx out = displacement_element(m, alpha, n);
    if (xi == cplx{})
        return out;
    if (n >= 2)
        out -= 0.5 * std::conj(xi) * std::sqrt(n * (n - 1.0)) * displacement_element(m, alpha, n - 2);
    out += 0.5 * xi * std::sqrt((n + 1.0) * (n + 2.0)) * displacement_element(m, alpha, n + 2);
    return out;
}

}  // namespace detail

std::vector<cplx> squeezed_coherent_overlaps(double r, double eta, cplx alpha, int n_max) {
    require_index(n_max, "squeezed_coherent_overlaps");
    std::vector<cplx> out(static_cast<std::size_t>(n_max) + 1);
    if (std::abs(r) < kSqueezeBranchThreshold)
        return detail::small_squeeze_overlaps(r, eta, alpha, n_max);
    const double mu = std::cosh(r);
    const double nu = std::sinh(r);
    const cplx zs = cplx{0.0, -1.0} * ((mu - nu) * eta + alpha) / (2.0 * mu);
    const auto g = normalized_hermite_sequence(n_max, zs, nu / (2.0 * mu));
    const cplx pref = std::exp(-(mu - nu) * eta * eta / (2.0 * mu) - 0.5 * std::norm(alpha) -
                               alpha * alpha * nu / (2.0 * mu) - eta * alpha / mu) /
                      std::sqrt(mu);
    cplx phase = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        out[static_cast<std::size_t>(n)] = pref * phase * g[static_cast<std::size_t>(n)];
        phase *= cplx{0.0, 1.0};
    }
    return out;
}

cplx squeezed_coherent_overlap(const SqueezeDisplaceArgs& args) {
    require_index(args.n, "squeezed_coherent_overlap");
    if (args.vartheta == 0.0 || std::abs(args.r) < kSqueezeBranchThreshold)
        return squeezed_coherent_overlaps(args.r, args.eta, args.alpha, args.n)
            [static_cast<std::size_t>(args.n)];
    // Complex squeeze phase: S(xi) D(alpha)|0> = D(alpha mu + alpha^* nu) S(xi)|0>,
    // then D(eta) D(gamma) = e^{-i eta Im gamma} D(eta + gamma).
    const cplx xi = std::polar(args.r, args.vartheta);
    const double mu = args.mu();
    const cplx nu = args.nu();
    const cplx gamma = args.alpha * mu + std::conj(args.alpha) * nu;
    const cplx phase = std::exp(cplx{0.0, -args.eta * gamma.imag()});
    return phase * disp_squeeze_matrix_element(args.n, args.eta + gamma, xi, 0);
}

namespace {

// <m|D(alpha)S(xi)|n> =
//   e^{-|alpha|^2/2 + alpha^*2 nu/(2mu)} i^m / sqrt(mu)
//   * sum_k (-i)^k mu^-k sqrt(C(m,k) C(n,k)) A_{m-k} B_{n-k}
// where A_j = s^j H_j(-i(mu alpha - nu alpha^*)/sqrt(2 mu nu)) / sqrt(j!), s^2 = nu/(2mu),
//       B_j = t^j H_j(-alpha^*/sqrt(2 mu nu^*)) / sqrt(j!),            t^2 = nu^*/(2mu).
struct DispSqueezeKernel {
    double mu;
    cplx prefactor;
    std::vector<cplx> a_seq;
    std::vector<cplx> b_seq;

    DispSqueezeKernel(int m_max, int n_max, cplx alpha, cplx xi) {
        const auto [mu_, nu] = squeeze_factors(xi);
        mu = mu_;
        const cplx zs_a = cplx{0.0, -1.0} * (mu * alpha - nu * std::conj(alpha)) / (2.0 * mu);
        const cplx zs_b = -std::conj(alpha) / (2.0 * mu);
        a_seq = normalized_hermite_sequence(m_max, zs_a, nu / (2.0 * mu));
        b_seq = normalized_hermite_sequence(n_max, zs_b, std::conj(nu) / (2.0 * mu));
        prefactor = std::exp(-0.5 * std::norm(alpha) +
                             std::conj(alpha) * std::conj(alpha) * nu / (2.0 * mu)) /
                    std::sqrt(mu);
    }

    cplx element(int m, int n) const {
        static const cplx kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const int kmax = std::min(m, n);
        const double lfm = log_factorial(m);
        const double lfn = log_factorial(n);
        cplx sum = 0.0;
        for (int k = 0; k <= kmax; ++k) {
            const double log_binom = 0.5 * (lfm + lfn) - log_factorial(k) -
                                     0.5 * (log_factorial(m - k) + log_factorial(n - k));
            const double w = std::exp(log_binom - k * std::log(mu));
            sum += kPowI[(4 - k % 4) % 4] * w * a_seq[static_cast<std::size_t>(m - k)] *
                   b_seq[static_cast<std::size_t>(n - k)];
        }
        return prefactor * kPowI[m % 4] * sum;
    }
};

}  // namespace

cplx disp_squeeze_matrix_element(int m, cplx alpha, cplx xi, int n) {
    require_index(m, "disp_squeeze_matrix_element");
    require_index(n, "disp_squeeze_matrix_element");
    if (std::abs(xi) < kSqueezeBranchThreshold)
        return detail::small_squeeze_element(m, alpha, xi, n);
    return DispSqueezeKernel(m, n, alpha, xi).element(m, n);
}

Eigen::MatrixXcd disp_squeeze_matrix(int rows, int cols, cplx alpha, cplx xi) {
    Eigen::MatrixXcd out(rows, cols);
    if (rows == 0 || cols == 0)
        return out;
    if (std::abs(xi) < kSqueezeBranchThreshold) {
        for (int m = 0; m < rows; ++m)
            for (int n = 0; n < cols; ++n)
                out(m, n) = detail::small_squeeze_element(m, alpha, xi, n);
        return out;
    }
    const DispSqueezeKernel kernel(rows - 1, cols - 1, alpha, xi);
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n)
            out(m, n) = kernel.element(m, n);
    return out;
}

}  // namespace qrabi::specfun
