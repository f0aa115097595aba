#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qrabi/oracle.hpp"
#include "qrabi/specfun.hpp"

using namespace qrabi;
using specfun::cplx;

namespace {

// L_n^{(j)}(x) = sum_k (-1)^k C(n+j, n-k) x^k / k!, valid for j >= 0.
// Returns the sum and the sum of absolute terms (the cancellation scale).
std::pair<double, double> laguerre_sum(int n, int j, double x) {
    long double s = 0.0L, scale = 0.0L;
    for (int k = 0; k <= n; ++k) {
        const long double binom =
            std::exp(std::lgamma(n + j + 1.0L) - std::lgamma(n - k + 1.0L) - std::lgamma(j + k + 1.0L));
        const long double term = binom * std::pow(static_cast<long double>(x), k) / std::tgamma(k + 1.0L);
        s += k % 2 ? -term : term;
        scale += term;
    }
    return {static_cast<double>(s), static_cast<double>(scale)};
}

}  // namespace

TEST_CASE("log_factorial") {
    CHECK(specfun::log_factorial(0) == 0.0);
    CHECK(specfun::log_factorial(1) == 0.0);
    long double exact = 0.0L;
    for (int k = 2; k <= 20; ++k)
        exact += std::log(static_cast<long double>(k));
    CHECK(specfun::log_factorial(20) == doctest::Approx(static_cast<double>(exact)).epsilon(1e-13));
    CHECK(specfun::log_factorial(20) == doctest::Approx(42.335616460753485).epsilon(1e-13));
    CHECK(specfun::log_factorial(2000) == doctest::Approx(std::lgamma(2001.0)).epsilon(1e-13));
}

TEST_CASE("laguerre_assoc against the finite sum") {
    CHECK(specfun::laguerre_assoc(0, 3, 7.2) == 1.0);
    for (double x : {0.0, 0.3, 1.7, 4.0})
        CHECK(specfun::laguerre_assoc(1, 0, x) == doctest::Approx(1.0 - x));
    // L_2^{(1)}(x) = 3 - 3x + x^2/2
    CHECK(specfun::laguerre_assoc(2, 1, 0.5) == doctest::Approx(3.0 - 1.5 + 0.125).epsilon(1e-14));
    for (int n = 0; n <= 25; ++n)
        for (int j : {0, 1, 4, 9})
            for (double x : {0.05, 0.8, 2.5}) {
                const auto [ref, scale] = laguerre_sum(n, j, x);
                CHECK(std::abs(specfun::laguerre_assoc(n, j, x) - ref) <= 1e-12 * scale);
            }
}

TEST_CASE("hermite values and scaled representation") {
    const cplx z(1.3, 0.0);
    CHECK(std::abs(specfun::hermite(0, z) - 1.0) == 0.0);
    CHECK(std::abs(specfun::hermite(1, cplx(0.4, -0.2)) - cplx(0.8, -0.4)) < 1e-15);
    // H_5 = 32 z^5 - 160 z^3 + 120 z
    auto h5 = [](cplx x) { return 32.0 * std::pow(x, 5) - 160.0 * std::pow(x, 3) + 120.0 * x; };
    CHECK(std::abs(specfun::hermite(5, z) - h5(z)) < 1e-12 * std::abs(h5(z)));
    const cplx w(0.7, -1.1);
    CHECK(std::abs(specfun::hermite(5, w) - h5(w)) < 1e-12 * std::abs(h5(w)));

    for (int n : {10, 40, 80})
        for (cplx x : {cplx(2.0, 0.0), cplx(-1.5, 3.0)}) {
            const cplx direct = specfun::hermite(n, x);
            CHECK(std::abs(specfun::hermite_scaled(n, x).value() - direct) < 1e-12 * std::abs(direct));
        }
    // Beyond double range: the scaled form stays finite and grows like (2z)^n (1 - n(n-1)/(4z^2)).
    const auto big = specfun::hermite_scaled(400, cplx(2000.0, 0.0));
    CHECK(std::isfinite(big.log_abs()));
    CHECK(big.log_abs() == doctest::Approx(400 * std::log(4000.0) + std::log1p(-400.0 * 399.0 / (4 * 2000.0 * 2000.0))).epsilon(1e-7));
}

TEST_CASE("Mehler summation identity") {
    for (double t : {-0.7, -0.3, 0.2, 0.7})
        for (double x : {-2.0, -0.5, 1.0, 2.0})
            for (double y : {-1.5, 0.0, 2.0}) {
                double lhs = 0.0;
                for (int n = 0; n <= 160; ++n)
                    lhs += std::exp(n * std::log(std::abs(t) / 2.0) - specfun::log_factorial(n)) *
                           (t < 0 && n % 2 ? -1.0 : 1.0) * specfun::hermite(n, x).real() *
                           specfun::hermite(n, y).real();
                const double rhs = std::exp(-(t * t * x * x - 2 * t * x * y + t * t * y * y) / (1 - t * t)) /
                                   std::sqrt(1 - t * t);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
            }
}

TEST_CASE("displaced_overlap examples") {
    for (int n : {0, 3, 17})
        CHECK(specfun::displaced_overlap({n, n, 0.0}) == doctest::Approx(1.0));
    for (double x : {-1.2, 0.3, 2.5})
        CHECK(specfun::displaced_overlap({0, 0, x}) == doctest::Approx(std::exp(-x * x / 2)).epsilon(1e-14));
    const auto d = oracle::brute_force_operator(oracle::OperatorKind::displacement, 0.4, 64);
    CHECK(std::abs(specfun::displaced_overlap({3, 1, 0.4}) - d(3, 1)) < 1e-9);
    for (int m = 0; m < 30; ++m)
        CHECK(std::abs(specfun::displaced_overlap({m, 1, 0.4}) - d(m, 1)) < 1e-9);
}

TEST_CASE("displaced_overlap reflection identities") {
    double worst = 0.0;
    for (int m = 0; m <= 40; ++m)
        for (int n = 0; n <= 40; ++n)
            for (double x : {-5.0, -2.2, -0.6, 0.0, 0.9, 3.1, 5.0}) {
                const double v = specfun::displaced_overlap({m, n, x});
                const double sgn = (m + n) % 2 ? -1.0 : 1.0;
                worst = std::max(worst, std::abs(v - sgn * specfun::displaced_overlap({n, m, x})));
                worst = std::max(worst, std::abs(v - sgn * specfun::displaced_overlap({m, n, -x})));
            }
    CHECK(worst < 1e-10);
}

TEST_CASE("displaced_overlap rows are unit vectors") {
    const int n_max = 90;
    for (double x : {-2.0, -0.7, 0.5, 2.0}) {
        const auto m = specfun::displaced_overlap_matrix(n_max + 1, x);
        for (int row = 0; row <= 20; ++row)
            CHECK(m.row(row).squaredNorm() == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("large indices stay finite") {
    const double v = specfun::displaced_overlap({300, 280, 1.5});
    CHECK(std::isfinite(v));
    CHECK(std::abs(v) <= 1.0);
}

TEST_CASE("squeeze algebra") {
    for (double r : {0.0, 0.1, 0.8, 2.0}) {
        specfun::SqueezeDisplaceArgs a;
        a.r = r;
        a.vartheta = 0.3;
        CHECK(a.mu() * a.mu() - std::norm(a.nu()) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("squeezed_coherent_overlap examples") {
    const cplx alpha(0.8, -0.3);
    specfun::SqueezeDisplaceArgs a;
    a.alpha = alpha;
    CHECK(std::abs(specfun::squeezed_coherent_overlap(a) - std::exp(-std::norm(alpha) / 2)) < 1e-14);

    // r = 0: <n| D(eta) |alpha> from a dense displacement of the coherent vector.
    const int nf = 96;
    const auto coh = oracle::coherent_vector(0.6, nf);
    const Eigen::VectorXcd disp = oracle::brute_force_operator(oracle::OperatorKind::displacement, 0.35, nf) * coh;
    for (int n = 0; n < 20; ++n) {
        specfun::SqueezeDisplaceArgs b;
        b.alpha = 0.6;
        b.eta = 0.35;
        b.n = n;
        CHECK(std::abs(specfun::squeezed_coherent_overlap(b) - disp(n)) < 1e-10);
    }

    // r = 0.5: <n| D(eta) S(r) |alpha>
    const auto coh2 = oracle::coherent_vector(0.5, nf);
    const Eigen::VectorXcd ds = oracle::brute_force_operator(oracle::OperatorKind::displacement, 0.2, nf) *
                                (oracle::brute_force_operator(oracle::OperatorKind::squeeze, 0.5, nf) * coh2);
    specfun::SqueezeDisplaceArgs c;
    c.r = 0.5;
    c.eta = 0.2;
    c.alpha = 0.5;
    c.n = 2;
    CHECK(std::abs(specfun::squeezed_coherent_overlap(c) - ds(2)) < 1e-9);
    const auto seq = specfun::squeezed_coherent_overlaps(0.5, 0.2, 0.5, 30);
    for (int n = 0; n <= 30; ++n)
        CHECK(std::abs(seq[static_cast<std::size_t>(n)] - ds(n)) < 1e-9);

    // Complex squeeze phase.
    const cplx xi = std::polar(0.4, 0.9);
    const Eigen::VectorXcd ds2 = oracle::brute_force_operator(oracle::OperatorKind::displacement, -0.3, nf) *
                                 (oracle::brute_force_operator(oracle::OperatorKind::squeeze, xi, nf) *
                                  oracle::coherent_vector(alpha, nf));
    for (int n = 0; n < 12; ++n) {
        specfun::SqueezeDisplaceArgs d;
        d.r = 0.4;
        d.vartheta = 0.9;
        d.eta = -0.3;
        d.alpha = alpha;
        d.n = n;
        CHECK(std::abs(specfun::squeezed_coherent_overlap(d) - ds2(n)) < 1e-9);
    }
}

TEST_CASE("small-squeeze branch matches the general branch") {
    const double r = 2.0 * specfun::kSqueezeBranchThreshold;
    for (double eta : {-0.05, 0.0, 0.08})
        for (cplx alpha : {cplx(0.1, 0.0), cplx(-0.05, 0.1)}) {
            const auto general = specfun::squeezed_coherent_overlaps(r, eta, alpha, 6);
            const auto limit = specfun::detail::small_squeeze_overlaps(r, eta, alpha, 6);
            for (std::size_t n = 0; n < general.size(); ++n)
                CHECK(std::abs(general[n] - limit[n]) < 1e-7);
        }
}

TEST_CASE("disp_squeeze_matrix_element") {
    CHECK(std::abs(specfun::disp_squeeze_matrix_element(0, 0.0, 0.0, 0) - 1.0) < 1e-15);
    for (int m = 0; m < 5; ++m)
        for (int n = 0; n < 5; ++n)
            if (m != n)
                CHECK(std::abs(specfun::disp_squeeze_matrix_element(m, 0.0, 0.0, n)) < 1e-15);

    const int nf = 96;
    const cplx alpha(0.3, 0.1);
    for (cplx xi : {cplx(0.4, 0.0), std::polar(0.6, -1.2)}) {
        const Eigen::MatrixXcd ds = oracle::brute_force_operator(oracle::OperatorKind::displacement, alpha, nf) *
                                    oracle::brute_force_operator(oracle::OperatorKind::squeeze, xi, nf);
        CHECK(std::abs(specfun::disp_squeeze_matrix_element(2, alpha, xi, 1) - ds(2, 1)) < 1e-9);
        const auto block = specfun::disp_squeeze_matrix(25, 25, alpha, xi);
        CHECK((block - ds.topLeftCorner(25, 25)).cwiseAbs().maxCoeff() < 1e-9);
    }
    // Small squeeze branch.
    const cplx xi_edge = std::polar(2.0 * specfun::kSqueezeBranchThreshold, 0.7);
    const auto general = specfun::disp_squeeze_matrix(10, 10, alpha, xi_edge);
    for (int m = 0; m < 10; ++m)
        for (int n = 0; n < 10; ++n)
            CHECK(std::abs(general(m, n) - specfun::detail::small_squeeze_element(m, alpha, xi_edge, n)) < 1e-7);
    const auto none = specfun::disp_squeeze_matrix(10, 10, alpha, 0.0);
    for (int m = 0; m < 10; ++m)
        for (int n = 0; n < 10; ++n)
            CHECK(std::abs(none(m, n) - specfun::displacement_element(m, alpha, n)) < 1e-14);
}
