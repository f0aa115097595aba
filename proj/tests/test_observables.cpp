#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "qrabi/dynamics.hpp"
#include "qrabi/errors.hpp"
#include "qrabi/observables.hpp"
#include "qrabi/oracle.hpp"

using namespace qrabi;
using observables::cplx;
using qmat::CMatrix;
using qmat::DensityMatrix;

namespace {

DensityMatrix two_qubit(const CMatrix& m) { return DensityMatrix(m, qmat::Subsystem::two_qubit); }

DensityMatrix projector(const Eigen::VectorXcd& v) {
    const Eigen::VectorXcd n = v.normalized();
    return two_qubit(n * n.adjoint());
}

Eigen::VectorXcd basis(int q) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(q) = 1.0;
    return v;
}

Eigen::VectorXcd bell(int k) { return observables::bell_basis().row(k).transpose(); }

CMatrix random_mixed(std::mt19937_64& rng, int dim, int rank) {
    std::normal_distribution<double> n;
    CMatrix a(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j)
            a(i, j) = cplx(n(rng), n(rng));
    CMatrix rho = a * a.adjoint();
    return rho / rho.trace();
}

Eigen::VectorXcd random_qubit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Eigen::VectorXcd v(2);
    v << cplx(n(rng), n(rng)), cplx(n(rng), n(rng));
    return v.normalized();
}

const CMatrix& pauli(int i) {
    static const std::array<CMatrix, 3> p = [] {
        std::array<CMatrix, 3> s;
        for (auto& m : s)
            m = CMatrix::Zero(2, 2);
        s[0](0, 1) = s[0](1, 0) = 1.0;
        s[1](0, 1) = cplx(0, -1);
        s[1](1, 0) = cplx(0, 1);
        s[2](0, 0) = 1.0;
        s[2](1, 1) = -1.0;
        return s;
    }();
    return p[static_cast<std::size_t>(i)];
}

}  // namespace

TEST_CASE("population inversion") {
    CHECK(observables::population_inversion(projector(basis(0))) == doctest::Approx(1.0));
    CHECK(observables::population_inversion(projector(basis(3))) == doctest::Approx(-1.0));
    CHECK(observables::population_inversion(two_qubit(CMatrix::Identity(4, 4) / 4.0)) == doctest::Approx(0.0));
}

TEST_CASE("relative entropy of coherence") {
    CHECK(observables::relative_entropy_coherence(projector(basis(0))) == doctest::Approx(0.0));
    CHECK(observables::relative_entropy_coherence(projector(basis(0) + basis(3))) == doctest::Approx(1.0));
    CHECK(observables::relative_entropy_coherence(projector(Eigen::VectorXcd::Ones(4))) == doctest::Approx(2.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
    for (int k = 0; k < 20; ++k) {
        const CMatrix rho = random_mixed(rng, 4, 2);
        Eigen::VectorXcd d(4);
        for (int i = 0; i < 4; ++i)
            d(i) = std::polar(1.0, phase(rng));
        const CMatrix u = d.asDiagonal();
        const double c = observables::relative_entropy_coherence(two_qubit(rho));
        CHECK(c >= -1e-12);
        CHECK(c <= 2.0 + 1e-12);
        CHECK(std::abs(observables::relative_entropy_coherence(two_qubit(u * rho * u.adjoint())) - c) < 1e-10);
    }
}

TEST_CASE("Bloch decomposition") {
    const auto mixed = observables::bloch_decomposition(two_qubit(CMatrix::Identity(4, 4) / 4.0));
    CHECK(mixed.a.norm() < 1e-15);
    CHECK(mixed.b.norm() < 1e-15);
    CHECK(mixed.T.norm() < 1e-15);

    const auto up = observables::bloch_decomposition(projector(basis(0)));
    CHECK((up.a - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
    CHECK((up.b - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
    CHECK((up.T - Eigen::Vector3d(0, 0, 1).asDiagonal().toDenseMatrix()).norm() < 1e-15);

    // Index b(s1) + 2 b(s2): the Kronecker order is (s2) x (s1).
    std::mt19937_64 rng(9);
    const CMatrix id = CMatrix::Identity(2, 2);
    for (int k = 0; k < 20; ++k) {
        const CMatrix rho = random_mixed(rng, 4, 3);
        const auto bd = observables::bloch_decomposition(two_qubit(rho));
        CHECK((bd.reconstruct() - rho).cwiseAbs().maxCoeff() < 1e-10);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(bd.a(i) - (rho * Eigen::kroneckerProduct(pauli(i), id)).trace().real()) < 1e-12);
            CHECK(std::abs(bd.b(i) - (rho * Eigen::kroneckerProduct(id, pauli(i))).trace().real()) < 1e-12);
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(bd.T(i, j) - (rho * Eigen::kroneckerProduct(pauli(i), pauli(j))).trace().real()) <
                      1e-12);
        }
    }
}

TEST_CASE("geometric discord") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
        const Eigen::VectorXcd v = Eigen::kroneckerProduct(random_qubit(rng), random_qubit(rng));
        CHECK(std::abs(observables::geometric_discord(projector(v))) < 1e-10);
    }
    for (int k = 0; k < 4; ++k)
        CHECK(observables::geometric_discord(projector(bell(k))) == doctest::Approx(0.5).epsilon(1e-12));
    // Werner mixture: a = 0, T = p T_bell, D_G = p^2 / 2.
    const double p = 0.5;
    const CMatrix werner = p * projector(bell(0)).matrix() + (1 - p) / 4.0 * CMatrix::Identity(4, 4);
    CHECK(observables::geometric_discord(two_qubit(werner)) == doctest::Approx(p * p / 2).epsilon(1e-12));
}

TEST_CASE("concurrence") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 10; ++k) {
        const Eigen::VectorXcd v = Eigen::kroneckerProduct(random_qubit(rng), random_qubit(rng));
        CHECK(std::abs(observables::concurrence(projector(v))) < 1e-7);
    }
    for (int k = 0; k < 4; ++k)
        CHECK(observables::concurrence(projector(bell(k))) == doctest::Approx(1.0).epsilon(1e-10));
    // Werner: max(0, (3p - 1) / 2)
    for (double p : {0.2, 0.5, 0.9}) {
        const CMatrix werner = p * projector(bell(1)).matrix() + (1 - p) / 4.0 * CMatrix::Identity(4, 4);
        CHECK(observables::concurrence(two_qubit(werner)) ==
              doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-10));
    }
}

TEST_CASE("Bell basis is orthonormal") {
    const Eigen::Matrix4cd b = observables::bell_basis();
    CHECK((b * b.adjoint() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("closest pure state") {
    const auto phi_minus = observables::bell_reconstruct(projector(bell(1)));
    CHECK(phi_minus.coefficients.dominant() == 1);
    CHECK(std::abs(phi_minus.coefficients.alpha[1] - 1.0) < 1e-8);
    CHECK(phi_minus.d_min < 1e-6);
    CHECK(phi_minus.d_min_closed < 1e-7);
    CHECK(phi_minus.purity == doctest::Approx(1.0));
    CHECK_FALSE(phi_minus.degenerate);

    std::mt19937_64 rng(21);
    for (int k = 0; k < 10; ++k) {
        const auto rec = observables::bell_reconstruct(two_qubit(random_mixed(rng, 4, 2)), 17);
        double norm = 0.0;
        for (const auto& a : rec.coefficients.alpha)
            norm += std::norm(a);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(rec.d_min - rec.d_min_closed) < 1e-6);
        const auto& lead = rec.coefficients.alpha[static_cast<std::size_t>(rec.coefficients.dominant())];
        CHECK(std::abs(lead.imag()) < 1e-12);
        CHECK(lead.real() > 0.0);
    }
    CHECK(observables::bell_reconstruct(two_qubit(CMatrix::Identity(4, 4) / 4.0)).degenerate);
}

TEST_CASE("quadrature variance of classical states") {
    const int nf = 80;
    CMatrix vac = CMatrix::Zero(nf + 1, nf + 1);
    vac(0, 0) = 1.0;
    const auto v0 = observables::quadrature_variance(DensityMatrix(vac, qmat::Subsystem::oscillator));
    CHECK(v0.v_min == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_FALSE(v0.squeezed);

    const Eigen::VectorXcd coh = oracle::coherent_vector(cplx(1.5, -0.8), nf);
    const auto vc = observables::quadrature_variance(DensityMatrix(coh * coh.adjoint(), qmat::Subsystem::oscillator));
    CHECK(vc.v_min == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(vc.a_mean - cplx(1.5, -0.8)) < 1e-10);

    // Squeezed vacuum: e^{-2r} / 2
    const double r = 0.4;
    const Eigen::VectorXcd sq = oracle::brute_force_operator(oracle::OperatorKind::squeeze, r, nf).col(0);
    const auto vs = observables::quadrature_variance(DensityMatrix(sq * sq.adjoint(), qmat::Subsystem::oscillator));
    CHECK(vs.v_min == doctest::Approx(std::exp(-2 * r) / 2).epsilon(1e-10));
    CHECK(vs.squeezed);

    const Eigen::VectorXcd far = oracle::coherent_vector(6.0, 30).normalized();
    CHECK_THROWS_AS(observables::quadrature_variance(DensityMatrix(far * far.adjoint(), qmat::Subsystem::oscillator)),
                    ConvergenceError);
}

TEST_CASE("quadrature moments by two independent paths") {
    model::ModelParams p;
    p.delta1 = p.delta2 = 0.1;
    p.lambda1 = p.lambda2 = 0.05;
    p.g = 0.2;
    dynamics::InitialState init;
    init.alpha = cplx(1.0, 0.3);
    init.theta = 0.4;
    const auto st0 = dynamics::initial_coefficients(p, init);
    for (double t : {0.0, 150.0, 2000.0}) {
        const auto st = dynamics::evolve(st0, t);
        const auto fock = observables::quadrature_variance(dynamics::oscillator_rdm(st));
        const auto sums = observables::quadrature_variance_frame_sums(st);
        CHECK(std::abs(fock.v_min - sums.v_min) < 1e-7);
        CHECK(std::abs(fock.a_mean - sums.a_mean) < 1e-7);
        CHECK(std::abs(fock.a2_mean - sums.a2_mean) < 1e-7);
        CHECK(std::abs(fock.n_mean - sums.n_mean) < 1e-7);
    }
}

TEST_CASE("Husimi function") {
    const int nf = 60;
    CMatrix vac = CMatrix::Zero(nf + 1, nf + 1);
    vac(0, 0) = 1.0;
    const DensityMatrix rho_vac(vac, qmat::Subsystem::oscillator);
    const observables::HusimiGrid grid{cplx{}, 4.0, 81};
    const auto q = observables::husimi_q(rho_vac, grid, 2);
    CHECK(q.normalization == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(q.peak) < 1e-12);
    CHECK(q.peak_value == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
    const cplx beta = grid.at(50, 30);
    CHECK(q.q(30, 50) == doctest::Approx(std::exp(-std::norm(beta)) / std::numbers::pi).epsilon(1e-12));
    CHECK(q.q.maxCoeff() <= 1.0 / std::numbers::pi + 1e-12);
    CHECK(q.q.minCoeff() >= 0.0);

    const cplx alpha0(1.5, -0.7);
    const Eigen::VectorXcd coh = oracle::coherent_vector(alpha0, nf);
    const DensityMatrix rho_coh(coh * coh.adjoint(), qmat::Subsystem::oscillator);
    const auto grid_c = observables::default_husimi_grid(rho_coh);
    CHECK(std::abs(grid_c.center - alpha0) < 1e-10);
    const auto qc = observables::husimi_q(rho_coh, grid_c);
    CHECK(std::abs(qc.peak - alpha0) <= grid_c.spacing());
    CHECK(qc.normalization == doctest::Approx(1.0).epsilon(1e-3));

    const observables::HusimiGrid tiny{cplx{}, 0.5, 21};
    CHECK_THROWS_AS(observables::husimi_q(rho_vac, tiny), GridError);
}

TEST_CASE("revival detection") {
    std::vector<double> t, y;
    for (int i = 0; i <= 5000; ++i) {
        t.push_back(i * 0.01);
        y.push_back(std::cos(2 * std::numbers::pi * (t.back() - 2.5) / 10.0));
    }
    const auto peaks = observables::detect_revivals(t, y);
    REQUIRE(peaks.size() == 5);
    for (std::size_t k = 0; k < peaks.size(); ++k)
        CHECK(std::abs(peaks[k] - (2.5 + 10.0 * k)) <= 0.01);

    const std::vector<double> flat(t.size(), 0.3);
    CHECK(observables::detect_revivals(t, flat).empty());
    CHECK_THROWS_AS(observables::detect_revivals(t, std::vector<double>(3, 0.0)), DimensionError);
}

TEST_CASE("uncoupled qubits stay uncorrelated") {
    model::ModelParams p;
    p.delta1 = 0.1;
    p.delta2 = 0.07;
    p.g = 0.1;
    dynamics::InitialState init;
    init.alpha = 1.2;
    const auto st0 = dynamics::initial_coefficients(p, init);
    for (double t : {0.0, 37.0, 900.0}) {
        const auto rho = dynamics::two_qubit_rdm(dynamics::evolve(st0, t));
        CHECK(std::abs(observables::geometric_discord(rho)) < 1e-10);
        CHECK(std::abs(observables::concurrence(rho)) < 1e-7);
        CHECK(std::abs(qmat::von_neumann_entropy(rho)) < 1e-7);
    }
}
