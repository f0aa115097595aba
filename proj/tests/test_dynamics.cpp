#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>

#include "qrabi/dynamics.hpp"
#include "qrabi/errors.hpp"
#include "qrabi/oracle.hpp"
#include "qrabi/specfun.hpp"

using namespace qrabi;
using dynamics::cplx;
using qmat::CMatrix;

namespace {

model::ModelParams params(double delta, double lambda, double g) {
    model::ModelParams p;
    p.delta1 = p.delta2 = delta;
    p.lambda1 = p.lambda2 = lambda;
    p.g = g;
    return p;
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("frame columns against dense operators and closed-form elements") {
    struct Case {
        model::ModelParams p;
        double closed_form_tol;  // the alternating double sum loses digits at large eta and r
    };
    for (const auto& [p, tol] : {Case{params(0.1, 0.05, 0.2), 1e-11}, Case{params(0.1, 0.1, 0.0), 1e-11},
                                 Case{params(0.1, 0.3, -0.35), 5e-8}}) {
        const auto frame = model::build_frame(p);
        const int cols = 30, rows = 200, nf = 400;
        const Eigen::MatrixXcd s = oracle::brute_force_operator(oracle::OperatorKind::squeeze, frame.r, nf);
        for (double eta : {frame.eta[0], frame.eta[3], 0.0}) {
            const Eigen::MatrixXd u = dynamics::frame_columns(frame, eta, cols, rows);
            const Eigen::MatrixXcd ds = oracle::brute_force_operator(oracle::OperatorKind::displacement, eta, nf) * s;
            CHECK(max_diff(u.cast<cplx>(), ds.adjoint().topLeftCorner(rows, cols)) < 1e-12);
            const Eigen::MatrixXcd b = specfun::disp_squeeze_matrix(cols, rows, eta, frame.r);
            CHECK(max_diff(u.cast<cplx>(), b.adjoint()) < tol);
            CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(cols, cols)).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
}

TEST_CASE("initial state at t = 0") {
    const auto p = params(0.1, 0.05, 0.1);
    dynamics::InitialState init;
    init.alpha = cplx(1.2, -0.4);
    const auto st = dynamics::initial_coefficients(p, init);
    CHECK(st.t == 0.0);
    CHECK(st.truncation_residual < 1e-8);
    CHECK(st.norm_squared() == doctest::Approx(1.0).epsilon(1e-8));

    const auto rho = dynamics::two_qubit_rdm(st);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    CHECK(max_diff(rho.matrix(), expected) < 1e-8);

    const auto osc = dynamics::oscillator_rdm(st);
    const Eigen::VectorXcd coh = oracle::coherent_vector(init.alpha, st.n_max());
    CHECK(max_diff(osc.matrix(), coh * coh.adjoint()) < 1e-8);

    init.theta = std::numbers::pi / 4;
    init.phi = 0.0;
    const auto bell = dynamics::two_qubit_rdm(dynamics::initial_coefficients(p, init));
    expected.setZero();
    expected(0, 0) = expected(3, 3) = expected(0, 3) = expected(3, 0) = 0.5;
    CHECK(max_diff(bell.matrix(), expected) < 1e-8);
}

TEST_CASE("evolution is additive in time") {
    const auto p = params(0.1, 0.05, 0.2);
    dynamics::InitialState init;
    init.alpha = 0.8;
    init.theta = 0.3;
    init.phi = 1.1;
    const auto st = dynamics::initial_coefficients(p, init);
    const auto a = dynamics::evolve(dynamics::evolve(st, 123.4), 56.7);
    const auto b = dynamics::evolve(st, 180.1);
    CHECK(b.t == doctest::Approx(180.1));
    CHECK((a.c1_plus - b.c1_plus).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.c2_minus - b.c2_minus).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_diff(dynamics::two_qubit_rdm(a).matrix(), dynamics::two_qubit_rdm(b).matrix()) < 1e-12);
    CHECK(b.norm_squared() == doctest::Approx(st.norm_squared()).epsilon(1e-13));
}

TEST_CASE("reduced matrix agrees with the assembled state vector") {
    auto p = params(0.1, 0.04, 0.05);
    p.delta2 = 0.07;
    p.n_max = 6;
    dynamics::InitialState init;
    init.alpha = 0.05;
    init.theta = 0.4;
    init.phi = 0.3;
    dynamics::TruncationSettings loose;
    loose.epsilon = 1e-6;
    const auto st0 = dynamics::initial_coefficients(p, init, loose);
    CHECK(st0.n_max() == 6);
    for (double t : {0.0, 17.0, 250.0}) {
        const auto st = dynamics::evolve(st0, t);
        const int nf = 60;
        const Eigen::VectorXcd psi = dynamics::product_basis_state(st, nf);
        CHECK(max_diff(dynamics::two_qubit_rdm(st).matrix(), oracle::two_qubit_rdm(psi, nf).matrix()) < 1e-9);
    }
}

TEST_CASE("without qubit splitting the evolution is exact") {
    const auto p = params(0.0, 0.1, 0.15);
    dynamics::InitialState init;
    init.alpha = cplx(0.5, 0.2);
    init.theta = 0.6;
    init.phi = -0.4;
    const auto st0 = dynamics::initial_coefficients(p, init);
    const int nf = 50;
    const auto h = oracle::build_full_hamiltonian(p, nf);
    const oracle::SpectralPropagator prop(h, p.omega);
    const Eigen::VectorXcd psi0 = oracle::product_initial_state(init, nf);
    for (double t : {3.0, 41.5}) {
        const Eigen::VectorXcd psi = prop.evolve(psi0, t);
        const auto st = dynamics::evolve(st0, t);
        CHECK(max_diff(dynamics::two_qubit_rdm(st).matrix(), oracle::two_qubit_rdm(psi, nf).matrix()) < 1e-8);
        const auto osc_exact = oracle::oscillator_rdm(psi, nf).matrix();
        const auto osc = dynamics::oscillator_rdm(st).matrix();
        const int k = static_cast<int>(std::min(osc.rows(), osc_exact.rows()));
        CHECK(max_diff(osc.topLeftCorner(k, k), osc_exact.topLeftCorner(k, k)) < 1e-8);
    }
}

TEST_CASE("single-qubit states are partial traces") {
    const auto p = params(0.1, 0.05, 0.2);
    dynamics::InitialState init;
    init.alpha = 1.0;
    init.theta = 0.7;
    const auto st = dynamics::evolve(dynamics::initial_coefficients(p, init), 300.0);
    const auto rho = dynamics::two_qubit_rdm(st);
    const auto single = dynamics::single_qubit_rdms(rho);
    // Index b(s1) + 2 b(s2): the tensor order is (s2) x (s1).
    const std::array<int, 2> dims{2, 2};
    const std::array<int, 1> keep_s1{1};
    const std::array<int, 1> keep_s2{0};
    CHECK(max_diff(single.qubit1.matrix(), qmat::partial_trace(rho.matrix(), dims, keep_s1)) < 1e-15);
    CHECK(max_diff(single.qubit2.matrix(), qmat::partial_trace(rho.matrix(), dims, keep_s2)) < 1e-15);
}

TEST_CASE("qubit-oscillator state is consistent with its marginals") {
    const auto p = params(0.1, 0.05, 0.2);
    dynamics::InitialState init;
    init.alpha = 0.8;
    init.theta = 0.5;
    const auto st = dynamics::evolve(dynamics::initial_coefficients(p, init), 777.0);
    const auto joint = dynamics::qubit_osc_rdm(st);
    const int nf = st.n_max() + 1;
    CHECK(joint.dim() == 2 * nf);
    CHECK(joint.trace() == doctest::Approx(1.0).epsilon(1e-8));
    const std::array<int, 2> dims{2, nf};
    const std::array<int, 1> keep_q{0};
    const std::array<int, 1> keep_o{1};
    const auto single = dynamics::single_qubit_rdms(dynamics::two_qubit_rdm(st));
    CHECK(max_diff(qmat::partial_trace(joint.matrix(), dims, keep_q), single.qubit1.matrix()) < 1e-8);
    CHECK(max_diff(qmat::partial_trace(joint.matrix(), dims, keep_o), dynamics::oscillator_rdm(st).matrix()) < 1e-8);

    // The global state is pure, so the oscillator and the two qubits share their entropy.
    CHECK(qmat::von_neumann_entropy(dynamics::oscillator_rdm(st)) ==
          doctest::Approx(qmat::von_neumann_entropy(dynamics::two_qubit_rdm(st))).epsilon(1e-6));
}

TEST_CASE("truncation") {
    auto p = params(0.1, 0.05, 0.1);
    dynamics::InitialState init;
    init.alpha = 3.0;
    const auto frame = model::build_frame(p);
    const int chosen = dynamics::choose_cutoff(p, frame, init);
    CHECK(chosen >= dynamics::default_cutoff(frame, init));
    CHECK(dynamics::initial_coefficients(p, init).n_max() == chosen);

    p.n_max = 5;
    try {
        dynamics::initial_coefficients(p, init);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.suggested_cutoff() > 5);
    }

    dynamics::TruncationSettings capped;
    capped.max_cutoff = 10;
    p.n_max = 0;
    CHECK_THROWS_AS(dynamics::initial_coefficients(p, init, capped), TruncationError);
}

TEST_CASE("kernel pair slots") {
    std::array<bool, 6> seen{};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const int slot = dynamics::KernelCache::pair_slot(i, j);
            REQUIRE(slot >= 0);
            REQUIRE(slot < 6);
            CHECK_FALSE(seen[static_cast<std::size_t>(slot)]);
            seen[static_cast<std::size_t>(slot)] = true;
        }
}
