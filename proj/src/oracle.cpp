#include "qrabi/oracle.hpp"

#include <cmath>
#include <sstream>

#include "qrabi/errors.hpp"

namespace qrabi::oracle {

using model::kTwoQubitLabels;

FullHamiltonian build_full_hamiltonian(const model::ModelParams& params, int n_fock) {
    params.validate();
    if (n_fock < 2)
        throw DimensionError("build_full_hamiltonian: n_fock must be at least 2");
    const int d = n_fock + 1;
    FullHamiltonian h;
    h.n_fock = n_fock;
    h.dim = 4 * d;
    h.matrix = Eigen::MatrixXd::Zero(h.dim, h.dim);
    auto& m = h.matrix;
    for (int q = 0; q < 4; ++q) {
        const int s1 = kTwoQubitLabels[static_cast<std::size_t>(q)][0];
        const int s2 = kTwoQubitLabels[static_cast<std::size_t>(q)][1];
        const double ls = params.lambda_s(s1, s2);
        const int flip1 = q ^ 1;  // sigma^z_1 flips the first label
        const int flip2 = q ^ 2;
        for (int n = 0; n < d; ++n) {
            const int i = q * d + n;
            m(i, i) += params.omega * n;
            m(flip1 * d + n, i) += 0.5 * params.delta1;
            m(flip2 * d + n, i) += 0.5 * params.delta2;
            if (n + 1 < d) {
                const double v = ls * std::sqrt(n + 1.0);
                m(i + 1, i) += v;
                m(i, i + 1) += v;
            }
            if (n + 2 < d) {
                const double v = params.g * std::sqrt((n + 1.0) * (n + 2.0));
                m(i + 2, i) += v;
                m(i, i + 2) += v;
            }
        }
    }
    return h;
}

Eigen::VectorXd exact_spectrum(const FullHamiltonian& h, int k) {
    if (k < 1 || k > h.dim)
        throw DimensionError("exact_spectrum: level count out of range");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("exact_spectrum: eigensolver failed");
    return es.eigenvalues().head(k);
}

Eigen::VectorXd converged_spectrum(const model::ModelParams& params, int k, int n_fock, double tol) {
    const Eigen::VectorXd e1 = exact_spectrum(build_full_hamiltonian(params, n_fock), k);
    const Eigen::VectorXd e2 = exact_spectrum(build_full_hamiltonian(params, 2 * n_fock), k);
    const double drift = (e1 - e2).cwiseAbs().maxCoeff();
    if (drift > tol * params.omega) {
        std::ostringstream os;
        os << "converged_spectrum: lowest " << k << " levels move by " << drift
           << " when n_fock doubles from " << n_fock;
        throw ConvergenceError(os.str());
    }
    return e2;
}

SpectralPropagator::SpectralPropagator(const FullHamiltonian& h, double omega) : omega_(omega) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("SpectralPropagator: eigensolver failed");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

Eigen::VectorXcd SpectralPropagator::evolve(const Eigen::VectorXcd& psi0, double tau) const {
    if (psi0.size() != vectors_.rows())
        throw DimensionError("SpectralPropagator::evolve: state dimension mismatch");
    Eigen::VectorXcd c = vectors_.transpose().cast<cplx>() * psi0;
    const double t = tau / omega_;
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c(i) *= std::polar(1.0, -values_(i) * t);
    return vectors_.cast<cplx>() * c;
}

Eigen::VectorXcd exact_evolve(const FullHamiltonian& h, double omega, const Eigen::VectorXcd& psi0, double tau) {
    return SpectralPropagator(h, omega).evolve(psi0, tau);
}

Eigen::MatrixXcd brute_force_operator(OperatorKind kind, cplx parameter, int n_fock) {
    const int d = n_fock + 1;
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(d, d);
    if (kind == OperatorKind::displacement) {
        for (int n = 0; n + 1 < d; ++n) {
            const double s = std::sqrt(n + 1.0);
            gen(n + 1, n) += parameter * s;
            gen(n, n + 1) -= std::conj(parameter) * s;
        }
    } else {
        for (int n = 0; n + 2 < d; ++n) {
            const double s = std::sqrt((n + 1.0) * (n + 2.0));
            gen(n + 2, n) += 0.5 * parameter * s;
            gen(n, n + 2) -= 0.5 * std::conj(parameter) * s;
        }
    }
    // gen is anti-Hermitian: i gen = V diag(l) V^dag, so exp(gen) = V e^{-i l} V^dag.
    const Eigen::MatrixXcd herm = cplx(0.0, 1.0) * gen;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (herm + herm.adjoint()));
    if (es.info() != Eigen::Success)
        throw ConvergenceError("brute_force_operator: eigensolver failed");
    Eigen::VectorXcd ph(d);
    for (int i = 0; i < d; ++i)
        ph(i) = std::polar(1.0, -es.eigenvalues()(i));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXcd coherent_vector(cplx alpha, int n_fock) {
    Eigen::VectorXcd v(n_fock + 1);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= n_fock; ++n)
        v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return v;
}

Eigen::VectorXcd product_initial_state(const dynamics::InitialState& init, int n_fock) {
    const int d = n_fock + 1;
    const Eigen::VectorXcd coh = coherent_vector(init.alpha, n_fock);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4 * d);
    psi.segment(0, d) = std::cos(init.theta) * coh;
    psi.segment(3 * d, d) = std::polar(1.0, init.phi) * std::sin(init.theta) * coh;
    return psi;
}

qmat::DensityMatrix two_qubit_rdm(const Eigen::VectorXcd& psi, int n_fock) {
    const int d = n_fock + 1;
    if (psi.size() != 4 * d)
        throw DimensionError("oracle::two_qubit_rdm: state dimension mismatch");
    qmat::CMatrix rho(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rho(i, j) = psi.segment(j * d, d).dot(psi.segment(i * d, d));
    return {rho, qmat::Subsystem::two_qubit};
}

qmat::DensityMatrix oscillator_rdm(const Eigen::VectorXcd& psi, int n_fock) {
    const int d = n_fock + 1;
    if (psi.size() != 4 * d)
        throw DimensionError("oracle::oscillator_rdm: state dimension mismatch");
    qmat::CMatrix rho = qmat::CMatrix::Zero(d, d);
    for (int q = 0; q < 4; ++q) {
        const auto seg = psi.segment(q * d, d);
        rho.noalias() += seg * seg.adjoint();
    }
    return {rho, qmat::Subsystem::oscillator};
}

double parity_expectation(const Eigen::VectorXcd& psi, int n_fock) {
    const int d = n_fock + 1;
    if (psi.size() != 4 * d)
        throw DimensionError("parity_expectation: state dimension mismatch");
    cplx p{};
    for (int q = 0; q < 4; ++q)
        for (int n = 0; n < d; ++n)
            p += std::conj(psi((3 - q) * d + n)) * (n % 2 ? -1.0 : 1.0) * psi(q * d + n);
    return p.real();
}

}  // namespace qrabi::oracle
