#include "qrabi/qmat.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "qrabi/errors.hpp"

namespace qrabi::qmat {

std::string_view to_string(Subsystem s) {
    switch (s) {
    case Subsystem::two_qubit: return "two-qubit";
    case Subsystem::qubit: return "qubit";
    case Subsystem::oscillator: return "oscillator";
    case Subsystem::qubit_oscillator: return "qubit-oscillator";
    case Subsystem::full: return "full";
    }
    return "unknown";
}

namespace {

double asymmetry(const CMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_square(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("matrix is not square");
}

}  // namespace

double DensityMatrix::max_asymmetry() const { return m_.size() ? asymmetry(m_) : 0.0; }

void DensityMatrix::validate(double hermitian_tol, double trace_tol, double positivity_tol) const {
    require_square(m_);
    const double asym = max_asymmetry();
    if (asym > hermitian_tol) {
        std::ostringstream os;
        os << to_string(label_) << " density matrix not Hermitian: max asymmetry " << asym;
        throw NonHermitianError(os.str(), asym);
    }
    if (std::abs(trace() - 1.0) > trace_tol) {
        std::ostringstream os;
        os << to_string(label_) << " density matrix trace " << trace() << " differs from 1";
        throw Error(os.str());
    }
    const double lo = hermitian_eigenvalues(m_, hermitian_tol).minCoeff();
    if (lo < -positivity_tol) {
        std::ostringstream os;
        os << to_string(label_) << " density matrix has negative eigenvalue " << lo;
        throw PositivityError(os.str(), lo);
    }
}

EigenSystem hermitian_eigensystem(const CMatrix& m, double tol) {
    require_square(m);
    const double asym = asymmetry(m);
    if (asym > tol) {
        std::ostringstream os;
        os << "hermitian_eigensystem: input not Hermitian, max asymmetry " << asym;
        throw NonHermitianError(os.str(), asym);
    }
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("hermitian_eigensystem: eigensolver failed");
    // Eigen returns ascending order.
    return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m, double tol) {
    require_square(m);
    const double asym = asymmetry(m);
    if (asym > tol) {
        std::ostringstream os;
        os << "hermitian_eigenvalues: input not Hermitian, max asymmetry " << asym;
        throw NonHermitianError(os.str(), asym);
    }
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("hermitian_eigenvalues: eigensolver failed");
    return solver.eigenvalues().reverse();
}

double shannon_entropy(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) {
        if (v < -kEntropyClip) {
            std::ostringstream os;
            os << "entropy: eigenvalue " << v << " below positivity tolerance";
            throw PositivityError(os.str(), v);
        }
        if (v > 0.0)
            s -= v * std::log2(v);
    }
    return s;
}

double von_neumann_entropy(const CMatrix& rho) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(rho, 1e-8);
    return shannon_entropy(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

CMatrix partial_trace(const CMatrix& rho, std::span<const int> dims, std::span<const int> keep) {
    require_square(rho);
    const int nf = static_cast<int>(dims.size());
    const long total = std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
    if (total != rho.rows())
        throw DimensionError("partial_trace: product of factor dimensions does not match matrix");
    std::vector<bool> kept(static_cast<std::size_t>(nf), false);
    for (int k : keep) {
        if (k < 0 || k >= nf || kept[static_cast<std::size_t>(k)])
            throw DimensionError("partial_trace: invalid kept factor index");
        kept[static_cast<std::size_t>(k)] = true;
    }
    // Row-major strides: first factor slowest.
    std::vector<long> stride(static_cast<std::size_t>(nf), 1);
    for (int f = nf - 2; f >= 0; --f)
        stride[static_cast<std::size_t>(f)] =
            stride[static_cast<std::size_t>(f + 1)] * dims[static_cast<std::size_t>(f + 1)];

    long kept_dim = 1;
    for (int f = 0; f < nf; ++f)
        if (kept[static_cast<std::size_t>(f)])
            kept_dim *= dims[static_cast<std::size_t>(f)];

    // Map each full index to (kept index, traced index).
    std::vector<long> kept_index(static_cast<std::size_t>(total));
    std::vector<long> traced_index(static_cast<std::size_t>(total));
    for (long i = 0; i < total; ++i) {
        long ki = 0;
        long ti = 0;
        for (int f = 0; f < nf; ++f) {
            const long digit = (i / stride[static_cast<std::size_t>(f)]) % dims[static_cast<std::size_t>(f)];
            if (kept[static_cast<std::size_t>(f)])
                ki = ki * dims[static_cast<std::size_t>(f)] + digit;
            else
                ti = ti * dims[static_cast<std::size_t>(f)] + digit;
        }
        kept_index[static_cast<std::size_t>(i)] = ki;
        traced_index[static_cast<std::size_t>(i)] = ti;
    }

    CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
    for (long i = 0; i < total; ++i)
        for (long j = 0; j < total; ++j)
            if (traced_index[static_cast<std::size_t>(i)] == traced_index[static_cast<std::size_t>(j)])
                out(kept_index[static_cast<std::size_t>(i)], kept_index[static_cast<std::size_t>(j)]) +=
                    rho(i, j);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep, Subsystem label) {
    return {partial_trace(rho.matrix(), dims, keep), label};
}

double purity(const DensityMatrix& rho) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return rho.matrix().squaredNorm();
}

double hs_distance(const CMatrix& rho, const CMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw DimensionError("hs_distance: dimension mismatch");
    return (rho - sigma).norm();
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return hs_distance(rho.matrix(), sigma.matrix());
}

}  // namespace qrabi::qmat
