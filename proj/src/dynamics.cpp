#include "qrabi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "qrabi/errors.hpp"
#include "qrabi/specfun.hpp"

namespace qrabi::dynamics {

using model::kTwoQubitLabels;

int default_cutoff(const model::BogoliubovFrame& frame, const InitialState& init) {
    const double a = std::abs(init.alpha);
    const int base = std::max(48, static_cast<int>(std::ceil(a * a + 10.0 * a + 25.0)));
    return base + static_cast<int>(std::ceil(25.0 * std::abs(frame.r)));
}

int KernelCache::pair_slot(int i, int j) {
    if (i > j)
        std::swap(i, j);
    static constexpr int slot[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    const int s = slot[i][j];
    if (s < 0)
        throw std::invalid_argument("KernelCache::pair_slot: diagonal pair has no table");
    return s;
}

double EvolutionState::norm_squared() const {
    return c1_plus.squaredNorm() + c1_minus.squaredNorm() + c2_plus.squaredNorm() + c2_minus.squaredNorm();
}

namespace {

struct Overlaps {
    Eigen::VectorXcd a;  // cos(theta) <r, n_{1,1} | alpha>
    Eigen::VectorXcd b;  // e^{i phi} sin(theta) <r, n_{-1,-1} | alpha>
};

Overlaps initial_overlaps(const model::BogoliubovFrame& frame, const InitialState& init, int n_max) {
    const auto ov11 = specfun::squeezed_coherent_overlaps(frame.r, frame.eta_of(1, 1), init.alpha, n_max);
    const auto ovmm = specfun::squeezed_coherent_overlaps(frame.r, frame.eta_of(-1, -1), init.alpha, n_max);
    const cplx wa = std::cos(init.theta);
    const cplx wb = std::polar(1.0, init.phi) * std::sin(init.theta);
    Overlaps o{Eigen::VectorXcd(n_max + 1), Eigen::VectorXcd(n_max + 1)};
    for (int n = 0; n <= n_max; ++n) {
        o.a[n] = wa * ov11[static_cast<std::size_t>(n)];
        o.b[n] = wb * ovmm[static_cast<std::size_t>(n)];
    }
    return o;
}

double residual_at(const model::BogoliubovFrame& frame, const InitialState& init, int n_max) {
    const auto o = initial_overlaps(frame, init, n_max);
    return 1.0 - o.a.squaredNorm() - o.b.squaredNorm();
}

int grow(int n) { return n + std::max(1, (n + 3) / 4); }

int working_rows(const model::BogoliubovFrame& frame, double eta, int cols) {
    // Squeezed number states spread to ~n e^{2|r|} with slowly decaying tails.
    const double spread = std::exp(2.0 * std::abs(frame.r));
    return 40 + static_cast<int>(std::ceil(2.0 * (cols + 1) * spread * spread)) +
           static_cast<int>(std::ceil(eta * eta + 10.0 * std::abs(eta)));
}

std::shared_ptr<const KernelCache> build_cache(const model::BogoliubovFrame& frame, int n_max) {
    auto cache = std::make_shared<KernelCache>();
    cache->n_max = n_max;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            cache->overlaps[static_cast<std::size_t>(KernelCache::pair_slot(i, j))] =
                specfun::displaced_overlap_matrix(n_max + 1, frame.eta[static_cast<std::size_t>(j)] -
                                                                 frame.eta[static_cast<std::size_t>(i)]);
    cache->fock_rows = n_max + 1;
    for (int i = 0; i < 4; ++i)
        cache->frames[static_cast<std::size_t>(i)] =
            frame_columns(frame, frame.eta[static_cast<std::size_t>(i)], n_max + 1, n_max + 1);
    return cache;
}

}  // namespace

Eigen::MatrixXd frame_columns(const model::BogoliubovFrame& frame, double eta, int cols, int rows) {
    if (cols < 1 || rows < 1)
        throw DimensionError("frame_columns: empty basis");
    const int w = std::max(rows, working_rows(frame, eta, cols));
    const double mu = frame.mu;
    const double nu = frame.nu;

    // Vacuum of the frame, S^dag D^dag(eta)|0>, from the normalized Hermite sequence.
    const auto g = specfun::normalized_hermite_sequence(w - 1, cplx(-eta / (2.0 * mu)), cplx(nu / (2.0 * mu)));
    const double pref = std::exp(-0.5 * eta * eta + eta * eta * nu / (2.0 * mu)) / std::sqrt(mu);
    Eigen::MatrixXd u(w, cols);
    for (int k = 0; k < w; ++k)
        u(k, 0) = pref * g[static_cast<std::size_t>(k)].real();

    // b = mu a + nu a^dag + eta on the working space. The ladder step
    // |r, n+1> = b^dag |r, n> / sqrt(n + 1) amplifies rounding in the high frame
    // modes, so every step is refined by inverse iteration on b^dag b, whose
    // eigenvalues are the integers n.
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(3 * w));
    for (int k = 0; k < w; ++k) {
        entries.emplace_back(k, k, eta);
        if (k + 1 < w) {
            entries.emplace_back(k, k + 1, mu * std::sqrt(k + 1.0));
            entries.emplace_back(k + 1, k, nu * std::sqrt(k + 1.0));
        }
    }
    Eigen::SparseMatrix<double> b(w, w);
    b.setFromTriplets(entries.begin(), entries.end());
    const Eigen::SparseMatrix<double> b_dag = b.transpose();
    const Eigen::SparseMatrix<double> number = b_dag * b;
    Eigen::SparseMatrix<double> identity(w, w);
    identity.setIdentity();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    for (int n = 0; n < cols; ++n) {
        Eigen::VectorXd guess = n == 0 ? Eigen::VectorXd(u.col(0)) : Eigen::VectorXd(b_dag * u.col(n - 1));
        const Eigen::SparseMatrix<double> shifted = number - (n + 1e-6) * identity;
        lu.compute(shifted);
        if (lu.info() != Eigen::Success)
            throw ConvergenceError("frame_columns: factorization failed at column " + std::to_string(n));
        Eigen::VectorXd x = guess.normalized();
        for (int it = 0; it < 3; ++it)
            x = lu.solve(x).normalized();
        if (x.dot(guess) < 0.0)
            x = -x;
        const double residual = (number * x - n * x).norm();
        const double tail = x.tail(std::min(w, 8)).norm();
        if (residual > 1e-8 || tail > 1e-10) {
            std::ostringstream os;
            os << "frame_columns: column " << n << " of the squeezed frame is not resolved on " << w
               << " Fock states (residual " << residual << ", tail " << tail << ")";
            throw TruncationError(os.str(), 2 * w);
        }
        u.col(n) = x;
    }
    return u.topRows(rows);
}

int choose_cutoff(const model::ModelParams& params, const model::BogoliubovFrame& frame,
                  const InitialState& init, const TruncationSettings& settings) {
    if (params.n_max > 0) {
        const double res = residual_at(frame, init, params.n_max);
        if (res > settings.epsilon) {
            int n = grow(params.n_max);
            while (n < settings.max_cutoff && residual_at(frame, init, n) > settings.epsilon)
                n = grow(n);
            std::ostringstream os;
            os << "cutoff n_max = " << params.n_max << " leaves truncation residual " << res
               << " > " << settings.epsilon << "; try n_max = " << n;
            throw TruncationError(os.str(), n);
        }
        return params.n_max;
    }
    int n = std::min(default_cutoff(frame, init), settings.max_cutoff);
    double res = residual_at(frame, init, n);
    while (res > settings.epsilon) {
        if (n >= settings.max_cutoff) {
            std::ostringstream os;
            os << "automatic cutoff reached " << n << " with residual " << res;
            throw TruncationError(os.str(), grow(n));
        }
        n = std::min(grow(n), settings.max_cutoff);
        res = residual_at(frame, init, n);
    }
    return n;
}

EvolutionState initial_coefficients(const model::ModelParams& params, const InitialState& init,
                                    const TruncationSettings& settings) {
    EvolutionState st;
    st.params = params;
    st.frame = model::build_frame(params);
    const int n_max = choose_cutoff(params, st.frame, init, settings);
    st.levels = model::adiabatic_levels_upto(params, st.frame, n_max);
    st.epsilon = settings.epsilon;

    const auto o = initial_overlaps(st.frame, init, n_max);
    const Eigen::VectorXcd sum = o.a + o.b;
    const Eigen::VectorXcd diff = o.a - o.b;
    st.c1_plus.resize(n_max + 1);
    st.c1_minus.resize(n_max + 1);
    st.c2_plus.resize(n_max + 1);
    st.c2_minus.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const auto& lv = st.levels[static_cast<std::size_t>(n)];
        st.c1_plus[n] = lv.eps_minus * sum[n];
        st.c1_minus[n] = lv.eps_plus * sum[n];
        st.c2_plus[n] = lv.kap_minus * diff[n];
        st.c2_minus[n] = lv.kap_plus * diff[n];
    }
    st.truncation_residual = 1.0 - st.norm_squared();
    st.cache = build_cache(st.frame, n_max);
    return st;
}

EvolutionState evolve(const EvolutionState& state, double dt) {
    EvolutionState out = state;
    const double t_phys = dt / state.params.omega;
    for (int n = 0; n <= state.n_max(); ++n) {
        const auto& lv = state.levels[static_cast<std::size_t>(n)];
        out.c1_plus[n] *= std::polar(1.0, -lv.E1_plus * t_phys);
        out.c1_minus[n] *= std::polar(1.0, -lv.E1_minus * t_phys);
        out.c2_plus[n] *= std::polar(1.0, -lv.E2_plus * t_phys);
        out.c2_minus[n] *= std::polar(1.0, -lv.E2_minus * t_phys);
    }
    out.t = state.t + dt;
    return out;
}

std::array<Eigen::VectorXcd, 4> frame_amplitudes(const EvolutionState& state) {
    const int dim = state.n_max() + 1;
    std::array<Eigen::VectorXcd, 4> c;
    for (auto& v : c)
        v.resize(dim);
    for (int n = 0; n < dim; ++n) {
        const auto& lv = state.levels[static_cast<std::size_t>(n)];
        const cplx t1p = lv.eps_minus * state.c1_plus[n] + lv.eps_plus * state.c1_minus[n];
        const cplx t1m = lv.eps_plus * state.c1_plus[n] - lv.eps_minus * state.c1_minus[n];
        const cplx t2p = lv.kap_minus * state.c2_plus[n] + lv.kap_plus * state.c2_minus[n];
        const cplx t2m = lv.kap_plus * state.c2_plus[n] - lv.kap_minus * state.c2_minus[n];
        c[0][n] = t1p + t2p;
        c[1][n] = lv.sign_plus * t1m + lv.sign_minus * t2m;
        c[2][n] = lv.sign_plus * t1m - lv.sign_minus * t2m;
        c[3][n] = t1p - t2p;
    }
    return c;
}

qmat::DensityMatrix two_qubit_rdm(const EvolutionState& state) {
    return two_qubit_rdm(state, frame_amplitudes(state));
}

qmat::DensityMatrix two_qubit_rdm(const EvolutionState& state, const std::array<Eigen::VectorXcd, 4>& c) {
    qmat::CMatrix rho(4, 4);
    for (int i = 0; i < 4; ++i) {
        rho(i, i) = c[static_cast<std::size_t>(i)].squaredNorm();
        for (int j = i + 1; j < 4; ++j) {
            // <s_i| rho |s_j> = c_j^dag M(eta_j - eta_i) c_i
            const auto& m = state.cache->overlaps[static_cast<std::size_t>(KernelCache::pair_slot(i, j))];
            const cplx v = c[static_cast<std::size_t>(j)].dot(m * c[static_cast<std::size_t>(i)]);
            rho(i, j) = v;
            rho(j, i) = std::conj(v);
        }
    }
    const double lo = qmat::hermitian_eigenvalues(rho).minCoeff();
    if (lo < -1e-6) {
        std::ostringstream os;
        os << "two-qubit state at omega t = " << state.t << " has eigenvalue " << lo
           << "; the Fock cutoff is likely too small";
        throw PositivityError(os.str(), lo);
    }
    return {rho, qmat::Subsystem::two_qubit};
}

SingleQubitStates single_qubit_rdms(const qmat::DensityMatrix& rho4) {
    if (rho4.dim() != 4)
        throw DimensionError("single_qubit_rdms: expected a 4x4 two-qubit matrix");
    const auto& r = rho4.matrix();
    qmat::CMatrix q1(2, 2);
    qmat::CMatrix q2(2, 2);
    // index = b(s1) + 2 b(s2)
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            q1(a, b) = r(a, b) + r(a + 2, b + 2);
            q2(a, b) = r(2 * a, 2 * b) + r(2 * a + 1, 2 * b + 1);
        }
    return {{q1, qmat::Subsystem::qubit}, {q2, qmat::Subsystem::qubit}};
}

std::array<Eigen::VectorXcd, 4> oscillator_frame_states(const EvolutionState& state) {
    const auto c = frame_amplitudes(state);
    std::array<Eigen::VectorXcd, 4> psi;
    for (std::size_t i = 0; i < 4; ++i)
        psi[i] = state.cache->frames[i].cast<cplx>() * c[i];
    return psi;
}

namespace {

void check_trace(const qmat::CMatrix& m, const EvolutionState& state, const char* what) {
    const double tr = m.trace().real();
    const double tol = std::max(state.epsilon, 1e-10);
    if (std::abs(tr - 1.0) > tol) {
        std::ostringstream os;
        os << what << " at omega t = " << state.t << " has trace " << tr
           << "; the Fock cutoff " << state.n_max() << " is too small";
        throw TruncationError(os.str(), grow(state.n_max()));
    }
}

}  // namespace

qmat::DensityMatrix qubit_osc_rdm(const EvolutionState& state) {
    const auto psi = oscillator_frame_states(state);
    const int d = state.n_max() + 1;
    qmat::CMatrix w = qmat::CMatrix::Zero(2 * d, 2 * d);
    for (int b2 = 0; b2 < 2; ++b2) {
        Eigen::VectorXcd v(2 * d);
        v.head(d) = psi[static_cast<std::size_t>(2 * b2)];
        v.tail(d) = psi[static_cast<std::size_t>(2 * b2 + 1)];
        w.noalias() += v * v.adjoint();
    }
    check_trace(w, state, "qubit-oscillator state");
    return {w, qmat::Subsystem::qubit_oscillator};
}

qmat::DensityMatrix oscillator_rdm(const EvolutionState& state) {
    const auto psi = oscillator_frame_states(state);
    const int d = state.n_max() + 1;
    qmat::CMatrix rho = qmat::CMatrix::Zero(d, d);
    for (const auto& p : psi)
        rho.noalias() += p * p.adjoint();
    check_trace(rho, state, "oscillator state");
    return {rho, qmat::Subsystem::oscillator};
}

Eigen::VectorXcd product_basis_state(const EvolutionState& state, int n_fock) {
    const auto c = frame_amplitudes(state);
    const int d = n_fock + 1;
    Eigen::VectorXcd out(4 * d);
    for (int q = 0; q < 4; ++q) {
        const auto u = frame_columns(state.frame, state.frame.eta[static_cast<std::size_t>(q)],
                                     state.n_max() + 1, d);
        out.segment(q * d, d) = u.cast<cplx>() * c[static_cast<std::size_t>(q)];
    }
    return out;
}

}  // namespace qrabi::dynamics
