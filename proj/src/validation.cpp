#include "qrabi/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "qrabi/errors.hpp"
#include "qrabi/observables.hpp"
#include "qrabi/oracle.hpp"
#include "qrabi/parallel.hpp"

namespace qrabi::validation {

std::string_view to_string(Status s) {
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    }
    return "unknown";
}

bool Report::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::fail; });
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["schema_version"] = config::kSchemaVersion;
    j["passed"] = passed();
    j["criteria"] = nlohmann::json::array();
    for (const auto& c : criteria)
        j["criteria"].push_back({{"id", c.id}, {"title", c.title}, {"status", to_string(c.status)}});
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e{{"criterion", c.criterion}, {"name", c.name}, {"relation", c.relation},
                         {"measured", c.measured}, {"target", c.target}, {"margin", c.margin},
                         {"status", to_string(c.status)}};
        if (c.relation == "within")
            e["tolerance"] = c.tolerance;
        if (!c.detail.empty())
            e["detail"] = c.detail;
        j["checks"].push_back(e);
    }
    return j;
}

Settings settings_from(const config::RunConfig& cfg, int workers) {
    Settings s;
    s.tolerances = cfg.tolerances;
    s.seed = cfg.seed;
    s.oracle_enabled = cfg.oracle_enabled;
    s.workers = workers;
    return s;
}

namespace {

using Checks = std::vector<Check>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Check make(int crit, std::string name, std::string rel, double measured, double target, double margin,
           std::string detail = {}) {
    Check c;
    c.criterion = crit;
    c.name = std::move(name);
    c.relation = std::move(rel);
    c.measured = measured;
    c.target = target;
    c.margin = margin;
    c.status = (c.relation == ">" ? margin > 0.0 : margin >= 0.0) ? Status::pass : Status::fail;
    c.detail = std::move(detail);
    return c;
}

Check within(int crit, std::string name, double measured, double target, double tol, std::string detail = {}) {
    auto c = make(crit, std::move(name), "within", measured, target, tol - std::abs(measured - target),
                  std::move(detail));
    c.tolerance = tol;
    return c;
}

Check at_most(int crit, std::string name, double measured, double limit, std::string detail = {}) {
    return make(crit, std::move(name), "<=", measured, limit, limit - measured, std::move(detail));
}

Check at_least(int crit, std::string name, double measured, double limit, std::string detail = {}) {
    return make(crit, std::move(name), ">=", measured, limit, measured - limit, std::move(detail));
}

Check exceeds(int crit, std::string name, double measured, double limit, std::string detail = {}) {
    return make(crit, std::move(name), ">", measured, limit, measured - limit, std::move(detail));
}

Check skipped(int crit, std::string name, std::string why) {
    Check c;
    c.criterion = crit;
    c.name = std::move(name);
    c.relation = "skipped";
    c.status = Status::skipped;
    c.detail = std::move(why);
    return c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Bell-pair generation at two times.
void criterion_bell_pair(const Settings& s, Checks& out) {
    const auto t0 = Clock::now();
    model::ModelParams p;
    p.delta1 = 0.2;
    p.delta2 = 0.15;
    p.lambda1 = 0.32;
    p.lambda2 = 0.17;
    const auto st0 = dynamics::initial_coefficients(p, {}, {s.tolerances.epsilon_trunc});

    struct Row {
        double t, c, purity, d_min, amp;
        int bell;
        const char* label;
    };
    const Row rows[] = {{303.0, 0.96, 0.97, 0.04, 0.99, 1, "Phi-"}, {501.0, 0.92, 0.93, 0.07, 0.96, 0, "Phi+"}};
    for (const auto& r : rows) {
        const auto rho = dynamics::two_qubit_rdm(dynamics::evolve(st0, r.t));
        const auto rec = observables::bell_reconstruct(rho, s.seed);
        const std::string at = " at wt=" + fmt(r.t);
        out.push_back(within(1, "concurrence" + at, observables::concurrence(rho), r.c, 0.02));
        out.push_back(within(1, "purity" + at, rec.purity, r.purity, 0.02));
        out.push_back(within(1, "d_min" + at, rec.d_min, r.d_min, 0.02,
                             "closed form " + fmt(rec.d_min_closed) + ", cutoff " + std::to_string(st0.n_max())));
        const int dom = rec.coefficients.dominant();
        out.push_back(at_least(1, std::string("|alpha(") + r.label + ")|" + at,
                               std::abs(rec.coefficients.alpha[static_cast<std::size_t>(r.bell)]), r.amp,
                               "dominant Bell index " + std::to_string(dom)));
    }
    out.push_back(at_most(1, "runtime seconds", seconds_since(t0), 120.0));
}

// Squeezed-coherent generation.
void criterion_squeezing(const Settings& s, Checks& out) {
    model::ModelParams p;
    p.delta1 = p.delta2 = 0.08;
    p.lambda1 = p.lambda2 = 0.06;
    p.g = 0.1;
    dynamics::InitialState init;
    init.alpha = 0.5;
    const auto st0 = dynamics::initial_coefficients(p, init, {s.tolerances.epsilon_trunc});

    // S(rho) carries a fast ripple of period ~7 wt on top of the slow dip. The
    // minimum is taken on a 5 wt grid, a plotting resolution that does not
    // resolve the ripple; the sub-period minimum is reported alongside.
    auto entropy_at = [&](const std::vector<double>& ts) {
        return parallel_map(ts.size(), s.workers, [&](std::size_t i) {
            return qmat::von_neumann_entropy(dynamics::two_qubit_rdm(dynamics::evolve(st0, ts[i])));
        });
    };
    std::vector<double> times, fine;
    for (int i = 0; i <= 240; ++i)
        times.push_back(6000.0 + 5.0 * i);
    for (int i = 0; i <= 400; ++i)
        fine.push_back(6500.0 + 0.5 * i);
    const auto ent = entropy_at(times);
    const auto ent_fine = entropy_at(fine);
    const auto it = std::min_element(ent.begin(), ent.end());
    const auto it_fine = std::min_element(ent_fine.begin(), ent_fine.end());
    const double t_min = times[static_cast<std::size_t>(it - ent.begin())];
    out.push_back(within(2, "min S(rho), wt in [6000, 7200] step 5", *it, 0.0125, 0.002,
                         "at wt=" + fmt(t_min) + "; step 0.5 over [6500, 6700] gives " + fmt(*it_fine) +
                             " at wt=" + fmt(fine[static_cast<std::size_t>(it_fine - ent_fine.begin())])));
    out.push_back(at_most(2, "|wt(min S) - 6600|", std::abs(t_min - 6600.0), 100.0));

    const auto st = dynamics::evolve(st0, 6600.0);
    const auto rho_osc = dynamics::oscillator_rdm(st);
    const auto q = observables::quadrature_variance(rho_osc);
    out.push_back(within(2, "V_min at wt=6600", q.v_min, 0.3411, 0.005));

    const auto grid = observables::default_husimi_grid(rho_osc);
    const auto field = observables::husimi_q(rho_osc, grid, s.workers, s.tolerances.husimi_norm);
    const double cells = std::abs(field.peak) / grid.spacing();
    out.push_back(exceeds(2, "Husimi peak offset from origin (grid cells)", cells, 3.0,
                          "peak at " + fmt(field.peak.real()) + (field.peak.imag() < 0 ? "" : "+") +
                              fmt(field.peak.imag()) + "i"));
}

// Revival times.
void criterion_revivals(const Settings& s, Checks& out) {
    model::ModelParams p;
    p.delta1 = p.delta2 = 0.1;
    p.lambda1 = p.lambda2 = 0.015;
    const auto frame = model::build_frame(p);
    const double expected[] = {6.975e4, 13.980e4};
    double est[2];
    for (int k = 1; k <= 2; ++k) {
        est[k - 1] = model::revival_time_estimate(p, frame, k);
        out.push_back(at_most(3, "revival estimate k=" + std::to_string(k) + " relative deviation",
                              std::abs(est[k - 1] / expected[k - 1] - 1.0), 0.01,
                              "estimate " + fmt(est[k - 1]) + " vs " + fmt(expected[k - 1])));
    }

    dynamics::InitialState init;
    init.alpha = 3.0;
    const auto st0 = dynamics::initial_coefficients(p, init, {s.tolerances.epsilon_trunc});
    std::vector<double> times;
    for (int i = 0; i <= 40000; ++i)
        times.push_back(4.0 * i);
    const auto inv = parallel_map(times.size(), s.workers, [&](std::size_t i) {
        const auto c = dynamics::frame_amplitudes(dynamics::evolve(st0, times[i]));
        return c[0].squaredNorm() - c[3].squaredNorm();
    });
    const auto peaks = observables::detect_revivals(times, inv);
    for (int k = 1; k <= 2; ++k) {
        const double e = est[k - 1];
        if (peaks.empty()) {
            out.push_back(at_most(3, "detected revival k=" + std::to_string(k) + " relative deviation", 1.0, 0.02,
                                  "no peaks detected"));
            continue;
        }
        const double near = *std::min_element(peaks.begin(), peaks.end(), [&](double a, double b) {
            return std::abs(a - e) < std::abs(b - e);
        });
        out.push_back(at_most(3, "detected revival k=" + std::to_string(k) + " relative deviation",
                              std::abs(near / e - 1.0), 0.02, "peak at wt=" + fmt(near)));
    }
}

double spectrum_error(const model::ModelParams& p, int levels, int n_fock) {
    const auto frame = model::build_frame(p);
    const auto ad = model::adiabatic_spectrum(p, frame, levels, levels);
    const auto ex = oracle::exact_spectrum(oracle::build_full_hamiltonian(p, n_fock), levels);
    double e = 0.0;
    for (int i = 0; i < levels; ++i)
        e = std::max(e, std::abs(ad[static_cast<std::size_t>(i)] - ex(i)));
    return e;
}

// Spectrum against exact diagonalization.
void criterion_spectrum(const Settings& s, Checks& out) {
    if (!s.oracle_enabled) {
        out.push_back(skipped(4, "adiabatic vs exact spectrum", "oracle disabled"));
        out.push_back(skipped(4, "adiabatic vs exact two-qubit evolution", "oracle disabled"));
        return;
    }
    const auto t0 = Clock::now();
    constexpr int levels = 12;
    constexpr int n_fock = 160;
    std::vector<model::ModelParams> grid;
    for (double d1 : {0.05, 0.1})
        for (double d2 : {0.05, 0.1})
            for (double l1 : {0.02, 0.05})
                for (double l2 : {0.02, 0.05})
                    for (double g : {0.0, 0.15, 0.3}) {
                        model::ModelParams p;
                        p.delta1 = d1;
                        p.delta2 = d2;
                        p.lambda1 = l1;
                        p.lambda2 = l2;
                        p.g = g;
                        grid.push_back(p);
                    }
    const auto errs = parallel_map(grid.size(), s.workers,
                                   [&](std::size_t i) { return spectrum_error(grid[i], levels, n_fock); });
    const auto worst = std::max_element(errs.begin(), errs.end());
    const auto& wp = grid[static_cast<std::size_t>(worst - errs.begin())];
    out.push_back(at_most(4, "max |E_adiabatic - E_exact|, lowest 12 levels, " + std::to_string(grid.size()) + " points",
                          *worst, s.tolerances.spectrum_abs,
                          "worst at delta=(" + fmt(wp.delta1) + "," + fmt(wp.delta2) + ") lambda=(" + fmt(wp.lambda1) +
                              "," + fmt(wp.lambda2) + ") g=" + fmt(wp.g)));
    out.push_back(at_most(4, "spectrum runtime seconds", seconds_since(t0), 60.0));

    model::ModelParams p;
    p.lambda1 = p.lambda2 = 0.05;
    p.g = 0.3;
    p.delta1 = p.delta2 = 0.05;
    const double e_small = spectrum_error(p, levels, n_fock);
    p.delta1 = p.delta2 = 0.2;
    const double e_large = spectrum_error(p, levels, n_fock);
    out.push_back(exceeds(4, "error(delta=0.2) - error(delta=0.05)", e_large - e_small, 0.0,
                          "errors " + fmt(e_large) + " and " + fmt(e_small)));

    try {
        oracle::converged_spectrum(p, levels, n_fock);
        out.push_back(at_most(4, "oracle cutoff-doubling drift", 0.0, 1e-8));
    } catch (const ConvergenceError& e) {
        out.push_back(at_most(4, "oracle cutoff-doubling drift", 1.0, 1e-8, e.what()));
    }

    // Adiabatic vs exact evolution of the two-qubit state.
    model::ModelParams q;
    q.delta1 = 0.1;
    q.delta2 = 0.08;
    q.lambda1 = 0.02;
    q.lambda2 = 0.04;
    dynamics::InitialState init;
    init.alpha = 2.0;
    init.theta = std::numbers::pi / 4;
    const auto st0 = dynamics::initial_coefficients(q, init, {s.tolerances.epsilon_trunc});
    const int nf = 2 * st0.n_max();
    const oracle::SpectralPropagator prop(oracle::build_full_hamiltonian(q, nf), q.omega);
    const auto psi0 = oracle::product_initial_state(init, nf);
    double worst_rdm = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double t = 50.0 * i;
        const auto a = dynamics::two_qubit_rdm(dynamics::evolve(st0, t)).matrix();
        const auto b = oracle::two_qubit_rdm(prop.evolve(psi0, t), nf).matrix();
        worst_rdm = std::max(worst_rdm, (a - b).cwiseAbs().maxCoeff());
    }
    out.push_back(at_most(4, "adiabatic vs exact two-qubit evolution, wt <= 500", worst_rdm, s.tolerances.rdm_max_abs));
}

struct InvariantTotals {
    double trace = 0.0;
    double herm = 0.0;
    double min_eig = 1.0;
    double entropy_gap = 0.0;
    double norm = 0.0;
    double vmin_gap = 0.0;
    int samples = 0;
};

void accumulate_run(const model::ModelParams& p, const dynamics::InitialState& init, const std::vector<double>& times,
                    bool with_vmin, const Settings& s, InvariantTotals& tot) {
    const auto st0 = dynamics::initial_coefficients(p, init, {s.tolerances.epsilon_trunc});
    struct Sample {
        double trace, herm, min_eig, entropy_gap, norm, vmin_gap;
    };
    const auto rows = parallel_map(times.size(), s.workers, [&](std::size_t i) {
        const auto st = dynamics::evolve(st0, times[i]);
        const auto rho = dynamics::two_qubit_rdm(st);
        const auto rho_osc = dynamics::oscillator_rdm(st);
        Sample r{};
        r.trace = std::abs(rho.trace() - 1.0);
        r.herm = rho.max_asymmetry();
        r.min_eig = qmat::hermitian_eigenvalues(rho.matrix()).minCoeff();
        r.entropy_gap = std::abs(qmat::von_neumann_entropy(rho_osc) - qmat::von_neumann_entropy(rho));
        r.norm = std::abs(st.norm_squared() - 1.0);
        if (with_vmin)
            r.vmin_gap = std::abs(observables::quadrature_variance(rho_osc).v_min -
                                  observables::quadrature_variance_frame_sums(st).v_min);
        return r;
    });
    for (const auto& r : rows) {
        tot.trace = std::max(tot.trace, r.trace);
        tot.herm = std::max(tot.herm, r.herm);
        tot.min_eig = std::min(tot.min_eig, r.min_eig);
        tot.entropy_gap = std::max(tot.entropy_gap, r.entropy_gap);
        tot.norm = std::max(tot.norm, r.norm);
        tot.vmin_gap = std::max(tot.vmin_gap, r.vmin_gap);
        ++tot.samples;
    }
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

qmat::DensityMatrix random_two_qubit_state(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> rank_dist(1, 4);
    const int rank = rank_dist(rng);
    Eigen::MatrixXcd g(4, rank);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < rank; ++k)
            g(i, k) = {gauss(rng), gauss(rng)};
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return {0.5 * (rho + rho.adjoint()), qmat::Subsystem::two_qubit};
}

// Invariant suite.
void criterion_invariants(const Settings& s, Checks& out) {
    InvariantTotals tot;
    {
        model::ModelParams p;
        p.delta1 = 0.2;
        p.delta2 = 0.15;
        p.lambda1 = 0.32;
        p.lambda2 = 0.17;
        accumulate_run(p, {}, linspace(0.0, 600.0, 61), true, s, tot);
    }
    {
        model::ModelParams p;
        p.delta1 = p.delta2 = 0.08;
        p.lambda1 = p.lambda2 = 0.06;
        p.g = 0.1;
        dynamics::InitialState init;
        init.alpha = 0.5;
        accumulate_run(p, init, linspace(6500.0, 6700.0, 51), true, s, tot);
    }
    {
        model::ModelParams p;
        p.delta1 = 0.1;
        p.delta2 = 0.08;
        p.lambda1 = 0.02;
        p.lambda2 = 0.04;
        p.g = 0.2;
        dynamics::InitialState init;
        init.alpha = 2.0;
        init.theta = std::numbers::pi / 4;
        accumulate_run(p, init, linspace(0.0, 3000.0, 61), true, s, tot);
    }
    const std::string n = std::to_string(tot.samples) + " samples over 3 runs";
    out.push_back(at_most(5, "max |Tr rho - 1|", tot.trace, 1e-8, n));
    out.push_back(at_most(5, "max Hermiticity defect", tot.herm, 1e-12, n));
    out.push_back(at_least(5, "min eigenvalue of rho", tot.min_eig, -1e-6, n));
    out.push_back(at_most(5, "max |S(rho_osc) - S(rho)|", tot.entropy_gap, 1e-6, n));
    out.push_back(at_most(5, "max |sum |C|^2 - 1|", tot.norm, 1e-8, n));
    out.push_back(at_most(5, "max |V_min(Fock) - V_min(frame sums)|", tot.vmin_gap, 1e-7, n));

    // Husimi bounds and normalization on representative states.
    double worst_norm = 0.0;
    std::string husimi_detail;
    try {
        std::vector<qmat::DensityMatrix> states;
        const int d = 61;
        qmat::CMatrix vac = qmat::CMatrix::Zero(d, d);
        vac(0, 0) = 1.0;
        states.emplace_back(vac, qmat::Subsystem::oscillator);
        const Eigen::VectorXcd coh = oracle::coherent_vector({1.5, -0.7}, d - 1);
        states.emplace_back(coh * coh.adjoint(), qmat::Subsystem::oscillator);
        model::ModelParams p;
        p.delta1 = p.delta2 = 0.08;
        p.lambda1 = p.lambda2 = 0.06;
        p.g = 0.1;
        dynamics::InitialState init;
        init.alpha = 0.5;
        const auto st0 = dynamics::initial_coefficients(p, init, {s.tolerances.epsilon_trunc});
        for (double t : {0.0, 3300.0, 6600.0})
            states.push_back(dynamics::oscillator_rdm(dynamics::evolve(st0, t)));
        for (const auto& rho : states) {
            const auto f = observables::husimi_q(rho, observables::default_husimi_grid(rho), s.workers, 1.0);
            worst_norm = std::max(worst_norm, std::abs(f.normalization - 1.0));
            if (f.q.minCoeff() < 0.0 || f.peak_value > 1.0 / std::numbers::pi + 1e-12)
                throw GridError("Husimi field outside [0, 1/pi]", f.normalization);
        }
        husimi_detail = std::to_string(states.size()) + " fields, values within [0, 1/pi]";
    } catch (const Error& e) {
        worst_norm = 1.0;
        husimi_detail = e.what();
    }
    out.push_back(at_most(5, "max |integral Q - 1|", worst_norm, s.tolerances.husimi_norm, husimi_detail));

    // Numeric Bell search against the closed form.
    std::mt19937_64 rng(s.seed);
    std::vector<qmat::DensityMatrix> randoms;
    for (int i = 0; i < 100; ++i)
        randoms.push_back(random_two_qubit_state(rng));
    const auto gaps = parallel_map(randoms.size(), s.workers, [&](std::size_t i) {
        const auto rec = observables::bell_reconstruct(randoms[i], s.seed + i);
        return std::abs(rec.d_min - rec.d_min_closed);
    });
    out.push_back(at_most(5, "max |d_min(search) - d_min(closed form)|, 100 random states",
                          *std::max_element(gaps.begin(), gaps.end()), 1e-6));
}

// Discord without entanglement.
void criterion_discord(const Settings& s, Checks& out) {
    model::ModelParams p;
    p.delta1 = 0.1;
    p.delta2 = 0.08;
    p.lambda1 = 0.02;
    p.lambda2 = 0.04;
    dynamics::InitialState init;
    init.alpha = 2.0;
    const auto st0 = dynamics::initial_coefficients(p, init, {s.tolerances.epsilon_trunc});
    const auto times = linspace(0.0, 3000.0, 3001);
    const auto flags = parallel_map(times.size(), s.workers, [&](std::size_t i) {
        const auto rho = dynamics::two_qubit_rdm(dynamics::evolve(st0, times[i]));
        return observables::concurrence(rho) == 0.0 && 2.0 * observables::geometric_discord(rho) > 1e-3 ? 1 : 0;
    });
    int count = 0;
    double first = -1.0;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) {
            ++count;
            if (first < 0.0)
                first = times[i];
        }
    out.push_back(at_least(6, "samples with C = 0 and 2 D_G > 1e-3, wt in [0, 3000]", count, 1.0,
                           count ? "first at wt=" + fmt(first) : "none found"));
}

}  // namespace

Report run_validation(const Settings& settings) {
    struct Entry {
        int id;
        const char* title;
        std::function<void(const Settings&, Checks&)> run;
    };
    const Entry entries[] = {
        {1, "Bell-pair reconstruction", criterion_bell_pair},
        {2, "squeezed-coherent generation", criterion_squeezing},
        {3, "revival times", criterion_revivals},
        {4, "spectrum against exact diagonalization", criterion_spectrum},
        {5, "invariant suite", criterion_invariants},
        {6, "discord beyond entanglement", criterion_discord},
    };
    Report report;
    for (const auto& e : entries) {
        const auto t0 = Clock::now();
        Checks checks;
        try {
            e.run(settings, checks);
        } catch (const std::exception& ex) {
            Check c;
            c.criterion = e.id;
            c.name = "run";
            c.relation = "completes";
            c.status = Status::fail;
            c.margin = -1.0;
            c.detail = ex.what();
            checks.push_back(c);
        }
        Criterion crit;
        crit.id = e.id;
        crit.title = e.title;
        crit.seconds = seconds_since(t0);
        const bool any_fail = std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::fail; });
        const bool all_skip = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::skipped; });
        crit.status = any_fail ? Status::fail : (all_skip ? Status::skipped : Status::pass);
        report.criteria.push_back(crit);
        report.checks.insert(report.checks.end(), checks.begin(), checks.end());
    }
    return report;
}

}  // namespace qrabi::validation
