// qrabi: spectrum, dynamics, Bell reconstruction, Husimi fields and the
// acceptance suite for the two-qubit Rabi model with a parametric oscillator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qrabi/config.hpp"
#include "qrabi/errors.hpp"
#include "qrabi/observables.hpp"
#include "qrabi/oracle.hpp"
#include "qrabi/parallel.hpp"
#include "qrabi/pipeline.hpp"
#include "qrabi/validation.hpp"

namespace fs = std::filesystem;
using namespace qrabi;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_)
            throw Error("cannot write '" + path.string() + "'");
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

nlohmann::json complex_json(dynamics::cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

struct Globals {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 1;
    std::optional<std::uint64_t> seed;
};

config::RunConfig load(const Globals& g) {
    config::RunConfig cfg = g.config_path.empty() ? config::RunConfig{} : config::load_config(g.config_path);
    if (g.seed)
        cfg.seed = *g.seed;
    return cfg;
}

fs::path out_file(const Globals& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

dynamics::EvolutionState initial_state(const config::RunConfig& cfg) {
    if (cfg.model.adiabatic_warning())
        std::cerr << "warning: Delta_j >= omega/4, the adiabatic approximation is degrading\n";
    const auto st = dynamics::initial_coefficients(cfg.model, cfg.initial, {cfg.tolerances.epsilon_trunc});
    if (st.frame.near_collapse)
        std::cerr << "warning: Omega/omega = " << st.frame.collapse_proximity << ", close to spectral collapse\n";
    return st;
}

int cmd_spectrum(const Globals& g, const std::string& sweep_arg) {
    const auto cfg = load(g);
    config::Sweep sweep;
    if (!sweep_arg.empty()) {
        const auto eq = sweep_arg.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--sweep expects parameter=start:stop:count or parameter=v1,v2,...");
        sweep = config::parse_sweep(sweep_arg.substr(0, eq), sweep_arg.substr(eq + 1));
    } else if (cfg.sweep) {
        sweep = *cfg.sweep;
    } else {
        throw ConfigError("spectrum: no sweep given (use --sweep or the config 'sweep' field)");
    }
    if (sweep.values.empty())
        throw ConfigError("spectrum: the sweep has no values");

    const int levels = cfg.spectrum.levels;
    struct Point {
        std::vector<double> adiabatic;
        Eigen::VectorXd exact;
        double gap = 0.0;
    };
    const auto points = parallel_map(sweep.values.size(), g.workers, [&](std::size_t i) {
        const auto p = config::apply_sweep(cfg.model, sweep.parameter, sweep.values[i]);
        const auto frame = model::build_frame(p);
        Point pt;
        pt.adiabatic = model::adiabatic_spectrum(p, frame, levels, levels);
        pt.gap = frame.Omega;
        if (cfg.oracle_enabled)
            pt.exact = oracle::exact_spectrum(oracle::build_full_hamiltonian(p, cfg.spectrum.n_fock), levels);
        return pt;
    });

    CsvWriter csv(out_file(g, "spectrum.csv"),
                  {sweep.parameter + "_omega", "level_index", "E_adiabatic_omega", "E_exact_omega", "abs_error_omega",
                   "oscillator_gap_omega"});
    const double w = cfg.model.omega;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (int k = 0; k < levels; ++k) {
            const double ad = points[i].adiabatic[static_cast<std::size_t>(k)];
            const bool has_exact = points[i].exact.size() > k;
            const double ex = has_exact ? points[i].exact(k) : 0.0;
            csv.row({num(sweep.values[i] / w), std::to_string(k), num(ad / w), has_exact ? num(ex / w) : "nan",
                     has_exact ? num(std::abs(ad - ex) / w) : "nan", num(points[i].gap / w)});
        }
    std::cout << "wrote " << points.size() * static_cast<std::size_t>(levels) << " rows to "
              << out_file(g, "spectrum.csv").string() << '\n';
    return 0;
}

int cmd_dynamics(const Globals& g) {
    const auto cfg = load(g);
    const auto st0 = initial_state(cfg);
    const auto times = cfg.time_grid.times();
    const auto rows = pipeline::dynamics_series(st0, times, cfg.outputs, g.workers);
    std::vector<std::string> header{"omega_t"};
    for (const auto& o : cfg.outputs)
        header.push_back(pipeline::column_header(o));
    CsvWriter csv(out_file(g, "dynamics.csv"), header);
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<std::string> cells{num(times[i])};
        for (double v : rows[i])
            cells.push_back(num(v));
        csv.row(cells);
    }
    std::cout << "wrote " << times.size() << " samples (cutoff " << st0.n_max() << ") to "
              << out_file(g, "dynamics.csv").string() << '\n';
    return 0;
}

int cmd_bell(const Globals& g, const std::vector<double>& times_arg) {
    const auto cfg = load(g);
    const auto times = times_arg.empty() ? cfg.bell_times : times_arg;
    if (times.empty())
        throw ConfigError("bell: no times given (use --times or the config 'bell.times' field)");
    for (double t : times)
        if (t < 0.0)
            throw ConfigError("bell: times must be >= 0");
    const auto st0 = initial_state(cfg);
    static const char* names[] = {"Phi+", "Phi-", "Psi+", "Psi-"};
    const auto records = parallel_map(times.size(), g.workers, [&](std::size_t i) {
        const auto rho = dynamics::two_qubit_rdm(dynamics::evolve(st0, times[i]));
        const auto rec = observables::bell_reconstruct(rho, cfg.seed, cfg.bell_restarts);
        nlohmann::json coeffs = nlohmann::json::array();
        for (int k = 0; k < 4; ++k) {
            const auto a = rec.coefficients.alpha[static_cast<std::size_t>(k)];
            coeffs.push_back({{"state", names[k]}, {"re", a.real()}, {"im", a.imag()}, {"abs", std::abs(a)}});
        }
        return nlohmann::json{{"omega_t", times[i]},
                              {"concurrence", observables::concurrence(rho)},
                              {"purity", rec.purity},
                              {"d_min", rec.d_min},
                              {"d_min_closed_form", rec.d_min_closed},
                              {"degenerate", rec.degenerate},
                              {"dominant", names[rec.coefficients.dominant()]},
                              {"coefficients", coeffs}};
    });
    nlohmann::json j{{"schema_version", config::kSchemaVersion}, {"n_max", st0.n_max()}, {"seed", cfg.seed},
                     {"records", records}};
    write_json(out_file(g, "bell.json"), j);
    for (const auto& r : records)
        std::printf("wt=%g  C=%.4f  purity=%.4f  d_min=%.5f  dominant %s\n", r["omega_t"].get<double>(),
                    r["concurrence"].get<double>(), r["purity"].get<double>(), r["d_min"].get<double>(),
                    r["dominant"].get<std::string>().c_str());
    return 0;
}

int cmd_husimi(const Globals& g, std::optional<double> t_arg) {
    const auto cfg = load(g);
    const double t = t_arg.value_or(cfg.husimi.t);
    if (t < 0.0)
        throw ConfigError("husimi: t must be >= 0");
    const auto st = dynamics::evolve(initial_state(cfg), t);
    const auto rho_osc = dynamics::oscillator_rdm(st);
    auto grid = observables::default_husimi_grid(rho_osc);
    grid.points = cfg.husimi.points;
    if (cfg.husimi.half_width)
        grid.half_width = *cfg.husimi.half_width;
    if (cfg.husimi.center)
        grid.center = *cfg.husimi.center;
    const auto field = observables::husimi_q(rho_osc, grid, g.workers, cfg.tolerances.husimi_norm);
    const auto q = observables::quadrature_variance(rho_osc);
    const auto q_frames = observables::quadrature_variance_frame_sums(st);

    CsvWriter csv(out_file(g, "husimi.csv"), {"re_beta", "im_beta", "q"});
    for (int i_im = 0; i_im < grid.points; ++i_im)
        for (int i_re = 0; i_re < grid.points; ++i_re) {
            const auto b = grid.at(i_re, i_im);
            csv.row({num(b.real()), num(b.imag()), num(field.q(i_im, i_re))});
        }
    nlohmann::json meta{{"schema_version", config::kSchemaVersion},
                        {"omega_t", t},
                        {"n_max", st.n_max()},
                        {"grid", {{"center", complex_json(grid.center)}, {"half_width", grid.half_width},
                                  {"points", grid.points}, {"spacing", grid.spacing()}}},
                        {"normalization", field.normalization},
                        {"normalization_tolerance", cfg.tolerances.husimi_norm},
                        {"peak", complex_json(field.peak)},
                        {"peak_value", field.peak_value},
                        {"peak_offset_cells", std::abs(field.peak) / grid.spacing()},
                        {"a_mean", complex_json(q.a_mean)},
                        {"a2_mean", complex_json(q.a2_mean)},
                        {"n_mean", q.n_mean},
                        {"v_min", q.v_min},
                        {"v_min_frame_sums", q_frames.v_min},
                        {"squeezed", q.squeezed}};
    write_json(out_file(g, "husimi.json"), meta);
    std::printf("wt=%g  V_min=%.6f  peak at (%.4f, %.4f)  normalization %.6f\n", t, q.v_min, field.peak.real(),
                field.peak.imag(), field.normalization);
    return 0;
}

int cmd_validate(const Globals& g) {
    const auto cfg = load(g);
    const auto report = validation::run_validation(validation::settings_from(cfg, g.workers));
    write_json(out_file(g, "validation.json"), report.to_json());
    for (const auto& c : report.checks)
        std::printf("[%s] %d: %s = %.6g (margin %.3g)%s%s\n", std::string(validation::to_string(c.status)).c_str(),
                    c.criterion, c.name.c_str(), c.measured, c.margin, c.detail.empty() ? "" : "  ",
                    c.detail.c_str());
    std::printf("overall: %s\n", report.passed() ? "pass" : "fail");
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit Rabi model with a parametric oscillator (adiabatic approximation)"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "seed for the Bell-search restarts");
    app.fallthrough();

    std::string sweep;
    auto* spectrum = app.add_subcommand("spectrum", "adiabatic vs exact energies over a parameter sweep");
    spectrum->add_option("--sweep", sweep, "parameter=start:stop:count or parameter=v1,v2,...");

    app.add_subcommand("dynamics", "time series of the configured observables");

    std::vector<double> times;
    auto* bell = app.add_subcommand("bell", "closest pure state in the Bell basis");
    bell->add_option("--times", times, "scaled times omega t")->delimiter(',');

    double t = 0.0;
    auto* husimi = app.add_subcommand("husimi", "Husimi Q-function of the oscillator");
    auto* t_opt = husimi->add_option("--t", t, "scaled time omega t");

    app.add_subcommand("validate", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt)
        g.seed = seed;

    try {
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "spectrum")
            return cmd_spectrum(g, sweep);
        if (name == "dynamics")
            return cmd_dynamics(g);
        if (name == "bell")
            return cmd_bell(g, times);
        if (name == "husimi")
            return cmd_husimi(g, *t_opt ? std::optional<double>(t) : std::nullopt);
        return cmd_validate(g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
