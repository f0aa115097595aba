#include "qrabi/pipeline.hpp"

#include "qrabi/errors.hpp"
#include "qrabi/observables.hpp"
#include "qrabi/parallel.hpp"

namespace qrabi::pipeline {

std::vector<std::vector<double>> dynamics_series(const dynamics::EvolutionState& initial,
                                                 const std::vector<double>& times,
                                                 const std::vector<std::string>& outputs, int workers) {
    bool need_osc = false;
    for (const auto& o : outputs)
        need_osc = need_osc || o == "v_min" || o == "osc_entropy";

    return parallel_map(times.size(), workers, [&](std::size_t i) {
        const auto st = dynamics::evolve(initial, times[i] - initial.t);
        std::vector<double> row;
        row.reserve(outputs.size());
        const auto rho = dynamics::two_qubit_rdm(st);
        qmat::DensityMatrix rho_osc;
        if (need_osc)
            rho_osc = dynamics::oscillator_rdm(st);
        for (const auto& o : outputs) {
            if (o == "inversion")
                row.push_back(observables::population_inversion(rho));
            else if (o == "entropy")
                row.push_back(qmat::von_neumann_entropy(rho));
            else if (o == "coherence")
                row.push_back(observables::relative_entropy_coherence(rho));
            else if (o == "discord")
                row.push_back(2.0 * observables::geometric_discord(rho));
            else if (o == "concurrence")
                row.push_back(observables::concurrence(rho));
            else if (o == "purity")
                row.push_back(qmat::purity(rho));
            else if (o == "v_min")
                row.push_back(observables::quadrature_variance(rho_osc).v_min);
            else if (o == "osc_entropy")
                row.push_back(qmat::von_neumann_entropy(rho_osc));
            else
                throw ConfigError("unknown observable '" + o + "'");
        }
        return row;
    });
}

std::string column_header(const std::string& output) {
    if (output == "inversion")
        return "inversion";
    if (output == "entropy")
        return "entropy_bits";
    if (output == "coherence")
        return "coherence_re_bits";
    if (output == "discord")
        return "discord_2dg";
    if (output == "concurrence")
        return "concurrence";
    if (output == "purity")
        return "purity";
    if (output == "v_min")
        return "v_min";
    if (output == "osc_entropy")
        return "osc_entropy_bits";
    throw ConfigError("unknown observable '" + output + "'");
}

}  // namespace qrabi::pipeline
