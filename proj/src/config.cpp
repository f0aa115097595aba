#include "qrabi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qrabi/errors.hpp"

namespace qrabi::config {

using nlohmann::json;

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(static_cast<std::size_t>(samples));
    const double h = (t_end - t_start) / (samples - 1);
    for (int i = 0; i < samples; ++i)
        t[static_cast<std::size_t>(i)] = t_start + i * h;
    t.back() = t_end;
    return t;
}

const std::vector<std::string>& known_outputs() {
    static const std::vector<std::string> names{"inversion", "entropy",     "coherence", "discord",
                                                "concurrence", "purity",    "v_min",     "osc_entropy"};
    return names;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError("config field '" + field + "': " + msg);
}

const std::vector<std::string> kSweepParams{"g", "lambda1", "lambda2", "lambda", "delta1", "delta2", "delta"};

double number(const json& obj, const char* key, const std::string& path, double fallback) {
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        fail(path + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        fail(path + "." + key, "must be finite");
    return x;
}

int integer(const json& obj, const char* key, const std::string& path, int fallback) {
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; }))
            fail(path + "." + it.key(), "unknown field");
}

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array())
        fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            fail(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

}  // namespace

RunConfig parse_config(const json& j) {
    check_keys(j, "$", {"schema_version", "model", "initial", "time_grid", "outputs", "husimi", "spectrum",
                        "bell", "tolerances", "sweep", "seed", "oracle"});
    RunConfig c;
    c.schema_version = integer(j, "schema_version", "$", kSchemaVersion);
    if (c.schema_version != kSchemaVersion)
        fail("schema_version", "unsupported version " + std::to_string(c.schema_version));

    if (j.contains("model")) {
        const auto& m = j.at("model");
        check_keys(m, "model", {"omega", "delta1", "delta2", "lambda1", "lambda2", "g", "n_max"});
        c.model.omega = number(m, "omega", "model", 1.0);
        c.model.delta1 = number(m, "delta1", "model", 0.0);
        c.model.delta2 = number(m, "delta2", "model", 0.0);
        c.model.lambda1 = number(m, "lambda1", "model", 0.0);
        c.model.lambda2 = number(m, "lambda2", "model", 0.0);
        c.model.g = number(m, "g", "model", 0.0);
        c.model.n_max = integer(m, "n_max", "model", 0);
        if (!(c.model.omega > 0.0))
            fail("model.omega", "must be positive");
        if (!(std::abs(c.model.g) < 0.5 * c.model.omega))
            fail("model.g", "|g| must stay below omega/2 (spectral collapse)");
        if (c.model.n_max < 0)
            fail("model.n_max", "must be >= 0 (0 = automatic)");
    }
    if (j.contains("initial")) {
        const auto& i = j.at("initial");
        check_keys(i, "initial", {"theta", "phi", "alpha_re", "alpha_im"});
        c.initial.theta = number(i, "theta", "initial", 0.0);
        c.initial.phi = number(i, "phi", "initial", 0.0);
        c.initial.alpha = {number(i, "alpha_re", "initial", 0.0), number(i, "alpha_im", "initial", 0.0)};
    }
    if (j.contains("time_grid")) {
        const auto& t = j.at("time_grid");
        check_keys(t, "time_grid", {"t_start", "t_end", "samples"});
        c.time_grid.t_start = number(t, "t_start", "time_grid", 0.0);
        c.time_grid.t_end = number(t, "t_end", "time_grid", 1000.0);
        c.time_grid.samples = integer(t, "samples", "time_grid", 1001);
        if (c.time_grid.samples < 2)
            fail("time_grid.samples", "must be >= 2");
        if (c.time_grid.t_start < 0.0)
            fail("time_grid.t_start", "must be >= 0");
        if (!(c.time_grid.t_end > c.time_grid.t_start))
            fail("time_grid.t_end", "must exceed t_start");
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        if (!o.is_array() || o.empty())
            fail("outputs", "expected a non-empty array of observable names");
        c.outputs.clear();
        for (std::size_t k = 0; k < o.size(); ++k) {
            if (!o[k].is_string())
                fail("outputs[" + std::to_string(k) + "]", "expected a string");
            const auto name = o[k].get<std::string>();
            const auto& known = known_outputs();
            if (std::find(known.begin(), known.end(), name) == known.end())
                fail("outputs[" + std::to_string(k) + "]", "unknown observable '" + name + "'");
            c.outputs.push_back(name);
        }
    }
    if (j.contains("husimi")) {
        const auto& h = j.at("husimi");
        check_keys(h, "husimi", {"points", "half_width", "center_re", "center_im", "t"});
        c.husimi.points = integer(h, "points", "husimi", 201);
        if (c.husimi.points < 3)
            fail("husimi.points", "must be >= 3");
        if (h.contains("half_width")) {
            c.husimi.half_width = number(h, "half_width", "husimi", 4.0);
            if (!(*c.husimi.half_width > 0.0))
                fail("husimi.half_width", "must be positive");
        }
        if (h.contains("center_re") || h.contains("center_im"))
            c.husimi.center = dynamics::cplx(number(h, "center_re", "husimi", 0.0), number(h, "center_im", "husimi", 0.0));
        c.husimi.t = number(h, "t", "husimi", 0.0);
        if (c.husimi.t < 0.0)
            fail("husimi.t", "must be >= 0");
    }
    if (j.contains("spectrum")) {
        const auto& s = j.at("spectrum");
        check_keys(s, "spectrum", {"levels", "n_fock"});
        c.spectrum.levels = integer(s, "levels", "spectrum", 12);
        c.spectrum.n_fock = integer(s, "n_fock", "spectrum", 160);
        if (c.spectrum.levels < 1)
            fail("spectrum.levels", "must be >= 1");
        if (c.spectrum.n_fock < 4)
            fail("spectrum.n_fock", "must be >= 4");
    }
    if (j.contains("bell")) {
        const auto& b = j.at("bell");
        check_keys(b, "bell", {"times", "restarts"});
        if (b.contains("times"))
            c.bell_times = number_list(b.at("times"), "bell.times");
        c.bell_restarts = integer(b, "restarts", "bell", 8);
        if (c.bell_restarts < 0)
            fail("bell.restarts", "must be >= 0");
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        check_keys(t, "tolerances", {"epsilon_trunc", "spectrum_abs", "rdm_max_abs", "husimi_norm"});
        c.tolerances.epsilon_trunc = number(t, "epsilon_trunc", "tolerances", 1e-8);
        c.tolerances.spectrum_abs = number(t, "spectrum_abs", "tolerances", 2e-3);
        c.tolerances.rdm_max_abs = number(t, "rdm_max_abs", "tolerances", 2e-2);
        c.tolerances.husimi_norm = number(t, "husimi_norm", "tolerances", 1e-3);
        if (!(c.tolerances.epsilon_trunc > 0.0))
            fail("tolerances.epsilon_trunc", "must be positive");
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_keys(s, "sweep", {"parameter", "values"});
        if (!s.contains("parameter") || !s.at("parameter").is_string())
            fail("sweep.parameter", "expected a string");
        Sweep sw;
        sw.parameter = s.at("parameter").get<std::string>();
        if (std::find(kSweepParams.begin(), kSweepParams.end(), sw.parameter) == kSweepParams.end())
            fail("sweep.parameter", "unknown parameter '" + sw.parameter + "'");
        if (s.contains("values"))
            sw.values = number_list(s.at("values"), "sweep.values");
        if (sw.values.empty())
            fail("sweep.values", "no values given");
        c.sweep = sw;
    }
    if (j.contains("seed")) {
        const auto& sd = j.at("seed");
        if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<std::int64_t>() < 0))
            fail("seed", "expected a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        check_keys(o, "oracle", {"enabled"});
        if (o.contains("enabled")) {
            if (!o.at("enabled").is_boolean())
                fail("oracle.enabled", "expected true or false");
            c.oracle_enabled = o.at("enabled").get<bool>();
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["model"] = {{"omega", c.model.omega},     {"delta1", c.model.delta1},   {"delta2", c.model.delta2},
                  {"lambda1", c.model.lambda1}, {"lambda2", c.model.lambda2}, {"g", c.model.g},
                  {"n_max", c.model.n_max}};
    j["initial"] = {{"theta", c.initial.theta},
                    {"phi", c.initial.phi},
                    {"alpha_re", c.initial.alpha.real()},
                    {"alpha_im", c.initial.alpha.imag()}};
    j["time_grid"] = {{"t_start", c.time_grid.t_start}, {"t_end", c.time_grid.t_end}, {"samples", c.time_grid.samples}};
    j["outputs"] = c.outputs;
    j["husimi"] = {{"points", c.husimi.points}, {"t", c.husimi.t}};
    if (c.husimi.half_width)
        j["husimi"]["half_width"] = *c.husimi.half_width;
    if (c.husimi.center) {
        j["husimi"]["center_re"] = c.husimi.center->real();
        j["husimi"]["center_im"] = c.husimi.center->imag();
    }
    j["spectrum"] = {{"levels", c.spectrum.levels}, {"n_fock", c.spectrum.n_fock}};
    j["bell"] = {{"times", c.bell_times}, {"restarts", c.bell_restarts}};
    j["tolerances"] = {{"epsilon_trunc", c.tolerances.epsilon_trunc},
                       {"spectrum_abs", c.tolerances.spectrum_abs},
                       {"rdm_max_abs", c.tolerances.rdm_max_abs},
                       {"husimi_norm", c.tolerances.husimi_norm}};
    if (c.sweep)
        j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
    j["seed"] = c.seed;
    j["oracle"] = {{"enabled", c.oracle_enabled}};
    return j;
}

Sweep parse_sweep(const std::string& parameter, const std::string& spec) {
    if (std::find(kSweepParams.begin(), kSweepParams.end(), parameter) == kSweepParams.end())
        throw ConfigError("sweep: unknown parameter '" + parameter + "'");
    Sweep sw;
    sw.parameter = parameter;
    auto to_double = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("sweep: cannot parse '" + s + "' as a number");
        }
    };
    if (std::count(spec.begin(), spec.end(), ':') == 2) {
        const auto p1 = spec.find(':');
        const auto p2 = spec.find(':', p1 + 1);
        const double a = to_double(spec.substr(0, p1));
        const double b = to_double(spec.substr(p1 + 1, p2 - p1 - 1));
        const double n = to_double(spec.substr(p2 + 1));
        if (n < 1 || n != std::floor(n))
            throw ConfigError("sweep: count must be a positive integer");
        const int count = static_cast<int>(n);
        for (int k = 0; k < count; ++k)
            sw.values.push_back(count == 1 ? a : a + (b - a) * k / (count - 1));
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                sw.values.push_back(to_double(item));
    }
    if (sw.values.empty())
        throw ConfigError("sweep: no values given");
    return sw;
}

model::ModelParams apply_sweep(const model::ModelParams& base, const std::string& parameter, double value) {
    model::ModelParams p = base;
    if (parameter == "g")
        p.g = value;
    else if (parameter == "lambda1")
        p.lambda1 = value;
    else if (parameter == "lambda2")
        p.lambda2 = value;
    else if (parameter == "lambda")
        p.lambda1 = p.lambda2 = value;
    else if (parameter == "delta1")
        p.delta1 = value;
    else if (parameter == "delta2")
        p.delta2 = value;
    else if (parameter == "delta")
        p.delta1 = p.delta2 = value;
    else
        throw ConfigError("sweep: unknown parameter '" + parameter + "'");
    return p;
}

}  // namespace qrabi::config
