#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fidelity.hpp"
#include "husimi.hpp"
#include "pipeline.hpp"
#include "signals.hpp"
#include "tomography.hpp"

namespace fractfid {

/// Raised for any malformed or out-of-range configuration value.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> c{"fidelity", "fracdim", "sweep", "tomography", "husimi", "synth"};
    return c;
}

struct InitialSpec {
    std::string kind = "gaussian";  ///< gaussian | momentum
    double theta0 = std::numbers::pi + 0.4;
    double n0 = 0.0;
    std::optional<double> sigma_n;
    std::int64_t n = 0;  ///< momentum eigenvalue for kind = momentum
};

struct SignalConfig {
    std::string kind = "weierstrass";  ///< line | sinusoid | weierstrass
    double slope = 1.0;
    double period = 10.0;
    double amplitude = 1.0;
    double a = 0.5;
    double b = 3.0;
    double span = 1.0;
};

/// Everything needed to re-run a command; serializes to and from JSON.
struct RunConfig {
    std::string command;
    std::vector<int> n_q{8};
    std::vector<double> K{std::numbers::sqrt2};
    std::vector<double> epsilon{1e-4};
    std::uint64_t seed = 1;
    int realizations = 4;
    InitialSpec initial;
    std::int64_t t_max = 65536;
    std::optional<std::int64_t> t_star;
    std::optional<FitWindow> window;
    double saturation_fraction = kDefaultSaturationFraction;
    std::size_t min_window_points = 8;
    bool detrend = false;
    int histogram_bins = 0;
    int grid = 8;
    int grid_theta = 32;
    int grid_n = 32;
    std::int64_t husimi_steps = 0;
    std::string seed_policy = "shared";
    bool keep_series = false;
    std::string input;
    std::string column;
    SignalConfig signal;
    std::int64_t length = 65536;
    double crossover_threshold = 1.1;
    bool dump_circuit = false;
    std::string output_dir;
    std::size_t workers = 1;
};

/// Command-specific defaults.
inline RunConfig default_config(const std::string& command) {
    RunConfig c;
    c.command = command;
    if (command == "sweep") {
        c.n_q = {4, 6, 8};
        c.K = {-3.0, -2.0, -1.0, std::numbers::sqrt2};
        c.epsilon.clear();
        for (int e = 0; e <= 16; ++e) c.epsilon.push_back(std::pow(10.0, -6.0 + 0.25 * e));
        c.t_max = 32768;
    } else if (command == "tomography") {
        c.n_q = {10};
        c.K = {-2.1};
        c.epsilon = {2e-5};
        c.t_max = 16384;
    } else if (command == "husimi") {
        c.K = {-2.1};
    }
    return c;
}

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& j, const char* key) {
    if (j.is_array()) {
        auto v = j.get<std::vector<T>>();
        if (v.empty()) throw ConfigError(std::string(key) + ": list must not be empty");
        return v;
    }
    return {j.get<T>()};
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        if (!allowed.contains(k)) throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& c) {
    using nlohmann::json;
    json j;
    j["command"] = c.command;
    j["n_q"] = c.n_q;
    j["K"] = c.K;
    j["epsilon"] = c.epsilon;
    j["seed"] = c.seed;
    j["realizations"] = c.realizations;
    json ic{{"kind", c.initial.kind}};
    if (c.initial.kind == "momentum") {
        ic["n"] = c.initial.n;
    } else {
        ic["theta0"] = c.initial.theta0;
        ic["n0"] = c.initial.n0;
        ic["sigma_n"] = c.initial.sigma_n ? json(*c.initial.sigma_n) : json(nullptr);
    }
    j["initial"] = ic;
    j["t_max"] = c.t_max;
    j["t_star"] = c.t_star ? json(*c.t_star) : json(nullptr);
    j["window"] = c.window ? json{{"L_min", c.window->L_min}, {"L_max", c.window->L_max}} : json(nullptr);
    j["saturation_fraction"] = c.saturation_fraction;
    j["min_window_points"] = c.min_window_points;
    j["detrend"] = c.detrend;
    j["histogram_bins"] = c.histogram_bins;
    j["grid"] = c.grid;
    j["grid_theta"] = c.grid_theta;
    j["grid_n"] = c.grid_n;
    j["husimi_steps"] = c.husimi_steps;
    j["seed_policy"] = c.seed_policy;
    j["keep_series"] = c.keep_series;
    j["input"] = c.input;
    j["column"] = c.column;
    j["signal"] = {{"kind", c.signal.kind}, {"slope", c.signal.slope}, {"period", c.signal.period},
                   {"amplitude", c.signal.amplitude}, {"a", c.signal.a}, {"b", c.signal.b},
                   {"span", c.signal.span}};
    j["length"] = c.length;
    j["crossover_threshold"] = c.crossover_threshold;
    j["dump_circuit"] = c.dump_circuit;
    j["output_dir"] = c.output_dir;
    j["workers"] = c.workers;
    return j;
}

/// Overlays the keys present in `j` onto `c`. Unknown keys and wrong types
/// are configuration errors.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    static const std::set<std::string> keys{
        "command", "n_q", "K", "epsilon", "seed", "realizations", "initial", "t_max", "t_star", "window",
        "saturation_fraction", "min_window_points", "detrend", "histogram_bins", "grid", "grid_theta", "grid_n",
        "husimi_steps", "seed_policy", "keep_series", "input", "column", "signal", "length",
        "crossover_threshold", "dump_circuit", "output_dir", "workers"};
    detail::reject_unknown(j, keys, "config");
    try {
        if (j.contains("command")) {
            const auto cmd = j.at("command").get<std::string>();
            if (!c.command.empty() && cmd != c.command) {
                throw ConfigError("config: file is for command '" + cmd + "', not '" + c.command + "'");
            }
            c.command = cmd;
        }
        if (j.contains("n_q")) c.n_q = detail::scalar_or_list<int>(j.at("n_q"), "n_q");
        if (j.contains("K")) c.K = detail::scalar_or_list<double>(j.at("K"), "K");
        if (j.contains("epsilon")) c.epsilon = detail::scalar_or_list<double>(j.at("epsilon"), "epsilon");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("realizations")) c.realizations = j.at("realizations").get<int>();
        if (j.contains("initial")) {
            const auto& ic = j.at("initial");
            if (!ic.is_object()) throw ConfigError("initial: must be an object");
            detail::reject_unknown(ic, {"kind", "theta0", "n0", "sigma_n", "n"}, "initial");
            if (ic.contains("kind")) c.initial.kind = ic.at("kind").get<std::string>();
            if (ic.contains("theta0")) c.initial.theta0 = ic.at("theta0").get<double>();
            if (ic.contains("n0")) c.initial.n0 = ic.at("n0").get<double>();
            if (ic.contains("sigma_n")) {
                c.initial.sigma_n = ic.at("sigma_n").is_null() ? std::nullopt
                                                                : std::optional<double>(ic.at("sigma_n").get<double>());
            }
            if (ic.contains("n")) c.initial.n = ic.at("n").get<std::int64_t>();
        }
        if (j.contains("t_max")) c.t_max = j.at("t_max").get<std::int64_t>();
        if (j.contains("t_star")) {
            c.t_star = j.at("t_star").is_null() ? std::nullopt
                                                : std::optional<std::int64_t>(j.at("t_star").get<std::int64_t>());
        }
        if (j.contains("window")) {
            const auto& w = j.at("window");
            if (w.is_null()) {
                c.window.reset();
            } else {
                detail::reject_unknown(w, {"L_min", "L_max"}, "window");
                c.window = FitWindow{w.at("L_min").get<std::int64_t>(), w.at("L_max").get<std::int64_t>()};
            }
        }
        if (j.contains("saturation_fraction")) c.saturation_fraction = j.at("saturation_fraction").get<double>();
        if (j.contains("min_window_points")) c.min_window_points = j.at("min_window_points").get<std::size_t>();
        if (j.contains("detrend")) c.detrend = j.at("detrend").get<bool>();
        if (j.contains("histogram_bins")) c.histogram_bins = j.at("histogram_bins").get<int>();
        if (j.contains("grid")) c.grid = j.at("grid").get<int>();
        if (j.contains("grid_theta")) c.grid_theta = j.at("grid_theta").get<int>();
        if (j.contains("grid_n")) c.grid_n = j.at("grid_n").get<int>();
        if (j.contains("husimi_steps")) c.husimi_steps = j.at("husimi_steps").get<std::int64_t>();
        if (j.contains("seed_policy")) c.seed_policy = j.at("seed_policy").get<std::string>();
        if (j.contains("keep_series")) c.keep_series = j.at("keep_series").get<bool>();
        if (j.contains("input")) c.input = j.at("input").get<std::string>();
        if (j.contains("column")) c.column = j.at("column").get<std::string>();
        if (j.contains("signal")) {
            const auto& s = j.at("signal");
            if (!s.is_object()) throw ConfigError("signal: must be an object");
            detail::reject_unknown(s, {"kind", "slope", "period", "amplitude", "a", "b", "span"}, "signal");
            if (s.contains("kind")) c.signal.kind = s.at("kind").get<std::string>();
            if (s.contains("slope")) c.signal.slope = s.at("slope").get<double>();
            if (s.contains("period")) c.signal.period = s.at("period").get<double>();
            if (s.contains("amplitude")) c.signal.amplitude = s.at("amplitude").get<double>();
            if (s.contains("a")) c.signal.a = s.at("a").get<double>();
            if (s.contains("b")) c.signal.b = s.at("b").get<double>();
            if (s.contains("span")) c.signal.span = s.at("span").get<double>();
        }
        if (j.contains("length")) c.length = j.at("length").get<std::int64_t>();
        if (j.contains("crossover_threshold")) c.crossover_threshold = j.at("crossover_threshold").get<double>();
        if (j.contains("dump_circuit")) c.dump_circuit = j.at("dump_circuit").get<bool>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline RunConfig from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("command")) throw ConfigError("config: missing 'command'");
    RunConfig c = default_config(j.at("command").get<std::string>());
    apply_json(c, j);
    return c;
}

inline InitialCondition initial_condition(const RunConfig& c) {
    if (c.initial.kind == "momentum") return MomentumEigenstate{c.initial.n};
    return GaussianPacketSpec{c.initial.theta0, c.initial.n0, c.initial.sigma_n};
}

inline PipelineOptions pipeline_options(const RunConfig& c) {
    PipelineOptions o;
    o.box.window = c.window;
    o.box.min_window_points = c.min_window_points;
    o.box.saturation_fraction = c.saturation_fraction;
    o.t_star = c.t_star;
    o.detrend = c.detrend;
    return o;
}

inline SignalSpec signal_spec(const RunConfig& c) {
    if (c.signal.kind == "line") return LineSignal{c.signal.slope};
    if (c.signal.kind == "sinusoid") return SinusoidSignal{c.signal.period, c.signal.amplitude};
    return WeierstrassSignal{c.signal.a, c.signal.b, c.signal.span};
}

inline SeedPolicy seed_policy(const RunConfig& c) {
    return c.seed_policy == "per_cell" ? SeedPolicy::per_cell : SeedPolicy::shared;
}

/// Checks every field the command uses; throws ConfigError on the first problem.
inline void validate(const RunConfig& c) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    bool known = false;
    for (const auto& k : known_commands()) known = known || k == c.command;
    if (!known) fail("unknown command '" + c.command + "'");

    const bool single = c.command != "sweep";
    const bool needs_map = c.command != "synth" && !(c.command == "fracdim" && !c.input.empty());
    if (needs_map) {
        if (single && (c.n_q.size() != 1 || c.K.size() != 1 || c.epsilon.size() != 1)) {
            fail(c.command + ": n_q, K and epsilon take a single value");
        }
        for (int n : c.n_q) {
            if (n < 1 || n > kMaxQubits) fail("n_q must lie in [1, " + std::to_string(kMaxQubits) + "]");
        }
        for (double K : c.K) {
            if (!std::isfinite(K)) fail("K must be finite");
        }
        for (double e : c.epsilon) {
            if (!(e >= 0.0) || !std::isfinite(e)) fail("epsilon must be finite and non-negative");
        }
        if (c.initial.kind != "gaussian" && c.initial.kind != "momentum") {
            fail("initial.kind must be 'gaussian' or 'momentum'");
        }
        if (c.initial.kind == "gaussian") {
            if (!(c.initial.theta0 >= 0.0 && c.initial.theta0 < 2.0 * std::numbers::pi)) {
                fail("initial.theta0 must lie in [0, 2pi)");
            }
            if (!std::isfinite(c.initial.n0)) fail("initial.n0 must be finite");
            if (c.initial.sigma_n && !(*c.initial.sigma_n > 0.0)) fail("initial.sigma_n must be positive");
        }
    }
    if (c.command == "fidelity" || c.command == "fracdim" || c.command == "sweep" || c.command == "tomography") {
        if (needs_map && c.t_max < 1) fail("t_max must be at least 1");
        if (c.command != "fidelity" && needs_map && c.t_max < static_cast<std::int64_t>(kTransientWindow)) {
            fail("t_max must be at least 100 for fractal analysis");
        }
        if (c.t_star && (*c.t_star < 0 || (needs_map && *c.t_star > c.t_max))) fail("t_star outside [0, t_max]");
        if (c.window && (c.window->L_min < 1 || c.window->L_max <= c.window->L_min)) {
            fail("window must satisfy 1 <= L_min < L_max");
        }
        if (!(c.saturation_fraction > 0.0 && c.saturation_fraction < 1.0)) fail("saturation_fraction must lie in (0, 1)");
        if (c.min_window_points < 4) fail("min_window_points must be at least 4");
    }
    if (c.histogram_bins < 0) fail("histogram_bins must be non-negative");
    if (c.command == "sweep") {
        if (c.realizations < 1) fail("realizations must be at least 1");
        if (!std::isfinite(c.crossover_threshold)) fail("crossover_threshold must be finite");
    }
    if (c.command == "tomography") {
        if (c.grid < kMinTomographyGrid || c.grid > kMaxTomographyGrid) fail("grid must lie in [2, 64]");
        if (c.seed_policy != "shared" && c.seed_policy != "per_cell") fail("seed_policy must be 'shared' or 'per_cell'");
    }
    if (c.command == "husimi" || c.command == "tomography") {
        if (c.grid_theta < 2 || c.grid_n < 2) fail("grid_theta and grid_n must be at least 2");
        if (c.husimi_steps < 0) fail("husimi_steps must be non-negative");
    }
    if (c.command == "synth") {
        if (c.length < static_cast<std::int64_t>(kMinSignalLength)) fail("length must be at least 1024");
        if (c.signal.kind == "line") {
            if (!std::isfinite(c.signal.slope)) fail("signal.slope must be finite");
        } else if (c.signal.kind == "sinusoid") {
            if (!(c.signal.period > 0.0) || !std::isfinite(c.signal.amplitude)) fail("signal.period must be positive");
        } else if (c.signal.kind == "weierstrass") {
            if (!(c.signal.a > 0.0 && c.signal.a < 1.0)) fail("signal.a must lie in (0, 1)");
            if (!(c.signal.b > 1.0) || !std::isfinite(c.signal.b)) fail("signal.b must exceed 1");
            if (!(c.signal.span > 0.0)) fail("signal.span must be positive");
        } else {
            fail("signal.kind must be 'line', 'sinusoid' or 'weierstrass'");
        }
    }
}

}  // namespace fractfid
