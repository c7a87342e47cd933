// Command-line front end: fidelity, fracdim, sweep, tomography, husimi, synth.
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <fractfid/boxcount.hpp>
#include <fractfid/circuit.hpp>
#include <fractfid/fidelity.hpp>
#include <fractfid/husimi.hpp>
#include <fractfid/io.hpp>
#include <fractfid/map.hpp>
#include <fractfid/pipeline.hpp>
#include <fractfid/run_config.hpp>
#include <fractfid/seeds.hpp>
#include <fractfid/signals.hpp>
#include <fractfid/sweep.hpp>
#include <fractfid/tomography.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fractfid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitJob = 3;
constexpr const char* kOutputEnv = "FRACTFID_OUTPUT_DIR";
constexpr const char* kDefaultOutput = "fractfid-out";

// Raised when a job ran but did not complete; maps to exit code 3.
struct JobFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flag values as parsed; only flags actually given override the config.
struct Flags {
    std::string config;
    std::vector<int> n_q;
    std::vector<double> K, epsilon;
    std::uint64_t seed = 0;
    int realizations = 0;
    double theta0 = 0, n0 = 0, sigma_n = 0;
    std::int64_t momentum = 0;
    std::int64_t t_max = 0, t_star = 0, L_min = 0, L_max = 0;
    double saturation_fraction = 0;
    std::size_t min_window_points = 0;
    bool detrend = false, keep_series = false, dump_circuit = false;
    int histogram_bins = 0, grid = 0, grid_theta = 0, grid_n = 0;
    std::int64_t husimi_steps = 0, length = 0;
    std::string seed_policy, input, column, signal, output_dir;
    double slope = 0, period = 0, amplitude = 0, a = 0, b = 0, span = 0, crossover = 0;
    std::size_t workers = 0;
};

struct Bound {
    CLI::App* app = nullptr;
    std::map<std::string, CLI::Option*> opt;
    bool given(const std::string& name) const {
        auto it = opt.find(name);
        return it != opt.end() && it->second->count() > 0;
    }
};

Bound bind(CLI::App* app, Flags& f) {
    Bound b{app, {}};
    auto add = [&](const std::string& name, auto& target, const std::string& help) {
        b.opt[name] = app->add_option("--" + name, target, help);
    };
    auto flag = [&](const std::string& name, bool& target, const std::string& help) {
        b.opt[name] = app->add_flag("--" + name, target, help);
    };
    add("config", f.config, "JSON run configuration; flags override its values");
    add("n-q", f.n_q, "qubit count(s)");
    add("K", f.K, "classical chaos parameter(s)");
    add("epsilon", f.epsilon, "imperfection strength(s)");
    add("seed", f.seed, "master seed");
    add("realizations", f.realizations, "imperfection realizations per (K, epsilon)");
    add("theta0", f.theta0, "packet centre angle in [0, 2pi)");
    add("n0", f.n0, "packet centre momentum");
    add("sigma-n", f.sigma_n, "packet momentum width");
    add("momentum", f.momentum, "start from the momentum eigenstate |n> instead of a packet");
    add("t-max", f.t_max, "number of map steps");
    add("t-star", f.t_star, "transient cutoff override");
    add("l-min", f.L_min, "fit window lower edge (with --l-max)");
    add("l-max", f.L_max, "fit window upper edge (with --l-min)");
    add("saturation-fraction", f.saturation_fraction, "automatic window saturation threshold");
    add("min-window-points", f.min_window_points, "ladder points below which the ladder is densified");
    flag("detrend", f.detrend, "subtract a fitted exponential decay before box counting");
    add("histogram-bins", f.histogram_bins, "emit a fluctuation histogram with this many bins");
    add("grid", f.grid, "tomography grid size G");
    add("grid-theta", f.grid_theta, "Husimi grid cells along theta");
    add("grid-n", f.grid_n, "Husimi grid cells along n");
    add("husimi-steps", f.husimi_steps, "exact steps before the Husimi snapshot");
    add("seed-policy", f.seed_policy, "shared | per_cell");
    flag("keep-series", f.keep_series, "write the per-cell fidelity series");
    add("input", f.input, "external CSV signal to analyse");
    add("column", f.column, "column of --input (default: last)");
    add("signal", f.signal, "line | sinusoid | weierstrass");
    add("slope", f.slope, "line slope");
    add("period", f.period, "sinusoid period in samples");
    add("amplitude", f.amplitude, "sinusoid amplitude");
    add("a", f.a, "Weierstrass amplitude ratio");
    add("b", f.b, "Weierstrass frequency ratio");
    add("span", f.span, "Weierstrass argument range");
    add("length", f.length, "synthetic signal length");
    add("crossover-threshold", f.crossover, "mean D defining epsilon_c");
    flag("dump-circuit", f.dump_circuit, "write the gate list of one step");
    b.opt["output-dir"] = app->add_option("-o,--output-dir", f.output_dir, "output directory");
    b.opt["workers"] = app->add_option("-j,--workers", f.workers, "worker threads (0 = all cores)");
    return b;
}

RunConfig resolve(const std::string& command, const Bound& b, const Flags& f) {
    RunConfig c = default_config(command);
    if (b.given("config")) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("cannot read config file " + f.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config " + f.config + ": " + e.what());
        }
        // a metadata sidecar replays through its embedded config
        if (j.is_object() && j.contains("tool") && j.contains("config")) j = j.at("config");
        apply_json(c, j);
    }
    if (b.given("n-q")) c.n_q = f.n_q;
    if (b.given("K")) c.K = f.K;
    if (b.given("epsilon")) c.epsilon = f.epsilon;
    if (b.given("seed")) c.seed = f.seed;
    if (b.given("realizations")) c.realizations = f.realizations;
    if (b.given("theta0")) c.initial.theta0 = f.theta0, c.initial.kind = "gaussian";
    if (b.given("n0")) c.initial.n0 = f.n0, c.initial.kind = "gaussian";
    if (b.given("sigma-n")) c.initial.sigma_n = f.sigma_n, c.initial.kind = "gaussian";
    if (b.given("momentum")) c.initial.n = f.momentum, c.initial.kind = "momentum";
    if (b.given("t-max")) c.t_max = f.t_max;
    if (b.given("t-star")) c.t_star = f.t_star;
    if (b.given("l-min") != b.given("l-max")) throw ConfigError("--l-min and --l-max must be given together");
    if (b.given("l-min")) c.window = FitWindow{f.L_min, f.L_max};
    if (b.given("saturation-fraction")) c.saturation_fraction = f.saturation_fraction;
    if (b.given("min-window-points")) c.min_window_points = f.min_window_points;
    if (b.given("detrend")) c.detrend = f.detrend;
    if (b.given("histogram-bins")) c.histogram_bins = f.histogram_bins;
    if (b.given("grid")) c.grid = f.grid;
    if (b.given("grid-theta")) c.grid_theta = f.grid_theta;
    if (b.given("grid-n")) c.grid_n = f.grid_n;
    if (b.given("husimi-steps")) c.husimi_steps = f.husimi_steps;
    if (b.given("seed-policy")) c.seed_policy = f.seed_policy;
    if (b.given("keep-series")) c.keep_series = f.keep_series;
    if (b.given("input")) c.input = f.input;
    if (b.given("column")) c.column = f.column;
    if (b.given("signal")) c.signal.kind = f.signal;
    if (b.given("slope")) c.signal.slope = f.slope;
    if (b.given("period")) c.signal.period = f.period;
    if (b.given("amplitude")) c.signal.amplitude = f.amplitude;
    if (b.given("a")) c.signal.a = f.a;
    if (b.given("b")) c.signal.b = f.b;
    if (b.given("span")) c.signal.span = f.span;
    if (b.given("length")) c.length = f.length;
    if (b.given("crossover-threshold")) c.crossover_threshold = f.crossover;
    if (b.given("dump-circuit")) c.dump_circuit = f.dump_circuit;
    if (b.given("workers")) c.workers = f.workers;
    if (b.given("output-dir")) {
        c.output_dir = f.output_dir;
    } else if (c.output_dir.empty()) {
        const char* env = std::getenv(kOutputEnv);
        c.output_dir = (env != nullptr && *env != '\0') ? env : kDefaultOutput;
    }
    validate(c);
    return c;
}

json params_json(const MapParams& p) {
    return {{"n_q", p.n_qubits}, {"N", p.dim},          {"K", p.K},
            {"T", p.period},     {"k", p.kick},         {"regime", std::string(to_string(p.regime))}};
}

json imperfections_json(const ImperfectionConfig& c) {
    return {{"epsilon", c.epsilon},
            {"seed", c.seed},
            {"deltas", c.deltas},
            {"level_spacing", c.level_spacing},
            {"generator", std::string(kImperfectionGenerator)},
            {"error_insertion", "error unitary applied once after every gate"}};
}

json window_json(const BoxCountResult& r) { return {{"L_min", r.window.L_min}, {"L_max", r.window.L_max}}; }

json fit_json(const BoxCountResult& r) {
    return {{"D", json_number(r.D)},
            {"std_error", json_number(r.std_error)},
            {"r2", json_number(r.r2)},
            {"intercept", json_number(r.intercept)},
            {"D_low", json_number(r.D_low)},
            {"D_high", json_number(r.D_high)},
            {"window", window_json(r)},
            {"points_in_window", r.points_in_window},
            {"value_scale", r.table.value_scale},
            {"unreliable", r.unreliable},
            {"degenerate", r.degenerate}};
}

json analysis_json(const FidelityAnalysis& a) {
    json j = fit_json(a.fit);
    j["t_star"] = a.t_star ? json(*a.t_star) : json(nullptr);
    j["saturated"] = a.saturated();
    j["segment_start"] = a.segment_start;
    j["segment_length"] = a.segment_length;
    return j;
}

json base_metadata(const RunConfig& c) {
    return {{"tool", "fractfid"},
            {"version", std::string(kToolVersion)},
            {"command", c.command},
            {"config", to_json(c)},
            {"conventions",
             {{"csv", "one header line, decimal, 17 significant digits"},
              {"momentum", "index m carries n = m - N/2"},
              {"angle_grid", "theta_j = 2 pi j / N"},
              {"box_value_scale", "values multiplied by (length - 1) / (max - min)"},
              {"seed_derivation", std::string(kSeedDerivation)},
              {"global_phase", "GlobalPhase gates are not emitted; the constant is tracked separately"}}}};
}

CsvTable series_table(const std::vector<double>& f) {
    CsvTable t({"t", "F"});
    for (std::size_t i = 0; i < f.size(); ++i) t.add_row({static_cast<std::int64_t>(i), f[i]});
    return t;
}

CsvTable box_table(const BoxCountResult& r) {
    CsvTable t({"L", "M", "in_window"});
    for (std::size_t i = 0; i < r.table.L.size(); ++i) {
        const bool in = !r.degenerate && r.table.L[i] >= r.window.L_min && r.table.L[i] <= r.window.L_max;
        t.add_row({r.table.L[i], r.table.M[i], static_cast<std::int64_t>(in)});
    }
    return t;
}

CsvTable grid_table(int cols, int rows, const std::function<double(int, int)>& value) {
    std::vector<std::string> header;
    for (int i = 0; i < cols; ++i) header.push_back("theta_" + std::to_string(i));
    CsvTable t(header);
    for (int j = 0; j < rows; ++j) {
        std::vector<CsvCell> row;
        for (int i = 0; i < cols; ++i) row.emplace_back(value(i, j));
        t.add_row(std::move(row));
    }
    return t;
}

struct SeriesRun {
    MapParams params;
    ImperfectionConfig imperfections;
    FidelitySeries series;
};

SeriesRun run_series(const RunConfig& c, const fs::path& out) {
    SeriesRun r;
    r.params = build_params(c.n_q.front(), c.K.front());
    r.imperfections = sample_imperfections(r.params.n_qubits, c.epsilon.front(), c.seed);
    r.series = compute_fidelity_series(r.params, r.imperfections, initial_condition(c), c.t_max);
    if (c.dump_circuit) write_text(out / "circuit.txt", dump(build_floquet_circuit(r.params)));
    return r;
}

json series_metadata(const RunConfig& c, const SeriesRun& r) {
    json m = base_metadata(c);
    m["params"] = params_json(r.params);
    m["imperfections"] = imperfections_json(r.imperfections);
    m["gate_count"] = r.series.gate_count;
    m["gate_count_closed_form"] = floquet_gate_count(r.params.n_qubits);
    m["global_phase"] = build_floquet_circuit(r.params).global_phase;
    return m;
}

int cmd_fidelity(const RunConfig& c) {
    const fs::path out = c.output_dir;
    const auto r = run_series(c, out);
    const auto& f = r.series.values;
    write_csv(out / "fidelity.csv", series_table(f));

    json m = series_metadata(c, r);
    std::optional<std::int64_t> ts = c.t_star;
    if (!ts && f.size() >= kTransientWindow) ts = detect_transient(f);
    m["t_star"] = ts ? json(*ts) : json(nullptr);
    m["saturated"] = ts.has_value();
    m["files"] = {"fidelity.csv"};
    if (c.histogram_bins > 0) {
        const auto seg = std::span<const double>(f).subspan(static_cast<std::size_t>(ts.value_or(0)));
        const auto d = fluctuations(seg);
        CsvTable t({"dF", "density"});
        if (!d.empty()) {
            auto [lo, hi] = std::minmax_element(d.begin(), d.end());
            const double a = *lo, b = *hi > *lo ? *hi : *lo + 1.0;
            const auto h = histogram(d, a, b, static_cast<std::size_t>(c.histogram_bins));
            for (std::size_t i = 0; i < h.density.size(); ++i) t.add_row({h.center(i), h.density[i]});
        }
        write_csv(out / "fluctuation_histogram.csv", t);
        m["files"].push_back("fluctuation_histogram.csv");
    }
    write_json(out / "fidelity.json", m);
    std::cout << "fidelity: " << f.size() << " samples, t*=" << (ts ? std::to_string(*ts) : "none") << " -> "
              << out.string() << '\n';
    return kExitOk;
}

int cmd_fracdim(const RunConfig& c) {
    const fs::path out = c.output_dir;
    json m = base_metadata(c);
    FidelityAnalysis a;
    if (!c.input.empty()) {
        std::vector<double> x;
        try {
            x = read_csv_column(c.input, c.column);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        PipelineOptions o = pipeline_options(c);
        o.t_star = c.t_star.value_or(0);
        if (static_cast<std::size_t>(*o.t_star) >= x.size() || x.size() - *o.t_star < 16) {
            throw ConfigError("input signal too short for box counting (need at least 16 samples)");
        }
        a = analyze_fidelity(x, o);
        m["input"] = c.input;
        m["samples"] = x.size();
    } else {
        const auto r = run_series(c, out);
        m = series_metadata(c, r);
        write_csv(out / "fidelity.csv", series_table(r.series.values));
        a = analyze_fidelity(r.series.values, pipeline_options(c));
    }
    write_csv(out / "boxcount.csv", box_table(a.fit));
    m["result"] = analysis_json(a);
    write_json(out / "fracdim.json", m);
    std::cout << "fracdim: D=" << format_double(a.fit.D) << (a.fit.degenerate ? " (degenerate)" : "")
              << (a.fit.unreliable && !a.fit.degenerate ? " (unreliable)" : "") << " window=[" << a.fit.window.L_min
              << ", " << a.fit.window.L_max << "] -> " << out.string() << '\n';
    return kExitOk;
}

int cmd_sweep(const RunConfig& c) {
    const fs::path out = c.output_dir;
    SweepOptions o;
    o.n_qubits = c.n_q;
    o.Ks = c.K;
    o.epsilons = c.epsilon;
    o.realizations = c.realizations;
    o.seed = c.seed;
    o.t_max = c.t_max;
    o.initial = initial_condition(c);
    o.analysis = pipeline_options(c);
    o.workers = c.workers;
    o.crossover_threshold = c.crossover_threshold;
    const auto res = run_sweep(o);

    CsvTable jobs({"n_q", "K", "regime", "epsilon", "realization", "seed", "t_star", "L_min", "L_max", "D",
                   "D_low", "D_high", "std_error", "r2", "unreliable", "degenerate", "error"});
    for (const auto& j : res.jobs) {
        const auto& fit = j.analysis.fit;
        jobs.add_row({static_cast<std::int64_t>(j.n_qubits), j.K, std::string(to_string(classify_regime(j.K))),
                      j.epsilon, static_cast<std::int64_t>(j.realization), std::to_string(j.seed),
                      j.analysis.t_star ? CsvCell(*j.analysis.t_star) : CsvCell(std::string{}), fit.window.L_min,
                      fit.window.L_max, fit.D, fit.D_low, fit.D_high, fit.std_error, fit.r2,
                      static_cast<std::int64_t>(fit.unreliable), static_cast<std::int64_t>(fit.degenerate || j.failed()),
                      j.error});
    }
    CsvTable regime({"n_q", "regime", "epsilon", "mean_D", "std_D", "used", "excluded"});
    for (const auto& r : res.by_regime) {
        regime.add_row({static_cast<std::int64_t>(r.n_qubits), std::string(to_string(r.regime)), r.epsilon,
                        r.stats.mean, r.stats.stddev, static_cast<std::int64_t>(r.stats.used),
                        static_cast<std::int64_t>(r.stats.excluded)});
    }
    CsvTable byk({"n_q", "K", "regime", "epsilon", "mean_D", "std_D", "used", "excluded"});
    for (const auto& r : res.by_K) {
        byk.add_row({static_cast<std::int64_t>(r.n_qubits), r.K, std::string(to_string(classify_regime(r.K))),
                     r.epsilon, r.stats.mean, r.stats.stddev, static_cast<std::int64_t>(r.stats.used),
                     static_cast<std::int64_t>(r.stats.excluded)});
    }
    CsvTable ec({"n_q", "epsilon_c"});
    json ecj = json::object();
    for (const auto& [n, e] : res.epsilon_c) {
        ec.add_row({static_cast<std::int64_t>(n), e.value_or(std::numeric_limits<double>::quiet_NaN())});
        ecj[std::to_string(n)] = e ? json(*e) : json(nullptr);
    }
    write_csv(out / "sweep_jobs.csv", jobs);
    write_csv(out / "sweep_d_vs_epsilon.csv", regime);
    write_csv(out / "sweep_d_vs_k.csv", byk);
    write_csv(out / "sweep_epsilon_c.csv", ec);

    json m = base_metadata(c);
    json real = json::array();
    for (int r = 0; r < c.realizations; ++r) {
        json deltas = json::object();
        const auto s = derive_seed(c.seed, static_cast<std::uint64_t>(r));
        for (int n : c.n_q) {
            for (double e : res.options.epsilons) {
                deltas[std::to_string(n) + "@" + format_double(e)] = sample_imperfections(n, e, s).deltas;
            }
        }
        real.push_back({{"realization", r}, {"seed", s}, {"deltas", deltas}});
    }
    m["realizations"] = real;
    m["generator"] = std::string(kImperfectionGenerator);
    json gates = json::object();
    for (int n : c.n_q) gates[std::to_string(n)] = floquet_gate_count(n);
    m["gate_count"] = gates;
    m["epsilon_c"] = ecj;
    m["failures"] = res.failures();
    m["files"] = {"sweep_jobs.csv", "sweep_d_vs_epsilon.csv", "sweep_d_vs_k.csv", "sweep_epsilon_c.csv"};
    write_json(out / "sweep.json", m);
    std::cout << "sweep: " << res.jobs.size() << " jobs, " << res.failures() << " failed -> " << out.string() << '\n';
    if (res.failures() > 0) throw JobFailure(std::to_string(res.failures()) + " sweep job(s) failed");
    return kExitOk;
}

int cmd_tomography(const RunConfig& c) {
    const fs::path out = c.output_dir;
    const auto p = build_params(c.n_q.front(), c.K.front());
    TomographyOptions o;
    o.epsilon = c.epsilon.front();
    o.t_max = c.t_max;
    o.seed = c.seed;
    o.seed_policy = seed_policy(c);
    o.analysis = pipeline_options(c);
    o.workers = c.workers;
    o.keep_series = c.keep_series;
    const auto g = tomography_scan(p, c.grid, o);

    write_csv(out / "tomography_D.csv", grid_table(g.G, g.G, [&](int i, int j) { return g.at(i, j).D(); }));
    CsvTable cells({"i", "j", "theta0", "n0", "seed", "t_star", "L_min", "L_max", "D", "D_low", "D_high",
                    "std_error", "r2", "unreliable", "degenerate", "error"});
    std::size_t failed = 0;
    for (const auto& cell : g.cells) {
        const auto& fit = cell.analysis.fit;
        failed += cell.failed() ? 1 : 0;
        cells.add_row({static_cast<std::int64_t>(cell.i), static_cast<std::int64_t>(cell.j), cell.center.theta0,
                       cell.center.n0, std::to_string(cell.seed),
                       cell.analysis.t_star ? CsvCell(*cell.analysis.t_star) : CsvCell(std::string{}),
                       fit.window.L_min, fit.window.L_max, fit.D, fit.D_low, fit.D_high, fit.std_error, fit.r2,
                       static_cast<std::int64_t>(fit.unreliable),
                       static_cast<std::int64_t>(fit.degenerate || cell.failed()), cell.error});
        if (c.keep_series && !cell.failed()) {
            write_csv(out / "series" / ("cell_" + std::to_string(cell.i) + "_" + std::to_string(cell.j) + ".csv"),
                      series_table(cell.series));
        }
    }
    write_csv(out / "tomography_cells.csv", cells);

    StateVector psi = prepare(p, initial_condition(c));
    evolve(psi, p, c.husimi_steps);
    const auto h = husimi(psi, p, c.grid_theta, c.grid_n);
    write_csv(out / "tomography_husimi.csv", grid_table(h.g_theta, h.g_n, [&](int i, int j) { return h.at(i, j); }));

    json m = base_metadata(c);
    m["params"] = params_json(p);
    if (o.seed_policy == SeedPolicy::shared) m["imperfections"] = imperfections_json(sample_imperfections(p.n_qubits, o.epsilon, o.seed));
    m["gate_count"] = floquet_gate_count(p.n_qubits);
    m["grid"] = {{"G", g.G},
                 {"theta_centres", "2 pi (i + 1/2) / G"},
                 {"n_centres", "N ((j + 1/2) / G - 1/2)"},
                 {"layout", "row j (momentum), column i (angle)"}};
    m["husimi"] = {{"state", "initial condition evolved exactly for husimi_steps steps"},
                   {"normalization", "sum(values) * cell_area = 1"},
                   {"cell_area", h.cell_area}};
    m["failures"] = failed;
    m["files"] = {"tomography_D.csv", "tomography_cells.csv", "tomography_husimi.csv"};
    write_json(out / "tomography.json", m);
    std::cout << "tomography: " << g.cells.size() << " cells, " << failed << " failed -> " << out.string() << '\n';
    if (failed > 0) throw JobFailure(std::to_string(failed) + " tomography cell(s) failed");
    return kExitOk;
}

int cmd_husimi(const RunConfig& c) {
    const fs::path out = c.output_dir;
    const auto p = build_params(c.n_q.front(), c.K.front());
    StateVector psi = prepare(p, initial_condition(c));
    evolve(psi, p, c.husimi_steps);
    const auto h = husimi(psi, p, c.grid_theta, c.grid_n);
    write_csv(out / "husimi.csv", grid_table(h.g_theta, h.g_n, [&](int i, int j) { return h.at(i, j); }));
    json m = base_metadata(c);
    m["params"] = params_json(p);
    m["theta_centres"] = h.theta;
    m["n_centres"] = h.n;
    m["cell_area"] = h.cell_area;
    m["normalization"] = "sum(values) * cell_area = 1";
    m["layout"] = "row j (momentum), column i (angle)";
    m["files"] = {"husimi.csv"};
    write_json(out / "husimi.json", m);
    std::cout << "husimi: " << h.g_theta << "x" << h.g_n << " -> " << out.string() << '\n';
    return kExitOk;
}

int cmd_synth(const RunConfig& c) {
    const fs::path out = c.output_dir;
    const auto spec = signal_spec(c);
    const auto x = synth_signal(spec, static_cast<std::size_t>(c.length));
    CsvTable t({"t", "x"});
    for (std::size_t i = 0; i < x.size(); ++i) t.add_row({static_cast<std::int64_t>(i), x[i]});
    write_csv(out / "signal.csv", t);
    json m = base_metadata(c);
    m["kind"] = std::string(signal_kind(spec));
    if (const auto* w = std::get_if<WeierstrassSignal>(&spec)) {
        m["analytic_dimension"] = weierstrass_dimension(w->a, w->b);
        m["truncation"] = "terms with a^n < 1e-12 dropped";
    }
    m["files"] = {"signal.csv"};
    write_json(out / "synth.json", m);
    std::cout << "synth: " << x.size() << " samples -> " << out.string() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fidelity fluctuations and fractal dimension of the noisy quantum sawtooth map"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    const std::vector<std::pair<std::string, std::string>> commands{
        {"fidelity", "exact vs noisy evolution; fidelity series"},
        {"fracdim", "box-counting dimension of a fidelity series or a CSV signal"},
        {"sweep", "D over K, epsilon and realizations; epsilon_c per n_q"},
        {"tomography", "D for packets started on a G x G phase-space grid"},
        {"husimi", "Husimi density of an evolved state"},
        {"synth", "synthetic signals of known dimension"}};
    std::vector<Flags> flags(commands.size());
    std::vector<Bound> bound;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        bound.push_back(bind(app.add_subcommand(commands[i].first, commands[i].second), flags[i]));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        if (!bound[i].app->parsed()) continue;
        const auto& name = commands[i].first;
        RunConfig cfg;
        try {
            cfg = resolve(name, bound[i], flags[i]);
        } catch (const std::invalid_argument& e) {
            std::cerr << "fractfid " << name << ": invalid config: " << e.what() << '\n';
            return kExitConfig;
        }
        try {
            write_json(fs::path(cfg.output_dir) / "run_config.json", to_json(cfg));
            if (name == "fidelity") return cmd_fidelity(cfg);
            if (name == "fracdim") return cmd_fracdim(cfg);
            if (name == "sweep") return cmd_sweep(cfg);
            if (name == "tomography") return cmd_tomography(cfg);
            if (name == "husimi") return cmd_husimi(cfg);
            return cmd_synth(cfg);
        } catch (const ConfigError& e) {
            std::cerr << "fractfid " << name << ": invalid config: " << e.what() << '\n';
            return kExitConfig;
        } catch (const std::exception& e) {
            std::cerr << "fractfid " << name << ": job failed: " << e.what() << '\n';
            return kExitJob;
        }
    }
    return kExitConfig;
}
