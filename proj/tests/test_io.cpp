#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include <fractfid/io.hpp>
#include <fractfid/parallel.hpp>
#include <fractfid/run_config.hpp>
#include <fractfid/seeds.hpp>
#include <fractfid/sweep.hpp>

using namespace fractfid;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("fractfid_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d / name;
}
}  // namespace

TEST(Format, SeventeenSignificantDigitsRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, std::numbers::pi, 1e-300, -2.5e17, 0.0}) {
        const auto s = format_double(x);
        EXPECT_EQ(std::stod(s), x) << s;
    }
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, HeaderAndRows) {
    CsvTable t({"t", "F", "tag"});
    t.add_row({std::int64_t{0}, 1.0, std::string("a")});
    t.add_row({std::int64_t{1}, 0.5, std::string("b")});
    EXPECT_EQ(t.str(), "t,F,tag\n0,1,a\n1,0.5,b\n");
    EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
}

TEST(Csv, ReadColumn) {
    const auto path = scratch("col.csv");
    std::ofstream(path) << "t, F\n0, 1.5\n1, 2.5\n\n";
    EXPECT_EQ(read_csv_column(path), (std::vector<double>{1.5, 2.5}));
    EXPECT_EQ(read_csv_column(path, "t"), (std::vector<double>{0.0, 1.0}));
    EXPECT_THROW(read_csv_column(path, "x"), std::invalid_argument);
    std::ofstream(path) << "F\n1\nabc\n";
    EXPECT_THROW(read_csv_column(path), std::invalid_argument);
    EXPECT_THROW(read_csv_column(scratch("missing.csv")), std::invalid_argument);
}

TEST(Seeds, StableDerivation) {
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Parallel, ResultsInIndexOrderForAnyWorkerCount) {
    std::function<int(std::size_t)> sq = [](std::size_t i) { return static_cast<int>(i * i); };
    const auto a = parallel_map(50, 1, sq);
    EXPECT_EQ(a, parallel_map(50, 4, sq));
    EXPECT_EQ(a[7], 49);
    std::function<int(std::size_t)> bad = [](std::size_t i) -> int {
        if (i == 3) throw std::runtime_error("job 3");
        return 0;
    };
    EXPECT_THROW(parallel_map(8, 2, bad), std::runtime_error);
}

TEST(RunConfig, JsonRoundTrip) {
    RunConfig c = default_config("sweep");
    c.seed = 42;
    c.window = FitWindow{1, 512};
    c.initial.sigma_n = 2.5;
    c.t_star = 100;
    const auto j = to_json(c);
    const RunConfig back = from_json(j);
    EXPECT_EQ(to_json(back), j);
}

TEST(RunConfig, OverlayAndScalars) {
    RunConfig c = default_config("fidelity");
    apply_json(c, nlohmann::json::parse(R"({"n_q": 6, "K": -1, "epsilon": [0.001], "initial": {"kind": "momentum", "n": 3}})"));
    EXPECT_EQ(c.n_q, std::vector<int>{6});
    EXPECT_EQ(c.K, std::vector<double>{-1.0});
    EXPECT_TRUE(std::holds_alternative<MomentumEigenstate>(initial_condition(c)));
    EXPECT_NO_THROW(validate(c));
}

TEST(RunConfig, RejectsInvalidValues) {
    auto bad = [](const char* text) {
        RunConfig c = default_config("fidelity");
        apply_json(c, nlohmann::json::parse(text));
        validate(c);
    };
    EXPECT_THROW(bad(R"({"unknown": 1})"), ConfigError);
    EXPECT_THROW(bad(R"({"n_q": "eight"})"), ConfigError);
    EXPECT_THROW(bad(R"({"n_q": 30})"), ConfigError);
    EXPECT_THROW(bad(R"({"epsilon": -1})"), ConfigError);
    EXPECT_THROW(bad(R"({"K": [1, 2]})"), ConfigError);
    EXPECT_THROW(bad(R"({"command": "sweep"})"), ConfigError);
    EXPECT_THROW(bad(R"({"initial": {"theta0": 7}})"), ConfigError);
    EXPECT_THROW(bad(R"({"window": {"L_min": 8, "L_max": 4}})"), ConfigError);
    RunConfig t = default_config("tomography");
    t.grid = 1;
    EXPECT_THROW(validate(t), ConfigError);
    RunConfig s = default_config("synth");
    s.signal.b = 0.5;
    EXPECT_THROW(validate(s), ConfigError);
}

TEST(Sweep, WorkerCountInvariantAndAggregated) {
    SweepOptions o;
    o.n_qubits = {4};
    o.Ks = {-1.0, std::numbers::sqrt2};
    o.epsilons = {1e-2, 1e-4};
    o.realizations = 2;
    o.t_max = 1024;
    const auto a = run_sweep(o);
    o.workers = 3;
    const auto b = run_sweep(o);
    ASSERT_EQ(a.jobs.size(), 8u);
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(a.jobs[i].analysis.fit.D), std::bit_cast<std::uint64_t>(b.jobs[i].analysis.fit.D));
    }
    EXPECT_EQ(a.options.epsilons, (std::vector<double>{1e-4, 1e-2}));
    EXPECT_EQ(a.by_regime.size(), 4u);
    EXPECT_EQ(a.by_K.size(), 4u);
    EXPECT_EQ(a.jobs[0].seed, derive_seed(1, 0));
    EXPECT_EQ(a.jobs[1].seed, derive_seed(1, 1));
}

TEST(Sweep, CrossoverIsFirstEpsilonAboveThreshold) {
    SweepOptions o;
    o.n_qubits = {4};
    o.Ks = {-1.0};
    o.epsilons = {1e-6, 1e-1};
    o.realizations = 1;
    o.t_max = 4096;
    o.crossover_threshold = -1.0;  // any usable mean counts
    const auto r = run_sweep(o);
    ASSERT_TRUE(r.epsilon_c.at(4).has_value());
    EXPECT_EQ(*r.epsilon_c.at(4), 1e-6);
    o.crossover_threshold = 10.0;
    EXPECT_FALSE(run_sweep(o).epsilon_c.at(4).has_value());
}

TEST(Sweep, RejectsEmptyLists) {
    SweepOptions o;
    EXPECT_THROW(run_sweep(o), std::invalid_argument);
}
