#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <fractfid/boxcount.hpp>
#include <fractfid/signals.hpp>

#include "support/oracles.hpp"

using namespace fractfid;

namespace {

struct WeierstrassCase {
    double a, b;
};
const WeierstrassCase kWeierstrass[] = {{0.5, 3.0}, {0.7, 5.0}, {0.5, 5.0}};
constexpr std::size_t kLength = 1 << 18;
// scaling region clear of the sampling scale, where strips of a few samples
// miss the variation between samples
constexpr FitWindow kWeierstrassWindow{16, 4096};

BoxTable power_table(double D, int points) {
    BoxTable t;
    for (int i = 0; i < points; ++i) {
        const auto L = std::int64_t{1} << i;
        t.L.push_back(L);
        t.M.push_back(3.0 * std::pow(static_cast<double>(L), -D));
    }
    return t;
}

}  // namespace

TEST(Ladder, PowersOfTwoUpToQuarterLength) {
    EXPECT_EQ(power_ladder(64), (std::vector<std::int64_t>{1, 2, 4, 8, 16}));
    EXPECT_EQ(densify(power_ladder(64)), (std::vector<std::int64_t>{1, 2, 3, 4, 6, 8, 12, 16}));
}

TEST(BoxCount, StraightLineIsExact) {
    const auto x = synth_signal(LineSignal{2.5}, 4096);
    const auto t = modified_box_count(x, power_ladder(x.size()));
    for (std::size_t i = 0; i < t.L.size(); ++i) {
        EXPECT_NEAR(t.M[i], 4095.0 / static_cast<double>(t.L[i]), 1e-6 * t.M[i]) << t.L[i];
    }
    const auto r = analyze_signal(x);
    EXPECT_NEAR(r.D, 1.0, 1e-9);
    EXPECT_FALSE(r.unreliable);
}

TEST(BoxCount, RejectsShortSignalOrEmptyLadder) {
    const std::vector<double> x(100, 1.0);
    EXPECT_THROW(modified_box_count(x, std::vector<std::int64_t>{}), std::invalid_argument);
    EXPECT_THROW(modified_box_count(x, std::vector<std::int64_t>{1, 32}), std::invalid_argument);
    EXPECT_THROW(modified_box_count(x, std::vector<std::int64_t>{0, 2}), std::invalid_argument);
}

TEST(FitDimension, ExactPowerLaw) {
    const auto r = fit_dimension(power_table(1.5, 12), {1, 2048});
    EXPECT_NEAR(r.D, 1.5, 1e-6);
    EXPECT_NEAR(r.r2, 1.0, 1e-12);
    EXPECT_EQ(r.points_in_window, 12u);
}

TEST(FitDimension, NeedsFourPoints) {
    EXPECT_THROW(fit_dimension(power_table(1.5, 12), {1, 4}), std::invalid_argument);
}

TEST(FitDimension, FlagsPoorFit) {
    BoxTable t = power_table(1.2, 8);
    for (std::size_t i = 0; i < t.M.size(); ++i) t.M[i] *= (i % 2 ? 8.0 : 0.125);
    const auto r = fit_dimension(t, {1, 128});
    EXPECT_LT(r.r2, kMinReliableR2);
    EXPECT_TRUE(r.unreliable);
}

TEST(AutoWindow, FlatSeriesIsDegenerate) {
    const auto r = analyze_signal(std::vector<double>(4096, 0.5));
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(std::isnan(r.D));
}

TEST(AutoWindow, PowerLawSelectsFullLadder) {
    // 19 decades of pure scaling: nothing saturates, nothing is cut
    const auto t = power_table(1.5, 63);
    const auto w = auto_fit_window(t, std::size_t{1} << 63);
    EXPECT_FALSE(w.degenerate);
    EXPECT_EQ(w.window.L_min, 1);
    EXPECT_EQ(w.window.L_max, std::int64_t{1} << 60);
}

TEST(AutoWindow, StopsWhereCurveTurnsAreaFilling) {
    BoxTable t;
    for (int i = 0; i < 14; ++i) {
        const auto L = std::int64_t{1} << i;
        t.L.push_back(L);
        // slope -1.1 up to L = 256, then -2
        const double logm = i <= 8 ? -1.1 * i : -1.1 * 8 - 2.0 * (i - 8);
        t.M.push_back(std::exp(logm * std::log(2.0)));
    }
    const auto w = auto_fit_window(t, 1 << 20);
    EXPECT_EQ(w.window.L_max, 256);
}

TEST(Estimator, SinusoidIsAreaFilling) {
    // 5000 periods; L far above the period
    const auto x = synth_signal(SinusoidSignal{13.0, 1.0}, 1 << 16);
    AnalysisOptions o;
    o.window = FitWindow{128, 4096};
    const auto r = analyze_signal(x, o);
    EXPECT_GE(r.D, 1.9);
    EXPECT_LE(r.D, 2.05);
}

TEST(Estimator, WeierstrassMatchesAnalyticDimension) {
    for (const auto& c : kWeierstrass) {
        const auto x = synth_signal(WeierstrassSignal{c.a, c.b, 1.0}, kLength);
        AnalysisOptions o;
        o.window = kWeierstrassWindow;
        const auto r = analyze_signal(x, o);
        EXPECT_NEAR(r.D, weierstrass_dimension(c.a, c.b), 0.1) << c.a << "," << c.b;
    }
}

TEST(Estimator, AgreesWithSquareGridCounter) {
    std::vector<std::vector<double>> signals{synth_signal(LineSignal{1.0}, kLength)};
    for (const auto& c : kWeierstrass) signals.push_back(synth_signal(WeierstrassSignal{c.a, c.b, 1.0}, kLength));
    for (const auto& x : signals) {
        AnalysisOptions o;
        o.window = kWeierstrassWindow;
        const double modified = analyze_signal(x, o).D;
        // s x s grids with s from 64 to length / 16 cover the same scales
        const double grid = oracle::grid_box_dimension(x, 64, static_cast<int>(kLength / 16));
        EXPECT_NEAR(modified, grid, 0.1);
    }
}

TEST(Estimator, AffineInvariance) {
    const auto x = synth_signal(WeierstrassSignal{0.6, 4.0, 1.0}, 1 << 14);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 7.5 * x[i] - 3.0;
    AnalysisOptions o;
    o.window = FitWindow{1, 512};
    EXPECT_LT(std::abs(analyze_signal(x, o).D - analyze_signal(y, o).D), 1e-3);
}

TEST(Estimator, LongerSeriesNeverWorsensPowerLawFit) {
    double prev = 0.0;
    for (int len : {1 << 12, 1 << 14, 1 << 16}) {
        const auto x = synth_signal(WeierstrassSignal{0.5, 3.0, static_cast<double>(len) / 4096.0}, len);
        // synthetic Weierstrass over a span proportional to the length
        AnalysisOptions o;
        o.window = FitWindow{1, 256};
        const double r2 = analyze_signal(x, o).r2;
        EXPECT_GE(r2, prev - 1e-3) << len;
        prev = r2;
    }
}

TEST(Estimator, SensitivityBandBracketsD) {
    const auto x = synth_signal(WeierstrassSignal{0.5, 3.0, 1.0}, 1 << 16);
    const auto r = analyze_signal(x);
    EXPECT_LE(r.D_low, r.D);
    EXPECT_GE(r.D_high, r.D);
}

TEST(Estimator, DensifiesShortWindows) {
    const auto x = synth_signal(WeierstrassSignal{0.5, 3.0, 1.0}, 4096);
    AnalysisOptions o;
    o.window = FitWindow{1, 32};
    const auto r = analyze_signal(x, o);
    EXPECT_EQ(r.points_in_window, 10u);  // 1 2 3 4 6 8 12 16 24 32
}

TEST(Detrend, RemovesExponential) {
    std::vector<double> f(2000);
    for (std::size_t t = 0; t < f.size(); ++t) f[t] = 0.1 + 0.9 * std::exp(-static_cast<double>(t) / 300.0);
    for (double v : detrend_exponential(f)) EXPECT_LT(std::abs(v), 1e-2);
}

TEST(Signals, Examples) {
    const auto line = synth_signal(LineSignal{1.0}, 1024);
    EXPECT_EQ(line[0], 0.0);
    EXPECT_EQ(line[1], 1.0);
    EXPECT_EQ(line[2], 2.0);
    EXPECT_DOUBLE_EQ(signal_value(SinusoidSignal{10.0, 1.0}, 2.5, 1024), 1.0);
    EXPECT_NEAR(weierstrass_dimension(0.7, 5.0), 1.778, 1e-3);
    EXPECT_NEAR(weierstrass_dimension(0.5, 3.0), 1.369, 1e-3);
}

TEST(Signals, Deterministic) {
    EXPECT_EQ(synth_signal(WeierstrassSignal{0.7, 5.0, 1.0}, 2048), synth_signal(WeierstrassSignal{0.7, 5.0, 1.0}, 2048));
}

TEST(Signals, RejectsBadParameters) {
    EXPECT_THROW(synth_signal(LineSignal{1.0}, 1000), std::invalid_argument);
    EXPECT_THROW(synth_signal(WeierstrassSignal{0.5, 1.0, 1.0}, 2048), std::invalid_argument);
    EXPECT_THROW(synth_signal(WeierstrassSignal{1.0, 3.0, 1.0}, 2048), std::invalid_argument);
    EXPECT_THROW(synth_signal(WeierstrassSignal{0.0, 3.0, 1.0}, 2048), std::invalid_argument);
    EXPECT_THROW(synth_signal(SinusoidSignal{0.0, 1.0}, 2048), std::invalid_argument);
}
