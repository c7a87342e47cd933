#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "circuit.hpp"
#include "imperfections.hpp"
#include "map.hpp"
#include "noisy.hpp"
#include "state.hpp"

namespace fractfid {

/// Momentum eigenstate |n> as an initial condition.
struct MomentumEigenstate {
    std::int64_t n = 0;
    friend bool operator==(const MomentumEigenstate&, const MomentumEigenstate&) = default;
};

using InitialCondition = std::variant<GaussianPacketSpec, MomentumEigenstate>;

inline StateVector prepare(const MapParams& p, const InitialCondition& ic) {
    if (const auto* g = std::get_if<GaussianPacketSpec>(&ic)) return gaussian_packet(p, *g);
    return momentum_state(p, std::get<MomentumEigenstate>(ic).n);
}

struct FidelitySeries {
    MapParams params;
    ImperfectionConfig config;
    InitialCondition initial;
    std::size_t gate_count = 0;
    std::vector<double> values;  ///< F(t), t = 0..t_max
    std::optional<std::int64_t> t_star;
};

/// Runs the exact and the noisy gate-level evolution side by side and records
/// F(t) = |<psi_eps(t)|psi(t)>|^2 once per Floquet step.
inline FidelitySeries compute_fidelity_series(const MapParams& p, const ImperfectionConfig& cfg,
                                              const InitialCondition& initial, std::int64_t t_max) {
    if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
    const ExactPropagator exact(p);
    const NoisyPropagator noisy(build_floquet_circuit(p), cfg);

    StateVector ideal = prepare(p, initial);
    StateVector real = ideal;

    FidelitySeries out;
    out.params = p;
    out.config = cfg;
    out.initial = initial;
    out.gate_count = noisy.circuit().gate_count();
    out.values.reserve(static_cast<std::size_t>(t_max) + 1);
    out.values.push_back(1.0);
    for (std::int64_t t = 1; t <= t_max; ++t) {
        exact.step(ideal);
        noisy.step(real);
        out.values.push_back(std::min(overlap(real, ideal), 1.0));
    }
    return out;
}

inline constexpr std::size_t kTransientWindow = 100;

/// First step after which F stays inside mean +- 2 sd of the final half of
/// the series for `kTransientWindow` consecutive samples. Empty when no such
/// step exists.
inline std::optional<std::int64_t> detect_transient(std::span<const double> f,
                                                    std::size_t window = kTransientWindow) {
    if (f.size() < 100) throw std::invalid_argument("detect_transient: need at least 100 samples");
    if (window == 0) throw std::invalid_argument("detect_transient: window must be positive");
    const std::size_t half = f.size() / 2;
    const auto tail = f.subspan(half);
    double mean = 0.0;
    for (double v : tail) mean += v;
    mean /= static_cast<double>(tail.size());
    double var = 0.0;
    for (double v : tail) var += (v - mean) * (v - mean);
    var /= static_cast<double>(tail.size());
    // absolute floor so rounding noise on an exactly flat series still counts as inside
    const double band = std::max(2.0 * std::sqrt(var), 1e-12);

    std::size_t run = 0;
    for (std::size_t t = 0; t < f.size(); ++t) {
        if (std::abs(f[t] - mean) <= band) {
            if (++run == window) return static_cast<std::int64_t>(t + 1 - window);
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

inline std::optional<std::int64_t> detect_transient(const FidelitySeries& s) { return detect_transient(s.values); }

/// Successive differences dF_i = F_{i+1} - F_i.
inline std::vector<double> fluctuations(std::span<const double> f) {
    std::vector<double> d;
    if (f.size() < 2) return d;
    d.reserve(f.size() - 1);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) d.push_back(f[i + 1] - f[i]);
    return d;
}

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density;  ///< normalized so that sum(density) * width = 1

    double width() const { return density.empty() ? 0.0 : (hi - lo) / static_cast<double>(density.size()); }
    double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
};

inline Histogram histogram(std::span<const double> x, double lo, double hi, std::size_t bins) {
    if (bins == 0 || !(hi > lo)) throw std::invalid_argument("histogram: empty range or no bins");
    Histogram h{lo, hi, std::vector<double>(bins, 0.0)};
    const double w = (hi - lo) / static_cast<double>(bins);
    std::size_t counted = 0;
    for (double v : x) {
        if (v < lo || v > hi) continue;
        auto b = static_cast<std::size_t>((v - lo) / w);
        h.density[std::min(b, bins - 1)] += 1.0;
        ++counted;
    }
    if (counted > 0) {
        for (auto& d : h.density) d /= static_cast<double>(counted) * w;
    }
    return h;
}

/// Overlap coefficient sum_i min(p_i, q_i) * width of two histograms on the same bins.
inline double overlap_coefficient(const Histogram& a, const Histogram& b) {
    if (a.density.size() != b.density.size() || a.lo != b.lo || a.hi != b.hi) {
        throw std::invalid_argument("overlap_coefficient: histograms use different bins");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.density.size(); ++i) s += std::min(a.density[i], b.density[i]);
    return s * a.width();
}

}  // namespace fractfid
