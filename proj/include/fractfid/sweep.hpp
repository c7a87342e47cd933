#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fidelity.hpp"
#include "imperfections.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "seeds.hpp"

namespace fractfid {

struct SweepOptions {
    std::vector<int> n_qubits{8};
    std::vector<double> Ks;
    std::vector<double> epsilons;
    int realizations = 4;
    std::uint64_t seed = 1;
    std::int64_t t_max = 32768;
    InitialCondition initial = GaussianPacketSpec{};
    PipelineOptions analysis;
    std::size_t workers = 1;
    double crossover_threshold = 1.1;
};

/// One (n_q, K, epsilon, realization) run. Realization r uses the
/// imperfections drawn from derive_seed(master, r) at every K and epsilon.
struct SweepJob {
    int n_qubits = 0;
    double K = 0.0;
    double epsilon = 0.0;
    int realization = 0;
    std::uint64_t seed = 0;
    FidelityAnalysis analysis;
    std::string error;

    bool failed() const { return !error.empty(); }
};

/// Mean and spread of D over the usable jobs of one group.
struct DStats {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    std::size_t excluded = 0;  ///< degenerate or failed
};

struct RegimeRow {
    int n_qubits;
    Regime regime;
    double epsilon;
    DStats stats;
};

struct KRow {
    int n_qubits;
    double K;
    double epsilon;
    DStats stats;
};

struct SweepResult {
    SweepOptions options;
    std::vector<SweepJob> jobs;
    std::vector<RegimeRow> by_regime;  ///< D against epsilon per regime
    std::vector<KRow> by_K;            ///< D against K per epsilon
    std::map<int, std::optional<double>> epsilon_c;  ///< first epsilon with integrable mean D above threshold

    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(jobs.begin(), jobs.end(), [](const auto& j) { return j.failed(); }));
    }
};

inline DStats d_stats(const std::vector<const SweepJob*>& group) {
    DStats s;
    std::vector<double> d;
    for (const auto* j : group) {
        if (j->failed() || !j->analysis.usable()) {
            ++s.excluded;
        } else {
            d.push_back(j->analysis.fit.D);
        }
    }
    s.used = d.size();
    if (d.empty()) return s;
    double m = 0.0;
    for (double v : d) m += v;
    m /= static_cast<double>(d.size());
    double var = 0.0;
    for (double v : d) var += (v - m) * (v - m);
    s.mean = m;
    s.stddev = d.size() > 1 ? std::sqrt(var / static_cast<double>(d.size() - 1)) : 0.0;
    return s;
}

inline void validate(const SweepOptions& o) {
    if (o.n_qubits.empty() || o.Ks.empty() || o.epsilons.empty()) {
        throw std::invalid_argument("sweep: n_q, K and epsilon lists must be non-empty");
    }
    if (o.realizations < 1) throw std::invalid_argument("sweep: need at least one realization");
    if (o.t_max < static_cast<std::int64_t>(kTransientWindow)) throw std::invalid_argument("sweep: t_max must be at least 100");
    for (int n : o.n_qubits) build_params(n, 0.0);
    for (double K : o.Ks) build_params(1, K);
    for (double e : o.epsilons) sample_imperfections(1, e, 0);
}

/// Fans out over (n_q, K, epsilon, realization) and aggregates mean D per
/// regime and per K. Job failures are recorded, never thrown.
inline SweepResult run_sweep(const SweepOptions& opt) {
    validate(opt);
    auto eps = opt.epsilons;
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

    std::vector<SweepJob> plan;
    for (int n : opt.n_qubits) {
        for (double K : opt.Ks) {
            for (double e : eps) {
                for (int r = 0; r < opt.realizations; ++r) {
                    SweepJob j;
                    j.n_qubits = n;
                    j.K = K;
                    j.epsilon = e;
                    j.realization = r;
                    j.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(r));
                    plan.push_back(j);
                }
            }
        }
    }

    std::function<SweepJob(std::size_t)> job = [&](std::size_t idx) {
        SweepJob j = plan[idx];
        try {
            const auto p = build_params(j.n_qubits, j.K);
            const auto cfg = sample_imperfections(j.n_qubits, j.epsilon, j.seed);
            const auto s = compute_fidelity_series(p, cfg, opt.initial, opt.t_max);
            j.analysis = analyze_fidelity(s.values, opt.analysis);
        } catch (const std::exception& e) {
            j.error = e.what();
        }
        return j;
    };

    SweepResult out;
    out.options = opt;
    out.options.epsilons = eps;
    out.jobs = parallel_map(plan.size(), opt.workers, job);

    for (int n : opt.n_qubits) {
        for (double e : eps) {
            for (Regime reg : {Regime::integrable, Regime::mixed, Regime::chaotic}) {
                std::vector<const SweepJob*> group;
                for (const auto& j : out.jobs) {
                    if (j.n_qubits == n && j.epsilon == e && classify_regime(j.K) == reg) group.push_back(&j);
                }
                if (!group.empty()) out.by_regime.push_back({n, reg, e, d_stats(group)});
            }
            for (double K : opt.Ks) {
                std::vector<const SweepJob*> group;
                for (const auto& j : out.jobs) {
                    if (j.n_qubits == n && j.epsilon == e && j.K == K) group.push_back(&j);
                }
                out.by_K.push_back({n, K, e, d_stats(group)});
            }
        }
        std::optional<double> ec;
        for (const auto& row : out.by_regime) {
            if (row.n_qubits != n || row.regime != Regime::integrable) continue;
            if (row.stats.used > 0 && row.stats.mean > opt.crossover_threshold) {
                ec = row.epsilon;
                break;
            }
        }
        out.epsilon_c[n] = ec;
    }
    return out;
}

}  // namespace fractfid
