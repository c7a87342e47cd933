#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fidelity.hpp"
#include "husimi.hpp"
#include "imperfections.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "seeds.hpp"

namespace fractfid {

/// shared: one imperfection realization for the whole scan, drawn from the
/// master seed. per_cell: cell c draws from derive_seed(master, c).
enum class SeedPolicy { shared, per_cell };

inline std::string_view to_string(SeedPolicy s) { return s == SeedPolicy::shared ? "shared" : "per_cell"; }

struct TomographyOptions {
    double epsilon = 2e-5;
    std::int64_t t_max = 16384;
    std::uint64_t seed = 1;
    SeedPolicy seed_policy = SeedPolicy::shared;
    PipelineOptions analysis;
    std::size_t workers = 1;
    bool keep_series = false;
};

struct TomographyCell {
    int i = 0;  ///< theta index
    int j = 0;  ///< momentum index
    CellCenter center;
    std::uint64_t seed = 0;
    FidelityAnalysis analysis;
    std::vector<double> series;  ///< only with keep_series
    std::string error;           ///< non-empty when the cell failed

    bool failed() const { return !error.empty(); }
    double D() const { return analysis.fit.D; }
};

struct TomographyGrid {
    MapParams params;
    int G = 0;
    TomographyOptions options;
    std::vector<TomographyCell> cells;  ///< index j * G + i

    const TomographyCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * G + i]; }
};

inline constexpr int kMinTomographyGrid = 2;
inline constexpr int kMaxTomographyGrid = 64;

/// Evaluates one packet per entry of `cells`; `index` feeds the per-cell seed.
/// Failures are recorded on the cell, never thrown.
inline std::vector<TomographyCell> scan_cells(const MapParams& p, const TomographyOptions& opt,
                                              std::vector<TomographyCell> cells) {
    if (opt.t_max < static_cast<std::int64_t>(kTransientWindow)) {
        throw std::invalid_argument("tomography: t_max must be at least 100");
    }
    const auto shared = sample_imperfections(p.n_qubits, opt.epsilon, opt.seed);
    std::function<TomographyCell(std::size_t)> job = [&](std::size_t c) {
        TomographyCell cell = cells[c];
        try {
            const auto cfg = opt.seed_policy == SeedPolicy::shared
                                 ? shared
                                 : sample_imperfections(p.n_qubits, opt.epsilon, cell.seed);
            cell.seed = cfg.seed;
            auto s = compute_fidelity_series(p, cfg, GaussianPacketSpec{cell.center.theta0, cell.center.n0, {}},
                                             opt.t_max);
            cell.analysis = analyze_fidelity(s.values, opt.analysis);
            if (opt.keep_series) cell.series = std::move(s.values);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        return cell;
    };
    return parallel_map(cells.size(), opt.workers, job);
}

/// Fractal dimension of the fidelity fluctuations for a packet started at the
/// centre of every cell of a G x G grid.
inline TomographyGrid tomography_scan(const MapParams& p, int G, const TomographyOptions& opt) {
    if (G < kMinTomographyGrid || G > kMaxTomographyGrid) {
        throw std::invalid_argument("tomography: G must lie in [2, 64]");
    }
    std::vector<TomographyCell> cells;
    for (int j = 0; j < G; ++j) {
        for (int i = 0; i < G; ++i) {
            TomographyCell c;
            c.i = i;
            c.j = j;
            c.center = cell_center(p, G, G, i, j);
            c.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(j) * G + i);
            cells.push_back(c);
        }
    }
    TomographyGrid g;
    g.params = p;
    g.G = G;
    g.options = opt;
    g.cells = scan_cells(p, opt, std::move(cells));
    return g;
}

}  // namespace fractfid
