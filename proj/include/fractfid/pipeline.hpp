#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "boxcount.hpp"
#include "fidelity.hpp"

namespace fractfid {

struct PipelineOptions {
    AnalysisOptions box;
    std::optional<std::int64_t> t_star;  ///< overrides transient detection
    bool detrend = false;                ///< subtract a fitted exponential decay first
};

struct FidelityAnalysis {
    std::optional<std::int64_t> t_star;  ///< empty when no saturation was detected
    std::int64_t segment_start = 0;
    std::size_t segment_length = 0;
    BoxCountResult fit;

    bool saturated() const { return t_star.has_value(); }
    /// Usable for aggregate statistics.
    bool usable() const { return !fit.degenerate; }
};

/// Transient detection, post-t* segment, box counting. Without a detected
/// saturation the whole series is analysed and the result carries no t*.
inline FidelityAnalysis analyze_fidelity(std::span<const double> f, const PipelineOptions& opt = {}) {
    FidelityAnalysis out;
    if (opt.t_star) {
        if (*opt.t_star < 0 || static_cast<std::size_t>(*opt.t_star) >= f.size()) {
            throw std::invalid_argument("t* override outside the series");
        }
        out.t_star = opt.t_star;
    } else {
        out.t_star = detect_transient(f);
    }
    out.segment_start = out.t_star.value_or(0);
    const auto seg = f.subspan(static_cast<std::size_t>(out.segment_start));
    out.segment_length = seg.size();

    if (power_ladder(seg.size()).size() < 4) {
        out.fit.degenerate = true;
        out.fit.unreliable = true;
        return out;
    }
    if (opt.detrend) {
        const auto d = detrend_exponential(seg);
        out.fit = analyze_signal(d, opt.box);
    } else {
        out.fit = analyze_signal(seg, opt.box);
    }
    return out;
}

}  // namespace fractfid
