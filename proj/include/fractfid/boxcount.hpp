#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractfid {

/// Raw output of the modified box counter.
struct BoxTable {
    std::vector<std::int64_t> L;
    std::vector<double> M;
    double value_scale = 1.0;  ///< global factor applied to the signal values
};

struct FitWindow {
    std::int64_t L_min = 1;
    std::int64_t L_max = 1;
    friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

struct BoxCountResult {
    BoxTable table;
    FitWindow window;
    std::size_t points_in_window = 0;
    double D = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    double intercept = 0.0;
    double D_low = std::numeric_limits<double>::quiet_NaN();   ///< sensitivity band over window shifts
    double D_high = std::numeric_limits<double>::quiet_NaN();
    bool unreliable = false;  ///< r^2 below 0.9, or D outside [0.9, 2.1]
    bool degenerate = false;  ///< no usable scaling region
};

inline constexpr double kMinReliableR2 = 0.9;

/// Powers of two 1, 2, 4, ... up to length / 4.
inline std::vector<std::int64_t> power_ladder(std::size_t length) {
    std::vector<std::int64_t> out;
    for (std::int64_t L = 1; 4 * static_cast<std::size_t>(L) <= length; L *= 2) out.push_back(L);
    return out;
}

/// Adds the x1.5 midpoints 3 * 2^(k-1) between consecutive powers of two.
inline std::vector<std::int64_t> densify(std::span<const std::int64_t> ladder) {
    std::vector<std::int64_t> out(ladder.begin(), ladder.end());
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        const std::int64_t mid = (3 * ladder[i]) / 2;
        if (mid > ladder[i] && mid < ladder[i + 1]) out.push_back(mid);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Modified box counting: strips of L samples covered by L x Delta_i boxes.
///
/// Strip i spans the closed index range [iL, iL + L], so neighbouring strips
/// share an endpoint and a straight line gives Delta_i = slope * L exactly.
/// The incomplete final strip is dropped and M(L) is rescaled by the covered
/// fraction of the duration. Values are multiplied by (length - 1) / range so
/// that the full excursion matches the full duration.
inline BoxTable modified_box_count(std::span<const double> signal, std::span<const std::int64_t> ladder) {
    if (ladder.empty()) throw std::invalid_argument("modified_box_count: empty ladder");
    const std::int64_t max_L = *std::max_element(ladder.begin(), ladder.end());
    if (*std::min_element(ladder.begin(), ladder.end()) < 1) {
        throw std::invalid_argument("modified_box_count: box widths must be >= 1");
    }
    if (signal.size() < 4 * static_cast<std::size_t>(max_L) || signal.size() < 2) {
        throw std::invalid_argument("modified_box_count: signal shorter than 4 * max(L)");
    }
    const auto [lo, hi] = std::minmax_element(signal.begin(), signal.end());
    const double range = *hi - *lo;
    const double duration = static_cast<double>(signal.size() - 1);

    BoxTable t;
    t.value_scale = range > 0.0 ? duration / range : 1.0;
    for (const std::int64_t L : ladder) {
        const auto width = static_cast<std::size_t>(L);
        const std::size_t strips = (signal.size() - 1) / width;
        double sum = 0.0;
        for (std::size_t s = 0; s < strips; ++s) {
            const auto first = signal.begin() + static_cast<std::ptrdiff_t>(s * width);
            const auto [a, b] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(width + 1));
            sum += *b - *a;
        }
        const double covered = static_cast<double>(strips * width);
        t.L.push_back(L);
        t.M.push_back(sum * t.value_scale / static_cast<double>(L) * (duration / covered));
    }
    return t;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
};

inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("least_squares: need matching samples, n >= 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares: x values are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.slope_stderr = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    return f;
}

/// D = -slope of log M against log L over the ladder points inside the window.
inline BoxCountResult fit_dimension(const BoxTable& table, FitWindow window) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < table.L.size(); ++i) {
        if (table.L[i] < window.L_min || table.L[i] > window.L_max) continue;
        if (!(table.M[i] > 0.0)) {
            throw std::invalid_argument("fit_dimension: M(L) must be positive inside the window");
        }
        x.push_back(std::log(static_cast<double>(table.L[i])));
        y.push_back(std::log(table.M[i]));
    }
    if (x.size() < 4) {
        throw std::invalid_argument("fit_dimension: fewer than 4 ladder points inside the window");
    }
    const LineFit f = least_squares(x, y);
    BoxCountResult r;
    r.table = table;
    r.window = window;
    r.points_in_window = x.size();
    r.D = -f.slope;
    r.std_error = f.slope_stderr;
    r.r2 = f.r2;
    r.intercept = f.intercept;
    r.D_low = r.D_high = r.D;
    r.unreliable = r.r2 < kMinReliableR2 || r.D < 0.9 || r.D > 2.1;
    return r;
}

/// Local box-counting dimension between consecutive ladder points.
inline std::vector<double> local_dimensions(const BoxTable& t) {
    std::vector<double> d;
    for (std::size_t i = 0; i + 1 < t.L.size(); ++i) {
        d.push_back(-std::log(t.M[i + 1] / t.M[i]) /
                    std::log(static_cast<double>(t.L[i + 1]) / static_cast<double>(t.L[i])));
    }
    return d;
}

struct WindowChoice {
    FitWindow window;
    bool degenerate = false;
};

/// Fraction of the way from the small-L plateau to D = 2 at which the local
/// dimension counts as saturating.
inline constexpr double kDefaultSaturationFraction = 0.35;

/// L_min is one map period (one sample). L_max is the smaller of length / 8
/// and the last ladder point before the curve turns area-filling: the local
/// dimension stays past plateau + fraction * (2 - plateau) on three
/// consecutive ladder intervals.
inline WindowChoice auto_fit_window(const BoxTable& table, std::size_t series_length,
                                    double saturation_fraction = kDefaultSaturationFraction) {
    WindowChoice c;
    c.window.L_min = 1;
    const auto cap = static_cast<std::int64_t>(series_length / 8);
    for (double m : table.M) {
        if (!(m > 0.0)) {
            c.window.L_max = 1;
            c.degenerate = true;
            return c;
        }
    }
    std::int64_t saturation = std::numeric_limits<std::int64_t>::max();
    const auto local = local_dimensions(table);
    if (!local.empty()) {
        const auto head = std::min<std::size_t>(3, local.size());
        const double plateau = *std::min_element(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(head));
        const double threshold = plateau + saturation_fraction * (2.0 - plateau);
        for (std::size_t i = 0; i + 2 < local.size(); ++i) {
            if (local[i] >= threshold && local[i + 1] >= threshold && local[i + 2] >= threshold) {
                saturation = table.L[i];
                break;
            }
        }
    }
    std::int64_t L_max = 1;
    for (const std::int64_t L : table.L) {
        if (L <= cap && L <= saturation) L_max = std::max(L_max, L);
    }
    c.window.L_max = L_max;
    c.degenerate = L_max <= 4 * c.window.L_min;
    return c;
}

/// Re-fits with L_min and L_max moved one ladder step in each direction and
/// stores the spread of D in [D_low, D_high].
inline void sensitivity_band(BoxCountResult& r) {
    const auto& L = r.table.L;
    auto index_of = [&](std::int64_t v) {
        return static_cast<std::ptrdiff_t>(std::lower_bound(L.begin(), L.end(), v) - L.begin());
    };
    const std::ptrdiff_t lo = index_of(r.window.L_min);
    const std::ptrdiff_t hi = index_of(r.window.L_max);
    const auto last = static_cast<std::ptrdiff_t>(L.size()) - 1;
    r.D_low = r.D_high = r.D;
    for (int dlo = -1; dlo <= 1; ++dlo) {
        for (int dhi = -1; dhi <= 1; ++dhi) {
            const std::ptrdiff_t a = lo + dlo, b = hi + dhi;
            if (a < 0 || b > last || b - a < 3) continue;
            try {
                const auto alt = fit_dimension(r.table, {L[a], L[b]});
                r.D_low = std::min(r.D_low, alt.D);
                r.D_high = std::max(r.D_high, alt.D);
            } catch (const std::invalid_argument&) {
            }
        }
    }
}

struct AnalysisOptions {
    std::optional<FitWindow> window;  ///< overrides the automatic choice
    std::size_t min_window_points = 8;
    double saturation_fraction = kDefaultSaturationFraction;
};

/// Full estimator: power-of-two ladder, automatic (or given) window,
/// densified ladder when the window holds too few points, fit and
/// sensitivity band. Degenerate inputs come back flagged, not thrown.
inline BoxCountResult analyze_signal(std::span<const double> signal, const AnalysisOptions& opt = {}) {
    auto ladder = power_ladder(signal.size());
    if (ladder.size() < 4) throw std::invalid_argument("analyze_signal: signal too short for a box-count ladder");
    BoxTable table = modified_box_count(signal, ladder);

    WindowChoice choice;
    if (opt.window) {
        choice.window = *opt.window;
        choice.degenerate = false;
    } else {
        choice = auto_fit_window(table, signal.size(), opt.saturation_fraction);
    }

    auto in_window = [&](const BoxTable& t) {
        return static_cast<std::size_t>(std::count_if(t.L.begin(), t.L.end(), [&](std::int64_t L) {
            return L >= choice.window.L_min && L <= choice.window.L_max;
        }));
    };
    if (!choice.degenerate && in_window(table) < opt.min_window_points) {
        table = modified_box_count(signal, densify(ladder));
    }

    if (choice.degenerate || in_window(table) < 4) {
        BoxCountResult r;
        r.table = std::move(table);
        r.window = choice.window;
        r.degenerate = true;
        r.unreliable = true;
        return r;
    }
    BoxCountResult r = fit_dimension(table, choice.window);
    sensitivity_band(r);
    return r;
}

/// Removes a fitted a + b exp(-t / tau) decay from the signal. tau is chosen
/// on a logarithmic grid; a and b by linear least squares.
inline std::vector<double> detrend_exponential(std::span<const double> f) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("detrend_exponential: need at least 3 samples");
    double best_sse = std::numeric_limits<double>::infinity();
    double best_a = 0.0, best_b = 0.0, best_tau = 1.0;
    std::vector<double> basis(n);
    for (double tau = 1.0; tau <= 10.0 * static_cast<double>(n); tau *= 1.1) {
        for (std::size_t t = 0; t < n; ++t) basis[t] = std::exp(-static_cast<double>(t) / tau);
        const LineFit lf = least_squares(basis, f);
        double sse = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double r = f[t] - (lf.intercept + lf.slope * basis[t]);
            sse += r * r;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_a = lf.intercept;
            best_b = lf.slope;
            best_tau = tau;
        }
    }
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = f[t] - (best_a + best_b * std::exp(-static_cast<double>(t) / best_tau));
    }
    return out;
}

}  // namespace fractfid
