#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace fractfid {

/// x_t = slope * t.
struct LineSignal {
    double slope = 1.0;
};

/// x_t = amplitude * sin(2 pi t / period).
struct SinusoidSignal {
    double period = 10.0;
    double amplitude = 1.0;
};

/// W(u) = sum_n a^n cos(b^n pi u), sampled at u = span * t / length and
/// truncated once a^n < 1e-12. Graph dimension 2 + ln a / ln b.
struct WeierstrassSignal {
    double a = 0.5;
    double b = 3.0;
    double span = 1.0;
};

using SignalSpec = std::variant<LineSignal, SinusoidSignal, WeierstrassSignal>;

inline constexpr std::size_t kMinSignalLength = 1024;
inline constexpr double kWeierstrassCutoff = 1e-12;

inline std::string_view signal_kind(const SignalSpec& s) {
    if (std::holds_alternative<LineSignal>(s)) return "line";
    if (std::holds_alternative<SinusoidSignal>(s)) return "sinusoid";
    return "weierstrass";
}

inline double weierstrass_dimension(double a, double b) { return 2.0 + std::log(a) / std::log(b); }

namespace detail {

inline void check(const SignalSpec& spec) {
    if (const auto* l = std::get_if<LineSignal>(&spec)) {
        if (!std::isfinite(l->slope)) throw std::invalid_argument("line: slope must be finite");
    } else if (const auto* s = std::get_if<SinusoidSignal>(&spec)) {
        if (!(s->period > 0.0) || !std::isfinite(s->period) || !std::isfinite(s->amplitude)) {
            throw std::invalid_argument("sinusoid: period must be positive and finite");
        }
    } else {
        const auto& w = std::get<WeierstrassSignal>(spec);
        if (!(w.a > 0.0 && w.a < 1.0)) throw std::invalid_argument("weierstrass: a must lie in (0, 1)");
        if (!(w.b > 1.0) || !std::isfinite(w.b)) throw std::invalid_argument("weierstrass: b must exceed 1");
        if (!(w.span > 0.0) || !std::isfinite(w.span)) throw std::invalid_argument("weierstrass: span must be positive");
    }
}

}  // namespace detail

/// Value at (possibly fractional) sample position t of a signal of `length` samples.
inline double signal_value(const SignalSpec& spec, double t, std::size_t length) {
    detail::check(spec);
    if (const auto* l = std::get_if<LineSignal>(&spec)) return l->slope * t;
    if (const auto* s = std::get_if<SinusoidSignal>(&spec)) {
        return s->amplitude * std::sin(2.0 * std::numbers::pi * t / s->period);
    }
    const auto& w = std::get<WeierstrassSignal>(spec);
    const double u = w.span * t / static_cast<double>(length);
    double v = 0.0;
    for (double an = 1.0, bn = 1.0; an >= kWeierstrassCutoff; an *= w.a, bn *= w.b) v += an * std::cos(bn * std::numbers::pi * u);
    return v;
}

inline std::vector<double> synth_signal(const SignalSpec& spec, std::size_t length) {
    if (length < kMinSignalLength) throw std::invalid_argument("synth_signal: length must be at least 1024");
    detail::check(spec);
    std::vector<double> x(length);
    for (std::size_t t = 0; t < length; ++t) x[t] = signal_value(spec, static_cast<double>(t), length);
    return x;
}

}  // namespace fractfid
