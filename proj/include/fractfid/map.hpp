#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "params.hpp"
#include "state.hpp"

namespace fractfid {

/// exp(2 pi i num / den) with the numerator reduced exactly before the
/// conversion to floating point.
inline complex unit_phase_fraction(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

/// Kick exp(i k (theta_j - pi)^2 / 2) on the angle grid.
inline std::vector<complex> kick_phases(const MapParams& p) {
    std::vector<complex> ph(p.dim);
    for (std::uint64_t j = 0; j < p.dim; ++j) {
        const double x = p.angle(j) - std::numbers::pi;
        ph[j] = std::polar(1.0, 0.5 * p.kick * x * x);
    }
    return ph;
}

/// Free rotation exp(-i T n^2 / 2) = exp(-i pi n^2 / N) on the momentum grid.
inline std::vector<complex> free_phases(const MapParams& p) {
    std::vector<complex> ph(p.dim);
    const auto half = static_cast<std::int64_t>(p.dim / 2);
    const auto two_n = static_cast<std::int64_t>(2 * p.dim);
    for (std::uint64_t m = 0; m < p.dim; ++m) {
        const std::int64_t n = static_cast<std::int64_t>(m) - half;
        ph[m] = unit_phase_fraction(-((n * n) % two_n), two_n);
    }
    return ph;
}

/// Unitary change of representation between momentum and angle amplitudes,
/// psi(theta_j) = N^{-1/2} sum_m psi(m) exp(i n theta_j).
class Transform {
  public:
    explicit Transform(const MapParams& p)
        : to_angle_(p.dim, FftSign::positive), to_momentum_(p.dim, FftSign::negative),
          scale_(1.0 / std::sqrt(static_cast<double>(p.dim))) {}

    void to_angle(StateVector& s) const {
        require(s, Representation::momentum);
        to_angle_.execute(s.amplitudes());
        apply_shift(s);
        s.set_representation(Representation::angle);
    }

    void to_momentum(StateVector& s) const {
        require(s, Representation::angle);
        apply_shift(s);
        to_momentum_.execute(s.amplitudes());
        for (auto& a : s.amplitudes()) a *= scale_;
        s.set_representation(Representation::momentum);
    }

  private:
    void require(const StateVector& s, Representation rep) const {
        if (s.size() != to_angle_.size()) throw std::invalid_argument("Transform: dimension mismatch");
        if (s.representation() != rep) throw std::invalid_argument("Transform: wrong representation");
    }
    // (-1)^j from the symmetric momentum window, and the 1/sqrt(N) for the forward leg.
    void apply_shift(StateVector& s) const {
        const bool fwd = s.representation() == Representation::momentum;
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double sign = (j & 1U) ? -1.0 : 1.0;
            s[j] *= fwd ? sign * scale_ : sign;
        }
    }

    FftPlan to_angle_;
    FftPlan to_momentum_;
    double scale_;
};

/// Error-free Floquet propagator U = exp(-i T n^2/2) exp(i k (theta - pi)^2/2).
///
/// The (-1)^j factors of the two transforms cancel around the diagonal kick,
/// so one step is two bare FFTs and two phase multiplications.
class ExactPropagator {
  public:
    explicit ExactPropagator(const MapParams& p)
        : params_(p), to_angle_(p.dim, FftSign::positive), to_momentum_(p.dim, FftSign::negative),
          kick_(kick_phases(p)), free_(free_phases(p)) {
        const double inv_n = 1.0 / static_cast<double>(p.dim);
        for (auto& k : kick_) k *= inv_n;
    }

    const MapParams& params() const { return params_; }

    void step(StateVector& s) const {
        if (s.size() != params_.dim) throw std::invalid_argument("exact_step: dimension mismatch");
        if (s.representation() != Representation::momentum) {
            throw std::invalid_argument("exact_step: state must be in the momentum representation");
        }
        auto a = s.amplitudes();
        to_angle_.execute(a);
        for (std::size_t j = 0; j < a.size(); ++j) a[j] *= kick_[j];
        to_momentum_.execute(a);
        for (std::size_t m = 0; m < a.size(); ++m) a[m] *= free_[m];
    }

    void evolve(StateVector& s, std::int64_t steps) const {
        if (steps < 0) throw std::invalid_argument("evolve: steps must be non-negative");
        for (std::int64_t t = 0; t < steps; ++t) step(s);
    }

  private:
    MapParams params_;
    FftPlan to_angle_;
    FftPlan to_momentum_;
    std::vector<complex> kick_;
    std::vector<complex> free_;
};

inline StateVector exact_step(StateVector state, const MapParams& p) {
    ExactPropagator(p).step(state);
    return state;
}

inline StateVector evolve(StateVector state, const MapParams& p, std::int64_t steps) {
    ExactPropagator(p).evolve(state, steps);
    return state;
}

}  // namespace fractfid
