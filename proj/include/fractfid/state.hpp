#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "params.hpp"

namespace fractfid {

using complex = std::complex<double>;

enum class Representation { momentum, angle };

/// N complex amplitudes of a wavefunction on the quantum torus.
///
/// In the momentum representation index m carries momentum n = m - N/2;
/// in the angle representation index j sits at theta_j = 2 pi j / N.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::size_t dim, Representation rep = Representation::momentum)
        : amps_(dim), rep_(rep) {}
    StateVector(std::vector<complex> amps, Representation rep = Representation::momentum)
        : amps_(std::move(amps)), rep_(rep) {}

    std::size_t size() const { return amps_.size(); }
    Representation representation() const { return rep_; }
    void set_representation(Representation rep) { rep_ = rep; }

    complex& operator[](std::size_t i) { return amps_[i]; }
    const complex& operator[](std::size_t i) const { return amps_[i]; }

    std::span<complex> amplitudes() { return amps_; }
    std::span<const complex> amplitudes() const { return amps_; }
    complex* data() { return amps_.data(); }
    const complex* data() const { return amps_.data(); }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void normalize() {
        const double n = std::sqrt(norm_squared());
        if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
        for (auto& a : amps_) a /= n;
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

  private:
    std::vector<complex> amps_;
    Representation rep_ = Representation::momentum;
};

/// <a|b>, conjugate-linear in the first argument.
inline complex inner_product(std::span<const complex> a, std::span<const complex> b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner_product: size mismatch");
    complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline complex inner_product(const StateVector& a, const StateVector& b) {
    return inner_product(a.amplitudes(), b.amplitudes());
}

/// |<a|b>|^2.
inline double overlap(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

inline StateVector basis_state(const MapParams& p, std::uint64_t index) {
    if (index >= p.dim) throw std::out_of_range("basis index outside Hilbert space");
    StateVector s(p.dim);
    s[index] = 1.0;
    return s;
}

/// Momentum eigenstate |n> with n in [-N/2, N/2).
inline StateVector momentum_state(const MapParams& p, std::int64_t n) {
    const auto half = static_cast<std::int64_t>(p.dim / 2);
    if (n < -half || n >= half) throw std::out_of_range("momentum outside the symmetric window");
    return basis_state(p, static_cast<std::uint64_t>(n + half));
}

struct GaussianPacketSpec {
    double theta0 = 0.0;
    double n0 = 0.0;
    std::optional<double> sigma_n;  ///< momentum width; minimum-uncertainty default when unset

    friend bool operator==(const GaussianPacketSpec&, const GaussianPacketSpec&) = default;
};

/// sigma_n = sqrt(N / 4 pi), for which sigma_theta * sigma_n = 1/2.
inline double default_sigma_n(const MapParams& p) {
    return std::sqrt(static_cast<double>(p.dim) / (4.0 * std::numbers::pi));
}

inline constexpr int kPacketImages = 3;

/// Periodized minimum-uncertainty Gaussian packet centred at (theta0, n0),
/// in the momentum representation.
inline StateVector gaussian_packet(const MapParams& p, const GaussianPacketSpec& spec) {
    const double sigma = spec.sigma_n.value_or(default_sigma_n(p));
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("gaussian_packet: sigma_n must be positive");
    }
    if (!(spec.theta0 >= 0.0 && spec.theta0 < 2.0 * std::numbers::pi)) {
        throw std::invalid_argument("gaussian_packet: theta0 must lie in [0, 2pi)");
    }
    if (!std::isfinite(spec.n0)) throw std::invalid_argument("gaussian_packet: n0 not finite");

    const double dim = static_cast<double>(p.dim);
    StateVector s(p.dim);
    for (std::uint64_t m = 0; m < p.dim; ++m) {
        complex a{0.0, 0.0};
        for (int r = -kPacketImages; r <= kPacketImages; ++r) {
            const double n = p.momentum(m) + r * dim;
            const double d = n - spec.n0;
            a += std::exp(-d * d / (4.0 * sigma * sigma)) * std::polar(1.0, -n * spec.theta0);
        }
        s[m] = a;
    }

    std::vector<double> prob(p.dim);
    double total = 0.0;
    for (std::uint64_t m = 0; m < p.dim; ++m) total += prob[m] = std::norm(s[m]);
    if (!(total > 0.0)) throw std::invalid_argument("gaussian_packet: packet vanishes on the grid");
    std::sort(prob.begin(), prob.end(), std::greater<>());
    double acc = 0.0;
    std::size_t carrying = 0;
    while (carrying < prob.size() && acc < 0.99 * total) acc += prob[carrying++];
    if (carrying < 3) {
        throw std::invalid_argument("gaussian_packet: sigma_n under-resolved by the momentum grid");
    }

    s.normalize();
    return s;
}

}  // namespace fractfid
