#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fractfid {

enum class Regime { integrable, chaotic, mixed };

inline std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::integrable: return "integrable";
        case Regime::chaotic: return "chaotic";
        case Regime::mixed: return "mixed";
    }
    return "unknown";
}

/// Classical regime of the sawtooth map for a given K = k T.
inline Regime classify_regime(double K) {
    if (K > 0.0 || K < -4.0) return Regime::chaotic;
    if (K == 0.0 || K == -1.0 || K == -2.0 || K == -3.0) return Regime::integrable;
    return Regime::mixed;
}

/// Parameters of the quantized sawtooth map on N = 2^n_q momentum levels.
///
/// The kick period is tied to the Hilbert dimension, T = 2 pi / N, and the
/// kick strength follows from the classical parameter, k = K / T.
struct MapParams {
    int n_qubits = 0;
    std::uint64_t dim = 0;
    double K = 0.0;
    double period = 0.0;
    double kick = 0.0;
    Regime regime = Regime::mixed;

    /// Symmetric momentum value of basis index m.
    double momentum(std::uint64_t m) const {
        return static_cast<double>(m) - static_cast<double>(dim / 2);
    }
    double angle(std::uint64_t j) const {
        return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(dim);
    }

    friend bool operator==(const MapParams&, const MapParams&) = default;
};

inline constexpr int kMaxQubits = 24;

inline MapParams build_params(int n_qubits, double K) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("n_q must lie in [1, " + std::to_string(kMaxQubits) +
                                    "], got " + std::to_string(n_qubits));
    }
    if (!std::isfinite(K)) throw std::invalid_argument("K must be finite");

    MapParams p;
    p.n_qubits = n_qubits;
    p.dim = std::uint64_t{1} << n_qubits;
    p.K = K;
    p.period = 2.0 * std::numbers::pi / static_cast<double>(p.dim);
    p.kick = K / p.period;
    p.regime = classify_regime(K);
    return p;
}

}  // namespace fractfid
