#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "state.hpp"

namespace fractfid {

/// Static single-qubit detunings of the hardware Hamiltonian
/// H = sum_i (Delta + delta_i) sigma_i^z, held fixed for a whole run.
struct ImperfectionConfig {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> deltas;
    double level_spacing = 0.0;  ///< Delta; zero means the rotating frame

    friend bool operator==(const ImperfectionConfig&, const ImperfectionConfig&) = default;
};

inline constexpr std::string_view kImperfectionGenerator =
    "mt19937_64(seed); u = (x >> 11) * 2^-53; delta = epsilon * (2u - 1)";

inline ImperfectionConfig sample_imperfections(int n_qubits, double epsilon, std::uint64_t seed) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("imperfection strength must be finite and non-negative");
    }
    if (n_qubits < 1) throw std::invalid_argument("n_q must be positive");
    ImperfectionConfig cfg;
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    cfg.deltas.resize(static_cast<std::size_t>(n_qubits));
    std::mt19937_64 gen(seed);
    for (auto& d : cfg.deltas) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        d = epsilon * (2.0 * u - 1.0);
    }
    return cfg;
}

/// Angles of the diagonal error unitary exp(-i sum_i (Delta + delta_i) s_i(m)),
/// s_i(m) = +1 when bit i of m is clear and -1 when it is set.
inline std::vector<double> error_angles(const ImperfectionConfig& cfg) {
    const std::size_t nq = cfg.deltas.size();
    const std::size_t dim = std::size_t{1} << nq;
    std::vector<double> ang(dim, 0.0);
    for (std::size_t m = 0; m < dim; ++m) {
        double e = 0.0;
        for (std::size_t i = 0; i < nq; ++i) {
            const double w = cfg.level_spacing + cfg.deltas[i];
            e += ((m >> i) & 1U) ? -w : w;
        }
        ang[m] = -e;
    }
    return ang;
}

inline std::vector<complex> error_unitary(const ImperfectionConfig& cfg) {
    const auto ang = error_angles(cfg);
    std::vector<complex> d(ang.size());
    for (std::size_t m = 0; m < ang.size(); ++m) d[m] = std::polar(1.0, ang[m]);
    return d;
}

inline bool is_identity(const ImperfectionConfig& cfg) {
    if (cfg.level_spacing != 0.0) return false;
    for (double d : cfg.deltas) {
        if (d != 0.0) return false;
    }
    return true;
}

}  // namespace fractfid
