#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "params.hpp"
#include "state.hpp"

namespace fractfid {

/// Centre of cell (i, j) on a G_theta x G_n grid over the torus
/// [0, 2 pi) x [-N/2, N/2).
struct CellCenter {
    double theta0 = 0.0;
    double n0 = 0.0;
};

inline CellCenter cell_center(const MapParams& p, int g_theta, int g_n, int i, int j) {
    return {2.0 * std::numbers::pi * (i + 0.5) / g_theta,
            static_cast<double>(p.dim) * ((j + 0.5) / g_n - 0.5)};
}

struct HusimiGrid {
    int g_theta = 0;
    int g_n = 0;
    std::vector<double> theta;  ///< cell centres, size g_theta
    std::vector<double> n;      ///< cell centres, size g_n
    std::vector<double> raw;    ///< |<coherent(theta_i, n_j)|psi>|^2, index j * g_theta + i
    std::vector<double> values; ///< raw rescaled so that sum(values) * cell_area = 1
    double cell_area = 0.0;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * g_theta + i]; }
};

/// Husimi density of a momentum-representation state, sampled with
/// minimum-uncertainty coherent states at the cell centres.
inline HusimiGrid husimi(const StateVector& psi, const MapParams& p, int g_theta, int g_n) {
    if (g_theta < 2 || g_n < 2) throw std::invalid_argument("husimi: grid must be at least 2 x 2");
    if (psi.size() != p.dim) throw std::invalid_argument("husimi: state dimension mismatch");
    if (psi.representation() != Representation::momentum) {
        throw std::invalid_argument("husimi: state must be in the momentum representation");
    }
    HusimiGrid h;
    h.g_theta = g_theta;
    h.g_n = g_n;
    for (int i = 0; i < g_theta; ++i) h.theta.push_back(cell_center(p, g_theta, g_n, i, 0).theta0);
    for (int j = 0; j < g_n; ++j) h.n.push_back(cell_center(p, g_theta, g_n, 0, j).n0);
    h.raw.resize(static_cast<std::size_t>(g_theta) * g_n);
    double total = 0.0;
    for (int j = 0; j < g_n; ++j) {
        for (int i = 0; i < g_theta; ++i) {
            const auto c = gaussian_packet(p, {h.theta[i], h.n[j], std::nullopt});
            const double v = overlap(c, psi);
            h.raw[static_cast<std::size_t>(j) * g_theta + i] = v;
            total += v;
        }
    }
    h.cell_area = (2.0 * std::numbers::pi / g_theta) * (static_cast<double>(p.dim) / g_n);
    h.values = h.raw;
    if (total > 0.0) {
        for (auto& v : h.values) v /= total * h.cell_area;
    }
    return h;
}

}  // namespace fractfid
