#pragma once
// Independent reference implementations used only by the tests. They share
// no code with the library beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <fractfid/circuit.hpp>
#include <fractfid/imperfections.hpp>
#include <fractfid/params.hpp>
#include <fractfid/state.hpp>

namespace oracle {

using cd = std::complex<double>;

/// Row-major dense square matrix.
struct Matrix {
    std::size_t n = 0;
    std::vector<cd> a;

    explicit Matrix(std::size_t dim = 0) : n(dim), a(dim * dim) {}
    cd& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
    cd operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }

    static Matrix identity(std::size_t dim) {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    Matrix z(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k) {
            const cd v = x(i, k);
            if (v == cd{}) continue;
            for (std::size_t j = 0; j < x.n; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

inline std::vector<cd> operator*(const Matrix& m, const std::vector<cd>& v) {
    std::vector<cd> out(m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) out[i] += m(i, j) * v[j];
    return out;
}

inline Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix z(x.n * y.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j)
            for (std::size_t k = 0; k < y.n; ++k)
                for (std::size_t l = 0; l < y.n; ++l) z(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
    return z;
}

/// Floquet matrix of the quantum sawtooth map, element by element:
/// U[m', m] = e^{-i T n'^2 / 2} (1/N) sum_j e^{-i n' theta_j} e^{i k (theta_j - pi)^2 / 2} e^{i n theta_j}.
inline Matrix floquet(const fractfid::MapParams& p) {
    const std::size_t N = p.dim;
    const double pi = std::numbers::pi;
    Matrix U(N);
    for (std::size_t r = 0; r < N; ++r) {
        const double nr = static_cast<double>(r) - static_cast<double>(N) / 2.0;
        for (std::size_t c = 0; c < N; ++c) {
            const double nc = static_cast<double>(c) - static_cast<double>(N) / 2.0;
            cd s{};
            for (std::size_t j = 0; j < N; ++j) {
                const double th = 2.0 * pi * static_cast<double>(j) / static_cast<double>(N);
                s += std::exp(cd(0.0, -nr * th + p.kick * (th - pi) * (th - pi) / 2.0 + nc * th));
            }
            U(r, c) = std::exp(cd(0.0, -p.period * nr * nr / 2.0)) * s / static_cast<double>(N);
        }
    }
    return U;
}

/// 2x2 single-qubit matrix lifted to n qubits; qubit q is bit q of the index.
inline Matrix lift(const Matrix& g, int q, int n) {
    Matrix out = Matrix::identity(1);
    for (int k = n - 1; k >= 0; --k) out = kron(out, k == q ? g : Matrix::identity(2));
    return out;
}

/// Dense matrix of one gate built from Kronecker products.
inline Matrix gate_matrix(const fractfid::Gate& gate, int n) {
    using namespace fractfid::gates;
    const double r = 1.0 / std::sqrt(2.0);
    if (const auto* h = std::get_if<Hadamard>(&gate)) {
        Matrix H(2);
        H(0, 0) = r, H(0, 1) = r, H(1, 0) = r, H(1, 1) = -r;
        return lift(H, h->target, n);
    }
    if (const auto* sp = std::get_if<SinglePhase>(&gate)) {
        Matrix P = Matrix::identity(2);
        P(1, 1) = std::exp(cd(0.0, sp->angle));
        return lift(P, sp->target, n);
    }
    if (const auto* cp = std::get_if<ControlledPhase>(&gate)) {
        // |1><1| (x) |1><1| picks up the phase: I + (e^{i phi} - 1) P1_c P1_t
        Matrix P1(2);
        P1(1, 1) = 1.0;
        const Matrix proj = lift(P1, cp->control, n) * lift(P1, cp->target, n);
        Matrix out = Matrix::identity(std::size_t{1} << n);
        const cd f = std::exp(cd(0.0, cp->angle)) - 1.0;
        for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += f * proj.a[i];
        return out;
    }
    const auto& g = std::get<GlobalPhase>(gate);
    Matrix out = Matrix::identity(std::size_t{1} << n);
    for (std::size_t i = 0; i < out.n; ++i) out(i, i) = std::exp(cd(0.0, g.angle));
    return out;
}

/// exp(-i delta_{n-1} sigma_z) (x) ... (x) exp(-i delta_0 sigma_z).
inline Matrix error_matrix(const std::vector<double>& deltas) {
    const int n = static_cast<int>(deltas.size());
    Matrix out = Matrix::identity(std::size_t{1} << n);
    for (int q = 0; q < n; ++q) {
        Matrix z(2);
        z(0, 0) = std::exp(cd(0.0, -deltas[q]));
        z(1, 1) = std::exp(cd(0.0, deltas[q]));
        out = lift(z, q, n) * out;
    }
    return out;
}

/// Product of per-gate matrices, each followed by the error matrix.
inline Matrix noisy_floquet(const fractfid::Circuit& c, const std::vector<double>& deltas) {
    const int n = c.params.n_qubits;
    const Matrix E = error_matrix(deltas);
    Matrix U = Matrix::identity(std::size_t{1} << n);
    for (const auto& g : c.gates) U = E * (gate_matrix(g, n) * U);
    return U;
}

inline std::vector<cd> to_vector(const fractfid::StateVector& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

/// Standard square-grid box counting of the graph of x over the unit square:
/// for s x s grids, count occupied cells with each column spanning the range
/// of the linearly interpolated curve inside it. D = slope of log count vs log s.
inline double grid_box_dimension(const std::vector<double>& x, int s_min, int s_max) {
    const double lo = *std::min_element(x.begin(), x.end());
    const double hi = *std::max_element(x.begin(), x.end());
    const std::size_t len = x.size();
    std::vector<double> ls, lc;
    for (int s = s_min; s <= s_max; s *= 2) {
        double count = 0.0;
        for (int col = 0; col < s; ++col) {
            const std::size_t a = static_cast<std::size_t>(col) * (len - 1) / static_cast<std::size_t>(s);
            const std::size_t b = static_cast<std::size_t>(col + 1) * (len - 1) / static_cast<std::size_t>(s);
            double mn = x[a], mx = x[a];
            for (std::size_t i = a; i <= b; ++i) mn = std::min(mn, x[i]), mx = std::max(mx, x[i]);
            const double y0 = (mn - lo) / (hi - lo) * s, y1 = (mx - lo) / (hi - lo) * s;
            count += std::floor(std::min(y1, s - 1e-9)) - std::floor(std::min(y0, s - 1e-9)) + 1.0;
        }
        ls.push_back(std::log(static_cast<double>(s)));
        lc.push_back(std::log(count));
    }
    const double n = static_cast<double>(ls.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < ls.size(); ++i) mx += ls[i], my += lc[i];
    mx /= n, my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < ls.size(); ++i) sxy += (ls[i] - mx) * (lc[i] - my), sxx += (ls[i] - mx) * (ls[i] - mx);
    return sxy / sxx;
}

/// Classical sawtooth map I' = I + K (theta - pi), theta' = theta + I' (mod 2 pi);
/// largest unfolded momentum excursion over `steps` iterations.
inline double classical_excursion(double K, double theta, double I, long steps) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double I0 = I;
    double excursion = 0.0;
    for (long t = 0; t < steps; ++t) {
        I += K * (theta - std::numbers::pi);
        theta = std::fmod(theta + I, two_pi);
        if (theta < 0.0) theta += two_pi;
        excursion = std::max(excursion, std::fabs(I - I0));
    }
    return excursion;
}

inline constexpr long kClassicalSteps = 100000;

/// Island when the excursion stays below one momentum period 2 pi. Quantum
/// momentum n maps to classical action I = T n.
inline bool classical_island(const fractfid::MapParams& p, double theta0, double n0) {
    return classical_excursion(p.K, theta0, p.period * n0, kClassicalSteps) < 2.0 * std::numbers::pi;
}

}  // namespace oracle
