#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "map.hpp"
#include "params.hpp"
#include "state.hpp"

namespace fractfid {

namespace gates {
struct Hadamard {
    int target;
};
struct ControlledPhase {
    int control;
    int target;
    double angle;
};
/// diag(1, exp(i angle)) on the target qubit.
struct SinglePhase {
    int target;
    double angle;
};
struct GlobalPhase {
    double angle;
};
}  // namespace gates

using Gate = std::variant<gates::Hadamard, gates::ControlledPhase, gates::SinglePhase, gates::GlobalPhase>;

inline bool is_diagonal(const Gate& g) { return !std::holds_alternative<gates::Hadamard>(g); }

/// Gate sequence of one Floquet step. GlobalPhase gates are not emitted; the
/// accumulated constant is kept in `global_phase` instead.
struct Circuit {
    MapParams params;
    std::vector<Gate> gates;
    double global_phase = 0.0;

    std::size_t gate_count() const { return gates.size(); }
};

/// Closed-form size of the Floquet circuit: two QFT ladders of n(n+1)/2
/// gates and two diagonal blocks of n(n-1)/2 + n gates.
constexpr std::size_t floquet_gate_count(int n) {
    const auto nq = static_cast<std::size_t>(n);
    return nq * (nq + 1) + nq * (nq - 1) + 2 * nq;
}

namespace detail {

inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * std::numbers::pi);
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

inline double fraction_angle(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
}

// QFT without the final swaps: |x> -> N^{-1/2} sum_y exp(2 pi i x y / N) |rev(y)>.
inline std::vector<Gate> qft_ladder(int n) {
    std::vector<Gate> out;
    for (int j = n - 1; j >= 0; --j) {
        out.emplace_back(gates::Hadamard{j});
        for (int k = j - 1; k >= 0; --k) {
            out.emplace_back(gates::ControlledPhase{k, j, std::numbers::pi / std::ldexp(1.0, j - k)});
        }
    }
    return out;
}

inline std::vector<Gate> inverse_of(const std::vector<Gate>& seq) {
    std::vector<Gate> out;
    out.reserve(seq.size());
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        std::visit(
            [&](const auto& g) {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, gates::Hadamard>) {
                    out.emplace_back(g);
                } else if constexpr (std::is_same_v<G, gates::ControlledPhase>) {
                    out.emplace_back(gates::ControlledPhase{g.control, g.target, wrap_angle(-g.angle)});
                } else if constexpr (std::is_same_v<G, gates::SinglePhase>) {
                    out.emplace_back(gates::SinglePhase{g.target, wrap_angle(-g.angle)});
                } else {
                    out.emplace_back(gates::GlobalPhase{wrap_angle(-g.angle)});
                }
            },
            *it);
    }
    return out;
}

}  // namespace detail

/// Diagonal phase exp(i c (x - N/2)^2) with x = sum_i bit_i(x) * weight_i,
/// expanded into one SinglePhase per qubit and one ControlledPhase per pair.
/// Returns the constant c N^2 / 4 as a global phase.
inline double append_quadratic_phase(std::vector<Gate>& out, int n, double c,
                                     const std::vector<double>& weights) {
    const double dim = std::ldexp(1.0, n);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            out.emplace_back(gates::ControlledPhase{a, b, detail::wrap_angle(2.0 * c * weights[a] * weights[b])});
        }
    }
    for (int i = 0; i < n; ++i) {
        const double w = weights[i];
        out.emplace_back(gates::SinglePhase{i, detail::wrap_angle(c * (w * w - dim * w))});
    }
    return detail::wrap_angle(c * dim * dim / 4.0);
}

/// Free rotation exp(-i pi (m - N/2)^2 / N) in the natural qubit order, with
/// every angle reduced modulo 2 pi in integer arithmetic.
inline double append_free_rotation(std::vector<Gate>& out, int n) {
    const std::int64_t dim = std::int64_t{1} << n;
    const std::int64_t den = 2 * dim;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            // 2c w_a w_b = -2 pi * 2^{a+b+1} / (2N)
            const std::int64_t num = -(((std::int64_t{1} << (a + b)) * 2) % den);
            out.emplace_back(gates::ControlledPhase{a, b, detail::fraction_angle(num, den)});
        }
    }
    for (int i = 0; i < n; ++i) {
        const std::int64_t w = std::int64_t{1} << i;
        // c (w^2 - N w) = -2 pi (w^2 - N w) / (2N)
        const std::int64_t num = -((w * w - dim * w) % den);
        out.emplace_back(gates::SinglePhase{i, detail::fraction_angle(num, den)});
    }
    return detail::fraction_angle(-((dim * dim / 4) % den), den);
}

/// Gate-level Floquet step: QFT ladder, kick phases in the bit-reversed
/// labelling the ladder leaves behind, inverse ladder, free rotation.
inline Circuit build_floquet_circuit(const MapParams& p) {
    const int n = p.n_qubits;
    Circuit c;
    c.params = p;

    auto qft = detail::qft_ladder(n);
    c.gates = qft;

    std::vector<double> reversed(n);
    for (int i = 0; i < n; ++i) reversed[i] = std::ldexp(1.0, n - 1 - i);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(p.dim);
    double global = append_quadratic_phase(c.gates, n, 0.5 * p.kick * step * step, reversed);

    auto inv = detail::inverse_of(qft);
    c.gates.insert(c.gates.end(), inv.begin(), inv.end());

    global += append_free_rotation(c.gates, n);
    c.global_phase = detail::wrap_angle(global);
    return c;
}

inline void check_qubit(int q, int n) {
    if (q < 0 || q >= n) {
        throw std::out_of_range("qubit index " + std::to_string(q) + " outside [0, " + std::to_string(n) + ")");
    }
}

/// Applies one gate in place; O(N).
inline void apply_gate(StateVector& s, const Gate& gate) {
    const std::size_t dim = s.size();
    if (dim == 0 || (dim & (dim - 1)) != 0) throw std::invalid_argument("apply_gate: dimension not a power of two");
    const int n = std::countr_zero(dim);
    std::visit(
        [&](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, gates::Hadamard>) {
                check_qubit(g.target, n);
                const std::size_t bit = std::size_t{1} << g.target;
                const double r = std::numbers::sqrt2 / 2.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    if (i & bit) continue;
                    const complex a = s[i];
                    const complex b = s[i | bit];
                    s[i] = (a + b) * r;
                    s[i | bit] = (a - b) * r;
                }
            } else if constexpr (std::is_same_v<G, gates::ControlledPhase>) {
                check_qubit(g.control, n);
                check_qubit(g.target, n);
                if (g.control == g.target) throw std::invalid_argument("ControlledPhase: control equals target");
                const std::size_t mask = (std::size_t{1} << g.control) | (std::size_t{1} << g.target);
                const complex ph = std::polar(1.0, g.angle);
                for (std::size_t i = 0; i < dim; ++i) {
                    if ((i & mask) == mask) s[i] *= ph;
                }
            } else if constexpr (std::is_same_v<G, gates::SinglePhase>) {
                check_qubit(g.target, n);
                const std::size_t bit = std::size_t{1} << g.target;
                const complex ph = std::polar(1.0, g.angle);
                for (std::size_t i = 0; i < dim; ++i) {
                    if (i & bit) s[i] *= ph;
                }
            } else {
                const complex ph = std::polar(1.0, g.angle);
                for (std::size_t i = 0; i < dim; ++i) s[i] *= ph;
            }
        },
        gate);
}

inline void apply_circuit(StateVector& s, const Circuit& c) {
    for (const auto& g : c.gates) apply_gate(s, g);
}

inline std::string describe(const Gate& gate) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, gates::Hadamard>) {
                os << "H " << g.target;
            } else if constexpr (std::is_same_v<G, gates::ControlledPhase>) {
                os << "CP " << g.control << ' ' << g.target << ' ' << g.angle;
            } else if constexpr (std::is_same_v<G, gates::SinglePhase>) {
                os << "P " << g.target << ' ' << g.angle;
            } else {
                os << "GPHASE " << g.angle;
            }
        },
        gate);
    return os.str();
}

/// One gate per line, preceded by a comment header.
inline std::string dump(const Circuit& c) {
    std::ostringstream os;
    os.precision(17);
    os << "# n_q=" << c.params.n_qubits << " K=" << c.params.K << " gates=" << c.gate_count()
       << " global_phase=" << c.global_phase << '\n';
    for (const auto& g : c.gates) os << describe(g) << '\n';
    return os.str();
}

}  // namespace fractfid
