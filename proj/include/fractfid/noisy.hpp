#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"
#include "imperfections.hpp"
#include "state.hpp"

namespace fractfid {

/// Reference noisy step: every gate is followed by one application of the
/// static error unitary (unit dwell time per gate).
inline StateVector noisy_step(StateVector state, const Circuit& circuit, const ImperfectionConfig& cfg) {
    if (cfg.deltas.size() != static_cast<std::size_t>(circuit.params.n_qubits)) {
        throw std::invalid_argument("noisy_step: imperfection config does not match circuit width");
    }
    const auto err = error_unitary(cfg);
    for (const auto& g : circuit.gates) {
        apply_gate(state, g);
        for (std::size_t m = 0; m < state.size(); ++m) state[m] *= err[m];
    }
    return state;
}

/// Noisy Floquet step with the circuit compiled into Hadamard layers.
///
/// All diagonal factors between two consecutive Hadamards (phase gates and
/// the error unitaries that follow them) commute, so each run is summed as
/// angles and applied as a single phase vector fused into the next
/// Hadamard sweep. One step costs about 2 n_q passes over the state instead
/// of one pass per gate.
class NoisyPropagator {
  public:
    /// Above this many stored phases the per-gate path is used instead.
    static constexpr std::size_t kMaxCompiledPhases = std::size_t{1} << 26;

    NoisyPropagator(Circuit circuit, ImperfectionConfig cfg)
        : circuit_(std::move(circuit)), cfg_(std::move(cfg)) {
        if (cfg_.deltas.size() != static_cast<std::size_t>(circuit_.params.n_qubits)) {
            throw std::invalid_argument("NoisyPropagator: imperfection config does not match circuit width");
        }
        const std::size_t dim = circuit_.params.dim;
        std::size_t layers = 1;
        for (const auto& g : circuit_.gates) layers += is_diagonal(g) ? 0 : 1;
        compiled_ = layers * dim <= kMaxCompiledPhases;
        if (compiled_) compile();
        else error_ = error_unitary(cfg_);
    }

    const Circuit& circuit() const { return circuit_; }
    const ImperfectionConfig& config() const { return cfg_; }

    void step(StateVector& s) const {
        if (s.size() != circuit_.params.dim) throw std::invalid_argument("noisy step: dimension mismatch");
        if (!compiled_) {
            for (const auto& g : circuit_.gates) {
                apply_gate(s, g);
                for (std::size_t m = 0; m < s.size(); ++m) s[m] *= error_[m];
            }
            return;
        }
        const std::size_t dim = s.size();
        complex* a = s.data();
        for (const auto& layer : layers_) {
            const complex* d = layer.phases.empty() ? nullptr : layer.phases.data();
            if (!layer.hadamard) {
                if (d != nullptr) {
                    for (std::size_t m = 0; m < dim; ++m) a[m] *= d[m];
                }
                continue;
            }
            const std::size_t bit = std::size_t{1} << *layer.hadamard;
            const double r = std::numbers::sqrt2 / 2.0;
            for (std::size_t hi = 0; hi < dim; hi += 2 * bit) {
                for (std::size_t i = hi; i < hi + bit; ++i) {
                    complex x = a[i];
                    complex y = a[i | bit];
                    if (d != nullptr) {
                        x *= d[i];
                        y *= d[i | bit];
                    }
                    a[i] = (x + y) * r;
                    a[i | bit] = (x - y) * r;
                }
            }
        }
    }

  private:
    // Apply `phases` (if any), then the Hadamard (if any).
    struct Layer {
        std::vector<complex> phases;
        std::optional<int> hadamard;
    };

    void compile() {
        const std::size_t dim = circuit_.params.dim;
        const auto err = error_angles(cfg_);
        const bool noisy = !is_identity(cfg_);

        std::vector<double> pending(dim, 0.0);
        bool has_pending = false;
        auto flush = [&](std::optional<int> h) {
            Layer layer;
            layer.hadamard = h;
            if (has_pending) {
                layer.phases.resize(dim);
                for (std::size_t m = 0; m < dim; ++m) layer.phases[m] = std::polar(1.0, pending[m]);
            }
            layers_.push_back(std::move(layer));
            std::fill(pending.begin(), pending.end(), 0.0);
            has_pending = false;
        };
        auto add_error = [&] {
            if (!noisy) return;
            for (std::size_t m = 0; m < dim; ++m) pending[m] += err[m];
            has_pending = true;
        };

        for (const auto& gate : circuit_.gates) {
            if (const auto* h = std::get_if<gates::Hadamard>(&gate)) {
                flush(h->target);
            } else if (const auto* cp = std::get_if<gates::ControlledPhase>(&gate)) {
                const std::size_t mask = (std::size_t{1} << cp->control) | (std::size_t{1} << cp->target);
                for (std::size_t m = 0; m < dim; ++m) {
                    if ((m & mask) == mask) pending[m] += cp->angle;
                }
                has_pending = true;
            } else if (const auto* sp = std::get_if<gates::SinglePhase>(&gate)) {
                const std::size_t bit = std::size_t{1} << sp->target;
                for (std::size_t m = 0; m < dim; ++m) {
                    if (m & bit) pending[m] += sp->angle;
                }
                has_pending = true;
            } else {
                const double ang = std::get<gates::GlobalPhase>(gate).angle;
                for (auto& v : pending) v += ang;
                has_pending = true;
            }
            add_error();
        }
        if (has_pending) flush(std::nullopt);
    }

    Circuit circuit_;
    ImperfectionConfig cfg_;
    bool compiled_ = false;
    std::vector<Layer> layers_;
    std::vector<complex> error_;
};

}  // namespace fractfid
