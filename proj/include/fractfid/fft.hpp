#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace fractfid {

namespace detail {
// FFTW's planner is not re-entrant; execution of an existing plan is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

enum class FftSign { negative = FFTW_FORWARD, positive = FFTW_BACKWARD };

/// Unnormalized in-place 1-D complex DFT of fixed length:
/// out_j = sum_m in_m exp(sign * 2 pi i m j / N).
class FftPlan {
  public:
    FftPlan(std::size_t n, FftSign sign) : n_(n) {
        std::vector<std::complex<double>> scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, static_cast<int>(sign),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    FftPlan(FftPlan&& o) noexcept : n_(o.n_), plan_(o.plan_) { o.plan_ = nullptr; }
    FftPlan& operator=(FftPlan&& o) noexcept {
        if (this != &o) {
            reset();
            n_ = o.n_;
            plan_ = o.plan_;
            o.plan_ = nullptr;
        }
        return *this;
    }
    ~FftPlan() { reset(); }

    std::size_t size() const { return n_; }

    void execute(std::span<std::complex<double>> data) const {
        if (data.size() != n_) throw std::invalid_argument("FftPlan: length mismatch");
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(plan_, buf, buf);
    }

  private:
    void reset() {
        if (plan_ != nullptr) {
            std::lock_guard lock(detail::fftw_planner_mutex());
            fftw_destroy_plan(plan_);
            plan_ = nullptr;
        }
    }

    std::size_t n_ = 0;
    fftw_plan plan_ = nullptr;
};

}  // namespace fractfid
