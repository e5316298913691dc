#pragma once

// RAII wrapper over an in-place FFTW complex transform pair.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <new>
#include <span>
#include <utility>

namespace rotorlab {

namespace detail {

// FFTW's planner is not reentrant; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace detail

/// Scratch buffer plus forward/backward plans of one size. One instance per
/// concurrent worker. Plans use FFTW_ESTIMATE so results are reproducible run
/// to run.
class FftWorkspace {
public:
    explicit FftWorkspace(std::size_t n) : n_(n) {
        data_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (data_ == nullptr) throw std::bad_alloc();
        std::lock_guard lock(detail::fftw_planner_mutex());
        const int len = static_cast<int>(n);
        forward_ = fftw_plan_dft_1d(len, data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(len, data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;

    FftWorkspace(FftWorkspace&& o) noexcept
        : n_(std::exchange(o.n_, 0)), data_(std::exchange(o.data_, nullptr)),
          forward_(std::exchange(o.forward_, nullptr)), backward_(std::exchange(o.backward_, nullptr)) {}

    FftWorkspace& operator=(FftWorkspace&& o) noexcept {
        if (this != &o) {
            release();
            n_ = std::exchange(o.n_, 0);
            data_ = std::exchange(o.data_, nullptr);
            forward_ = std::exchange(o.forward_, nullptr);
            backward_ = std::exchange(o.backward_, nullptr);
        }
        return *this;
    }

    ~FftWorkspace() { release(); }

    std::size_t size() const { return n_; }

    std::span<std::complex<double>> buffer() {
        return {reinterpret_cast<std::complex<double>*>(data_), n_};
    }

    /// buffer <- sum_j buffer[j] exp(-2 pi i j m / n)   (unnormalized)
    void forward() { fftw_execute(forward_); }
    /// buffer <- sum_m buffer[m] exp(+2 pi i j m / n)   (unnormalized)
    void backward() { fftw_execute(backward_); }

private:
    void release() {
        if (forward_ || backward_) {
            std::lock_guard lock(detail::fftw_planner_mutex());
            if (forward_) fftw_destroy_plan(forward_);
            if (backward_) fftw_destroy_plan(backward_);
        }
        if (data_) fftw_free(data_);
        forward_ = backward_ = nullptr;
        data_ = nullptr;
    }

    std::size_t n_ = 0;
    fftw_complex* data_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

} // namespace rotorlab
