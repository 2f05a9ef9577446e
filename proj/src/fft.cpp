#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace wakenode::detail {

namespace {

// The FFTW planner is not re-entrant; execution on a private plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<std::complex<double>> real_fft(std::span<const double> input, std::size_t n) {
    std::vector<double> in(n, 0.0);
    std::copy_n(input.begin(), std::min(n, input.size()), in.begin());
    std::vector<std::complex<double>> out(n / 2 + 1);

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> inverse_real_fft(std::span<const std::complex<double>> bins, std::size_t n) {
    // c2r destroys its input.
    std::vector<std::complex<double>> in(bins.begin(), bins.end());
    in.resize(n / 2 + 1);
    std::vector<double> out(n);

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                    out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace wakenode::detail
