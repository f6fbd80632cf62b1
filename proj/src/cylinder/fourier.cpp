#include "fourier.hpp"

#include <algorithm>
#include <mutex>

#include "vpm/error.hpp"

namespace vpm::detail {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

AzimuthalFft::AzimuthalFft(std::size_t n) : n_(n) {
    if (n < 2 || n % 2 != 0) throw ConfigError("AzimuthalFft: length must be even");
    std::vector<double> re(n);
    std::vector<cplx> co(half());
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    c2r_ = fftw_plan_dft_c2r_1d(len, reinterpret_cast<fftw_complex*>(co.data()), re.data(), flags);
    r2c_ = fftw_plan_dft_r2c_1d(len, re.data(), reinterpret_cast<fftw_complex*>(co.data()), flags);
    if (!c2r_ || !r2c_) throw NumericalError("FFTW planning failed");
}

AzimuthalFft::~AzimuthalFft() {
    std::lock_guard lock(planner_mutex());
    if (c2r_) fftw_destroy_plan(c2r_);
    if (r2c_) fftw_destroy_plan(r2c_);
}

void AzimuthalFft::synthesize(const cplx* coeffs, std::size_t modes, std::size_t stride, double* phys,
                              cplx* scratch) const {
    const std::size_t h = half();
    const std::size_t used = std::min(modes, h - 1);  // Nyquist stays zero
    for (std::size_t m = 0; m < used; ++m) scratch[m] = coeffs[m * stride];
    std::fill(scratch + used, scratch + h, cplx(0.0, 0.0));
    scratch[0].imag(0.0);
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(scratch), phys);
}

void AzimuthalFft::analyze(double* phys, std::size_t modes, std::size_t stride, cplx* out, cplx* scratch) const {
    fftw_execute_dft_r2c(r2c_, phys, reinterpret_cast<fftw_complex*>(scratch));
    const double scale = 1.0 / static_cast<double>(n_);
    const std::size_t used = std::min(modes, half() - 1);
    for (std::size_t m = 0; m < used; ++m) out[m * stride] = scratch[m] * scale;
    for (std::size_t m = used; m < modes; ++m) out[m * stride] = 0.0;
}

std::vector<double> synthesize_rows(const AzimuthalFft& fft, std::span<const cplx> coeffs, std::size_t nrows,
                                    std::size_t modes) {
    std::vector<double> out(nrows * fft.size());
    std::vector<cplx> scratch(fft.half());
    for (std::size_t j = 0; j < nrows; ++j) {
        fft.synthesize(coeffs.data() + j, modes, nrows, out.data() + j * fft.size(), scratch.data());
    }
    return out;
}

}  // namespace vpm::detail
