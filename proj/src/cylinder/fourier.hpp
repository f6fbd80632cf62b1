#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vpm::detail {

using cplx = std::complex<double>;

/// Real transforms of length n for single rows, executed on caller arrays.
/// Physical f_k = sum_m c_m e^{i m theta_k} over m = -(M-1)..M-1 with c_{-m} = conj(c_m).
class AzimuthalFft {
public:
    explicit AzimuthalFft(std::size_t n);
    ~AzimuthalFft();
    AzimuthalFft(const AzimuthalFft&) = delete;
    AzimuthalFft& operator=(const AzimuthalFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t half() const noexcept { return n_ / 2 + 1; }

    /// coeffs[m * stride], m < modes, into phys[0..n). scratch holds half() entries.
    void synthesize(const cplx* coeffs, std::size_t modes, std::size_t stride, double* phys, cplx* scratch) const;
    /// phys (destroyed) into out[m * stride], m < modes. scratch holds half() entries.
    void analyze(double* phys, std::size_t modes, std::size_t stride, cplx* out, cplx* scratch) const;

private:
    std::size_t n_;
    fftw_plan c2r_ = nullptr;
    fftw_plan r2c_ = nullptr;
};

/// Mode-major coefficient rows (nrows radii, modes each) to physical [row][k].
std::vector<double> synthesize_rows(const AzimuthalFft& fft, std::span<const cplx> coeffs, std::size_t nrows,
                                    std::size_t modes);

}  // namespace vpm::detail
