#pragma once

#include <fftw3.h>

#include <cstddef>
#include <span>
#include <vector>

#include "nlsv/grid.hpp"

namespace nlsv {

/// Fourier coefficients of a Field, in FFT ordering (index j <-> Grid::k(j)).
///
/// Unitary convention: c_m = n^{-1/2} sum_j f_j exp(-2 pi i j m / n), so that
/// sum_m |c_m|^2 == sum_j |f_j|^2 and l2_norm(f)^2 == dx * sum_m |c_m|^2.
struct Spectrum {
    Grid grid;
    std::vector<Complex> coefficients;
};

/// In-place unitary complex FFT of fixed length, backed by FFTW.
///
/// Plans are built with FFTW_ESTIMATE so the algorithm choice (and hence
/// every rounding) is reproducible run to run. Plan creation is serialized
/// internally; execution on distinct objects is thread-safe.
class FourierTransform {
public:
    explicit FourierTransform(std::size_t n);
    ~FourierTransform();

    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;
    FourierTransform(FourierTransform&& other) noexcept;
    FourierTransform& operator=(FourierTransform&& other) noexcept;

    std::size_t size() const noexcept { return n_; }

    void forward(std::span<Complex> data);
    void inverse(std::span<Complex> data);

private:
    void release() noexcept;

    std::size_t n_ = 0;
    fftw_complex* buffer_ = nullptr;
    fftw_plan forward_plan_ = nullptr;
    fftw_plan inverse_plan_ = nullptr;
};

Spectrum to_fourier(const Field& f);
Field from_fourier(const Spectrum& s);

/// Spectral derivative d^order/dx^order of a field.
Field spectral_derivative(const Field& f, int order = 1);

}  // namespace nlsv
