#include "nlsv/fourier.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

#include "nlsv/errors.hpp"

namespace nlsv {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidInput("FourierTransform: zero length");
    std::lock_guard lock(planner_mutex());
    buffer_ = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    forward_plan_ = fftw_plan_dft_1d(len, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_1d(len, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward_plan_ || !inverse_plan_) {
        release();
        throw Error("FourierTransform: FFTW planning failed");
    }
}

FourierTransform::~FourierTransform() { release(); }

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : n_(other.n_),
      buffer_(other.buffer_),
      forward_plan_(other.forward_plan_),
      inverse_plan_(other.inverse_plan_) {
    other.buffer_ = nullptr;
    other.forward_plan_ = nullptr;
    other.inverse_plan_ = nullptr;
}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
    if (this != &other) {
        release();
        n_ = other.n_;
        buffer_ = other.buffer_;
        forward_plan_ = other.forward_plan_;
        inverse_plan_ = other.inverse_plan_;
        other.buffer_ = nullptr;
        other.forward_plan_ = nullptr;
        other.inverse_plan_ = nullptr;
    }
    return *this;
}

void FourierTransform::release() noexcept {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(forward_plan_);
    if (inverse_plan_) fftw_destroy_plan(inverse_plan_);
    if (buffer_) fftw_free(buffer_);
    forward_plan_ = inverse_plan_ = nullptr;
    buffer_ = nullptr;
}

// std::complex<double> is layout-compatible with fftw_complex.
void FourierTransform::forward(std::span<Complex> data) {
    if (data.size() != n_) throw InvalidInput("FourierTransform: length mismatch");
    std::memcpy(buffer_, data.data(), n_ * sizeof(Complex));
    fftw_execute(forward_plan_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    auto* out = reinterpret_cast<const Complex*>(buffer_);
    for (std::size_t j = 0; j < n_; ++j) data[j] = out[j] * scale;
}

void FourierTransform::inverse(std::span<Complex> data) {
    if (data.size() != n_) throw InvalidInput("FourierTransform: length mismatch");
    std::memcpy(buffer_, data.data(), n_ * sizeof(Complex));
    fftw_execute(inverse_plan_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    auto* out = reinterpret_cast<const Complex*>(buffer_);
    for (std::size_t j = 0; j < n_; ++j) data[j] = out[j] * scale;
}

Spectrum to_fourier(const Field& f) {
    Spectrum s{f.grid(), std::vector<Complex>(f.values().begin(), f.values().end())};
    FourierTransform(f.size()).forward(s.coefficients);
    return s;
}

Field from_fourier(const Spectrum& s) {
    std::vector<Complex> values = s.coefficients;
    FourierTransform(values.size()).inverse(values);
    return Field(s.grid, std::move(values));
}

Field spectral_derivative(const Field& f, int order) {
    auto s = to_fourier(f);
    const auto& g = f.grid();
    const auto n = g.size();
    for (std::size_t j = 0; j < n; ++j) {
        // The Nyquist mode has no well-defined odd derivative.
        if (order % 2 == 1 && j == n / 2) {
            s.coefficients[j] = 0.0;
            continue;
        }
        s.coefficients[j] *= std::pow(Complex(0.0, g.k(j)), order);
    }
    return from_fourier(s);
}

}  // namespace nlsv
