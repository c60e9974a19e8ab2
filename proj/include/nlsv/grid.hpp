#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlsv {

using Complex = std::complex<double>;

/// Uniform periodic grid on [x_min, x_max) with n samples.
///
/// Sample positions are x_j = x_min + j*dx, j = 0..n-1. Wavenumbers are
/// stored in FFT ordering: k_m = 2*pi*m/L for m = 0..n/2-1 followed by
/// m = -n/2..-1, so max |k| = pi/dx (the Nyquist mode).
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double length() const noexcept { return x_max_ - x_min_; }
    double dx() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_); }

    /// x_j, computed so that mirrored samples of a symmetric domain are exact negatives.
    double x(std::size_t j) const noexcept;
    /// Wavenumber at FFT index j.
    double k(std::size_t j) const noexcept;
    /// Signed integer mode number m at FFT index j.
    long mode(std::size_t j) const noexcept;
    double k_max() const noexcept;

    std::vector<double> positions() const;
    std::vector<double> wavenumbers() const;

    bool operator==(const Grid& other) const noexcept = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
};

Grid make_grid(double x_min, double x_max, std::size_t n);

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Complex samples on a Grid.
class Field {
public:
    explicit Field(Grid grid);
    Field(Grid grid, std::vector<Complex> values);

    static Field from_function(const Grid& grid, const std::function<Complex(double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<Complex> values() noexcept { return values_; }
    std::span<const Complex> values() const noexcept { return values_; }
    Complex& operator[](std::size_t j) noexcept { return values_[j]; }
    const Complex& operator[](std::size_t j) const noexcept { return values_[j]; }

    bool all_finite() const noexcept;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(Complex c) noexcept;

private:
    Grid grid_;
    std::vector<Complex> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex c, Field f);

/// sqrt(dx * sum |f_j|^2)
double l2_norm(const Field& f);

/// Discrete L^p norm (dx * sum |f_j|^p)^(1/p); p must be 1, 2, 4, 6 or +infinity.
double lp_norm(const Field& f, double p);

/// dx * sum f_j * conj(g_j); throws InvalidInput on grid mismatch.
Complex inner_product(const Field& f, const Field& g);

/// dx * sum |f_j|^2 over the samples within `fraction` of either domain edge.
double edge_mass(const Field& f, double fraction = 0.05);

}  // namespace nlsv
