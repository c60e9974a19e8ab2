#include "nlsv/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "nlsv/errors.hpp"

namespace nlsv {

bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

std::size_t next_power_of_two(std::size_t n) noexcept { return std::bit_ceil(n); }

Grid::Grid(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
        throw InvalidInput("grid: need finite x_min < x_max");
    if (!is_power_of_two(n) || n < 16)
        throw InvalidInput("grid: n = " + std::to_string(n) + " is not a power of two >= 16");
}

double Grid::x(std::size_t j) const noexcept {
    // Convex combination keeps x_j == -x_{n-j} bitwise when x_min == -x_max.
    const double nd = static_cast<double>(n_);
    return (x_min_ * (nd - static_cast<double>(j)) + x_max_ * static_cast<double>(j)) / nd;
}

long Grid::mode(std::size_t j) const noexcept {
    const auto half = static_cast<long>(n_ / 2);
    const auto m = static_cast<long>(j);
    return m < half ? m : m - static_cast<long>(n_);
}

double Grid::k(std::size_t j) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(mode(j)) / length();
}

double Grid::k_max() const noexcept { return std::numbers::pi / dx(); }

std::vector<double> Grid::positions() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

std::vector<double> Grid::wavenumbers() const {
    std::vector<double> ks(n_);
    for (std::size_t j = 0; j < n_; ++j) ks[j] = k(j);
    return ks;
}

Grid make_grid(double x_min, double x_max, std::size_t n) { return Grid(x_min, x_max, n); }

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), Complex{}) {}

Field::Field(Grid grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw InvalidInput("field: sample count does not match grid size");
}

Field Field::from_function(const Grid& grid, const std::function<Complex(double)>& f) {
    Field out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) out.values_[j] = f(grid.x(j));
    return out;
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

namespace {
void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw InvalidInput("fields live on different grids");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

Field& Field::operator*=(Complex c) noexcept {
    for (auto& z : values_) z *= c;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex c, Field f) { return f *= c; }

double l2_norm(const Field& f) {
    double sum = 0.0;
    for (const auto& z : f.values()) sum += std::norm(z);
    return std::sqrt(f.grid().dx() * sum);
}

double lp_norm(const Field& f, double p) {
    if (std::isinf(p) && p > 0) {
        double m = 0.0;
        for (const auto& z : f.values()) m = std::max(m, std::abs(z));
        return m;
    }
    if (p == 2.0) return l2_norm(f);
    if (p != 1.0 && p != 4.0 && p != 6.0)
        throw InvalidInput("lp_norm: unsupported exponent " + std::to_string(p));
    double sum = 0.0;
    for (const auto& z : f.values()) sum += std::pow(std::abs(z), p);
    return std::pow(f.grid().dx() * sum, 1.0 / p);
}

Complex inner_product(const Field& f, const Field& g) {
    require_same_grid(f.grid(), g.grid());
    Complex sum{};
    const auto fv = f.values();
    const auto gv = g.values();
    for (std::size_t j = 0; j < fv.size(); ++j) sum += fv[j] * std::conj(gv[j]);
    return f.grid().dx() * sum;
}

double edge_mass(const Field& f, double fraction) {
    const auto n = f.size();
    const auto band = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    double sum = 0.0;
    for (std::size_t j = 0; j < std::min(band, n); ++j) {
        sum += std::norm(f[j]);
        sum += std::norm(f[n - 1 - j]);
    }
    return f.grid().dx() * sum;
}

}  // namespace nlsv
