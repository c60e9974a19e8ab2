#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "nlsv/errors.hpp"
#include "nlsv/field_io.hpp"
#include "nlsv/fourier.hpp"
#include "nlsv/grid.hpp"
#include "oracles.hpp"

using namespace nlsv;
using doctest::Approx;

namespace {
Field sech_field(const Grid& g, double x0 = 0.0) {
    return Field::from_function(g, [x0](double x) { return Complex(oracle::sech(x - x0)); });
}

Field scrambled(const Grid& g) {
    Field f(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double t = static_cast<double>(j);
        f[j] = Complex(std::sin(1.3 * t * t), std::cos(0.7 * t + 0.1 * t * t));
    }
    return f;
}
}  // namespace

TEST_CASE("grid spacing and wavenumbers") {
    const auto g = make_grid(-1, 1, 16);
    CHECK(g.dx() == 0.125);
    CHECK(g.k_max() == Approx(8 * std::numbers::pi).epsilon(1e-15));
    CHECK(g.x(0) == -1.0);
    CHECK(g.x(15) == Approx(0.875));

    const auto h = make_grid(0, 2 * std::numbers::pi, 64);
    const auto k = h.wavenumbers();
    REQUIRE(k.size() == 64);
    double kmin = 0, kmax = 0;
    for (double kk : k) {
        CHECK(kk == Approx(std::round(kk)).epsilon(1e-12));
        kmin = std::min(kmin, kk);
        kmax = std::max(kmax, kk);
    }
    CHECK(kmin == Approx(-32));
    CHECK(kmax == Approx(31));
}

TEST_CASE("grid rejects bad arguments") {
    CHECK_THROWS_AS(make_grid(-1, 1, 15), InvalidInput);
    CHECK_THROWS_AS(make_grid(-1, 1, 8), InvalidInput);
    CHECK_THROWS_AS(make_grid(1, 1, 16), InvalidInput);
    CHECK_THROWS_AS(make_grid(2, 1, 16), InvalidInput);
    CHECK_THROWS_AS(make_grid(0, INFINITY, 16), InvalidInput);
}

TEST_CASE("mirrored grid points are exact negatives") {
    const Grid g(-37.5, 37.5, 2048);
    for (std::size_t j = 1; j < g.size(); ++j) CHECK(g.x(j) == -g.x(g.size() - j));
}

TEST_CASE("l2 norm") {
    const Grid g(-40, 40, 1024);
    CHECK(l2_norm(Field(g)) == 0.0);
    const double sech2 = oracle::integrate([](double x) { return std::pow(oracle::sech(x), 2); }, -40, 40);
    CHECK(sech2 == Approx(2.0).epsilon(1e-12));
    CHECK(l2_norm(sech_field(g, 3.0)) == Approx(std::sqrt(sech2)).epsilon(1e-8));
    const Field one = Field::from_function(g, [](double) { return Complex(1.0); });
    CHECK(l2_norm(one) == Approx(std::sqrt(80.0)).epsilon(1e-14));
}

TEST_CASE("lp norms") {
    const Grid g(-40, 40, 1024);
    const Field f = sech_field(g);
    CHECK(lp_norm(f, INFINITY) == Approx(1.0).epsilon(1e-15));
    const double sech4 = oracle::integrate([](double x) { return std::pow(oracle::sech(x), 4); }, -40, 40);
    CHECK(sech4 == Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(lp_norm(f, 4) == Approx(std::pow(sech4, 0.25)).epsilon(1e-8));
    CHECK(lp_norm(f, 2) == Approx(l2_norm(f)).epsilon(1e-14));
    for (double p : {1.0, 2.0, 4.0, 6.0, double(INFINITY)}) CHECK(lp_norm(Field(g), p) == 0.0);
    CHECK_THROWS_AS(lp_norm(f, 3), InvalidInput);

    const Field s = scrambled(g);
    const Complex c(-2.5, 1.5);
    for (double p : {1.0, 2.0, 4.0, 6.0, double(INFINITY)})
        CHECK(lp_norm(c * s, p) == Approx(std::abs(c) * lp_norm(s, p)).epsilon(1e-13));
}

TEST_CASE("inner product") {
    const Grid g(-40, 40, 1024);
    const Field f = sech_field(g);
    CHECK(std::abs(inner_product(f, f) - 2.0) < 1e-8);
    const Field odd = Field::from_function(g, [](double x) { return Complex(std::tanh(x) * oracle::sech(x)); });
    CHECK(std::abs(inner_product(f, odd)) < 1e-10);
    CHECK(std::abs(inner_product(Field(g), scrambled(g))) == 0.0);

    const Field a = scrambled(g);
    const Field b = Complex(0.3, -1.1) * sech_field(g, 1.0);
    CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-13);
    CHECK(inner_product(a, a).real() == Approx(l2_norm(a) * l2_norm(a)).epsilon(1e-13));
    CHECK_THROWS_AS(inner_product(a, Field(Grid(-40, 40, 512))), InvalidInput);
}

TEST_CASE("fourier basis, round trip and Parseval") {
    const Grid g(0, 2 * std::numbers::pi, 64);
    for (long m : {0L, 3L, -7L, 31L, -32L}) {
        const Field w = Field::from_function(g, [m](double x) { return std::polar(1.0, static_cast<double>(m) * x); });
        const auto s = to_fourier(w);
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (g.mode(j) == m)
                CHECK(std::abs(s.coefficients[j]) == Approx(8.0).epsilon(1e-13));  // sqrt(64)
            else
                CHECK(std::abs(s.coefficients[j]) < 1e-12);
        }
    }

    const Grid h(-20, 20, 512);
    const Field f = scrambled(h);
    Field back = from_fourier(to_fourier(f));
    back -= f;
    CHECK(l2_norm(back) <= 1e-12 * l2_norm(f));

    for (const Field& u : {f, sech_field(h)}) {
        double sum = 0;
        for (const auto& c : to_fourier(u).coefficients) sum += std::norm(c);
        const double n2 = l2_norm(u) * l2_norm(u);
        CHECK(std::abs(sum * h.dx() - n2) <= 1e-10 * n2);
    }
}

TEST_CASE("spectral derivative of sech") {
    const Grid g(-30, 30, 512);
    const Field d = spectral_derivative(sech_field(g), 1);
    double err = 0;
    for (std::size_t j = 0; j < g.size(); ++j)
        err = std::max(err, std::abs(d[j] + std::tanh(g.x(j)) * oracle::sech(g.x(j))));
    CHECK(err < 1e-10);
}

TEST_CASE("edge mass") {
    const Grid g(-50, 50, 1024);
    CHECK(edge_mass(sech_field(g)) < 1e-30);
    const Field near_edge = sech_field(g, 48.0);
    CHECK(edge_mass(near_edge) > 0.5);
}

TEST_CASE("binary and csv field containers") {
    const Grid g(-5, 7, 32);
    const Field f = scrambled(g);
    std::stringstream ss;
    write_field_binary(f, ss);
    CHECK(ss.str().size() == 8 + 16 + 32 * 16);
    const Field back = read_field_binary(ss);
    CHECK(back.grid() == g);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(back[j] == f[j]);

    std::stringstream cut(ss.str().substr(0, 100));
    CHECK_THROWS(read_field_binary(cut));

    std::ostringstream csv;
    write_field_csv(f, csv);
    const auto text = csv.str();
    CHECK(text.rfind("x,re,im\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 33);
}
