#include "nlsv/field_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>

#include "nlsv/errors.hpp"

namespace nlsv {

static_assert(std::endian::native == std::endian::little, "binary snapshots assume little-endian hosts");

namespace {
template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw InvalidInput("field snapshot: truncated input");
    return value;
}
}  // namespace

void write_field_binary(const Field& f, std::ostream& out) {
    put<std::uint64_t>(out, f.size());
    put<double>(out, f.grid().x_min());
    put<double>(out, f.grid().x_max());
    for (const auto& z : f.values()) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
}

void write_field_binary(const Field& f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_field_binary(f, out);
}

Field read_field_binary(std::istream& in) {
    const auto n = get<std::uint64_t>(in);
    const auto x_min = get<double>(in);
    const auto x_max = get<double>(in);
    Grid grid(x_min, x_max, static_cast<std::size_t>(n));
    std::vector<Complex> values(grid.size());
    for (auto& z : values) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        z = {re, im};
    }
    return Field(grid, std::move(values));
}

Field read_field_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string());
    return read_field_binary(in);
}

void write_field_csv(const Field& f, std::ostream& out) {
    out << "x,re,im\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t j = 0; j < f.size(); ++j)
        out << f.grid().x(j) << ',' << f[j].real() << ',' << f[j].imag() << '\n';
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_field_csv(f, out);
}

}  // namespace nlsv
