#pragma once

#include <filesystem>
#include <iosfwd>

#include "nlsv/grid.hpp"

namespace nlsv {

// Binary snapshot layout (native little-endian):
//   uint64 n | float64 x_min | float64 x_max | n x (float64 re, float64 im)
void write_field_binary(const Field& f, std::ostream& out);
void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(std::istream& in);
Field read_field_binary(const std::filesystem::path& path);

/// CSV with header "x,re,im", one row per sample.
void write_field_csv(const Field& f, std::ostream& out);
void write_field_csv(const Field& f, const std::filesystem::path& path);

}  // namespace nlsv
