#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tensornorm/tensor.hpp"

namespace tensornorm {

// Text format, UTF-8, '#' starts a comment line, blank lines ignored:
//
//   tensor v1
//   dims d1 d2 ... dm
//   j1 j2 ... jm value      (1-based indices, one entry per line)
//
// Unlisted cells are zero; zero-valued entries are dropped on read.

SparseTensor read_tensor(std::istream& in);
SparseTensor read_tensor_file(const std::filesystem::path& path);

void write_tensor(const SparseTensor& f, std::ostream& out);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace tensornorm
