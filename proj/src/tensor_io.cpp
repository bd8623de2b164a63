#include "tensornorm/tensor_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "tensornorm/error.hpp"

namespace tensornorm {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  for (std::string tok; ss >> tok;) tokens.push_back(tok);
  return tokens;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + msg);
}

std::size_t parse_positive_index(const std::string& tok, std::size_t line_no) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "expected a positive integer, got '" + tok + "'");
  }
  return value;
}

double parse_real(const std::string& tok, std::size_t line_no) {
  // from_chars rejects a leading '+', which strtod-style input allows.
  std::string_view view(tok);
  if (!view.empty() && view.front() == '+') view.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw Error(ErrorCode::NonFinite, "line " + std::to_string(line_no) + ": value out of range");
  }
  if (ec != std::errc{} || ptr != view.data() + view.size()) {
    parse_fail(line_no, "expected a real value, got '" + tok + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFinite, "line " + std::to_string(line_no) + ": non-finite value");
  }
  return value;
}

}  // namespace

SparseTensor read_tensor(std::istream& in) {
  std::vector<std::size_t> dims;
  std::vector<SparseTensor::Entry> entries;
  bool seen_magic = false;
  bool seen_dims = false;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto tokens = split_tokens(line);

    if (!seen_magic) {
      if (tokens.size() != 2 || tokens[0] != "tensor" || tokens[1] != "v1") {
        parse_fail(line_no, "expected header 'tensor v1'");
      }
      seen_magic = true;
      continue;
    }
    if (!seen_dims) {
      if (tokens.empty() || tokens[0] != "dims") parse_fail(line_no, "expected 'dims d1 ... dm'");
      if (tokens.size() < 3) parse_fail(line_no, "a tensor needs at least 2 modes");
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        std::size_t d = parse_positive_index(tokens[k], line_no);
        if (d == 0) parse_fail(line_no, "dimensions must be positive");
        dims.push_back(d);
      }
      seen_dims = true;
      continue;
    }
    if (tokens.size() != dims.size() + 1) {
      parse_fail(line_no, "expected " + std::to_string(dims.size()) + " indices and a value");
    }
    SparseTensor::Entry entry;
    entry.index.reserve(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
      std::size_t j = parse_positive_index(tokens[k], line_no);
      if (j == 0 || j > dims[k]) {
        throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(line_no) + ": index " +
                                                    tokens[k] + " out of range for mode " +
                                                    std::to_string(k + 1));
      }
      entry.index.push_back(j - 1);
    }
    entry.value = parse_real(tokens.back(), line_no);
    entries.push_back(std::move(entry));
  }
  if (!seen_magic) parse_fail(line_no, "missing header 'tensor v1'");
  if (!seen_dims) parse_fail(line_no, "missing 'dims' line");
  return SparseTensor(std::move(dims), std::move(entries));
}

SparseTensor read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open tensor file " + path.string());
  return read_tensor(in);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_tensor(const SparseTensor& f, std::ostream& out) {
  out << "tensor v1\n" << "dims";
  for (std::size_t d : f.dims()) out << ' ' << d;
  out << '\n';
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    for (std::size_t j : f.index(e)) out << j + 1 << ' ';
    out << format_double(f.value(e)) << '\n';
  }
}

}  // namespace tensornorm
