#include "tensornorm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tensornorm/error.hpp"

namespace tensornorm {

namespace {

std::string format_index(std::span<const std::size_t> index) {
  std::string out = "(";
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(index[k] + 1);
  }
  return out + ")";
}

}  // namespace

SparseTensor::SparseTensor(std::vector<std::size_t> dims, std::vector<Entry> entries)
    : dims_(std::move(dims)) {
  if (dims_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "tensor order must be at least 2");
  }
  for (std::size_t d : dims_) {
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "tensor dimensions must be positive");
  }
  const std::size_t m = dims_.size();
  for (const Entry& e : entries) {
    if (e.index.size() != m) {
      throw Error(ErrorCode::ShapeMismatch, "entry index has wrong length " + format_index(e.index));
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (e.index[k] >= dims_[k]) {
        throw Error(ErrorCode::IndexOutOfRange, "entry index out of range " + format_index(e.index));
      }
    }
    if (!std::isfinite(e.value)) {
      throw Error(ErrorCode::NonFinite, "non-finite entry value at " + format_index(e.index));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t e = 1; e < entries.size(); ++e) {
    if (entries[e].index == entries[e - 1].index) {
      throw Error(ErrorCode::DuplicateIndex, "duplicate entry " + format_index(entries[e].index));
    }
  }
  for (const Entry& e : entries) {
    if (e.value == 0.0) continue;
    indices_.insert(indices_.end(), e.index.begin(), e.index.end());
    values_.push_back(e.value);
    if (e.value < 0.0) nonnegative_ = false;
  }
}

std::size_t SparseTensor::total_dim() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

double SparseTensor::at(std::span<const std::size_t> index) const {
  if (index.size() != order()) throw Error(ErrorCode::ShapeMismatch, "index has wrong length");
  std::size_t lo = 0;
  std::size_t hi = nnz();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto cell = this->index(mid);
    if (std::lexicographical_compare(cell.begin(), cell.end(), index.begin(), index.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < nnz() && std::ranges::equal(this->index(lo), index)) return values_[lo];
  return 0.0;
}

SparseTensor SparseTensor::abs() const {
  auto list = entries();
  for (Entry& e : list) e.value = std::fabs(e.value);
  return SparseTensor(dims_, std::move(list));
}

std::vector<SparseTensor::Entry> SparseTensor::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t e = 0; e < nnz(); ++e) {
    auto idx = index(e);
    out.push_back({{idx.begin(), idx.end()}, values_[e]});
  }
  return out;
}

ReducedTupleVector::ReducedTupleVector(std::size_t omitted_mode, std::vector<Vector> parts)
    : omitted_(omitted_mode) {
  if (omitted_mode > parts.size()) {
    throw Error(ErrorCode::ShapeMismatch, "omitted mode out of range for reduced tuple");
  }
  slots_.reserve(parts.size() + 1);
  for (std::size_t k = 0, src = 0; k < parts.size() + 1; ++k) {
    if (k == omitted_mode) {
      slots_.emplace_back();
    } else {
      slots_.push_back(std::move(parts[src++]));
    }
  }
}

ReducedTupleVector ReducedTupleVector::drop_mode(const TupleVector& x, std::size_t omitted_mode) {
  if (omitted_mode >= x.order()) {
    throw Error(ErrorCode::ShapeMismatch, "omitted mode out of range");
  }
  std::vector<Vector> parts;
  for (std::size_t k = 0; k < x.order(); ++k) {
    if (k != omitted_mode) parts.push_back(x.parts[k]);
  }
  return ReducedTupleVector(omitted_mode, std::move(parts));
}

const Vector& ReducedTupleVector::part(std::size_t mode) const {
  if (mode == omitted_ || mode >= slots_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "no stored part for mode " + std::to_string(mode));
  }
  return slots_[mode];
}

Vector& ReducedTupleVector::part(std::size_t mode) {
  if (mode == omitted_ || mode >= slots_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "no stored part for mode " + std::to_string(mode));
  }
  return slots_[mode];
}

std::vector<Vector> ReducedTupleVector::parts() const {
  std::vector<Vector> out;
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (k != omitted_) out.push_back(slots_[k]);
  }
  return out;
}

TupleVector ReducedTupleVector::with_mode(Vector y) const {
  TupleVector x{slots_};
  x.parts[omitted_] = std::move(y);
  return x;
}

namespace detail {

void check_slots(const SparseTensor& f, std::span<const Vector> slots,
                 std::optional<std::size_t> skip) {
  if (slots.size() != f.order()) {
    throw Error(ErrorCode::ShapeMismatch, "tuple has " + std::to_string(slots.size()) +
                                              " parts, tensor has order " +
                                              std::to_string(f.order()));
  }
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (skip && *skip == k) continue;
    if (slots[k].size() != f.dim(k)) {
      throw Error(ErrorCode::ShapeMismatch, "part " + std::to_string(k + 1) + " has length " +
                                                std::to_string(slots[k].size()) + ", expected " +
                                                std::to_string(f.dim(k)));
    }
  }
}

Vector contract_gradient(const SparseTensor& f, std::size_t mode, std::span<const Vector> slots) {
  if (mode >= f.order()) throw Error(ErrorCode::ShapeMismatch, "mode out of range");
  check_slots(f, slots, mode);
  const std::size_t m = f.order();
  Vector out(f.dim(mode), 0.0);
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    auto idx = f.index(e);
    double term = f.value(e);
    for (std::size_t k = 0; k < m; ++k) {
      if (k != mode) term *= slots[k][idx[k]];
    }
    out[idx[mode]] += term;
  }
  return out;
}

}  // namespace detail

double evaluate(const SparseTensor& f, const TupleVector& x) {
  detail::check_slots(f, x.parts, std::nullopt);
  double sum = 0.0;
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    auto idx = f.index(e);
    double term = f.value(e);
    for (std::size_t k = 0; k < f.order(); ++k) term *= x.parts[k][idx[k]];
    sum += term;
  }
  return sum;
}

Vector grad_mode(const SparseTensor& f, std::size_t mode, const TupleVector& x) {
  return detail::contract_gradient(f, mode, x.parts);
}

Vector grad_mode(const SparseTensor& f, std::size_t mode, const ReducedTupleVector& x) {
  if (x.omitted_mode() != mode) {
    throw Error(ErrorCode::ShapeMismatch, "reduced tuple must omit the gradient mode");
  }
  return detail::contract_gradient(f, mode, x.slots());
}

Vector grad_mode_substituted(const SparseTensor& f, std::size_t k, std::size_t i,
                             const ReducedTupleVector& x, std::span<const double> y) {
  if (k == i) throw Error(ErrorCode::InvalidArgument, "substituted mode must differ from k");
  if (x.omitted_mode() != i) {
    throw Error(ErrorCode::ShapeMismatch, "reduced tuple must omit the substituted mode");
  }
  std::vector<Vector> slots(x.slots().begin(), x.slots().end());
  slots.at(i).assign(y.begin(), y.end());
  if (slots[i].size() != f.dim(i)) {
    throw Error(ErrorCode::ShapeMismatch, "substituted vector has wrong length");
  }
  return detail::contract_gradient(f, k, slots);
}

}  // namespace tensornorm
