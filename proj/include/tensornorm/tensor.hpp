#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tensornorm {

using Vector = std::vector<double>;

/// Immutable m-order tensor in coordinate form.
///
/// Entries are kept sorted lexicographically by index tuple and every
/// contraction sums in that order, so results are reproducible bit for bit.
/// Indices are 0-based here; the text format and the CLI are 1-based.
/// Zero values are never stored.
class SparseTensor {
 public:
  struct Entry {
    std::vector<std::size_t> index;
    double value = 0.0;
  };

  /// Throws Error on order < 2, a zero dimension, an index out of range,
  /// a repeated index tuple or a non-finite value.
  SparseTensor(std::vector<std::size_t> dims, std::vector<Entry> entries);

  std::size_t order() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  std::size_t total_dim() const noexcept;

  std::size_t nnz() const noexcept { return values_.size(); }
  bool is_zero() const noexcept { return values_.empty(); }
  bool is_nonnegative() const noexcept { return nonnegative_; }

  std::span<const std::size_t> index(std::size_t entry) const {
    return {indices_.data() + entry * order(), order()};
  }
  double value(std::size_t entry) const { return values_[entry]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Value stored at `index`, or 0 for an unlisted cell.
  double at(std::span<const std::size_t> index) const;

  /// Entrywise absolute value |f|.
  SparseTensor abs() const;

  std::vector<Entry> entries() const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> indices_;  // nnz * order, row-major per entry
  std::vector<double> values_;
  bool nonnegative_ = true;
};

/// A tuple (x_1, ..., x_m) of per-mode vectors.
struct TupleVector {
  std::vector<Vector> parts;

  std::size_t order() const noexcept { return parts.size(); }
  const Vector& operator[](std::size_t mode) const { return parts.at(mode); }
  Vector& operator[](std::size_t mode) { return parts.at(mode); }

  friend bool operator==(const TupleVector&, const TupleVector&) = default;
};

/// A tuple with the part for one mode left out.
///
/// Storage keeps one slot per mode so that kernels can substitute the
/// omitted slot without reshuffling; the omitted slot is always empty.
class ReducedTupleVector {
 public:
  /// `parts` holds the m-1 remaining parts in mode order.
  ReducedTupleVector(std::size_t omitted_mode, std::vector<Vector> parts);

  /// Drops mode `omitted_mode` from a full tuple.
  static ReducedTupleVector drop_mode(const TupleVector& x, std::size_t omitted_mode);

  std::size_t omitted_mode() const noexcept { return omitted_; }
  std::size_t order() const noexcept { return slots_.size(); }

  const Vector& part(std::size_t mode) const;
  Vector& part(std::size_t mode);

  /// All m slots; the omitted one is empty.
  std::span<const Vector> slots() const noexcept { return slots_; }

  /// The m-1 stored parts in mode order.
  std::vector<Vector> parts() const;

  /// Full tuple with `y` placed in the omitted slot.
  TupleVector with_mode(Vector y) const;

  friend bool operator==(const ReducedTupleVector&, const ReducedTupleVector&) = default;

 private:
  std::size_t omitted_;
  std::vector<Vector> slots_;
};

/// f(x_1, ..., x_m), summed over stored entries.
double evaluate(const SparseTensor& f, const TupleVector& x);

/// Mode-i gradient: component j equals f with slot i replaced by e_j.
/// The mode-i part of `x` is ignored.
Vector grad_mode(const SparseTensor& f, std::size_t mode, const TupleVector& x);
Vector grad_mode(const SparseTensor& f, std::size_t mode, const ReducedTupleVector& x);

/// Mode-k gradient of f evaluated with slot i holding `y` and every other
/// slot taken from `x` (which omits mode i).
Vector grad_mode_substituted(const SparseTensor& f, std::size_t k, std::size_t i,
                             const ReducedTupleVector& x, std::span<const double> y);

namespace detail {
/// Gradient kernel over a full slot list; slot `mode` is not read.
Vector contract_gradient(const SparseTensor& f, std::size_t mode,
                         std::span<const Vector> slots);
void check_slots(const SparseTensor& f, std::span<const Vector> slots,
                 std::optional<std::size_t> skip);
}  // namespace detail

}  // namespace tensornorm
