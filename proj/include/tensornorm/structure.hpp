#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tensornorm/spectral.hpp"
#include "tensornorm/tensor.hpp"

namespace tensornorm {

/// The undirected m-partite graph on the vertices {k} x [d_k]: (k, a) and
/// (l, b), k != l, are adjacent iff some positive entry has index a in mode
/// k and b in mode l.
class ModeGraph {
 public:
  using Vertex = std::pair<std::size_t, std::size_t>;  // (mode, index)

  explicit ModeGraph(std::vector<std::size_t> dims);

  std::size_t vertex_count() const noexcept { return offsets_.back(); }
  std::size_t id(std::size_t mode, std::size_t index) const { return offsets_[mode] + index; }
  Vertex vertex(std::size_t id) const;

  void add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbors(std::size_t id) const { return adjacency_[id]; }
  std::size_t edge_count() const noexcept;

  bool is_connected() const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::size_t>> adjacency_;  // sorted, no duplicates
};

struct StructureReport {
  bool weakly_irreducible = false;
  bool irreducible = false;
  std::vector<std::size_t> admissible_indices;
  std::optional<std::size_t> chosen_index;
  std::vector<std::string> notes;
};

/// Throws NegativeEntry unless f >= 0.
ModeGraph build_graph(const SparseTensor& f);

bool is_weakly_irreducible(const SparseTensor& f);

/// Exact support-propagation test: from every support holding one vertex
/// per mode, repeatedly add (k, j) whenever a positive entry has index j in
/// mode k and all its other indices in the support. f is irreducible iff
/// every such start grows to the full vertex set.
bool is_irreducible(const SparseTensor& f);

/// T(z) = alpha_0 z + (alpha_1 sigma_1(z), ..., alpha_m sigma_m(z)).
TupleVector t_alpha_step(const SparseTensor& f, const PVector& p, std::span<const double> alpha,
                         const TupleVector& z);

/// Whether (m-1) p_i <= p_k (p_i - 1) for every k != i, the multiplied-out
/// form of (m-1) p_i' <= min_{k != i} p_k.
bool index_admissible(const PVector& p, std::size_t i);

/// Every admissible mode. For m = 2 modes with p_i <= p_other come first.
std::vector<std::size_t> admissible_indices(const PVector& p);

/// Among admissible modes (for m = 2 only those with p_i <= p_other), the
/// one with the largest slack (p_i-1)(min_{k!=i} p_k - (m-1)) - (m-1);
/// ties go to the smallest mode.
std::optional<std::size_t> chosen_index(const PVector& p);

/// Full report; irreducibility flags are false for tensors with negative
/// entries.
StructureReport analyze(const SparseTensor& f, const PVector& p);

}  // namespace tensornorm
