#include "tensornorm/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tensornorm/error.hpp"

namespace tensornorm {

void SymmetryStructure::validate() const {
  const std::size_t k = block_sizes.size();
  if (k == 0 || block_dims.size() != k || block_exponents.size() != k) {
    throw Error(ErrorCode::InvalidArgument, "block sizes, dims and exponents need equal length");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (block_sizes[j] == 0) throw Error(ErrorCode::InvalidArgument, "block sizes must be positive");
    if (block_dims[j] == 0) throw Error(ErrorCode::InvalidArgument, "block dims must be positive");
    if (!(block_exponents[j] > 1.0) || !std::isfinite(block_exponents[j])) {
      throw Error(ErrorCode::InvalidArgument, "block exponents must lie in (1, inf)");
    }
  }
}

std::size_t SymmetryStructure::order() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
}

std::size_t SymmetryStructure::first_mode(std::size_t j) const {
  return std::accumulate(block_sizes.begin(), block_sizes.begin() + static_cast<std::ptrdiff_t>(j),
                         std::size_t{0});
}

std::size_t SymmetryStructure::block_of(std::size_t mode) const {
  std::size_t end = 0;
  for (std::size_t j = 0; j < block_sizes.size(); ++j) {
    end += block_sizes[j];
    if (mode < end) return j;
  }
  throw Error(ErrorCode::InvalidArgument, "mode outside the block structure");
}

std::vector<std::size_t> SymmetryStructure::lifted_dims() const {
  validate();
  std::vector<std::size_t> dims;
  for (std::size_t j = 0; j < block_sizes.size(); ++j) dims.insert(dims.end(), block_sizes[j], block_dims[j]);
  return dims;
}

PVector SymmetryStructure::lifted_p() const {
  validate();
  std::vector<double> p;
  for (std::size_t j = 0; j < block_sizes.size(); ++j) {
    p.insert(p.end(), block_sizes[j], block_exponents[j]);
  }
  return PVector(std::move(p));
}

bool check_partial_symmetry(const SparseTensor& f, const SymmetryStructure& structure) {
  if (f.dims() != structure.lifted_dims()) {
    throw Error(ErrorCode::ShapeMismatch, "tensor dims do not match the block structure");
  }
  // Adjacent transpositions generate each block's symmetric group, and a
  // stored entry whose image is missing shows up as a value mismatch.
  std::vector<std::size_t> swapped(f.order());
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    auto idx = f.index(e);
    for (std::size_t j = 0; j < structure.block_count(); ++j) {
      const std::size_t first = structure.first_mode(j);
      for (std::size_t a = first; a + 1 < first + structure.block_sizes[j]; ++a) {
        if (idx[a] == idx[a + 1]) continue;
        std::copy(idx.begin(), idx.end(), swapped.begin());
        std::swap(swapped[a], swapped[a + 1]);
        if (f.at(swapped) != f.value(e)) return false;
      }
    }
  }
  return true;
}

TupleVector lift_xi(const SymmetryStructure& structure, const std::vector<Vector>& y) {
  structure.validate();
  if (y.size() != structure.block_count()) {
    throw Error(ErrorCode::ShapeMismatch, "one vector per block is required");
  }
  TupleVector out;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j].size() != structure.block_dims[j]) {
      throw Error(ErrorCode::ShapeMismatch, "block " + std::to_string(j + 1) + " has wrong length");
    }
    for (std::size_t r = 0; r < structure.block_sizes[j]; ++r) out.parts.push_back(y[j]);
  }
  return out;
}

std::vector<Vector> project_zeta(const SymmetryStructure& structure, const TupleVector& z) {
  if (z.order() != structure.order()) {
    throw Error(ErrorCode::ShapeMismatch, "tuple order does not match the block structure");
  }
  std::vector<Vector> out;
  for (std::size_t j = 0; j < structure.block_count(); ++j) {
    const Vector& part = z[structure.first_mode(j)];
    if (part.size() != structure.block_dims[j]) {
      throw Error(ErrorCode::ShapeMismatch, "block " + std::to_string(j + 1) + " has wrong length");
    }
    out.push_back(part);
  }
  return out;
}

std::vector<std::string> structure_notes(const SymmetryStructure& structure) {
  structure.validate();
  std::vector<std::string> notes;
  const std::size_t m = structure.order();
  if (structure.block_count() != 2 || m < 3) return notes;
  const auto& q = structure.block_sizes;
  const std::string mm1 = std::to_string(m - 1);
  if (q[0] == 1) {
    notes.push_back("rectangular case q1 = 1: the condition reduces to " + mm1 +
                    " <= (p1 - 1)(p2 - " + mm1 + "), weaker than p1, p2 >= " + std::to_string(m));
  } else if (q[0] == m - 1) {
    notes.push_back("rectangular case q1 = m - 1: the condition reduces to " + mm1 +
                    " <= (p2 - 1)(p1 - " + mm1 + "), weaker than p1, p2 >= " + std::to_string(m));
  }
  return notes;
}

std::vector<double> eigen_residuals(const SparseTensor& f, const SymmetryStructure& structure,
                                    double lambda, const std::vector<Vector>& blocks) {
  const TupleVector x = lift_xi(structure, blocks);
  std::vector<double> out;
  for (std::size_t j = 0; j < structure.block_count(); ++j) {
    const Vector g = grad_mode(f, structure.first_mode(j), x);
    const Vector rhs = psi(structure.block_exponents[j], blocks[j]);
    double sq = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      const double d = g[a] - lambda * rhs[a];
      sq += d * d;
    }
    out.push_back(std::sqrt(sq));
  }
  return out;
}

namespace {

bool block_constant(const SymmetryStructure& structure, const ReducedTupleVector& x) {
  constexpr double kTolerance = 1e-12;
  const auto slots = x.slots();
  for (std::size_t j = 0; j < structure.block_count(); ++j) {
    const std::size_t first = structure.first_mode(j);
    const std::size_t end = first + structure.block_sizes[j];
    const Vector* ref = nullptr;
    for (std::size_t l = first; l < end; ++l) {
      if (l == x.omitted_mode()) continue;
      if (!ref) {
        ref = &slots[l];
        continue;
      }
      double scale = 0.0;
      for (double v : *ref) scale = std::max(scale, std::fabs(v));
      for (std::size_t a = 0; a < ref->size(); ++a) {
        if (std::fabs(slots[l][a] - (*ref)[a]) > kTolerance * scale) return false;
      }
    }
  }
  return true;
}

}  // namespace

EigenResult solve_eigenproblem(const SparseTensor& f, const SymmetryStructure& structure,
                               const SolverConfig& config) {
  structure.validate();
  if (!check_partial_symmetry(f, structure)) {
    throw Error(ErrorCode::NotPartiallySymmetric,
                "tensor is not invariant under permutations inside the given blocks");
  }
  const PVector p = structure.lifted_p();

  SolverConfig lifted = config;
  lifted.iterate_check = [&structure, user = config.iterate_check](const ReducedTupleVector& x) {
    if (user && !user(x)) return false;
    return block_constant(structure, x);
  };

  EigenResult result;
  result.notes = structure_notes(structure);
  result.solve = solve_hgpm(f, p, lifted);
  if (result.solve.status == SolveStatus::NumericalBreakdown &&
      result.solve.note.rfind("iterate check", 0) == 0) {
    result.solve.note = "lifted iterates lost block symmetry: " + result.solve.note;
  }
  result.lambda = result.solve.lambda;
  if (result.solve.vector.vector.order() == f.order()) {
    result.blocks = project_zeta(structure, result.solve.vector.vector);
    result.residuals = eigen_residuals(f, structure, result.lambda, result.blocks);
  }
  return result;
}

}  // namespace tensornorm
