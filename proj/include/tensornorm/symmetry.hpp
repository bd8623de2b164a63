#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tensornorm/hgpm.hpp"
#include "tensornorm/spectral.hpp"
#include "tensornorm/tensor.hpp"

namespace tensornorm {

/// Consecutive mode blocks of sizes q_1, ..., q_k (summing to the order).
/// Every mode of block j has dimension block_dims[j] and exponent
/// block_exponents[j].
struct SymmetryStructure {
  std::vector<std::size_t> block_sizes;
  std::vector<std::size_t> block_dims;
  std::vector<double> block_exponents;

  /// Throws InvalidArgument unless the three lists have equal positive
  /// length, every size is positive and every exponent lies in (1, inf).
  void validate() const;
  std::size_t order() const;
  std::size_t block_count() const noexcept { return block_sizes.size(); }
  /// First mode of block j.
  std::size_t first_mode(std::size_t j) const;
  /// Block that contains `mode`.
  std::size_t block_of(std::size_t mode) const;
  std::vector<std::size_t> lifted_dims() const;
  PVector lifted_p() const;
};

/// True iff f is invariant under every index permutation inside each block.
/// Throws ShapeMismatch when the dims of f differ from the lifted dims.
bool check_partial_symmetry(const SparseTensor& f, const SymmetryStructure& structure);

TupleVector lift_xi(const SymmetryStructure& structure, const std::vector<Vector>& y);
std::vector<Vector> project_zeta(const SymmetryStructure& structure, const TupleVector& z);

/// Remarks about the exponent condition for two-block (rectangular) problems.
std::vector<std::string> structure_notes(const SymmetryStructure& structure);

struct EigenResult {
  SolveResult solve;                ///< run on the lifted problem
  double lambda = 0.0;
  std::vector<Vector> blocks;       ///< reduced coordinates, one vector per block
  std::vector<double> residuals;    ///< eigen_residuals of (lambda, blocks)
  std::vector<std::string> notes;
};

/// ||grad_{first(j)} f(xi(x)) - lambda psi_{p_j}(x_j)||_2 for each block j.
std::vector<double> eigen_residuals(const SparseTensor& f, const SymmetryStructure& structure,
                                    double lambda, const std::vector<Vector>& blocks);

/// Maximal eigenpair of a partially symmetric nonnegative tensor, computed
/// by running solve_hgpm on the lifted singular value problem. Iterates are
/// required to stay block-constant; drift turns into NumericalBreakdown.
/// Throws NotPartiallySymmetric when the symmetry check fails.
EigenResult solve_eigenproblem(const SparseTensor& f, const SymmetryStructure& structure,
                               const SolverConfig& config = {});

}  // namespace tensornorm
