#pragma once

#include <cstddef>
#include <optional>

#include "tensornorm/hgpm.hpp"
#include "tensornorm/tensor.hpp"

namespace tensornorm {

struct PmConfig {
  double epsilon = 1e-10;  ///< stop once ||v^{k+1} - v^k||_2 < epsilon
  std::size_t max_iter = 10000;
  std::optional<TupleVector> normalizer;  ///< n > 0, all ones when empty
  std::optional<TupleVector> start;       ///< v^0 > 0, all ones when empty
  bool retain_iterates = false;
};

/// Power method for equal exponents p_1 = ... = p_m = p:
///   w = (sigma_1(v), ..., sigma_m(v)),  v <- w / <n, w>.
/// The start is scaled so that <n, v^0> = 1. The result carries no bracket;
/// lambda is Q of the iterate with every part scaled to unit p-norm, and the
/// trace stores NaN bracket columns with Q(v^k) as the estimate.
SolveResult solve_pm(const SparseTensor& f, double p, const PmConfig& config = {});

}  // namespace tensornorm
