#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tensornorm/spectral.hpp"
#include "tensornorm/tensor.hpp"

namespace tensornorm {

enum class SolveStatus { Converged, MaxIter, NumericalBreakdown, ConditionViolated };

std::string_view to_string(SolveStatus status) noexcept;

struct SolverConfig {
  double epsilon = 1e-10;        ///< stop once lambda_+ - lambda_- < epsilon
  std::size_t max_iter = 10000;
  std::optional<std::size_t> index_override;
  std::optional<ReducedTupleVector> start;  ///< uniform when empty
  double underflow_floor = 1e-250;
  bool retain_iterates = false;
  /// Called on every iterate x^k before the step; returning false aborts
  /// the run with NumericalBreakdown.
  std::function<bool(const ReducedTupleVector&)> iterate_check;
};

/// One iteration. For HGPM the bracket is evaluated at x^k, which is kept
/// in `iterate` (all m slots, omitted slot empty) when retention is on. The
/// baseline PM has no bracket and stores NaN there.
struct IterationRecord {
  std::size_t k = 0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double lambda_estimate = 0.0;
  std::vector<Vector> iterate;
};

struct SolveResult {
  double lambda = 0.0;
  std::optional<std::pair<double, double>> bracket;
  SingularPair vector;
  std::vector<IterationRecord> trace;
  SolveStatus status = SolveStatus::MaxIter;
  std::size_t iterations = 0;
  std::optional<std::size_t> mode_index;  ///< eliminated mode (HGPM only)
  std::vector<Vector> final_iterate;       ///< last iterate, all slots
  double q_value = 0.0;                    ///< Q of the returned vector
  std::vector<double> residuals;           ///< residual_check of the returned vector
  std::string note;
};

/// G(x): each part k != i becomes s_{i,k}(x) / ||s_{i,k}(x)||_{p_k}.
/// Throws NumericalBreakdown when a component of some s_{i,k}(x) is not
/// finite or falls below `underflow_floor` times the largest component of
/// its part.
ReducedTupleVector g_step(const SparseTensor& f, const PVector& p, const ReducedTupleVector& x,
                          double underflow_floor = 1e-250);

/// Collatz-Wielandt bracket (lambda_-, lambda_+) at x > 0. Throws ZeroPart
/// when x has a non-positive component.
std::pair<double, double> cw_bounds(const SparseTensor& f, const PVector& p,
                                    const ReducedTupleVector& x);

/// sum_{l != i} (p_l - 1) ln( max_j(x_lj / y_lj) / min_j(x_lj / y_lj) ).
double hilbert_metric(const PVector& p, const ReducedTupleVector& x, const ReducedTupleVector& y);

/// Higher-order generalized power method. Invalid input (negative entries,
/// f = 0, f not weakly irreducible, shape errors) throws; an empty
/// admissible set or an inadmissible override returns ConditionViolated.
SolveResult solve_hgpm(const SparseTensor& f, const PVector& p, const SolverConfig& config = {});

/// Geometric mean of ||x^{k+1} - x*|| / ||x^k - x*|| over the last quarter
/// of the iterations whose error still exceeds 100 machine epsilons.
/// Requires retained iterates; throws TraceTooShort otherwise.
double estimate_rate(std::span<const IterationRecord> trace, std::span<const Vector> reference);

/// ||x^k - x*||_2 for every retained iterate.
std::vector<double> iterate_errors(std::span<const IterationRecord> trace,
                                   std::span<const Vector> reference);

namespace detail {
void check_solvable(const SparseTensor& f);
}

}  // namespace tensornorm
