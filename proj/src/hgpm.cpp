#include "tensornorm/hgpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tensornorm/error.hpp"
#include "tensornorm/structure.hpp"

namespace tensornorm {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::NumericalBreakdown: return "numerical_breakdown";
    case SolveStatus::ConditionViolated: return "condition_violated";
  }
  return "unknown";
}

namespace detail {

void check_solvable(const SparseTensor& f) {
  if (!f.is_nonnegative()) {
    throw Error(ErrorCode::NegativeEntry, "solvers require a nonnegative tensor");
  }
  if (f.is_zero()) throw Error(ErrorCode::ZeroTensor, "the zero tensor has no maximal singular value");
  if (!is_weakly_irreducible(f)) {
    throw Error(ErrorCode::NotWeaklyIrreducible, "tensor is not weakly irreducible");
  }
}

}  // namespace detail

namespace {

void require_positive(const ReducedTupleVector& x) {
  for (const Vector& part : x.slots()) {
    for (double v : part) {
      if (!(v > 0.0)) throw Error(ErrorCode::ZeroPart, "iterate must be strictly positive");
    }
  }
}

// s_{i,k}(x) for every k != i; the inner psi_{p_i'}(grad_i f(x)) is shared.
std::vector<Vector> s_parts(const SparseTensor& f, const PVector& p, const ReducedTupleVector& x) {
  const std::size_t i = x.omitted_mode();
  const Vector inner = psi(p.conj(i), grad_mode(f, i, x));
  std::vector<Vector> z(f.order());
  for (std::size_t k = 0; k < f.order(); ++k) {
    if (k == i) continue;
    z[k] = psi(p.conj(k), grad_mode_substituted(f, k, i, x, inner));
  }
  return z;
}

void check_underflow(const std::vector<Vector>& z, double floor) {
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k].empty()) continue;
    double top = 0.0;
    for (double v : z[k]) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NumericalBreakdown,
                    "non-finite s-map component in mode " + std::to_string(k + 1));
      }
      top = std::max(top, v);
    }
    for (double v : z[k]) {
      if (!(v > floor * top)) {
        throw Error(ErrorCode::NumericalBreakdown,
                    "s-map component underflow in mode " + std::to_string(k + 1));
      }
    }
  }
}

std::pair<double, double> bracket_from(const PVector& p, std::size_t i,
                                       const std::vector<Vector>& z, const ReducedTupleVector& x) {
  const std::size_t m = p.size();
  const double denom = p.conj(i) * static_cast<double>(m - 1);
  double lo = 1.0;
  double hi = 1.0;
  for (std::size_t l = 0; l < m; ++l) {
    if (l == i) continue;
    const Vector& xl = x.part(l);
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (std::size_t j = 0; j < xl.size(); ++j) {
      const double r = z[l][j] / xl[j];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    const double power = (p[l] - 1.0) / denom;
    lo *= std::pow(rmin, power);
    hi *= std::pow(rmax, power);
  }
  return {lo, hi};
}

ReducedTupleVector normalize_parts(const PVector& p, std::size_t i, std::vector<Vector> z) {
  std::vector<Vector> parts;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (k != i) parts.push_back(normalized(z[k], p[k]));
  }
  return ReducedTupleVector(i, std::move(parts));
}

SolveResult condition_violated(std::string note) {
  SolveResult r;
  r.status = SolveStatus::ConditionViolated;
  r.lambda = std::numeric_limits<double>::quiet_NaN();
  r.note = std::move(note);
  return r;
}

}  // namespace

ReducedTupleVector g_step(const SparseTensor& f, const PVector& p, const ReducedTupleVector& x,
                          double underflow_floor) {
  detail::check_p(f, p);
  require_positive(x);
  auto z = s_parts(f, p, x);
  check_underflow(z, underflow_floor);
  return normalize_parts(p, x.omitted_mode(), std::move(z));
}

std::pair<double, double> cw_bounds(const SparseTensor& f, const PVector& p,
                                    const ReducedTupleVector& x) {
  detail::check_p(f, p);
  require_positive(x);
  return bracket_from(p, x.omitted_mode(), s_parts(f, p, x), x);
}

double hilbert_metric(const PVector& p, const ReducedTupleVector& x, const ReducedTupleVector& y) {
  if (x.omitted_mode() != y.omitted_mode() || x.order() != y.order() || x.order() != p.size()) {
    throw Error(ErrorCode::ShapeMismatch, "metric arguments have different shapes");
  }
  require_positive(x);
  require_positive(y);
  double total = 0.0;
  for (std::size_t l = 0; l < x.order(); ++l) {
    if (l == x.omitted_mode()) continue;
    const Vector& a = x.part(l);
    const Vector& b = y.part(l);
    if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "part lengths differ");
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double r = a[j] / b[j];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    total += (p[l] - 1.0) * std::log(rmax / rmin);
  }
  return total;
}

SolveResult solve_hgpm(const SparseTensor& f, const PVector& p, const SolverConfig& config) {
  detail::check_p(f, p);
  detail::check_solvable(f);
  if (!(config.epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (config.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");

  std::size_t i = 0;
  if (config.index_override) {
    i = *config.index_override;
    if (i >= f.order()) throw Error(ErrorCode::InvalidArgument, "index override out of range");
    if (!index_admissible(p, i)) {
      return condition_violated("mode " + std::to_string(i + 1) +
                                " does not satisfy the exponent condition");
    }
  } else {
    auto chosen = chosen_index(p);
    if (!chosen) return condition_violated("no mode satisfies the exponent condition");
    i = *chosen;
  }

  ReducedTupleVector x = uniform_reduced(f.dims(), p, i);
  if (config.start) {
    if (config.start->omitted_mode() != i) {
      throw Error(ErrorCode::ShapeMismatch, "start vector omits a different mode");
    }
    detail::check_slots(f, config.start->slots(), i);
    require_positive(*config.start);
    std::vector<Vector> parts;
    for (std::size_t k = 0; k < f.order(); ++k) {
      if (k != i) parts.push_back(normalized(config.start->part(k), p[k]));
    }
    x = ReducedTupleVector(i, std::move(parts));
  }

  SolveResult result;
  result.mode_index = i;
  result.status = SolveStatus::MaxIter;
  for (std::size_t k = 0; k < config.max_iter; ++k) {
    if (config.iterate_check && !config.iterate_check(x)) {
      result.status = SolveStatus::NumericalBreakdown;
      result.note = "iterate check failed at iteration " + std::to_string(k);
      break;
    }
    std::vector<Vector> z;
    try {
      z = s_parts(f, p, x);
      check_underflow(z, config.underflow_floor);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericalBreakdown) throw;
      result.status = SolveStatus::NumericalBreakdown;
      result.note = e.what();
      break;
    }
    const auto [lo, hi] = bracket_from(p, i, z, x);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      result.status = SolveStatus::NumericalBreakdown;
      result.note = "non-finite bracket";
      break;
    }
    IterationRecord rec{k, lo, hi, 0.5 * (lo + hi), {}};
    if (config.retain_iterates) rec.iterate.assign(x.slots().begin(), x.slots().end());
    result.trace.push_back(std::move(rec));
    result.bracket = {lo, hi};
    x = normalize_parts(p, i, std::move(z));
    result.iterations = k + 1;
    if (hi - lo < config.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
  }

  result.final_iterate.assign(x.slots().begin(), x.slots().end());
  if (!result.bracket) {
    result.lambda = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  result.lambda = 0.5 * (result.bracket->first + result.bracket->second);
  const Vector top = psi(p.conj(i), grad_mode(f, i, x));
  result.vector.lambda = result.lambda;
  result.vector.vector = x.with_mode(normalized(top, p[i]));
  result.q_value = quotient_Q(f, p, result.vector.vector);
  result.residuals = residual_check(f, p, result.vector);
  return result;
}

std::vector<double> iterate_errors(std::span<const IterationRecord> trace,
                                   std::span<const Vector> reference) {
  std::vector<double> errors;
  errors.reserve(trace.size());
  for (const IterationRecord& rec : trace) {
    if (rec.iterate.size() != reference.size()) {
      throw Error(ErrorCode::TraceTooShort, "trace does not retain iterates");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k) {
      if (rec.iterate[k].size() != reference[k].size()) {
        throw Error(ErrorCode::ShapeMismatch, "iterate and reference shapes differ");
      }
      for (std::size_t j = 0; j < reference[k].size(); ++j) {
        const double d = rec.iterate[k][j] - reference[k][j];
        sq += d * d;
      }
    }
    errors.push_back(std::sqrt(sq));
  }
  return errors;
}

double estimate_rate(std::span<const IterationRecord> trace, std::span<const Vector> reference) {
  const auto errors = iterate_errors(trace, reference);
  const double threshold = 100.0 * std::numeric_limits<double>::epsilon();
  std::size_t above = 0;
  while (above < errors.size() && errors[above] > threshold) ++above;
  // Ratios e_{k+1}/e_k for every k with e_k above the threshold; the step
  // that crosses the threshold is included.
  std::vector<double> ratios;
  for (std::size_t k = 0; k < above && k + 1 < errors.size(); ++k) {
    ratios.push_back(errors[k + 1] / errors[k]);
  }
  if (ratios.empty()) {
    throw Error(ErrorCode::TraceTooShort, "not enough iterates above the error floor");
  }
  const std::size_t count = std::max<std::size_t>(1, ratios.size() / 4);
  double log_sum = 0.0;
  for (std::size_t k = ratios.size() - count; k < ratios.size(); ++k) {
    if (ratios[k] == 0.0) return 0.0;
    log_sum += std::log(ratios[k]);
  }
  return std::exp(log_sum / static_cast<double>(count));
}

}  // namespace tensornorm
