#include "tensornorm/baseline_pm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tensornorm/error.hpp"
#include "tensornorm/spectral.hpp"

namespace tensornorm {

namespace {

double dot(const TupleVector& a, const TupleVector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.order(); ++k) {
    for (std::size_t j = 0; j < a[k].size(); ++j) s += a[k][j] * b[k][j];
  }
  return s;
}

void require_positive(const TupleVector& x, const char* what) {
  for (const Vector& part : x.parts) {
    for (double v : part) {
      if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
    }
  }
}

TupleVector unit_parts(const TupleVector& v, const PVector& p) {
  TupleVector out;
  for (std::size_t k = 0; k < v.order(); ++k) out.parts.push_back(normalized(v[k], p[k]));
  return out;
}

}  // namespace

SolveResult solve_pm(const SparseTensor& f, double p_value, const PmConfig& config) {
  const PVector p = PVector::uniform(f.order(), p_value);
  detail::check_solvable(f);
  if (!(config.epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (config.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");

  TupleVector n;
  for (std::size_t d : f.dims()) n.parts.emplace_back(d, 1.0);
  if (config.normalizer) {
    detail::check_slots(f, config.normalizer->parts, std::nullopt);
    require_positive(*config.normalizer, "normalizer");
    n = *config.normalizer;
  }
  TupleVector v = n;
  for (auto& part : v.parts) std::fill(part.begin(), part.end(), 1.0);
  if (config.start) {
    detail::check_slots(f, config.start->parts, std::nullopt);
    require_positive(*config.start, "start vector");
    v = *config.start;
  }
  const double scale = dot(n, v);
  for (auto& part : v.parts) {
    for (double& x : part) x /= scale;
  }

  SolveResult result;
  result.note = "power method: no certified bracket";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < config.max_iter; ++k) {
    TupleVector w;
    for (std::size_t i = 0; i < f.order(); ++i) w.parts.push_back(sigma(f, p, i, v));
    const double denom = dot(n, w);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      result.status = SolveStatus::NumericalBreakdown;
      result.note = "power method normalization collapsed";
      break;
    }
    double sq = 0.0;
    bool positive = true;
    for (std::size_t i = 0; i < w.order(); ++i) {
      for (std::size_t j = 0; j < w[i].size(); ++j) {
        w.parts[i][j] /= denom;
        positive = positive && w[i][j] > 0.0;
        const double d = w[i][j] - v[i][j];
        sq += d * d;
      }
    }
    if (!positive) {
      result.status = SolveStatus::NumericalBreakdown;
      result.note = "power method iterate lost strict positivity";
      break;
    }
    const TupleVector unit = unit_parts(v, p);
    IterationRecord rec{k, nan, nan, quotient_Q(f, p, unit), {}};
    if (config.retain_iterates) rec.iterate = unit.parts;
    result.trace.push_back(std::move(rec));
    v = std::move(w);
    result.iterations = k + 1;
    if (std::sqrt(sq) < config.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
  }

  const TupleVector unit = unit_parts(v, p);
  result.final_iterate = unit.parts;
  result.lambda = quotient_Q(f, p, unit);
  result.q_value = result.lambda;
  result.vector = {result.lambda, unit};
  result.residuals = residual_check(f, p, result.vector);
  return result;
}

}  // namespace tensornorm
