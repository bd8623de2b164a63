#include "tensornorm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tensornorm/error.hpp"

namespace tensornorm {

PVector::PVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw Error(ErrorCode::InvalidArgument, "exponent list is empty");
  for (double v : p_) {
    if (!(v > 1.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "every exponent must lie in (1, inf)");
    }
  }
}

PVector PVector::uniform(std::size_t order, double p) {
  return PVector(std::vector<double>(order, p));
}

Vector psi(double q, std::span<const double> v) {
  Vector out(v.size());
  const double power = q - 1.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double a = std::fabs(v[j]);
    if (a == 0.0) {
      out[j] = 0.0;
      continue;
    }
    out[j] = std::copysign(std::pow(a, power), v[j]);
  }
  return out;
}

double pnorm(std::span<const double> v, double p) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += std::pow(std::fabs(x) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

Vector normalized(std::span<const double> v, double p) {
  const double n = pnorm(v, p);
  if (n == 0.0) throw Error(ErrorCode::ZeroPart, "cannot normalize a zero vector");
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

TupleVector uniform_tuple(const std::vector<std::size_t>& dims, const PVector& p) {
  if (dims.size() != p.size()) throw Error(ErrorCode::ShapeMismatch, "exponent count mismatch");
  TupleVector x;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const double c = std::pow(static_cast<double>(dims[k]), -1.0 / p[k]);
    x.parts.emplace_back(dims[k], c);
  }
  return x;
}

ReducedTupleVector uniform_reduced(const std::vector<std::size_t>& dims, const PVector& p,
                                   std::size_t omitted_mode) {
  return ReducedTupleVector::drop_mode(uniform_tuple(dims, p), omitted_mode);
}

namespace detail {
void check_p(const SparseTensor& f, const PVector& p) {
  if (p.size() != f.order()) {
    throw Error(ErrorCode::ShapeMismatch, "tensor order " + std::to_string(f.order()) +
                                              " but " + std::to_string(p.size()) + " exponents");
  }
}
}  // namespace detail

double quotient_Q(const SparseTensor& f, const PVector& p, const TupleVector& x) {
  detail::check_p(f, p);
  detail::check_slots(f, x.parts, std::nullopt);
  double denom = 1.0;
  for (std::size_t k = 0; k < x.order(); ++k) {
    const double n = pnorm(x.parts[k], p[k]);
    if (n == 0.0) throw Error(ErrorCode::ZeroPart, "part " + std::to_string(k + 1) + " is zero");
    denom *= n;
  }
  return std::fabs(evaluate(f, x)) / denom;
}

Vector sigma(const SparseTensor& f, const PVector& p, std::size_t i, const TupleVector& x) {
  detail::check_p(f, p);
  const double value = evaluate(f, x);
  Vector out = psi(p.conj(i), grad_mode(f, i, x));
  if (value < 0.0) {
    for (double& v : out) v = -v;
  } else if (value == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
  }
  return out;
}

Vector s_map(const SparseTensor& f, const PVector& p, std::size_t i, std::size_t k,
             const ReducedTupleVector& x) {
  detail::check_p(f, p);
  if (k == i) throw Error(ErrorCode::InvalidArgument, "s-map needs k != i");
  const Vector inner = psi(p.conj(i), grad_mode(f, i, x));
  return psi(p.conj(k), grad_mode_substituted(f, k, i, x, inner));
}

double quotient_Qi(const SparseTensor& f, const PVector& p, std::size_t i,
                   const ReducedTupleVector& x) {
  detail::check_p(f, p);
  double denom = 1.0;
  for (std::size_t k = 0; k < f.order(); ++k) {
    if (k == i) continue;
    const double n = pnorm(x.part(k), p[k]);
    if (n == 0.0) throw Error(ErrorCode::ZeroPart, "part " + std::to_string(k + 1) + " is zero");
    denom *= n;
  }
  return pnorm(grad_mode(f, i, x), p.conj(i)) / denom;
}

double dual_residual(const SparseTensor& f, const PVector& p, const ReducedSingularPair& pair) {
  detail::check_p(f, p);
  if (!(pair.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const std::size_t i = pair.vector.omitted_mode();
  double worst = 0.0;
  for (std::size_t k = 0; k < f.order(); ++k) {
    if (k == i) continue;
    const Vector s = s_map(f, p, i, k, pair.vector);
    const double scale = std::pow(pair.lambda, p.conj(i) * (p.conj(k) - 1.0));
    const Vector& xk = pair.vector.part(k);
    double sq = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double d = s[j] / scale - xk[j];
      sq += d * d;
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

SingularPair lift_phi(const SparseTensor& f, const PVector& p, const ReducedSingularPair& pair) {
  detail::check_p(f, p);
  if (!(pair.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const std::size_t i = pair.vector.omitted_mode();
  const Vector g = grad_mode(f, i, pair.vector);
  if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::DegenerateGradient,
                "mode gradient vanishes; the tensor structure is reducible at this point");
  }
  const double residual = dual_residual(f, p, pair);
  if (!(residual <= kLiftTolerance)) {
    throw Error(ErrorCode::ResidualTooLarge,
                "pair misses the reduced singular system (residual " + std::to_string(residual) +
                    ")");
  }

  Vector scaled = g;
  for (double& v : scaled) v /= pair.lambda;

  double sign = 1.0;
  const bool nonneg_input =
      f.is_nonnegative() && std::ranges::all_of(pair.vector.slots(), [](const Vector& part) {
        return std::ranges::all_of(part, [](double v) { return v >= 0.0; });
      });
  if (!nonneg_input) {
    const double value = evaluate(f, pair.vector.with_mode(psi(p.conj(i), scaled)));
    sign = value < 0.0 ? -1.0 : 1.0;
  }
  for (double& v : scaled) v *= sign;

  SingularPair out;
  out.lambda = pair.lambda;
  out.vector = pair.vector.with_mode(normalized(psi(p.conj(i), scaled), p[i]));
  return out;
}

std::vector<double> residual_check(const SparseTensor& f, const PVector& p,
                                   const SingularPair& candidate) {
  detail::check_p(f, p);
  detail::check_slots(f, candidate.vector.parts, std::nullopt);
  std::vector<double> out(f.order());
  for (std::size_t i = 0; i < f.order(); ++i) {
    const Vector s = sigma(f, p, i, candidate.vector);
    const double scale = std::pow(candidate.lambda, p.conj(i) - 1.0);
    const Vector& xi = candidate.vector.parts[i];
    double sq = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double d = s[j] - scale * xi[j];
      sq += d * d;
    }
    out[i] = std::sqrt(sq);
  }
  return out;
}

double spectrum_upper_bound(const SparseTensor& f, const PVector& p) {
  detail::check_p(f, p);
  if (f.is_zero()) throw Error(ErrorCode::ZeroTensor, "the zero tensor has no singular values");
  // d_{i,l}|f|(e) is the sum of |f| over the slice with mode-i index l.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.order(); ++i) {
    Vector slice(f.dim(i), 0.0);
    for (std::size_t e = 0; e < f.nnz(); ++e) slice[f.index(e)[i]] += std::fabs(f.value(e));
    const double top = *std::max_element(slice.begin(), slice.end());
    const double factor = std::pow(static_cast<double>(f.dim(i)), 1.0 / p.conj(i));
    best = std::min(best, factor * top);
  }
  return best;
}

}  // namespace tensornorm
