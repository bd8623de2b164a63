#include "tensornorm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tensornorm/error.hpp"

namespace tensornorm {

namespace {

struct RawTensor {
  std::size_t order = 0;
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::size_t>> index;
  std::vector<double> value;
};

RawTensor copy_entries(const SparseTensor& f) {
  RawTensor t;
  t.order = f.order();
  t.dims = f.dims();
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    auto idx = f.index(e);
    t.index.emplace_back(idx.begin(), idx.end());
    t.value.push_back(f.value(e));
  }
  return t;
}

double multilinear(const RawTensor& t, const std::vector<std::vector<double>>& x) {
  double total = 0.0;
  for (std::size_t e = 0; e < t.value.size(); ++e) {
    double term = t.value[e];
    for (std::size_t k = 0; k < t.order; ++k) term *= x[k][t.index[e][k]];
    total += term;
  }
  return total;
}

std::vector<double> partial(const RawTensor& t, std::size_t mode,
                            const std::vector<std::vector<double>>& x) {
  std::vector<double> g(t.dims[mode], 0.0);
  for (std::size_t e = 0; e < t.value.size(); ++e) {
    double term = t.value[e];
    for (std::size_t k = 0; k < t.order; ++k) {
      if (k != mode) term *= x[k][t.index[e][k]];
    }
    g[t.index[e][mode]] += term;
  }
  return g;
}

double norm_p(const std::vector<double>& v, double p) {
  double s = 0.0;
  for (double a : v) s += std::pow(std::fabs(a), p);
  return std::pow(s, 1.0 / p);
}

// Scales v to unit p-norm in place; false if v vanishes.
bool to_unit(std::vector<double>& v, double p) {
  const double n = norm_p(v, p);
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  for (double& a : v) a /= n;
  return true;
}

}  // namespace

OracleResult oracle_norm(const SparseTensor& f, const PVector& p, std::size_t restarts,
                         std::uint64_t seed) {
  if (p.size() != f.order()) throw Error(ErrorCode::ShapeMismatch, "exponent count mismatch");
  if (f.total_dim() > kOracleDimensionLimit) {
    throw Error(ErrorCode::DimensionGuard, "total dimension " + std::to_string(f.total_dim()) +
                                               " exceeds the oracle limit of " +
                                               std::to_string(kOracleDimensionLimit));
  }
  if (f.is_zero()) throw Error(ErrorCode::ZeroTensor, "the zero tensor has norm zero");
  if (restarts == 0) throw Error(ErrorCode::InvalidArgument, "restarts must be positive");

  constexpr double kStagnation = 1e-13;
  constexpr std::size_t kMaxSweeps = 200000;
  const RawTensor t = copy_entries(f);
  const bool positive_starts = f.is_nonnegative();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  OracleResult best;
  best.lambda = -1.0;
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<std::vector<double>> x(t.order);
    bool ok = true;
    for (std::size_t k = 0; k < t.order; ++k) {
      x[k].resize(t.dims[k]);
      for (double& a : x[k]) a = positive_starts ? 1.0 - unit(rng) : normal(rng);
      ok = to_unit(x[k], p[k]) && ok;
    }
    if (!ok) continue;

    double q = std::fabs(multilinear(t, x));
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      for (std::size_t i = 0; i < t.order && ok; ++i) {
        std::vector<double> g = partial(t, i, x);
        const double power = p[i] / (p[i] - 1.0) - 1.0;
        for (double& a : g) a = a == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(a), power), a);
        if (to_unit(g, p[i])) {
          x[i] = std::move(g);
        } else {
          ok = false;
        }
      }
      if (!ok) break;
      const double next = std::fabs(multilinear(t, x));
      const bool stalled = next - q <= kStagnation * next;
      q = std::max(q, next);
      if (stalled) break;
    }
    if (q > best.lambda) {
      best.lambda = q;
      best.maximizer.parts = x;
    }
  }
  if (best.lambda < 0.0) {
    throw Error(ErrorCode::NumericalBreakdown, "every oracle restart degenerated");
  }
  return best;
}

double oracle_matrix_2norm(const SparseTensor& a) {
  if (a.order() != 2) throw Error(ErrorCode::InvalidArgument, "matrix input must have order 2");
  const std::size_t rows = a.dim(0);
  const std::size_t cols = a.dim(1);
  std::vector<double> dense(rows * cols, 0.0);
  for (std::size_t e = 0; e < a.nnz(); ++e) {
    auto idx = a.index(e);
    dense[idx[0] * cols + idx[1]] = a.value(e);
  }
  if (std::all_of(dense.begin(), dense.end(), [](double v) { return v == 0.0; })) return 0.0;

  auto apply_gram = [&](const std::vector<double>& v) {
    std::vector<double> av(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) av[r] += dense[r * cols + c] * v[c];
    }
    std::vector<double> out(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) out[c] += dense[r * cols + c] * av[r];
    }
    return out;
  };
  auto length = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  // A slightly uneven start keeps a component along the top singular vector
  // for matrices whose Perron vector is orthogonal to the all-ones vector.
  std::vector<double> v(cols);
  for (std::size_t c = 0; c < cols; ++c) v[c] = 1.0 + 0.01 * static_cast<double>(c + 1);
  double n = length(v);
  for (double& x : v) x /= n;

  double rayleigh = 0.0;
  for (std::size_t it = 0; it < 1000000; ++it) {
    std::vector<double> w = apply_gram(v);
    double vw = 0.0;
    for (std::size_t c = 0; c < cols; ++c) vw += v[c] * w[c];
    rayleigh = vw;
    n = length(w);
    if (n == 0.0) return 0.0;
    double change = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      w[c] /= n;
      change = std::max(change, std::fabs(w[c] - v[c]));
    }
    v = std::move(w);
    if (change < 1e-14) break;
  }
  return std::sqrt(rayleigh);
}

}  // namespace tensornorm
