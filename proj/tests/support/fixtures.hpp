#pragma once

// Tensors and random generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "tensornorm/spectral.hpp"
#include "tensornorm/structure.hpp"
#include "tensornorm/tensor.hpp"

namespace fixtures {

using tensornorm::PVector;
using tensornorm::SparseTensor;
using tensornorm::TupleVector;
using tensornorm::Vector;

inline SparseTensor from_list(std::vector<std::size_t> dims,
                              std::vector<std::pair<std::vector<std::size_t>, double>> one_based) {
  std::vector<SparseTensor::Entry> entries;
  for (auto& [idx, v] : one_based) {
    for (auto& j : idx) --j;
    entries.push_back({idx, v});
  }
  return SparseTensor(std::move(dims), std::move(entries));
}

inline SparseTensor all_ones(const std::vector<std::size_t>& dims) {
  std::vector<SparseTensor::Entry> entries;
  std::vector<std::size_t> idx(dims.size(), 0);
  while (true) {
    entries.push_back({idx, 1.0});
    std::size_t k = 0;
    while (k < dims.size() && ++idx[k] == dims[k]) idx[k++] = 0;
    if (k == dims.size()) break;
  }
  return SparseTensor(dims, std::move(entries));
}

/// The 2x3x4 tensor used in the numerical experiments.
inline SparseTensor experiment_tensor() {
  return from_list({2, 3, 4}, {{{1, 2, 1}, 806.0},
                               {{1, 3, 1}, 761.0},
                               {{1, 3, 4}, 3.0},
                               {{2, 1, 1}, 833.0},
                               {{2, 2, 2}, 285.0},
                               {{2, 3, 3}, 176.0}});
}

/// f_111 = f_222 = 1: positive under T_alpha yet not weakly irreducible.
inline SparseTensor diagonal_pair() { return from_list({2, 2, 2}, {{{1, 1, 1}, 1.0}, {{2, 2, 2}, 1.0}}); }

/// f_111 = f_121 = f_222 = 1: weakly irreducible but not irreducible.
inline SparseTensor three_entry_tensor() {
  return from_list({2, 2, 2}, {{{1, 1, 1}, 1.0}, {{1, 2, 1}, 1.0}, {{2, 2, 2}, 1.0}});
}

/// All ones except f_122 = f_212 = 0; not symmetric in the last two modes.
inline SparseTensor asymmetric_block_tensor() {
  std::vector<SparseTensor::Entry> entries;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t c = 0; c < 2; ++c) {
        if ((a == 0 && b == 1 && c == 1) || (a == 1 && b == 0 && c == 1)) continue;
        entries.push_back({{a, b, c}, 1.0});
      }
    }
  }
  return SparseTensor({2, 2, 2}, std::move(entries));
}

/// The skew matrix A_12 = 1, A_21 = -1.
inline SparseTensor skew_matrix() { return from_list({2, 2}, {{{1, 2}, 1.0}, {{2, 1}, -1.0}}); }

/// Random nonnegative tensor with roughly `density` of its cells filled,
/// redrawn until the support graph is connected.
inline SparseTensor random_weakly_irreducible(std::mt19937_64& rng, const std::vector<std::size_t>& dims,
                                              double density = 0.5) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    std::vector<SparseTensor::Entry> entries;
    std::vector<std::size_t> idx(dims.size(), 0);
    while (true) {
      if (unit(rng) < density) entries.push_back({idx, 0.05 + unit(rng)});
      std::size_t k = 0;
      while (k < dims.size() && ++idx[k] == dims[k]) idx[k++] = 0;
      if (k == dims.size()) break;
    }
    SparseTensor f(dims, std::move(entries));
    if (!f.is_zero() && tensornorm::is_weakly_irreducible(f)) return f;
  }
}

inline std::vector<std::size_t> random_dims(std::mt19937_64& rng, std::size_t order, std::size_t max_dim) {
  std::uniform_int_distribution<std::size_t> pick(2, max_dim);
  std::vector<std::size_t> dims(order);
  for (auto& d : dims) d = pick(rng);
  return dims;
}

/// Random exponents for which some mode satisfies the exponent condition.
inline PVector random_admissible_p(std::mt19937_64& rng, std::size_t order) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> mode(0, order - 1);
  const double m1 = static_cast<double>(order - 1);
  std::vector<double> p(order);
  const std::size_t i = mode(rng);
  p[i] = 1.3 + 3.0 * unit(rng);
  const double need = m1 * p[i] / (p[i] - 1.0);
  for (std::size_t k = 0; k < order; ++k) {
    if (k != i) p[k] = need * (1.0 + 0.01 + 0.8 * unit(rng));
  }
  return PVector(p);
}

inline TupleVector random_positive_tuple(std::mt19937_64& rng, const std::vector<std::size_t>& dims,
                                         const PVector& p) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  TupleVector x;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Vector v(dims[k]);
    for (double& a : v) a = unit(rng);
    x.parts.push_back(tensornorm::normalized(v, p[k]));
  }
  return x;
}

inline tensornorm::ReducedTupleVector random_positive_reduced(std::mt19937_64& rng,
                                                              const std::vector<std::size_t>& dims,
                                                              const PVector& p, std::size_t omitted) {
  return tensornorm::ReducedTupleVector::drop_mode(random_positive_tuple(rng, dims, p), omitted);
}

/// Random fully symmetric nonnegative tensor of order m on R^d.
inline SparseTensor random_symmetric(std::mt19937_64& rng, std::size_t m, std::size_t d,
                                     double density = 0.7) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    std::vector<SparseTensor::Entry> entries;
    std::vector<std::size_t> idx(m, 0);
    // Draw one value per sorted multi-index, then place it at every permutation.
    while (true) {
      if (std::is_sorted(idx.begin(), idx.end()) && unit(rng) < density) {
        const double v = 0.05 + unit(rng);
        std::vector<std::size_t> perm = idx;
        do {
          entries.push_back({perm, v});
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
      std::size_t k = 0;
      while (k < m && ++idx[k] == d) idx[k++] = 0;
      if (k == m) break;
    }
    SparseTensor f(std::vector<std::size_t>(m, d), std::move(entries));
    if (!f.is_zero() && tensornorm::is_weakly_irreducible(f)) return f;
  }
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace fixtures
