#pragma once

#include <cstddef>
#include <cstdint>

#include "tensornorm/spectral.hpp"
#include "tensornorm/tensor.hpp"

namespace tensornorm {

/// Largest total dimension d_1 + ... + d_m accepted by oracle_norm.
inline constexpr std::size_t kOracleDimensionLimit = 64;

struct OracleResult {
  double lambda = 0.0;
  TupleVector maximizer;  ///< unit p_k-norm parts
};

/// Brute-force estimate of max Q by multistart alternating ascent. Each
/// sweep replaces x_i by psi_{p_i'}(grad_i f(x)) / ||.||_{p_i} for i = 1..m
/// and a restart stops once a sweep improves Q by at most 1e-13 relative.
/// Starts are uniform in (0, 1] for nonnegative f and standard normal
/// otherwise. The contractions here are written against the raw entry list
/// and share no code with the solvers.
OracleResult oracle_norm(const SparseTensor& f, const PVector& p, std::size_t restarts = 100,
                         std::uint64_t seed = 0);

/// Largest singular value of an order-2 tensor via power iteration on A^T A.
double oracle_matrix_2norm(const SparseTensor& a);

}  // namespace tensornorm
