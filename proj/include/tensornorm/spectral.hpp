#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tensornorm/tensor.hpp"

namespace tensornorm {

/// Hölder exponents (p_1, ..., p_m), each in (1, inf).
///
/// Conjugates are derived as p / (p - 1) in a single expression and never
/// stored independently.
class PVector {
 public:
  explicit PVector(std::vector<double> p);

  /// The same exponent for every one of `order` modes.
  static PVector uniform(std::size_t order, double p);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t mode) const { return p_.at(mode); }
  double conj(std::size_t mode) const { return p_.at(mode) / (p_.at(mode) - 1.0); }
  const std::vector<double>& values() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

/// A point on the unit product sphere with its singular value.
struct SingularPair {
  double lambda = 0.0;
  TupleVector vector;
};

/// Same, for the reduced problem with one mode eliminated.
struct ReducedSingularPair {
  double lambda = 0.0;
  ReducedTupleVector vector;
};

/// Componentwise |v_j|^(q-1) sign(v_j); zero maps to zero for every q.
Vector psi(double q, std::span<const double> v);

/// l^p norm. Scales by the largest magnitude first so that large exponents
/// neither overflow nor underflow.
double pnorm(std::span<const double> v, double p);

/// v / ||v||_p. Throws ZeroPart on a zero vector.
Vector normalized(std::span<const double> v, double p);

/// The all-positive tuple with constant parts of unit p_k-norm.
TupleVector uniform_tuple(const std::vector<std::size_t>& dims, const PVector& p);
ReducedTupleVector uniform_reduced(const std::vector<std::size_t>& dims, const PVector& p,
                                   std::size_t omitted_mode);

/// |f(x)| / prod_k ||x_k||_{p_k}. Throws ZeroPart when a part vanishes.
double quotient_Q(const SparseTensor& f, const PVector& p, const TupleVector& x);

/// sign(f(x)) psi_{p_i'}(grad_i f(x)).
Vector sigma(const SparseTensor& f, const PVector& p, std::size_t i, const TupleVector& x);

/// psi_{p_k'}( grad_k f(x with slot i <- psi_{p_i'}(grad_i f(x))) ).
Vector s_map(const SparseTensor& f, const PVector& p, std::size_t i, std::size_t k,
             const ReducedTupleVector& x);

/// ||grad_i f(x)||_{p_i'} / prod_{k != i} ||x_k||_{p_k}.
double quotient_Qi(const SparseTensor& f, const PVector& p, std::size_t i,
                   const ReducedTupleVector& x);

/// Residual of the reduced system s_{i,k}(x) = lambda^{p_i'(p_k'-1)} x_k,
/// measured as max_k || s_{i,k}(x) / lambda^{p_i'(p_k'-1)} - x_k ||_2.
double dual_residual(const SparseTensor& f, const PVector& p, const ReducedSingularPair& pair);

/// Largest dual residual accepted by lift_phi.
inline constexpr double kLiftTolerance = 1e-6;

/// Lifts a reduced singular pair to a full one by inserting
/// x_i = psi_{p_i'}(s lambda^{-1} grad_i f(x)), s the sign factor, scaled to
/// unit p_i-norm. Throws InvalidArgument for lambda <= 0, DegenerateGradient
/// for a vanishing grad_i f(x) and ResidualTooLarge when the pair misses the
/// reduced system by more than kLiftTolerance.
SingularPair lift_phi(const SparseTensor& f, const PVector& p, const ReducedSingularPair& pair);

/// || sigma_i(x) - lambda^{p_i'-1} x_i ||_2 for every mode i.
std::vector<double> residual_check(const SparseTensor& f, const PVector& p,
                                   const SingularPair& candidate);

/// min_i max_l d_i^{1/p_i'} d_{i,l}|f|(e): an upper bound on every singular
/// value. Throws ZeroTensor for f = 0.
double spectrum_upper_bound(const SparseTensor& f, const PVector& p);

namespace detail {
void check_p(const SparseTensor& f, const PVector& p);
}

}  // namespace tensornorm
