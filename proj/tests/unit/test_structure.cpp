#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "tensornorm/error.hpp"
#include "tensornorm/structure.hpp"

using namespace tensornorm;

namespace {

using Cell = std::vector<std::size_t>;

// Irreducibility straight from the subset definition: for every split of the
// vertex set into a zero set J and a support I meeting every mode, some
// positive entry has exactly one index in J.
bool irreducible_by_subsets(const SparseTensor& f) {
  const std::size_t m = f.order();
  std::vector<std::size_t> offsets{0};
  for (std::size_t d : f.dims()) offsets.push_back(offsets.back() + d);
  const std::size_t n = offsets.back();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    // mask marks J.
    bool support_meets_every_mode = true;
    for (std::size_t k = 0; k < m && support_meets_every_mode; ++k) {
      bool any = false;
      for (std::size_t j = 0; j < f.dim(k); ++j) any = any || !(mask >> (offsets[k] + j) & 1);
      support_meets_every_mode = any;
    }
    if (!support_meets_every_mode) continue;
    bool escapes = false;
    for (std::size_t e = 0; e < f.nnz() && !escapes; ++e) {
      std::size_t in_j = 0;
      for (std::size_t k = 0; k < m; ++k) in_j += mask >> (offsets[k] + f.index(e)[k]) & 1;
      escapes = in_j == 1;
    }
    if (!escapes) return false;
  }
  return true;
}

// Floating-point iteration of z -> z + (psi_{p_k'}(grad_k f(z)))_k from every
// indicator start. This is T_alpha with unit weights and the sign factor
// fixed to +1: at supports where f(z) = 0 the signed map is frozen, so only
// the unsigned map characterizes irreducibility. Where f(z) > 0 it agrees
// with t_alpha_step, which is checked along the way.
bool irreducible_by_iteration(const SparseTensor& f, const PVector& p) {
  const std::vector<double> alpha(f.order() + 1, 1.0);
  const std::size_t n = f.total_dim();
  std::vector<std::size_t> choice(f.order(), 1);
  // Each mode picks a nonempty subset of its indices as the start support.
  while (true) {
    TupleVector z;
    for (std::size_t k = 0; k < f.order(); ++k) {
      Vector part(f.dim(k), 0.0);
      for (std::size_t j = 0; j < f.dim(k); ++j) part[j] = (choice[k] >> j & 1) ? 1.0 : 0.0;
      z.parts.push_back(normalized(part, p[k]));
    }
    for (std::size_t step = 0; step < n; ++step) {
      TupleVector next = z;
      for (std::size_t k = 0; k < f.order(); ++k) {
        const Vector s = psi(p.conj(k), grad_mode(f, k, z));
        for (std::size_t j = 0; j < s.size(); ++j) next.parts[k][j] += s[j];
      }
      if (evaluate(f, z) > 0.0) {
        const TupleVector reference = t_alpha_step(f, p, alpha, z);
        for (std::size_t k = 0; k < f.order(); ++k) {
          for (std::size_t j = 0; j < f.dim(k); ++j) {
            CHECK(reference[k][j] == doctest::Approx(next[k][j]).epsilon(1e-14));
          }
        }
      }
      z = std::move(next);
    }
    for (const Vector& part : z.parts) {
      for (double v : part) {
        if (!(v > 0.0)) return false;
      }
    }
    std::size_t k = 0;
    while (k < f.order() && ++choice[k] == (std::size_t{1} << f.dim(k))) choice[k++] = 1;
    if (k == f.order()) return true;
  }
}

}  // namespace

TEST_CASE("support graph") {
  SUBCASE("diagonal pair forms two triangles") {
    const ModeGraph g = build_graph(fixtures::diagonal_pair());
    CHECK(g.vertex_count() == 6);
    CHECK(g.edge_count() == 6);
    CHECK(g.has_edge(g.id(0, 0), g.id(1, 0)));
    CHECK_FALSE(g.has_edge(g.id(0, 0), g.id(1, 1)));
    CHECK_FALSE(g.is_connected());
  }
  SUBCASE("three entry tensor is connected") {
    const ModeGraph g = build_graph(fixtures::three_entry_tensor());
    CHECK(g.vertex_count() == 6);
    CHECK(g.is_connected());
  }
  SUBCASE("all ones tensor gives the complete multipartite graph") {
    const ModeGraph g = build_graph(fixtures::all_ones({2, 3, 4}));
    CHECK(g.edge_count() == 2 * 3 + 2 * 4 + 3 * 4);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const auto [mode, idx] = g.vertex(v);
      CHECK(g.id(mode, idx) == v);
      for (std::size_t w : g.neighbors(v)) CHECK(g.vertex(w).first != mode);
    }
  }
  CHECK_THROWS_AS(build_graph(fixtures::skew_matrix()), Error);
}

TEST_CASE("weak irreducibility and irreducibility verdicts") {
  CHECK_FALSE(is_weakly_irreducible(fixtures::diagonal_pair()));
  CHECK(is_weakly_irreducible(fixtures::three_entry_tensor()));
  CHECK(is_weakly_irreducible(fixtures::experiment_tensor()));

  CHECK(is_irreducible(fixtures::all_ones({2, 3, 2})));
  CHECK_FALSE(is_irreducible(fixtures::three_entry_tensor()));
  CHECK_FALSE(is_irreducible(fixtures::diagonal_pair()));
  CHECK_FALSE(is_irreducible(SparseTensor({2, 2}, {})));
  CHECK(irreducible_by_subsets(fixtures::all_ones({2, 2, 2})));
  CHECK_FALSE(irreducible_by_subsets(fixtures::three_entry_tensor()));
  CHECK_FALSE(irreducible_by_subsets(fixtures::diagonal_pair()));
  CHECK_THROWS_AS(is_irreducible(fixtures::skew_matrix()), Error);
}

TEST_CASE("exhaustive 0/1 patterns for every shape up to 2x2x2") {
  const PVector p = PVector::uniform(3, 3.0);
  int tensors = 0;
  int irreducible_count = 0;
  for (std::size_t shape = 0; shape < 8; ++shape) {
    const std::vector<std::size_t> dims{1 + (shape >> 2 & 1), 1 + (shape >> 1 & 1), 1 + (shape & 1)};
    const std::size_t cells = dims[0] * dims[1] * dims[2];
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << cells); ++pattern) {
      std::vector<SparseTensor::Entry> entries;
      for (std::size_t c = 0; c < cells; ++c) {
        if (pattern >> c & 1) {
          entries.push_back({{c / (dims[1] * dims[2]), c / dims[2] % dims[1], c % dims[2]}, 1.0});
        }
      }
      const SparseTensor f(dims, std::move(entries));
      ++tensors;
      const bool exact = is_irreducible(f);
      if (f.is_zero()) {
        // The subset condition holds vacuously for the 1x1x1 zero tensor,
        // whose graph is nonetheless disconnected; zero is never irreducible.
        CHECK_FALSE(exact);
        continue;
      }
      CHECK_MESSAGE(exact == irreducible_by_subsets(f), "shape " << shape << " pattern " << pattern);
      CHECK_MESSAGE(exact == irreducible_by_iteration(f, p), "shape " << shape << " pattern " << pattern);
      if (exact) {
        CHECK(is_weakly_irreducible(f));
        ++irreducible_count;
      }
    }
  }
  CHECK(tensors == 318);
  CHECK(irreducible_count > 0);
}

TEST_CASE("irreducible implies weakly irreducible on random sparse tensors") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const auto dims = fixtures::random_dims(rng, 3, 3);
    std::vector<SparseTensor::Entry> entries;
    for (std::size_t a = 0; a < dims[0]; ++a) {
      for (std::size_t b = 0; b < dims[1]; ++b) {
        for (std::size_t c = 0; c < dims[2]; ++c) {
          if (u(rng) < 0.35) entries.push_back({{a, b, c}, u(rng) + 0.1});
        }
      }
    }
    const SparseTensor f(dims, std::move(entries));
    if (is_irreducible(f)) CHECK(is_weakly_irreducible(f));
  }
}

TEST_CASE("t_alpha_step") {
  std::mt19937_64 rng(41);
  const PVector p = PVector::uniform(3, 3.0);
  const std::vector<double> alpha{0.5, 1.0, 2.0, 3.0};
  SUBCASE("dominates alpha_0 z for nonnegative f") {
    for (int t = 0; t < 20; ++t) {
      const auto dims = fixtures::random_dims(rng, 3, 3);
      const auto f = fixtures::random_weakly_irreducible(rng, dims, 0.3);
      TupleVector z = fixtures::random_positive_tuple(rng, dims, p);
      z.parts[0][0] = 0.0;
      const TupleVector out = t_alpha_step(f, p, alpha, z);
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t j = 0; j < dims[k]; ++j) CHECK(out[k][j] >= alpha[0] * z[k][j]);
      }
    }
  }
  SUBCASE("positive tensor maps nonnegative tuples to positive ones") {
    const auto f = fixtures::all_ones({2, 3, 2});
    const TupleVector z{{{1, 0}, {0, 0, 1}, {0, 1}}};
    for (const Vector& part : t_alpha_step(f, p, alpha, z).parts) {
      for (double v : part) CHECK(v > 0.0);
    }
  }
  SUBCASE("zero tensor with unit weights is the identity") {
    const SparseTensor f({2, 2, 2}, {});
    const std::vector<double> ones(4, 1.0);
    const TupleVector z{{{0.2, 0.8}, {1, 0}, {0.5, 0.5}}};
    CHECK(t_alpha_step(f, p, ones, z) == z);
  }
  CHECK_THROWS_AS(t_alpha_step(fixtures::all_ones({2, 2, 2}), p, std::vector<double>{1, 1, 1},
                               uniform_tuple({2, 2, 2}, p)),
                  Error);
  CHECK_THROWS_AS(t_alpha_step(fixtures::all_ones({2, 2, 2}), p, std::vector<double>{1, 0, 1, 1},
                               uniform_tuple({2, 2, 2}, p)),
                  Error);
}

TEST_CASE("exponent condition") {
  using V = std::vector<std::size_t>;
  CHECK(admissible_indices(PVector::uniform(3, 3.0)) == V{0, 1, 2});
  CHECK(admissible_indices(PVector::uniform(3, 2.0)).empty());
  CHECK(admissible_indices(PVector::uniform(4, 4.0)) == V{0, 1, 2, 3});
  CHECK(admissible_indices(PVector::uniform(4, 3.9)).empty());
  CHECK(admissible_indices(PVector({1.5, 4.0})) == V{0, 1});
  CHECK(admissible_indices(PVector({4.0, 1.5})) == V{1, 0});
  CHECK(admissible_indices(PVector({2.0, 2.0})) == V{0, 1});
  CHECK(admissible_indices(PVector({1.2, 4.0})).empty());

  CHECK(chosen_index(PVector({4.0, 1.5})) == 1u);
  CHECK(chosen_index(PVector::uniform(3, 3.0)) == 0u);
  CHECK_FALSE(chosen_index(PVector::uniform(3, 2.0)).has_value());
  // Mode 3 is the only one whose conjugate is small enough.
  CHECK(admissible_indices(PVector({3.0, 3.0, 6.0})) == V{0, 1, 2});
  CHECK(chosen_index(PVector({3.0, 3.0, 6.0})) == 2u);
  CHECK(admissible_indices(PVector({2.5, 2.5, 5.0})) == V{2});

  SUBCASE("equivariant under relabeling modes") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 200; ++t) {
      const std::size_t m = 2 + static_cast<std::size_t>(t % 3);
      std::vector<double> p(m);
      for (double& v : p) v = std::uniform_real_distribution<double>(1.1, 8.0)(rng);
      std::vector<std::size_t> perm(m);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<double> q(m);
      for (std::size_t k = 0; k < m; ++k) q[k] = p[perm[k]];
      const PVector pp(p);
      const PVector qq(q);
      for (std::size_t k = 0; k < m; ++k) CHECK(index_admissible(qq, k) == index_admissible(pp, perm[k]));
    }
  }
}

TEST_CASE("analyze") {
  const auto report = analyze(fixtures::experiment_tensor(), PVector::uniform(3, 3.0));
  CHECK(report.weakly_irreducible);
  CHECK_FALSE(report.irreducible);
  CHECK(report.admissible_indices.size() == 3);
  CHECK(report.chosen_index == 0u);

  const auto signed_report = analyze(fixtures::skew_matrix(), PVector::uniform(2, 2.0));
  CHECK_FALSE(signed_report.weakly_irreducible);
  CHECK_FALSE(signed_report.notes.empty());

  const auto zero_report = analyze(SparseTensor({2, 2}, {}), PVector::uniform(2, 2.0));
  CHECK_FALSE(zero_report.weakly_irreducible);
  CHECK_FALSE(zero_report.notes.empty());
  CHECK_THROWS_AS(analyze(fixtures::experiment_tensor(), PVector::uniform(2, 3.0)), Error);
}
