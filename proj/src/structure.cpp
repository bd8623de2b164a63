#include "tensornorm/structure.hpp"

#include <algorithm>
#include <limits>

#include "tensornorm/error.hpp"

namespace tensornorm {

namespace {

void require_nonnegative(const SparseTensor& f) {
  if (!f.is_nonnegative()) {
    throw Error(ErrorCode::NegativeEntry, "structure analysis requires a nonnegative tensor");
  }
}

}  // namespace

ModeGraph::ModeGraph(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  offsets_.push_back(0);
  for (std::size_t d : dims_) offsets_.push_back(offsets_.back() + d);
  adjacency_.resize(offsets_.back());
}

ModeGraph::Vertex ModeGraph::vertex(std::size_t id) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
  const auto mode = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return {mode, id - offsets_[mode]};
}

void ModeGraph::add_edge(std::size_t a, std::size_t b) {
  auto insert = [](std::vector<std::size_t>& list, std::size_t v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) list.insert(it, v);
  };
  insert(adjacency_[a], b);
  insert(adjacency_[b], a);
}

bool ModeGraph::has_edge(std::size_t a, std::size_t b) const {
  return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

std::size_t ModeGraph::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

bool ModeGraph::is_connected() const {
  const std::size_t n = vertex_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

ModeGraph build_graph(const SparseTensor& f) {
  require_nonnegative(f);
  ModeGraph g(f.dims());
  const std::size_t m = f.order();
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    auto idx = f.index(e);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t l = k + 1; l < m; ++l) g.add_edge(g.id(k, idx[k]), g.id(l, idx[l]));
    }
  }
  return g;
}

bool is_weakly_irreducible(const SparseTensor& f) {
  return build_graph(f).is_connected();
}

bool is_irreducible(const SparseTensor& f) {
  require_nonnegative(f);
  if (f.is_zero()) return false;
  const std::size_t m = f.order();
  const auto& dims = f.dims();
  std::vector<std::size_t> offsets{0};
  for (std::size_t d : dims) offsets.push_back(offsets.back() + d);
  const std::size_t n = offsets.back();

  std::vector<std::size_t> pick(m, 0);
  std::vector<char> support(n);
  while (true) {
    std::fill(support.begin(), support.end(), 0);
    for (std::size_t k = 0; k < m; ++k) support[offsets[k] + pick[k]] = 1;
    std::size_t size = m;
    bool grew = true;
    while (grew && size < n) {
      grew = false;
      for (std::size_t e = 0; e < f.nnz(); ++e) {
        auto idx = f.index(e);
        std::size_t outside = m;
        std::size_t missing = 0;
        for (std::size_t k = 0; k < m && missing < 2; ++k) {
          if (!support[offsets[k] + idx[k]]) {
            outside = k;
            ++missing;
          }
        }
        if (missing == 1) {
          support[offsets[outside] + idx[outside]] = 1;
          ++size;
          grew = true;
        }
      }
    }
    if (size < n) return false;

    std::size_t k = 0;
    while (k < m && ++pick[k] == dims[k]) pick[k++] = 0;
    if (k == m) return true;
  }
}

TupleVector t_alpha_step(const SparseTensor& f, const PVector& p, std::span<const double> alpha,
                         const TupleVector& z) {
  detail::check_p(f, p);
  if (alpha.size() != f.order() + 1) {
    throw Error(ErrorCode::ShapeMismatch, "alpha needs m + 1 weights");
  }
  for (double a : alpha) {
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha weights must be positive");
  }
  TupleVector out = z;
  for (std::size_t k = 0; k < f.order(); ++k) {
    const Vector s = sigma(f, p, k, z);
    for (std::size_t j = 0; j < s.size(); ++j) {
      out.parts[k][j] = alpha[0] * z.parts[k][j] + alpha[k + 1] * s[j];
    }
  }
  return out;
}

bool index_admissible(const PVector& p, std::size_t i) {
  const std::size_t m = p.size();
  if (m < 2 || i >= m) return false;
  const double lhs = static_cast<double>(m - 1) * p[i];
  for (std::size_t k = 0; k < m; ++k) {
    if (k != i && !(lhs <= p[k] * (p[i] - 1.0))) return false;
  }
  return true;
}

std::vector<std::size_t> admissible_indices(const PVector& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (index_admissible(p, i)) out.push_back(i);
  }
  if (p.size() == 2) {
    std::stable_partition(out.begin(), out.end(),
                          [&](std::size_t i) { return p[i] <= p[1 - i]; });
  }
  return out;
}

std::optional<std::size_t> chosen_index(const PVector& p) {
  const std::size_t m = p.size();
  std::optional<std::size_t> best;
  double best_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t i : admissible_indices(p)) {
    if (m == 2 && p[i] > p[1 - i]) continue;
    double min_other = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      if (k != i) min_other = std::min(min_other, p[k]);
    }
    const double mm1 = static_cast<double>(m - 1);
    const double slack = (p[i] - 1.0) * (min_other - mm1) - mm1;
    if (!best || slack > best_slack || (slack == best_slack && i < *best)) {
      best = i;
      best_slack = slack;
    }
  }
  return best;
}

StructureReport analyze(const SparseTensor& f, const PVector& p) {
  detail::check_p(f, p);
  StructureReport report;
  if (f.is_nonnegative()) {
    report.weakly_irreducible = is_weakly_irreducible(f);
    report.irreducible = report.weakly_irreducible && is_irreducible(f);
  } else {
    report.notes.push_back("tensor has negative entries; irreducibility is undefined");
  }
  if (f.is_zero()) report.notes.push_back("tensor is zero");
  report.admissible_indices = admissible_indices(p);
  report.chosen_index = chosen_index(p);
  return report;
}

}  // namespace tensornorm
