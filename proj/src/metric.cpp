#include "relfix/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace relfix {

// -- MetricTable --------------------------------------------------------------

MetricTable::MetricTable(int n) : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {
  if (n < 1 || n > kMaxPoints)
    throw Error("metric carrier size must be in [1, " + std::to_string(kMaxPoints) + "]");
}

MetricTable MetricTable::path(int n) {
  MetricTable m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.d_[static_cast<std::size_t>(i * n + j)] = std::abs(i - j);
  return m;
}

MetricTable MetricTable::uniform(int n) {
  MetricTable m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.d_[static_cast<std::size_t>(i * n + j)] = (i == j) ? 0.0 : 1.0;
  return m;
}

MetricTable MetricTable::from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  MetricTable m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw Error("metric row " + std::to_string(i) + " does not have " + std::to_string(n) +
                  " entries");
    for (int j = 0; j < n; ++j)
      m.d_[static_cast<std::size_t>(i * n + j)] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

double MetricTable::operator()(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw Error("metric index out of range");
  return d_[static_cast<std::size_t>(i * n_ + j)];
}

std::vector<std::vector<double>> MetricTable::rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    out[static_cast<std::size_t>(i)].assign(d_.begin() + i * n_, d_.begin() + (i + 1) * n_);
  }
  return out;
}

Witness validate_metric(const MetricTable& m, double tol) {
  const int n = m.size();
  for (int i = 0; i < n; ++i)
    if (std::abs(m(i, i)) > tol || !std::isfinite(m(i, i)))
      return Witness::fail({i}, "identity");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !(m(i, j) > tol && std::isfinite(m(i, j))))
        return Witness::fail({i, j}, "positivity");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return Witness::fail({i, j}, "symmetry");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (m(i, k) > m(i, j) + m(j, k) + tol) return Witness::fail({i, j, k}, "triangle");
  return Witness::pass();
}

// -- NumericLine / LineRelation / LineFormula ----------------------------------

NumericLine::NumericLine(double lo, double hi) : lower(lo), upper(hi) {
  if (!(lo <= hi)) throw Error("interval lower bound exceeds upper bound");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error("interval bounds must be finite");
}

bool LineRelation::related(double a, double b) const {
  switch (kind) {
    case Kind::Universal: return true;
    case Kind::Leq: return a <= b;
    case Kind::Geq: return a >= b;
    case Kind::PairList:
      for (auto [x, y] : pairs)
        if (std::abs(x - a) <= 1e-12 && std::abs(y - b) <= 1e-12) return true;
      return false;
  }
  return false;
}

double LineFormula::operator()(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, RationalShrinkMap>) {
          return x / (1.0 + x);
        } else if constexpr (std::is_same_v<F, ScaleMap>) {
          return f.alpha * x;
        } else {
          return x < f.at ? f.below : f.above;
        }
      },
      form_);
}

const char* LineFormula::name() const {
  switch (form_.index()) {
    case 0: return "x/(1+x)";
    case 1: return "alpha*x";
    default: return "step";
  }
}

// -- Cauchy-failure extraction --------------------------------------------------

namespace {

/// Range max/min tree over the sample values, answering "first index >= from
/// whose value exceeds hi (or undercuts lo)".
class RangeExtrema {
 public:
  explicit RangeExtrema(std::span<const double> xs) : n_(xs.size()) {
    size_ = 1;
    while (size_ < n_) size_ <<= 1;
    maxv_.assign(2 * size_, -std::numeric_limits<double>::infinity());
    minv_.assign(2 * size_, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n_; ++i) {
      maxv_[size_ + i] = xs[i];
      minv_[size_ + i] = xs[i];
    }
    for (std::size_t v = size_ - 1; v >= 1; --v) {
      maxv_[v] = std::max(maxv_[2 * v], maxv_[2 * v + 1]);
      minv_[v] = std::min(minv_[2 * v], minv_[2 * v + 1]);
    }
  }

  std::size_t first_above(std::size_t from, double hi) const {
    return descend(from, [&](std::size_t node) { return maxv_[node] > hi; });
  }
  std::size_t first_below(std::size_t from, double lo) const {
    return descend(from, [&](std::size_t node) { return minv_[node] < lo; });
  }
  std::size_t npos() const { return n_; }

 private:
  template <typename Hits>
  std::size_t descend(std::size_t from, Hits hits) const {
    if (from >= n_) return n_;
    std::size_t result = n_;
    // Walk the canonical node decomposition of [from, n_) left to right.
    std::size_t l = from + size_, r = n_ + size_;
    std::vector<std::size_t> right_side;
    while (l < r) {
      if (l & 1) {
        if (result == n_ && hits(l)) return dig(l, hits);
        ++l;
      }
      if (r & 1) {
        --r;
        right_side.push_back(r);
      }
      l >>= 1;
      r >>= 1;
    }
    for (auto it = right_side.rbegin(); it != right_side.rend(); ++it)
      if (hits(*it)) return dig(*it, hits);
    return n_;
  }

  template <typename Hits>
  std::size_t dig(std::size_t node, Hits hits) const {
    while (node < size_) {
      node *= 2;
      if (!hits(node)) ++node;
    }
    return node - size_;
  }

  std::size_t n_;
  std::size_t size_;
  std::vector<double> maxv_, minv_;
};

}  // namespace

std::optional<CauchyWitness> cauchy_failure_witness(std::span<const double> xs, double epsilon) {
  if (xs.size() < 2) throw Error("sequence must contain at least two samples");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");

  const RangeExtrema tree(xs);
  const std::size_t len = xs.size();
  CauchyWitness w;
  w.epsilon = epsilon;

  // The least admissible index is nondecreasing as k grows, so a single
  // forward pointer visits every candidate once.
  std::size_t m = 1;  // m_k >= k and k starts at 1
  for (std::int64_t k = 1;; ++k) {
    m = std::max(m, static_cast<std::size_t>(k));
    std::size_t n = tree.npos();
    while (m + 1 < len) {
      n = std::min(tree.first_above(m + 1, xs[m] + epsilon), tree.first_below(m + 1, xs[m] - epsilon));
      if (n < len) break;
      ++m;
    }
    if (m + 1 >= len || n >= len) break;
    w.m_indices.push_back(static_cast<std::int64_t>(m));
    w.n_indices.push_back(static_cast<std::int64_t>(n));
  }

  if (w.m_indices.empty()) return std::nullopt;
  assert_cauchy_witness(w, xs);
  return w;
}

void assert_cauchy_witness(const CauchyWitness& w, std::span<const double> xs) {
  if (w.m_indices.size() != w.n_indices.size()) throw Error("witness index lists differ in length");
  if (!(w.epsilon > 0.0)) throw Error("witness epsilon must be positive");
  const auto len = static_cast<std::int64_t>(xs.size());
  for (std::size_t i = 0; i < w.m_indices.size(); ++i) {
    const std::int64_t k = static_cast<std::int64_t>(i) + 1;
    const std::int64_t mk = w.m_indices[i];
    const std::int64_t nk = w.n_indices[i];
    if (!(k <= mk && mk < nk && nk < len))
      throw Error("witness ordering k <= m_k < n_k violated at k=" + std::to_string(k));
    const double far = NumericLine::distance(xs[static_cast<std::size_t>(mk)], xs[static_cast<std::size_t>(nk)]);
    if (!(far > w.epsilon))
      throw Error("witness distance not above epsilon at k=" + std::to_string(k));
    const double near = NumericLine::distance(xs[static_cast<std::size_t>(mk)], xs[static_cast<std::size_t>(nk - 1)]);
    if (!(near <= w.epsilon))
      throw Error("witness pre-crossing distance above epsilon at k=" + std::to_string(k));
  }
}

// -- finite-mode sequence diagnostics ------------------------------------------

Witness is_d_self_closed(const FiniteRelation& r, const MetricTable& m) {
  if (r.carrier_size() != m.size())
    throw Error("relation and metric live on different carriers");
  if (r.is_empty())
    return Witness::pass("vacuous: the empty relation admits no relation-preserving sequences");
  return Witness::pass("finite-discrete");
}

Witness is_R_continuous_at(const SelfMap& t, const FiniteRelation& r, const MetricTable& m, int x) {
  if (t.carrier_size() != r.carrier_size() || r.carrier_size() != m.size())
    throw Error("self-map, relation and metric live on different carriers");
  if (x < 0 || x >= m.size()) throw Error("point index out of range");
  return Witness::pass("finite-discrete");
}

// -- continuous-mode sampled diagnostics ---------------------------------------

namespace {

void require_line_preserving(const LineRelation& rel, std::span<const double> xs) {
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!rel.related(xs[i], xs[i + 1]))
      throw Error("sample sequence is not relation-preserving at step " + std::to_string(i));
}

}  // namespace

Witness line_d_self_closed_check(const LineRelation& rel, std::span<const double> xs, double limit) {
  if (xs.size() < 2) throw Error("sample sequence must contain at least two points");
  require_line_preserving(rel, xs);

  std::vector<int> comparative_indices;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (rel.comparative(xs[i], limit)) comparative_indices.push_back(static_cast<int>(i));

  const std::size_t window = std::max<std::size_t>(1, xs.size() / 10);
  const bool recurs = !comparative_indices.empty() &&
                      static_cast<std::size_t>(comparative_indices.back()) + window >= xs.size();
  if (!recurs)
    return Witness::fail({}, "no subsequence stays comparative with the limit");
  Witness w = Witness::pass("subsequence comparative with the limit");
  w.subset = std::move(comparative_indices);
  return w;
}

Witness line_R_continuity_check(const LineFormula& map, const LineRelation& rel,
                                std::span<const double> xs, double limit, double tol) {
  if (xs.size() < 2) throw Error("sample sequence must contain at least two points");
  require_line_preserving(rel, xs);

  // The image gaps |T(x_n) - T(limit)| must at least halve from the first
  // half of the samples to the second, down to the tolerance floor. A jump at
  // the limit keeps the gap pinned at the jump height and fails.
  const double image_limit = map(limit);
  const std::size_t half = xs.size() / 2;
  double head = 0.0;
  for (std::size_t i = 0; i < half; ++i)
    head = std::max(head, NumericLine::distance(map(xs[i]), image_limit));
  double worst = -1.0;
  std::size_t worst_index = half;
  for (std::size_t i = half; i < xs.size(); ++i) {
    const double gt = NumericLine::distance(map(xs[i]), image_limit);
    if (gt > worst) {
      worst = gt;
      worst_index = i;
    }
  }
  if (worst > std::max(tol, 0.5 * head))
    return Witness::fail({static_cast<int>(worst_index)},
                         "image gaps do not shrink along the sequence");
  return Witness::pass("image gaps shrink along the sequence");
}

}  // namespace relfix
