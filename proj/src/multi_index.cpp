#include "grf/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace grf {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("multi-index entries must be non-negative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::zero(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

MultiIndex MultiIndex::unit(int dim, int axis, int power) {
  std::vector<int> e(dim, 0);
  e.at(axis) = power;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::lowered(int axis) const {
  if (entries_.at(axis) == 0) throw std::invalid_argument("cannot lower a zero entry");
  std::vector<int> e = entries_;
  --e[axis];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("multi-index dimension mismatch");
  std::vector<int> e = entries_;
  for (int i = 0; i < dim(); ++i) e[i] += other.entries_[i];
  return MultiIndex(std::move(e));
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int e : entries_) {
    for (int j = 2; j <= e; ++j) f *= j;
  }
  return f;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.order_ <=> b.order_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                b.entries_.begin(), b.entries_.end());
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& alpha) {
  os << '(';
  for (int i = 0; i < alpha.dim(); ++i) os << (i ? "," : "") << alpha[i];
  return os << ')';
}

namespace {

void enumerate_with_order(int dim, int axis, int remaining, std::vector<int>& cur,
                          std::vector<MultiIndex>& out) {
  if (axis == dim - 1) {
    cur[axis] = remaining;
    out.emplace_back(cur);
    return;
  }
  // Ascending lexicographic: smallest leading entry first.
  for (int e = 0; e <= remaining; ++e) {
    cur[axis] = e;
    enumerate_with_order(dim, axis + 1, remaining - e, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  std::vector<MultiIndex> out;
  if (max_order < 0) return out;
  out.reserve(binomial(dim + max_order, max_order));
  std::vector<int> cur(dim, 0);
  for (int order = 0; order <= max_order; ++order) {
    enumerate_with_order(dim, 0, order, cur, out);
  }
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) / i;
  return result;
}

}  // namespace grf
