#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace grf {

/// Multi-index α = (α_1, ..., α_m) of non-negative integers, the exponent
/// pattern of a partial derivative ∂_α.
///
/// Ordering is graded-lexicographic: first by total order |α|, then
/// lexicographically by entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int axis, int power = 1);

  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const { return order_; }
  int operator[](int axis) const { return entries_[axis]; }
  const std::vector<int>& entries() const { return entries_; }

  /// α − e_axis. Requires α[axis] > 0.
  MultiIndex lowered(int axis) const;
  /// α + β, entrywise.
  MultiIndex operator+(const MultiIndex& other) const;

  /// α! = Π α_i!.
  double factorial() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ == b.entries_;
  }
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                          const MultiIndex& b);

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& alpha);

/// All α of length `dim` with |α| <= max_order, in ascending graded-lex order.
/// The count is C(dim + max_order, max_order).
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);

/// Binomial coefficient C(n, k); 0 when k < 0 or k > n.
std::uint64_t binomial(int n, int k);

}  // namespace grf
