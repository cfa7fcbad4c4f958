#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "grf/basis.hpp"
#include "grf/box.hpp"
#include "grf/multi_index.hpp"

namespace grf {

/// Tabulation of ∂_α f_n at every grid point of a box, for every |α| <= order
/// and every function f_n of a list. Rows are sparse in n: only nonzero
/// entries are kept, sorted by function index, so compactly supported
/// families (bumps) cost O(support) instead of O(N) per point.
class FeatureGrid {
 public:
  struct Row {
    std::span<const std::uint32_t> features;
    std::span<const double> values;  ///< k consecutive values per feature
  };

  FeatureGrid(std::vector<const BasisFunction*> functions, const Box& box, int order);

  const Box& box() const { return box_; }
  int order() const { return order_; }
  int output_dim() const { return k_; }
  std::size_t num_functions() const { return functions_.size(); }
  std::size_t num_points() const { return num_points_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  Row row(std::size_t alpha_index, std::size_t point) const;

  /// out[0..k) = Σ_n coeffs[n] ∂_α f_n(point).
  void combine(std::size_t alpha_index, std::size_t point, std::span<const double> coeffs,
               std::span<double> out) const;

  /// Grid points where function n is (possibly) nonzero for some α.
  const std::vector<std::uint32_t>& support_points(std::size_t function) const {
    return support_points_[function];
  }

  std::size_t nonzeros() const { return features_.size(); }

 private:
  std::vector<const BasisFunction*> functions_;
  Box box_;
  int order_;
  int k_ = 0;
  std::size_t num_points_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> features_;
  std::vector<double> values_;
  std::vector<std::vector<std::uint32_t>> support_points_;
};

}  // namespace grf
