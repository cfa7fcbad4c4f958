#pragma once

#include <cstddef>
#include <vector>

#include "grf/types.hpp"

namespace grf {

/// Axis-aligned compact box in R^m with a tensor grid of (res_i + 1) points
/// per axis, endpoints included. Grid points are indexed row-major with the
/// first axis slowest, which coincides with lexicographic order of the
/// per-axis grid coordinates.
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper, std::vector<int> resolution);
  /// Box with the default resolution for its dimension on every axis.
  Box(std::vector<double> lower, std::vector<double> upper);

  /// [0,1]^m at the default resolution.
  static Box unit(int dim);
  /// 256 intervals per axis for m = 1, 64 for m = 2, 16 beyond.
  static int default_resolution(int dim);

  int dim() const { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<int>& resolution() const { return resolution_; }
  double width(int axis) const { return upper_[axis] - lower_[axis]; }

  std::size_t num_points() const;
  Point point(std::size_t flat_index) const;
  std::vector<Point> grid() const;

  /// Same box, new resolution on every axis.
  Box with_resolution(int res) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<int> resolution_;
};

}  // namespace grf
