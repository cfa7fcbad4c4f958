#include "grf/box.hpp"

#include <stdexcept>

namespace grf {

Box::Box(std::vector<double> lower, std::vector<double> upper, std::vector<int> resolution)
    : lower_(std::move(lower)), upper_(std::move(upper)), resolution_(std::move(resolution)) {
  if (lower_.empty()) throw std::invalid_argument("box dimension must be positive");
  if (upper_.size() != lower_.size() || resolution_.size() != lower_.size())
    throw std::invalid_argument("box bounds and resolution must have equal length");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) throw std::invalid_argument("box requires lower < upper");
    if (resolution_[i] < 1) throw std::invalid_argument("box resolution must be positive");
  }
}

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : Box(lower, std::move(upper),
          std::vector<int>(lower.size(), default_resolution(static_cast<int>(lower.size())))) {}

Box Box::unit(int dim) {
  return Box(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

int Box::default_resolution(int dim) {
  if (dim <= 1) return 256;
  if (dim == 2) return 64;
  return 16;
}

std::size_t Box::num_points() const {
  std::size_t n = 1;
  for (int r : resolution_) n *= static_cast<std::size_t>(r) + 1;
  return n;
}

Point Box::point(std::size_t flat_index) const {
  Point p(dim());
  for (int axis = dim() - 1; axis >= 0; --axis) {
    const std::size_t count = static_cast<std::size_t>(resolution_[axis]) + 1;
    const std::size_t i = flat_index % count;
    flat_index /= count;
    // Endpoints are hit exactly.
    p[axis] = i == count - 1
                  ? upper_[axis]
                  : lower_[axis] + width(axis) * static_cast<double>(i) / resolution_[axis];
  }
  return p;
}

std::vector<Point> Box::grid() const {
  std::vector<Point> pts;
  pts.reserve(num_points());
  for (std::size_t i = 0; i < num_points(); ++i) pts.push_back(point(i));
  return pts;
}

Box Box::with_resolution(int res) const {
  return Box(lower_, upper_, std::vector<int>(lower_.size(), res));
}

}  // namespace grf
