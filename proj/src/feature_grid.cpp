#include "grf/feature_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grf {

namespace {

// Inclusive per-axis grid index range covering [lo, hi], or empty.
bool axis_range(const Box& box, int axis, double lo, double hi, int& first, int& last) {
  const int res = box.resolution()[axis];
  const double scale = res / box.width(axis);
  first = std::max(0, static_cast<int>(std::floor((lo - box.lower()[axis]) * scale)));
  last = std::min(res, static_cast<int>(std::ceil((hi - box.lower()[axis]) * scale)));
  return first <= last;
}

}  // namespace

FeatureGrid::FeatureGrid(std::vector<const BasisFunction*> functions, const Box& box, int order)
    : functions_(std::move(functions)),
      box_(box),
      order_(order),
      num_points_(box.num_points()),
      indices_(multi_indices_up_to(box.dim(), order)) {
  if (order < 0) throw std::invalid_argument("order must be non-negative");
  for (const auto* f : functions_) {
    if (f->input_dim() != box.dim()) throw std::invalid_argument("basis dimension differs from box");
    if (k_ == 0) k_ = f->output_dim();
    if (f->output_dim() != k_) throw std::invalid_argument("basis functions disagree on output dimension");
  }
  if (k_ == 0) k_ = 1;

  const std::size_t n_alpha = indices_.size();
  struct Cell {
    std::vector<std::uint32_t> features;
    std::vector<double> values;
  };
  std::vector<Cell> cells(n_alpha * num_points_);
  support_points_.resize(functions_.size());
  const int m = box.dim();

  std::vector<Point> grid = box.grid();
  for (std::size_t n = 0; n < functions_.size(); ++n) {
    const BasisFunction& f = *functions_[n];
    const Vector& amp = f.amplitude();
    std::vector<std::uint32_t>& support = support_points_[n];

    auto visit_point = [&](std::size_t g) {
      const Point& p = grid[g];
      if (f.vanishes_near(p)) return;
      bool any = false;
      for (std::size_t a = 0; a < n_alpha; ++a) {
        const double s = f.profile_partial(p, indices_[a]);
        if (s == 0.0) continue;
        Cell& cell = cells[a * num_points_ + g];
        cell.features.push_back(static_cast<std::uint32_t>(n));
        for (int j = 0; j < k_; ++j) cell.values.push_back(s * amp[j]);
        any = true;
      }
      if (any) support.push_back(static_cast<std::uint32_t>(g));
    };

    const auto bounds = f.support_bounds();
    if (!bounds) {
      for (std::size_t g = 0; g < num_points_; ++g) visit_point(g);
      continue;
    }
    std::vector<int> first(m), last(m);
    bool empty = false;
    for (int axis = 0; axis < m; ++axis)
      empty |= !axis_range(box, axis, bounds->first[axis], bounds->second[axis], first[axis], last[axis]);
    if (empty) continue;
    // Odometer over the sub-grid; row-major so support stays sorted.
    std::vector<int> idx = first;
    while (true) {
      std::size_t flat = 0;
      for (int axis = 0; axis < m; ++axis)
        flat = flat * (static_cast<std::size_t>(box.resolution()[axis]) + 1) + idx[axis];
      visit_point(flat);
      int axis = m - 1;
      while (axis >= 0 && idx[axis] == last[axis]) {
        idx[axis] = first[axis];
        --axis;
      }
      if (axis < 0) break;
      ++idx[axis];
    }
  }

  row_ptr_.reserve(cells.size() + 1);
  row_ptr_.push_back(0);
  for (const Cell& c : cells) {
    features_.insert(features_.end(), c.features.begin(), c.features.end());
    values_.insert(values_.end(), c.values.begin(), c.values.end());
    row_ptr_.push_back(features_.size());
  }
}

FeatureGrid::Row FeatureGrid::row(std::size_t alpha_index, std::size_t point) const {
  const std::size_t r = alpha_index * num_points_ + point;
  const std::size_t b = row_ptr_[r], e = row_ptr_[r + 1];
  return Row{std::span(features_).subspan(b, e - b),
             std::span(values_).subspan(b * k_, (e - b) * k_)};
}

void FeatureGrid::combine(std::size_t alpha_index, std::size_t point, std::span<const double> coeffs,
                          std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const Row r = row(alpha_index, point);
  for (std::size_t e = 0; e < r.features.size(); ++e) {
    const double c = coeffs[r.features[e]];
    for (int j = 0; j < k_; ++j) out[j] += c * r.values[e * k_ + j];
  }
}

}  // namespace grf
