#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "grf/box.hpp"
#include "grf/feature_grid.hpp"
#include "grf/field.hpp"

namespace grf {

/// sup over the grid, |α| <= order and components of |∂_α X^j| is < threshold.
struct SupNormBelow {
  Box box;
  int order = 0;
  double threshold = 1.0;
};

/// Number of zeros of a scalar path on a 1-d grid equals `count`. Zeros are
/// strict sign changes between neighbouring grid values; a value of exactly 0
/// counts as one zero and restarts the sign scan.
struct ZeroCountEquals {
  Box box;
  int count = 0;
};

/// Every component strictly positive at every grid point.
struct PositiveOnBox {
  Box box;
};

/// Some grid point has |f| < value_eps and |f'| < deriv_eps (m = k = 1):
/// a near-miss of the zero section by the 1-jet.
struct DegenerateZero {
  Box box;
  double value_eps = 1e-3;
  double deriv_eps = 1e-3;
};

using EventSpec = std::variant<SupNormBelow, ZeroCountEquals, PositiveOnBox, DegenerateZero>;

std::string_view event_name(const EventSpec& e);
const Box& event_box(const EventSpec& e);
/// Highest derivative order the event inspects.
int event_order(const EventSpec& e);

/// Count of zeros in a sequence of grid values, per ZeroCountEquals.
int count_zeros(std::span<const double> values);

/// Precomputes the field's basis on the event grid so each path is decided
/// from its coefficient vector alone. evaluate() is const and safe to call
/// concurrently with distinct scratch buffers.
class EventEvaluator {
 public:
  EventEvaluator(const KLField& field, EventSpec event);

  const EventSpec& event() const { return event_; }
  bool evaluate(std::span<const double> coeffs, std::vector<double>& scratch) const;
  bool holds(const SamplePath& path) const;

 private:
  EventSpec event_;
  FeatureGrid grid_;
  int k_;
};

/// ‖X‖_{box,r} on the grid from coefficients, using a prebuilt tabulation.
double grid_seminorm(const FeatureGrid& grid, std::span<const double> coeffs, std::vector<double>& scratch);

}  // namespace grf
