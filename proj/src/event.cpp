#include "grf/event.hpp"

#include <cmath>
#include <stdexcept>

namespace grf {

std::string_view event_name(const EventSpec& e) {
  return std::visit(
      [](const auto& x) -> std::string_view {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SupNormBelow>) return "sup_norm_below";
        else if constexpr (std::is_same_v<T, ZeroCountEquals>) return "zero_count_equals";
        else if constexpr (std::is_same_v<T, PositiveOnBox>) return "positive_on_box";
        else return "degenerate_zero";
      },
      e);
}

const Box& event_box(const EventSpec& e) {
  return std::visit([](const auto& x) -> const Box& { return x.box; }, e);
}

int event_order(const EventSpec& e) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SupNormBelow>) return x.order;
        else if constexpr (std::is_same_v<T, DegenerateZero>) return 1;
        else return 0;
      },
      e);
}

int count_zeros(std::span<const double> values) {
  int count = 0;
  int prev = 0;
  for (double v : values) {
    if (v == 0.0) {
      ++count;
      prev = 0;
      continue;
    }
    const int s = v > 0.0 ? 1 : -1;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

double grid_seminorm(const FeatureGrid& grid, std::span<const double> coeffs, std::vector<double>& scratch) {
  scratch.resize(grid.output_dim());
  double sup = 0.0;
  for (std::size_t a = 0; a < grid.indices().size(); ++a) {
    for (std::size_t g = 0; g < grid.num_points(); ++g) {
      grid.combine(a, g, coeffs, scratch);
      for (double v : scratch) sup = std::max(sup, std::abs(v));
    }
  }
  return sup;
}

namespace {

void require_scalar_line(const KLField& field, const Box& box, std::string_view what) {
  if (field.m() != 1 || field.k() != 1 || box.dim() != 1)
    throw std::invalid_argument(std::string(what) + " requires m = k = 1");
}

}  // namespace

EventEvaluator::EventEvaluator(const KLField& field, EventSpec event)
    : event_(std::move(event)),
      grid_(field.basis_pointers(), event_box(event_), event_order(event_)),
      k_(field.k()) {
  if (event_box(event_).dim() != field.m()) throw std::invalid_argument("event box dimension differs from field");
  if (std::holds_alternative<ZeroCountEquals>(event_)) require_scalar_line(field, event_box(event_), "zero_count_equals");
  if (std::holds_alternative<DegenerateZero>(event_)) require_scalar_line(field, event_box(event_), "degenerate_zero");
  if (const auto* s = std::get_if<SupNormBelow>(&event_); s && s->order < 0)
    throw std::invalid_argument("sup_norm_below order must be non-negative");
}

bool EventEvaluator::evaluate(std::span<const double> coeffs, std::vector<double>& scratch) const {
  const std::size_t n_points = grid_.num_points();
  return std::visit(
      [&](const auto& ev) -> bool {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, SupNormBelow>) {
          return grid_seminorm(grid_, coeffs, scratch) < ev.threshold;
        } else if constexpr (std::is_same_v<T, ZeroCountEquals>) {
          scratch.resize(n_points);
          for (std::size_t g = 0; g < n_points; ++g)
            grid_.combine(0, g, coeffs, std::span<double>(&scratch[g], 1));
          return count_zeros(scratch) == ev.count;
        } else if constexpr (std::is_same_v<T, PositiveOnBox>) {
          scratch.resize(k_);
          for (std::size_t g = 0; g < n_points; ++g) {
            grid_.combine(0, g, coeffs, scratch);
            for (double v : scratch)
              if (!(v > 0.0)) return false;
          }
          return true;
        } else {
          // Index 0 is α = (0), index 1 is α = (1) for m = 1.
          double value = 0.0, deriv = 0.0;
          for (std::size_t g = 0; g < n_points; ++g) {
            grid_.combine(0, g, coeffs, std::span<double>(&value, 1));
            if (std::abs(value) >= ev.value_eps) continue;
            grid_.combine(1, g, coeffs, std::span<double>(&deriv, 1));
            if (std::abs(deriv) < ev.deriv_eps) return true;
          }
          return false;
        }
      },
      event_);
}

bool EventEvaluator::holds(const SamplePath& path) const {
  std::vector<double> scratch;
  return evaluate(std::span<const double>(path.coeffs().data(), path.coeffs().size()), scratch);
}

}  // namespace grf
