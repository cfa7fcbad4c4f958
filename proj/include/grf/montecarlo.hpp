#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grf/event.hpp"
#include "grf/field.hpp"
#include "grf/kernel.hpp"

namespace grf {

inline constexpr double kZ95 = 1.96;

/// Monte Carlo estimate. For indicator events p_hat is a frequency,
/// std_error = √(p̂(1−p̂)/n) and the 95% interval is clamped to [0,1]; for
/// real-valued statistics p_hat is the sample mean and std_error uses the
/// sample standard deviation.
struct MCEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool indicator = true;
};

MCEstimate indicator_estimate(std::size_t hits, std::size_t n, std::uint64_t seed);
/// Mean with compensated summation over `values` in order.
MCEstimate mean_estimate(const std::vector<double>& values, std::uint64_t seed);

struct McOptions {
  std::size_t n_samples = 20000;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Fraction of sampled paths (sample i drawn from stream (seed, i)) on
/// which the event holds. Requires n_samples >= 100.
MCEstimate estimate_probability(const FieldPtr& field, const EventSpec& event, const McOptions& opts = {});

/// Monte Carlo mean of the grid seminorm ‖X‖_{box,r}.
MCEstimate empirical_sup_mean(const FieldPtr& field, const Box& box, int r, const McOptions& opts = {});

struct GaussianRatio {
  double ratio = 0.0;
  bool zero_denominator = false;
  MCEstimate sup_mean;     ///< E‖X‖_{box,r−1}
  double kernel_seminorm;  ///< ‖K‖_{box×box,(r,r)}
};

/// E‖X‖_{box,r−1} / √‖K‖_{(r,r)}; r >= 1. A zero denominator yields ratio 0
/// with `zero_denominator` set.
GaussianRatio gaussian_ratio(const FieldPtr& field, const Box& box, int r, const McOptions& opts = {});

struct LimitRow {
  std::string label;
  double kernel_distance;
  MCEstimate estimate;
};

/// One row per field, then one for the limit field (distance 0). Kernel
/// distances to the limit use order `distance_order` (default r + 2) on
/// `box`. Every row reuses the same seed, so estimates share random numbers.
/// The caller is responsible for choosing events whose boundary has zero
/// probability under the limit law.
std::vector<LimitRow> limit_study(const std::vector<FieldPtr>& fields, const FieldPtr& limit,
                                  const EventSpec& event, const Box& box, int r, const McOptions& opts = {},
                                  std::optional<int> distance_order = std::nullopt);

}  // namespace grf
