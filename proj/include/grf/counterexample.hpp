#pragma once

#include <vector>

#include "grf/box.hpp"
#include "grf/field.hpp"
#include "grf/montecarlo.hpp"

namespace grf::counterexample {

/// Relative gap left between neighbouring bump supports.
inline constexpr double kGap = 0.1;

/// n² unit-peak bumps on a 1-d box, bump i centered at
/// lower + width·(i − 1/2)/n² with radius width/(2n²)·(1 − kGap).
struct Config {
  int n = 2;
  Box box = Box({0.0}, {1.0});
  int order = 1;  ///< integration order r of Y_n
};

/// a_n with P{|γ| > a_n} = 1/n, i.e. Φ⁻¹(1 − 1/(2n)).
double a_n(int n);

std::vector<double> bump_centers(const Config& config);
double bump_radius(const Config& config);

/// X_n = (1/a_n) Σ_i γ_i φ_i: n² bumps, every σ_i = 1/a_n.
FieldPtr build_X_n(const Config& config);

/// The config's box with resolution the smallest multiple of 2n² that is at
/// least `min_resolution`, so every bump center is a grid point.
Box aligned_grid(const Config& config, int min_resolution = 256);

/// (1 − 1/n)^{n²}. Bumps are disjoint with peak 1, so sup|X_n| =
/// max_i |γ_i|/a_n and this is exactly P{‖X_n‖_0 < 1}.
double exact_small_norm_prob(int n);

/// kernel_seminorm(K_{X_n}, order 0) on the aligned grid, one per n.
std::vector<double> kernel_sup_decay(const std::vector<int>& n_values, int threads = 1);

/// r-fold iterated integral of a path, tabulated on nodes base + i·step.
struct IntegratedPath {
  double base;
  double step;
  int order;
  std::vector<double> nodes;
  std::vector<double> values;
};

/// Y_n(x) = ∫_c^x (x − s)^{r−1}/(r−1)! X_n(s) ds with c = lower − 410·step
/// (about a tenth of the width below the box) and step = width/4096, by
/// composite Simpson (3/8 rule closing odd node counts).
IntegratedPath build_Y_n(const Config& config, const SamplePath& x_path);

/// Sup over interior nodes of |D^r Y − X|, D^r a centered r-th difference.
double derivative_mismatch(const IntegratedPath& y, const SamplePath& x_path);

struct Row {
  int n;
  double a_n;
  double exact_prob;
  MCEstimate mc;
  double kernel_sup;
};

/// MC estimate of P{‖X_n‖_0 < 1} on the aligned grid next to the exact value.
Row report_row(int n, const McOptions& opts);

}  // namespace grf::counterexample
