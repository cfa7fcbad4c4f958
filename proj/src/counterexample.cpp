#include "grf/counterexample.hpp"

#include <cmath>
#include <stdexcept>

#include "grf/kernel.hpp"
#include "grf/normal.hpp"

namespace grf::counterexample {

namespace {

constexpr int kStepsPerWidth = 4096;
constexpr int kLeadSteps = 410;

void check(const Config& config) {
  if (config.n < 2) throw std::invalid_argument("counterexample needs n >= 2");
  if (config.box.dim() != 1) throw std::invalid_argument("counterexample box must be 1-dimensional");
}

}  // namespace

double a_n(int n) {
  if (n < 2) throw std::invalid_argument("a_n needs n >= 2");
  return normal_quantile(1.0 - 1.0 / (2.0 * n));
}

std::vector<double> bump_centers(const Config& config) {
  check(config);
  const int count = config.n * config.n;
  const double lo = config.box.lower()[0], w = config.box.width(0);
  std::vector<double> c(count);
  for (int i = 0; i < count; ++i) c[i] = lo + w * (2.0 * i + 1.0) / (2.0 * count);
  return c;
}

double bump_radius(const Config& config) {
  check(config);
  return config.box.width(0) / (2.0 * config.n * config.n) * (1.0 - kGap);
}

FieldPtr build_X_n(const Config& config) {
  const double radius = bump_radius(config);
  const double sigma = 1.0 / a_n(config.n);
  std::vector<BasisFunction> basis;
  for (double c : bump_centers(config)) basis.push_back(BasisFunction::bump_1d(c, radius));
  std::vector<double> sigmas(basis.size(), sigma);
  return make_field(KLField(1, 1, std::move(basis), std::move(sigmas)));
}

Box aligned_grid(const Config& config, int min_resolution) {
  check(config);
  const int unit = 2 * config.n * config.n;
  const int mult = std::max(1, (min_resolution + unit - 1) / unit);
  return config.box.with_resolution(unit * mult);
}

double exact_small_norm_prob(int n) {
  if (n < 2) throw std::invalid_argument("exact_small_norm_prob needs n >= 2");
  return std::pow(1.0 - 1.0 / n, static_cast<double>(n) * n);
}

std::vector<double> kernel_sup_decay(const std::vector<int>& n_values, int threads) {
  std::vector<double> out;
  for (int n : n_values) {
    Config cfg{n};
    const auto field = build_X_n(cfg);
    out.push_back(kernel_seminorm(CovarianceKernel::from_field(field), {aligned_grid(cfg), 0}, threads));
  }
  return out;
}

IntegratedPath build_Y_n(const Config& config, const SamplePath& x_path) {
  check(config);
  if (config.order < 1) throw std::invalid_argument("integration order must be >= 1");
  const double h = config.box.width(0) / kStepsPerWidth;
  const double base = config.box.lower()[0] - kLeadSteps * h;
  const int count = kLeadSteps + kStepsPerWidth + 1;
  const int r = config.order;

  IntegratedPath y{base, h, r, std::vector<double>(count), std::vector<double>(count, 0.0)};
  std::vector<double> x(count);
  for (int i = 0; i < count; ++i) {
    y.nodes[i] = base + i * h;
    x[i] = x_path.eval(Vector::Constant(1, y.nodes[i]))[0];
  }
  double fact = 1.0;
  for (int i = 2; i < r; ++i) fact *= i;

  for (int j = 1; j < count; ++j) {
    auto integrand = [&](int i) { return std::pow(y.nodes[j] - y.nodes[i], r - 1) / fact * x[i]; };
    double sum = 0.0;
    if (j == 1) {
      sum = 0.5 * h * (integrand(0) + integrand(1));
    } else {
      // Simpson over an even number of intervals, then 3/8 for the last three
      // when j is odd.
      const int even_end = (j % 2 == 0) ? j : j - 3;
      if (even_end > 0) {
        double s = integrand(0) + integrand(even_end);
        for (int i = 1; i < even_end; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(i);
        sum += s * h / 3.0;
      }
      if (even_end != j)
        sum += 3.0 * h / 8.0 *
               (integrand(j - 3) + 3.0 * integrand(j - 2) + 3.0 * integrand(j - 1) + integrand(j));
    }
    y.values[j] = sum;
  }
  return y;
}

double derivative_mismatch(const IntegratedPath& y, const SamplePath& x_path) {
  std::vector<double> d = y.values;
  const double h = y.step;
  int lost = 0;  // nodes invalid at each end
  for (int pass = 0; pass < y.order / 2; ++pass) {
    std::vector<double> next(d.size(), 0.0);
    for (std::size_t i = 1; i + 1 < d.size(); ++i) next[i] = (d[i + 1] - 2.0 * d[i] + d[i - 1]) / (h * h);
    d = std::move(next);
    ++lost;
  }
  if (y.order % 2 == 1) {
    std::vector<double> next(d.size(), 0.0);
    for (std::size_t i = 1; i + 1 < d.size(); ++i) next[i] = (d[i + 1] - d[i - 1]) / (2.0 * h);
    d = std::move(next);
    ++lost;
  }
  double worst = 0.0;
  for (std::size_t i = lost; i + lost < d.size(); ++i) {
    const double exact = x_path.eval(Vector::Constant(1, y.nodes[i]))[0];
    worst = std::max(worst, std::abs(d[i] - exact));
  }
  return worst;
}

Row report_row(int n, const McOptions& opts) {
  Config cfg{n};
  const auto field = build_X_n(cfg);
  const Box grid = aligned_grid(cfg);
  Row row;
  row.n = n;
  row.a_n = a_n(n);
  row.exact_prob = exact_small_norm_prob(n);
  row.mc = estimate_probability(field, SupNormBelow{grid, 0, 1.0}, opts);
  row.kernel_sup = kernel_seminorm(CovarianceKernel::from_field(field), {grid, 0}, opts.threads);
  return row;
}

}  // namespace grf::counterexample
