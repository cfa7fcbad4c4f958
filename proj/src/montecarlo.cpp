#include "grf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "grf/parallel.hpp"
#include "grf/random.hpp"

namespace grf {

int default_thread_count() {
  if (const char* env = std::getenv("GRFLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

namespace {

// Neumaier summation, deterministic for a fixed input order.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void check_samples(const McOptions& opts) {
  if (opts.n_samples < 100) throw std::invalid_argument("Monte Carlo needs at least 100 samples");
}

// Draws sample i into coeffs.
void draw(const KLField& field, std::uint64_t seed, std::size_t i, std::vector<double>& coeffs) {
  RandomStream rng(seed, i);
  coeffs.resize(field.size());
  for (std::size_t n = 0; n < field.size(); ++n) coeffs[n] = field.sigmas()[n] * rng.normal();
}

}  // namespace

MCEstimate indicator_estimate(std::size_t hits, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("empty sample");
  MCEstimate e;
  e.n_samples = n;
  e.seed = seed;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  e.ci_low = std::clamp(e.p_hat - kZ95 * e.std_error, 0.0, 1.0);
  e.ci_high = std::clamp(e.p_hat + kZ95 * e.std_error, 0.0, 1.0);
  e.indicator = true;
  return e;
}

MCEstimate mean_estimate(const std::vector<double>& values, std::uint64_t seed) {
  if (values.size() < 2) throw std::invalid_argument("mean estimate needs at least two values");
  const double n = static_cast<double>(values.size());
  const double mean = compensated_sum(values) / n;
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [mean](double v) { return (v - mean) * (v - mean); });
  const double sd = std::sqrt(compensated_sum(sq) / (n - 1.0));
  MCEstimate e;
  e.n_samples = values.size();
  e.seed = seed;
  e.p_hat = mean;
  e.std_error = sd / std::sqrt(n);
  e.ci_low = mean - kZ95 * e.std_error;
  e.ci_high = mean + kZ95 * e.std_error;
  e.indicator = false;
  return e;
}

MCEstimate estimate_probability(const FieldPtr& field, const EventSpec& event, const McOptions& opts) {
  check_samples(opts);
  const EventEvaluator evaluator(*field, event);
  std::vector<std::size_t> hits(std::max(opts.threads, 1), 0);
  parallel_for(opts.n_samples, opts.threads, [&](std::size_t begin, std::size_t end, int w) {
    std::vector<double> coeffs, scratch;
    for (std::size_t i = begin; i < end; ++i) {
      draw(*field, opts.seed, i, coeffs);
      if (evaluator.evaluate(coeffs, scratch)) ++hits[w];
    }
  });
  std::size_t total = 0;
  for (std::size_t h : hits) total += h;
  return indicator_estimate(total, opts.n_samples, opts.seed);
}

MCEstimate empirical_sup_mean(const FieldPtr& field, const Box& box, int r, const McOptions& opts) {
  check_samples(opts);
  const FeatureGrid grid(field->basis_pointers(), box, r);
  std::vector<double> values(opts.n_samples);
  parallel_for(opts.n_samples, opts.threads, [&](std::size_t begin, std::size_t end, int) {
    std::vector<double> coeffs, scratch;
    for (std::size_t i = begin; i < end; ++i) {
      draw(*field, opts.seed, i, coeffs);
      values[i] = grid_seminorm(grid, coeffs, scratch);
    }
  });
  return mean_estimate(values, opts.seed);
}

GaussianRatio gaussian_ratio(const FieldPtr& field, const Box& box, int r, const McOptions& opts) {
  if (r < 1) throw std::invalid_argument("gaussian_ratio needs r >= 1");
  GaussianRatio out;
  out.sup_mean = empirical_sup_mean(field, box, r - 1, opts);
  out.kernel_seminorm = kernel_seminorm(CovarianceKernel::from_field(field), {box, r}, opts.threads);
  if (out.kernel_seminorm <= 0.0) {
    out.zero_denominator = true;
    out.ratio = 0.0;
  } else {
    out.ratio = out.sup_mean.p_hat / std::sqrt(out.kernel_seminorm);
  }
  return out;
}

std::vector<LimitRow> limit_study(const std::vector<FieldPtr>& fields, const FieldPtr& limit,
                                  const EventSpec& event, const Box& box, int r, const McOptions& opts,
                                  std::optional<int> distance_order) {
  const int order = distance_order.value_or(r + 2);
  const CovarianceKernel limit_kernel = CovarianceKernel::from_field(limit);
  std::vector<LimitRow> rows;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i]->m() != limit->m() || fields[i]->k() != limit->k())
      throw std::invalid_argument("limit_study fields must share (m, k)");
    const double d = kernel_distance(CovarianceKernel::from_field(fields[i]), limit_kernel, {box, order}, opts.threads);
    rows.push_back({"field_" + std::to_string(i), d, estimate_probability(fields[i], event, opts)});
  }
  rows.push_back({"limit", 0.0, estimate_probability(limit, event, opts)});
  return rows;
}

}  // namespace grf
