#include "grf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grf/feature_grid.hpp"
#include "grf/linalg.hpp"
#include "grf/parallel.hpp"

namespace grf {

std::string_view to_string(ClosedFormTag tag) {
  switch (tag) {
    case ClosedFormTag::Dot: return "dot";
    case ClosedFormTag::AffineDot: return "affine_dot";
    case ClosedFormTag::ExpDot: return "exp_dot";
  }
  return "?";
}

std::optional<ClosedFormTag> closed_form_from_string(std::string_view name) {
  if (name == "dot") return ClosedFormTag::Dot;
  if (name == "affine_dot") return ClosedFormTag::AffineDot;
  if (name == "exp_dot") return ClosedFormTag::ExpDot;
  return std::nullopt;
}

namespace {

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

// ∂_s^a ∂_t^b of ⟨s,t⟩, without the constant of AffineDot.
double dot_partial(const Point& s, const Point& t, const MultiIndex& alpha, const MultiIndex& beta) {
  const int oa = alpha.order(), ob = beta.order();
  if (oa == 0 && ob == 0) return s.dot(t);
  if (oa > 1 || ob > 1) return 0.0;
  if (oa == 1 && ob == 1) return alpha == beta ? 1.0 : 0.0;
  // Exactly one side differentiated once: ∂_{s_i} gives t_i, ∂_{t_i} gives s_i.
  const MultiIndex& d = oa == 1 ? alpha : beta;
  const Point& other = oa == 1 ? t : s;
  for (int i = 0; i < d.dim(); ++i)
    if (d[i] == 1) return other[i];
  return 0.0;
}

// ∂_s^α ∂_t^β exp(⟨s,t⟩) = exp(⟨s,t⟩) Π_i Σ_j C(a_i,j) b_i!/(b_i−j)! s_i^{b_i−j} t_i^{a_i−j}.
double exp_dot_partial(const Point& s, const Point& t, const MultiIndex& alpha, const MultiIndex& beta) {
  double prod = std::exp(s.dot(t));
  for (int i = 0; i < alpha.dim(); ++i) {
    const int a = alpha[i], b = beta[i];
    double sum = 0.0;
    for (int j = 0; j <= std::min(a, b); ++j)
      sum += static_cast<double>(binomial(a, j)) * falling(b, j) * std::pow(s[i], b - j) * std::pow(t[i], a - j);
    prod *= sum;
  }
  return prod;
}

double closed_form_partial(ClosedFormTag tag, const Point& s, const Point& t, const MultiIndex& alpha,
                           const MultiIndex& beta) {
  switch (tag) {
    case ClosedFormTag::Dot: return dot_partial(s, t, alpha, beta);
    case ClosedFormTag::AffineDot:
      return dot_partial(s, t, alpha, beta) + (alpha.order() == 0 && beta.order() == 0 ? 1.0 : 0.0);
    case ClosedFormTag::ExpDot: return exp_dot_partial(s, t, alpha, beta);
  }
  return 0.0;
}

}  // namespace

CovarianceKernel::CovarianceKernel(Variant v) : v_(std::move(v)) {
  std::visit(
      [this](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FromKL>) {
          if (!x.field) throw std::invalid_argument("kernel needs a field");
          m_ = x.field->m();
          k_ = x.field->k();
        } else if constexpr (std::is_same_v<T, ClosedForm>) {
          if (x.m < 1) throw std::invalid_argument("closed-form kernel dimension must be positive");
          m_ = x.m;
          k_ = 1;
        } else if constexpr (std::is_same_v<T, Custom>) {
          m_ = x.m;
          k_ = x.k;
        } else {
          if (x.terms.empty()) throw std::invalid_argument("empty kernel combination");
          m_ = x.terms.front().second->m();
          k_ = x.terms.front().second->k();
          for (const auto& [c, kern] : x.terms)
            if (kern->m() != m_ || kern->k() != k_) throw std::invalid_argument("combined kernels differ in (m, k)");
        }
      },
      v_);
}

CovarianceKernel CovarianceKernel::from_field(FieldPtr field) { return CovarianceKernel(FromKL{std::move(field)}); }

CovarianceKernel CovarianceKernel::closed_form(ClosedFormTag tag, int m) { return CovarianceKernel(ClosedForm{tag, m}); }

CovarianceKernel CovarianceKernel::custom(int m, int k, DerivFn fn, std::string name) {
  return CovarianceKernel(Custom{m, k, std::move(fn), std::move(name)});
}

CovarianceKernel CovarianceKernel::zero(int m, int k) { return from_field(make_field(KLField::empty(m, k))); }

Matrix CovarianceKernel::eval(const Point& p, const Point& q) const {
  return eval_deriv(p, q, MultiIndex::zero(m_), MultiIndex::zero(m_));
}

Matrix CovarianceKernel::eval_deriv(const Point& p, const Point& q, const MultiIndex& alpha,
                                    const MultiIndex& beta) const {
  if (p.size() != m_ || q.size() != m_ || alpha.dim() != m_ || beta.dim() != m_)
    throw std::invalid_argument("kernel argument dimension mismatch");
  return std::visit(
      [&](const auto& x) -> Matrix {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FromKL>) {
          Matrix out = Matrix::Zero(k_, k_);
          const KLField& f = *x.field;
          for (std::size_t n = 0; n < f.size(); ++n) {
            const BasisFunction& b = f.basis()[n];
            const double sp = b.profile_partial(p, alpha);
            if (sp == 0.0) continue;
            const double sq = b.profile_partial(q, beta);
            if (sq == 0.0) continue;
            const double w = f.sigmas()[n] * f.sigmas()[n] * sp * sq;
            out.noalias() += w * b.amplitude() * b.amplitude().transpose();
          }
          return out;
        } else if constexpr (std::is_same_v<T, ClosedForm>) {
          return Matrix::Constant(1, 1, closed_form_partial(x.tag, p, q, alpha, beta));
        } else if constexpr (std::is_same_v<T, Custom>) {
          return x.fn(p, q, alpha, beta);
        } else {
          Matrix out = Matrix::Zero(k_, k_);
          for (const auto& [c, kern] : x.terms) out += c * kern->eval_deriv(p, q, alpha, beta);
          return out;
        }
      },
      v_);
}

CovarianceKernel CovarianceKernel::combine(std::vector<std::pair<double, CovarianceKernel>> terms) {
  Combination c;
  for (auto& [w, kern] : terms) c.terms.emplace_back(w, std::make_shared<const CovarianceKernel>(std::move(kern)));
  return CovarianceKernel(std::move(c));
}

CovarianceKernel CovarianceKernel::scaled(double c) const { return combine({{c, *this}}); }

CovarianceKernel operator+(const CovarianceKernel& a, const CovarianceKernel& b) {
  return CovarianceKernel::combine({{1.0, a}, {1.0, b}});
}

CovarianceKernel operator-(const CovarianceKernel& a, const CovarianceKernel& b) {
  return CovarianceKernel::combine({{1.0, a}, {-1.0, b}});
}

std::optional<std::vector<WeightedFeature>> CovarianceKernel::features() const {
  if (const auto* kl = std::get_if<FromKL>(&v_)) {
    std::vector<WeightedFeature> out;
    const KLField& f = *kl->field;
    for (std::size_t n = 0; n < f.size(); ++n) out.push_back({f.sigmas()[n] * f.sigmas()[n], &f.basis()[n]});
    return out;
  }
  if (const auto* comb = std::get_if<Combination>(&v_)) {
    std::vector<WeightedFeature> out;
    for (const auto& [c, kern] : comb->terms) {
      auto sub = kern->features();
      if (!sub) return std::nullopt;
      for (auto& wf : *sub) out.push_back({c * wf.weight, wf.function});
    }
    return out;
  }
  return std::nullopt;
}

namespace {

// Sup of |Σ_n w_n ∂_α f_n(x) ∂_β f_n(y)ᵀ| over grid pairs, using the sparse
// tabulation. Such kernels are symmetric, so unordered pairs suffice once all
// (α, β) combinations are visited.
double feature_seminorm(const std::vector<WeightedFeature>& features, const Box& box, int order, int threads) {
  std::vector<const BasisFunction*> fns;
  std::vector<double> weights;
  for (const auto& wf : features) {
    fns.push_back(wf.function);
    weights.push_back(wf.weight);
  }
  const FeatureGrid grid(fns, box, order);
  const int k = grid.output_dim();
  const std::size_t n_alpha = grid.indices().size();
  const std::size_t n_points = grid.num_points();

  auto pair_max = [&](std::size_t g1, std::size_t g2, std::vector<double>& acc) {
    double best = 0.0;
    for (std::size_t a = 0; a < n_alpha; ++a) {
      const auto r1 = grid.row(a, g1);
      if (r1.features.empty()) continue;
      for (std::size_t b = 0; b < n_alpha; ++b) {
        const auto r2 = grid.row(b, g2);
        std::fill(acc.begin(), acc.end(), 0.0);
        std::size_t i = 0, j = 0;
        while (i < r1.features.size() && j < r2.features.size()) {
          if (r1.features[i] < r2.features[j]) {
            ++i;
          } else if (r2.features[j] < r1.features[i]) {
            ++j;
          } else {
            const double w = weights[r1.features[i]];
            for (int u = 0; u < k; ++u)
              for (int v = 0; v < k; ++v) acc[u * k + v] += w * r1.values[i * k + u] * r2.values[j * k + v];
            ++i;
            ++j;
          }
        }
        for (double x : acc) best = std::max(best, std::abs(x));
      }
    }
    return best;
  };

  // Only pairs sharing a support can be nonzero; enumerate those when that is
  // cheaper than all pairs.
  double sparse_cost = 0.0;
  for (std::size_t n = 0; n < fns.size(); ++n) {
    const double s = static_cast<double>(grid.support_points(n).size());
    sparse_cost += s * (s + 1) / 2;
  }
  const double dense_cost = static_cast<double>(n_points) * (n_points + 1) / 2;

  std::vector<double> worker_max(std::max(threads, 1), 0.0);
  if (sparse_cost < dense_cost) {
    parallel_for(fns.size(), threads, [&](std::size_t begin, std::size_t end, int w) {
      std::vector<double> acc(k * k);
      for (std::size_t n = begin; n < end; ++n) {
        const auto& pts = grid.support_points(n);
        for (std::size_t i = 0; i < pts.size(); ++i)
          for (std::size_t j = i; j < pts.size(); ++j)
            worker_max[w] = std::max(worker_max[w], pair_max(pts[i], pts[j], acc));
      }
    });
  } else {
    parallel_for(n_points, threads, [&](std::size_t begin, std::size_t end, int w) {
      std::vector<double> acc(k * k);
      for (std::size_t g1 = begin; g1 < end; ++g1)
        for (std::size_t g2 = g1; g2 < n_points; ++g2)
          worker_max[w] = std::max(worker_max[w], pair_max(g1, g2, acc));
    });
  }
  return *std::max_element(worker_max.begin(), worker_max.end());
}

double generic_seminorm(const CovarianceKernel& kernel, const Box& box, int order, int threads) {
  const std::vector<Point> pts = box.grid();
  const std::vector<MultiIndex> idx = multi_indices_up_to(box.dim(), order);
  std::vector<double> worker_max(std::max(threads, 1), 0.0);
  parallel_for(pts.size(), threads, [&](std::size_t begin, std::size_t end, int w) {
    for (std::size_t i = begin; i < end; ++i)
      for (const Point& y : pts)
        for (const auto& a : idx)
          for (const auto& b : idx)
            worker_max[w] = std::max(worker_max[w], kernel.eval_deriv(pts[i], y, a, b).cwiseAbs().maxCoeff());
  });
  return *std::max_element(worker_max.begin(), worker_max.end());
}

}  // namespace

double kernel_seminorm(const CovarianceKernel& kernel, const KernelSeminormSpec& spec, int threads) {
  if (spec.box.dim() != kernel.m()) throw std::invalid_argument("box dimension differs from kernel");
  if (spec.order < 0) throw std::invalid_argument("seminorm order must be non-negative");
  if (auto feats = kernel.features()) {
    if (feats->empty()) return 0.0;
    return feature_seminorm(*feats, spec.box, spec.order, threads);
  }
  return generic_seminorm(kernel, spec.box, spec.order, threads);
}

double kernel_distance(const CovarianceKernel& a, const CovarianceKernel& b, const KernelSeminormSpec& spec,
                       int threads) {
  if (a.m() != b.m() || a.k() != b.k()) throw std::invalid_argument("kernels differ in (m, k)");
  return kernel_seminorm(a - b, spec, threads);
}

SymmetryReport check_symmetry(const CovarianceKernel& kernel, std::span<const std::pair<Point, Point>> pairs,
                              double tol) {
  double worst = 0.0;
  for (const auto& [p, q] : pairs) {
    const Matrix d = kernel.eval(p, q) - kernel.eval(q, p).transpose();
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  return {worst <= tol, worst};
}

Matrix gram_matrix(const CovarianceKernel& kernel, std::span<const Point> points) {
  const int k = kernel.k();
  const Eigen::Index n = static_cast<Eigen::Index>(points.size()) * k;
  Matrix g(n, n);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      g.block(static_cast<Eigen::Index>(i) * k, static_cast<Eigen::Index>(j) * k, k, k) =
          kernel.eval(points[i], points[j]);
  return g;
}

PsdReport check_psd(const CovarianceKernel& kernel, std::span<const Point> points, std::optional<double> tol) {
  if (points.size() > kMaxPsdPoints) throw std::invalid_argument("check_psd accepts at most 64 points");
  if (points.empty()) return {true, 0.0, tol.value_or(0.0)};
  const Matrix g = gram_matrix(kernel, points);
  const double scale = g.diagonal().cwiseAbs().maxCoeff();
  const double t = tol.value_or(1e-9 * scale);
  const double min_eig = jacobi_eigen(g).values.minCoeff();
  return {min_eig >= -t, min_eig, t};
}

}  // namespace grf
