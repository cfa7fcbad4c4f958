#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "grf/box.hpp"
#include "grf/field.hpp"
#include "grf/multi_index.hpp"
#include "grf/types.hpp"

namespace grf {

/// Scalar closed-form kernels on R^m:
///   Dot        K(s,t) = ⟨s,t⟩
///   AffineDot  K(s,t) = 1 + ⟨s,t⟩
///   ExpDot     K(s,t) = exp(⟨s,t⟩)
enum class ClosedFormTag { Dot, AffineDot, ExpDot };

std::string_view to_string(ClosedFormTag tag);
std::optional<ClosedFormTag> closed_form_from_string(std::string_view name);

/// One term w · f(p) f(q)ᵀ of a kernel written as a weighted feature sum.
struct WeightedFeature {
  double weight;
  const BasisFunction* function;
};

/// Matrix-valued kernel K(p,q) ∈ R^{k×k} with exact mixed partials
/// ∂_(α,β)K = ∂_α in p, ∂_β in q.
class CovarianceKernel {
 public:
  using DerivFn =
      std::function<Matrix(const Point& p, const Point& q, const MultiIndex& alpha, const MultiIndex& beta)>;

  struct FromKL {
    FieldPtr field;
  };
  struct ClosedForm {
    ClosedFormTag tag;
    int m;
  };
  /// Arbitrary user-supplied kernel; used for test doubles and ad-hoc studies.
  struct Custom {
    int m;
    int k;
    DerivFn fn;
    std::string name;
  };
  /// Σ_i c_i K_i
  struct Combination {
    std::vector<std::pair<double, std::shared_ptr<const CovarianceKernel>>> terms;
  };
  using Variant = std::variant<FromKL, ClosedForm, Custom, Combination>;

  static CovarianceKernel from_field(FieldPtr field);
  static CovarianceKernel closed_form(ClosedFormTag tag, int m = 1);
  static CovarianceKernel custom(int m, int k, DerivFn fn, std::string name = "custom");
  static CovarianceKernel zero(int m, int k);

  const Variant& variant() const { return v_; }
  int m() const { return m_; }
  int k() const { return k_; }

  Matrix eval(const Point& p, const Point& q) const;
  Matrix eval_deriv(const Point& p, const Point& q, const MultiIndex& alpha, const MultiIndex& beta) const;

  CovarianceKernel scaled(double c) const;
  friend CovarianceKernel operator+(const CovarianceKernel& a, const CovarianceKernel& b);
  friend CovarianceKernel operator-(const CovarianceKernel& a, const CovarianceKernel& b);

  /// The kernel as Σ_n w_n f_n(p) f_n(q)ᵀ when every leaf is FromKL. The
  /// returned pointers stay valid while this kernel is alive.
  std::optional<std::vector<WeightedFeature>> features() const;

 private:
  explicit CovarianceKernel(Variant v);
  static CovarianceKernel combine(std::vector<std::pair<double, CovarianceKernel>> terms);

  Variant v_;
  int m_ = 1;
  int k_ = 1;
};

struct KernelSeminormSpec {
  Box box;
  int order = 0;
};

/// Grid approximation of ‖K‖_{box×box,(r,r)}: max over grid pairs, all
/// |α|,|β| <= r and all entries of |∂_(α,β)K^{j,l}(x,y)|. A lower bound on
/// the true supremum, exact when the extremum lies on the grid.
double kernel_seminorm(const CovarianceKernel& kernel, const KernelSeminormSpec& spec, int threads = 1);

/// kernel_seminorm(a − b).
double kernel_distance(const CovarianceKernel& a, const CovarianceKernel& b, const KernelSeminormSpec& spec,
                       int threads = 1);

struct SymmetryReport {
  bool passed;
  double worst_violation;
};

/// max |K(p,q) − K(q,p)ᵀ| over the given pairs; passes iff <= tol.
SymmetryReport check_symmetry(const CovarianceKernel& kernel, std::span<const std::pair<Point, Point>> pairs,
                              double tol = 1e-12);

struct PsdReport {
  bool passed;
  double min_eigenvalue;
  double tolerance;
};

inline constexpr std::size_t kMaxPsdPoints = 64;

/// Gram matrix (K^{j,l}(p_i, p_i')) over at most 64 points, smallest
/// eigenvalue by Jacobi rotations. Default tolerance 1e-9 · max |diagonal|.
PsdReport check_psd(const CovarianceKernel& kernel, std::span<const Point> points,
                    std::optional<double> tol = std::nullopt);

/// Assembled Gram matrix used by check_psd.
Matrix gram_matrix(const CovarianceKernel& kernel, std::span<const Point> points);

}  // namespace grf
