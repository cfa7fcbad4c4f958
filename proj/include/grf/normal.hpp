#pragma once

namespace grf {

/// Standard normal CDF Φ(x) = erfc(−x/√2)/2.
double normal_cdf(double x);

/// Φ⁻¹(u) for u in (0, 1); throws DomainError otherwise.
double normal_quantile(double u);

}  // namespace grf
