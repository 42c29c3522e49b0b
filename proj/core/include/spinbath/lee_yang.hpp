#pragma once

#include <vector>

#include "spinbath/bath.hpp"

namespace spinbath {

/// A zero of the partition function in the fugacity z = exp(-2 beta h).
struct LeeYangZero {
  Complex value;
  int index = 0;
  /// arg(value) mapped into [0, 2 pi).
  double angle = 0.0;
  int multiplicity = 1;
};

/// Z_B = exp(beta n h) * sum_k p_k z^k, where p_k is the zero-field weight of
/// all configurations with k down spins. Coefficients are stored divided by
/// exp(log_scale) so that the largest equals one.
struct FugacityPolynomial {
  std::vector<double> coefficients;
  double log_scale = 0.0;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  /// Evaluates the scaled polynomial (without exp(log_scale)).
  Complex evaluate(Complex z) const;
  /// Derivative of order `order` of the scaled polynomial.
  Complex derivative(Complex z, int order) const;
};

/// Largest ring for which the coefficients are enumerated.
inline constexpr int kMaxPolynomialSpins = 24;

/// Coefficients by exact enumeration, grouped by down-spin count. The
/// up/down mirror p_k = p_{n-k} is imposed exactly.
FugacityPolynomial fugacity_polynomial(const BathParams& bath);

/// Closed-form zeros for ferromagnetic coupling (J > 0, beta > 0). Both
/// branches of the square root are generated, merged within 1e-10, and every
/// survivor is checked against the transfer-matrix partition function;
/// a failure throws InternalConsistencyError.
std::vector<LeeYangZero> zeros_interacting(const BathParams& bath);

/// Roots of the fugacity polynomial from companion-matrix eigenvalues, Newton
/// polished; clustered roots that pass a derivative test are merged into one
/// zero with explicit multiplicity. Sorted by angle.
std::vector<LeeYangZero> zeros_numeric(const BathParams& bath);

/// Zeros by the best available route: closed form for J > 0 and beta > 0,
/// the single n-fold zero z = -1 when J == 0 or beta == 0, numeric otherwise.
std::vector<LeeYangZero> lee_yang_zeros(const BathParams& bath);

/// Real times in [0, pi / (2 alpha)) at which the decoherence function
/// vanishes. Non-empty only for h == 0 or beta == 0.
std::vector<double> critical_times(const BathParams& bath, double alpha);

}  // namespace spinbath
