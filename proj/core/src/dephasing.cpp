#include "spinbath/dephasing.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinbath {

void SystemParams::validate() const {
  const double norm = std::norm(a) + std::norm(b);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-12) {
    throw InvalidArgument("system: |a|^2 + |b|^2 must equal 1");
  }
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0) {
    throw InvalidArgument("system: alpha must lie in [0, 1]");
  }
  if (!std::isfinite(omega)) throw InvalidArgument("system: omega must be finite");
}

QubitDensity::QubitDensity(const Mat2& m) : m_(m) {
  if (!m.allFinite()) throw InvalidArgument("QubitDensity: non-finite entries");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
    throw InvalidArgument("QubitDensity: matrix is not Hermitian");
  }
  if (std::abs(m.trace() - 1.0) > kTolerance) {
    throw InvalidArgument("QubitDensity: trace differs from one");
  }
  Eigen::SelfAdjointEigenSolver<Mat2> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kTolerance) {
    throw InvalidArgument("QubitDensity: negative eigenvalue");
  }
}

QubitDensity QubitDensity::pure(Complex a, Complex b) {
  Mat2 m;
  m << std::norm(a), a * std::conj(b), b * std::conj(a), std::norm(b);
  return QubitDensity(m);
}

QubitDensity QubitDensity::plus() {
  return pure({1.0 / std::numbers::sqrt2, 0.0}, {1.0 / std::numbers::sqrt2, 0.0});
}

QubitDensity QubitDensity::minus() {
  return pure({1.0 / std::numbers::sqrt2, 0.0}, {-1.0 / std::numbers::sqrt2, 0.0});
}

double KrausSet::completeness_error() const {
  Mat2 sum = Mat2::Zero();
  for (const auto& k : operators) sum += k.adjoint() * k;
  return (sum - Mat2::Identity()).cwiseAbs().maxCoeff();
}

Mat2 KrausSet::apply(const Mat2& rho) const {
  Mat2 out = Mat2::Zero();
  for (const auto& k : operators) out += k * rho * k.adjoint();
  return out;
}

Complex decoherence_function(const BathParams& bath, double alpha, double t) {
  bath.validate();
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidArgument("decoherence_function: alpha must be finite and >= 0");
  }
  if (!std::isfinite(t)) throw InvalidArgument("decoherence_function: t must be finite");
  if (alpha == 0.0 || t == 0.0) return {1.0, 0.0};
  const double phi = 2.0 * alpha * t;
  if (bath.beta == 0.0) return {std::pow(std::cos(phi), bath.n), 0.0};

  const double coupling = bath.beta * bath.J;
  const double field = bath.beta * bath.h;
  const LogComplex shifted = ring_partition_sum(coupling, Complex{field, -phi}, bath.n);
  const LogComplex reference = ring_partition_sum(coupling, Complex{field, 0.0}, bath.n);
  return ratio(shifted, reference);
}

double decoherence_rate(const BathParams& bath, double alpha, double t) {
  const double modulus = std::abs(decoherence_function(bath, alpha, t));
  if (modulus < kVanishingCoherence) return std::numeric_limits<double>::infinity();
  // |Gamma| can exceed one by rounding; the rate is non-negative by definition.
  return std::max(0.0, -std::log(modulus));
}

QubitDensity evolve_qubit(const QubitDensity& initial, const BathParams& bath, double alpha,
                          double t) {
  const Complex gamma = decoherence_function(bath, alpha, t);
  Mat2 m = initial.matrix();
  m(0, 1) *= gamma;
  m(1, 0) = std::conj(m(0, 1));
  return QubitDensity(m);
}

QubitDensity evolve_qubit(const SystemParams& sys, const BathParams& bath, double t) {
  sys.validate();
  return evolve_qubit(QubitDensity::pure(sys.a, sys.b), bath, sys.alpha, t);
}

KrausChannelResult kraus_channel(const SystemParams& sys, const BathParams& bath, double t) {
  sys.validate();
  bath.validate();
  if (bath.n > kMaxKrausSpins) {
    throw InvalidArgument("kraus_channel: n = " + std::to_string(bath.n) +
                          " exceeds the operator-count limit " +
                          std::to_string(kMaxKrausSpins));
  }
  const std::uint64_t total = std::uint64_t{1} << bath.n;
  const double log_z = partition_function(bath);

  KrausSet kraus;
  kraus.operators.reserve(total);
  kraus.configurations.reserve(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const SpinConfig cfg(bits, bath.n);
    const double amplitude = std::exp(0.5 * (-bath.beta * energy(cfg, bath) - log_z));
    const double angle = sys.alpha * cfg.magnetization() * t;
    Mat2 k = Mat2::Zero();
    k(0, 0) = amplitude * std::polar(1.0, -angle);
    k(1, 1) = amplitude * std::polar(1.0, angle);
    kraus.operators.push_back(k);
    kraus.configurations.push_back(bits);
  }

  const double defect = kraus.completeness_error();
  if (defect > 1e-10) {
    throw InternalConsistencyError("kraus_channel: completeness violated by " +
                                   std::to_string(defect));
  }
  const QubitDensity initial = QubitDensity::pure(sys.a, sys.b);
  QubitDensity output(kraus.apply(initial.matrix()));
  return {std::move(kraus), std::move(output)};
}

}  // namespace spinbath
