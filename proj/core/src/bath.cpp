#include "spinbath/bath.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace spinbath {

namespace {

double wrap_phase(double phase) {
  double wrapped = std::remainder(phase, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

}  // namespace

void BathParams::validate() const {
  if (n < 1) throw InvalidArgument("bath: n must be >= 1, got " + std::to_string(n));
  if (!std::isfinite(J)) throw InvalidArgument("bath: J must be finite");
  if (!std::isfinite(h)) throw InvalidArgument("bath: h must be finite");
  if (!std::isfinite(beta) || beta < 0.0) {
    throw InvalidArgument("bath: beta must be finite and >= 0");
  }
}

SpinConfig::SpinConfig(std::uint64_t bits, int n) : bits_(bits), n_(n) {
  if (n < 1 || n > 64) throw InvalidArgument("SpinConfig: n must be in [1, 64]");
  if (n < 64 && (bits >> n) != 0U) {
    throw InvalidArgument("SpinConfig: bit pattern wider than n spins");
  }
}

int SpinConfig::down_count() const { return std::popcount(bits_); }

Complex LogComplex::value() const {
  if (is_zero()) return {0.0, 0.0};
  return std::polar(std::exp(log_abs), phase);
}

bool LogComplex::is_zero() const {
  return log_abs == -std::numeric_limits<double>::infinity();
}

Complex ratio(const LogComplex& a, const LogComplex& b) {
  if (b.is_zero()) throw NumericError("ratio: division by a vanishing partition value");
  if (a.is_zero()) return {0.0, 0.0};
  return std::polar(std::exp(a.log_abs - b.log_abs), a.phase - b.phase);
}

std::pair<Complex, Complex> TransferMatrix::eigenvalues() const {
  const Complex half_trace = 0.5 * (entries(0, 0) + entries(1, 1));
  const Complex det = entries(0, 0) * entries(1, 1) - entries(0, 1) * entries(1, 0);
  const Complex disc = std::sqrt(half_trace * half_trace - det);
  Complex big = half_trace + disc;
  if (std::abs(half_trace - disc) > std::abs(big)) big = half_trace - disc;
  const Complex small = std::abs(big) > 0.0 ? det / big : Complex{0.0, 0.0};
  return {big, small};
}

TransferMatrix transfer_matrix(const BathParams& bath, Complex field) {
  bath.validate();
  const double k = bath.beta * bath.J;
  const Complex x = bath.beta * field;
  TransferMatrix tm;
  tm.entries(0, 0) = std::exp(k + x);
  tm.entries(1, 1) = std::exp(k - x);
  tm.entries(0, 1) = tm.entries(1, 0) = std::exp(-k);
  return tm;
}

namespace {

Complex complex_log1p(Complex z) {
  const double re = 0.5 * std::log1p(2.0 * z.real() + std::norm(z));
  return {re, std::atan2(z.imag(), 1.0 + z.real())};
}

Complex complex_expm1(Complex z) {
  const double half_sin = std::sin(0.5 * z.imag());
  const double re = std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * half_sin * half_sin;
  return {re, std::exp(z.real()) * std::sin(z.imag())};
}

}  // namespace

LogComplex ring_partition_sum(double coupling, Complex reduced_field, int n) {
  if (n < 1) throw InvalidArgument("ring_partition_sum: n must be >= 1");
  const double k = coupling;
  const Complex x = reduced_field;
  // Entry magnitudes are exp(k +- Re x) and exp(-k); divide out the largest.
  const double scale = std::max(k + std::abs(x.real()), -k);

  const Complex ep = std::exp(k - scale + x);
  const Complex em = std::exp(k - scale - x);
  const double off = std::exp(-k - scale);
  const Complex half_trace = 0.5 * (ep + em);
  const Complex half_diff = 0.5 * (ep - em);
  // det T = 2 sinh(2k); computed analytically to stay accurate as k -> 0.
  const double det = 2.0 * std::sinh(2.0 * k) * std::exp(-2.0 * scale);
  const Complex disc = std::sqrt(half_diff * half_diff + off * off);

  Complex big = half_trace + disc;
  if (std::abs(half_trace - disc) > std::abs(big)) big = half_trace - disc;
  if (std::abs(big) == 0.0) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  const Complex r = det / big / big;
  // 1 + r = (lambda_+ + lambda_-) / lambda_+ is exact through the trace. When
  // r sits near -1 (frustrated rings) use it to avoid cancelling 1 + r^n.
  const Complex one_plus_r = 2.0 * half_trace / big;
  Complex tail;
  if (std::abs(one_plus_r) < 0.5) {
    const Complex w = static_cast<double>(n) * complex_log1p(-one_plus_r);
    tail = (n % 2) ? -complex_expm1(w) : 1.0 + std::exp(w);
  } else {
    tail = 1.0 + std::pow(r, n);
  }
  if (std::abs(tail) == 0.0) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }

  LogComplex out;
  out.log_abs = n * (scale + std::log(std::abs(big))) + std::log(std::abs(tail));
  out.phase = wrap_phase(n * std::arg(big) + std::arg(tail));
  return out;
}

double energy(const SpinConfig& cfg, const BathParams& bath) {
  if (cfg.size() != bath.n) {
    throw InvalidArgument("energy: configuration has " + std::to_string(cfg.size()) +
                          " spins, bath has " + std::to_string(bath.n));
  }
  double bonds = 0.0;
  for (int i = 0; i < bath.n; ++i) {
    bonds += cfg.spin(i) * cfg.spin((i + 1) % bath.n);
  }
  return -bath.J * bonds - bath.h * cfg.magnetization();
}

double partition_function(const BathParams& bath) {
  bath.validate();
  return ring_partition_sum(bath.beta * bath.J, Complex{bath.beta * bath.h, 0.0}, bath.n)
      .log_abs;
}

LogComplex complex_partition_function(const BathParams& bath, Complex field) {
  bath.validate();
  if (!std::isfinite(field.real()) || !std::isfinite(field.imag())) {
    throw InvalidArgument("complex_partition_function: field must be finite");
  }
  return ring_partition_sum(bath.beta * bath.J, bath.beta * field, bath.n);
}

double gibbs_weight(const SpinConfig& cfg, const BathParams& bath) {
  const double log_z = partition_function(bath);
  return std::exp(-bath.beta * energy(cfg, bath) - log_z);
}

double bath_purity(const BathParams& bath) {
  bath.validate();
  BathParams doubled = bath;
  doubled.beta = 2.0 * bath.beta;
  return std::exp(partition_function(doubled) - 2.0 * partition_function(bath));
}

}  // namespace spinbath
