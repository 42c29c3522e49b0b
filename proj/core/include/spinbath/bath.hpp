#pragma once

#include <cstdint>

#include "spinbath/common.hpp"

namespace spinbath {

enum class Boundary { periodic };

/// Classical Ising ring H_B = -J sum s_i s_{i+1} - h sum s_i at inverse
/// temperature beta. Site n is identified with site 0 (periodic ring); this is
/// the only boundary condition under which the two-eigenvalue closed forms
/// used throughout the library hold.
struct BathParams {
  double J = 1.0;
  double h = 0.0;
  double beta = 1.0;
  int n = 1;
  Boundary boundary = Boundary::periodic;

  /// Throws InvalidArgument unless n >= 1, beta >= 0 and all reals are finite.
  void validate() const;
};

/// Largest ring that may be enumerated configuration by configuration.
inline constexpr int kMaxEnumerationSpins = 30;

/// One bath microstate. Bit i clear means spin i points up (+1), set means
/// down (-1).
class SpinConfig {
 public:
  SpinConfig(std::uint64_t bits, int n);

  std::uint64_t bits() const { return bits_; }
  int size() const { return n_; }
  int spin(int i) const { return ((bits_ >> i) & 1U) ? -1 : 1; }
  int down_count() const;
  /// n - 2 * down_count(); always has the parity of n.
  int magnetization() const { return n_ - 2 * down_count(); }

 private:
  std::uint64_t bits_;
  int n_;
};

/// A complex number kept as (log|z|, arg z). Partition functions overflow a
/// double long before the physics becomes interesting, so every partition
/// value in the library travels in this form.
struct LogComplex {
  double log_abs = 0.0;
  double phase = 0.0;

  Complex value() const;
  bool is_zero() const;
};

/// Ratio a / b as an ordinary complex number.
Complex ratio(const LogComplex& a, const LogComplex& b);

/// T[s, s'] = exp(beta J s s' + beta field (s + s') / 2), index 0 <-> s = +1.
struct TransferMatrix {
  Mat2 entries;

  /// Eigenvalues ordered so that |first| >= |second|.
  std::pair<Complex, Complex> eigenvalues() const;
};

TransferMatrix transfer_matrix(const BathParams& bath, Complex field);

/// Tr[T^n] for the dimensionless transfer matrix
///   T[s, s'] = exp(coupling s s' + reduced_field (s + s') / 2),
/// i.e. the periodic-ring sum over all configurations of
/// exp(coupling sum s_i s_{i+1} + reduced_field sum s_i).
/// The eigenvalues come from the 2x2 characteristic equation on a matrix
/// rescaled to unit magnitude; the smaller one is recovered from the
/// determinant so there is no cancellation.
LogComplex ring_partition_sum(double coupling, Complex reduced_field, int n);

double energy(const SpinConfig& cfg, const BathParams& bath);

/// log Z_B(h) for real h.
double partition_function(const BathParams& bath);

/// Z_B evaluated at an arbitrary complex field (same J, beta, n).
LogComplex complex_partition_function(const BathParams& bath, Complex field);

/// exp(-beta E(cfg)) / Z_B.
double gibbs_weight(const SpinConfig& cfg, const BathParams& bath);

/// Tr[rho_B^2] = Z(2 beta) / Z(beta)^2.
double bath_purity(const BathParams& bath);

}  // namespace spinbath
