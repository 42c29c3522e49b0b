#pragma once

#include <cstdint>
#include <vector>

#include "spinbath/bath.hpp"

namespace spinbath {

/// Central qubit a|0> + b|1> coupled through alpha sigma^z (x) sum sigma_i^z.
/// `omega` is the bare qubit frequency. All dynamics are in the interaction
/// picture with respect to omega sigma^z / 2, which commutes with the
/// coupling, so omega is carried along but never enters a result.
struct SystemParams {
  double alpha = 0.1;
  Complex a{1.0 / std::numbers::sqrt2, 0.0};
  Complex b{1.0 / std::numbers::sqrt2, 0.0};
  double omega = 0.0;

  /// |a|^2 + |b|^2 = 1 within 1e-12 and 0 <= alpha <= 1.
  void validate() const;
};

/// 2x2 density matrix, validated on construction: Hermitian and unit trace
/// within 1e-12, eigenvalues >= -1e-12.
class QubitDensity {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit QubitDensity(const Mat2& m);

  static QubitDensity pure(Complex a, Complex b);
  static QubitDensity plus();
  static QubitDensity minus();

  const Mat2& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

 private:
  Mat2 m_;
};

/// Diagonal Kraus family K_chi = sqrt(p_chi) diag(e^{-i alpha m t}, e^{+i alpha m t}),
/// one operator per bath configuration.
struct KrausSet {
  std::vector<Mat2> operators;
  std::vector<std::uint64_t> configurations;

  /// max |(sum K^dagger K - 1)_{ij}|
  double completeness_error() const;
  Mat2 apply(const Mat2& rho) const;
};

struct KrausChannelResult {
  KrausSet kraus;
  QubitDensity output;
};

/// Gamma(t) = Z_B(h - 2 i alpha t / beta) / Z_B(h). Evaluated with the
/// dimensionless field beta h - 2 i alpha t so it stays regular at beta = 0,
/// where it reduces to cos^n(2 alpha t).
Complex decoherence_function(const BathParams& bath, double alpha, double t);

/// Mixed-state Loschmidt amplitude Tr[rho_B exp(-2 i alpha t sum sigma_i^z)];
/// identical to the decoherence function for this model.
inline Complex loschmidt_amplitude(const BathParams& bath, double alpha, double t) {
  return decoherence_function(bath, alpha, t);
}

/// Coherences below this modulus count as exact zeros of Gamma.
inline constexpr double kVanishingCoherence = 1e-13;

/// -ln|Gamma(t)|; +infinity where |Gamma| < kVanishingCoherence.
double decoherence_rate(const BathParams& bath, double alpha, double t);

/// rho_S(t): populations frozen, rho_01(t) = rho_01(0) Gamma(t).
QubitDensity evolve_qubit(const SystemParams& sys, const BathParams& bath, double t);
QubitDensity evolve_qubit(const QubitDensity& initial, const BathParams& bath, double alpha,
                          double t);

/// Largest ring accepted by kraus_channel (2^n operators).
inline constexpr int kMaxKrausSpins = 16;

/// Builds the explicit Kraus family by enumerating bath configurations,
/// checks completeness (InternalConsistencyError beyond 1e-10) and applies it
/// to the initial qubit state.
KrausChannelResult kraus_channel(const SystemParams& sys, const BathParams& bath, double t);

}  // namespace spinbath
