#pragma once

#include <array>
#include <optional>
#include <vector>

#include "spinbath/dephasing.hpp"

namespace spinbath {

/// Uniform grid of `steps` points from t_min to t_max inclusive.
struct TimeGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  int steps = 2;

  void validate() const;
  double spacing() const { return (t_max - t_min) / (steps - 1); }
  double at(int i) const { return t_min + i * spacing(); }
  std::vector<double> points() const;
};

struct WitnessSeries {
  std::vector<double> times;
  std::vector<double> values;  ///< D(t)
  std::vector<double> rates;   ///< dD/dt
  /// Sum over grid cells of max(D_{i+1} - D_i, 0).
  double blp_measure = 0.0;
};

enum class Outcome { plus, minus };

inline int outcome_sign(Outcome o) { return o == Outcome::plus ? 1 : -1; }

/// Conditional past-future correlation for measurement intervals t (past to
/// present) and s (present to future).
struct CPFResult {
  double t = 0.0;
  double s = 0.0;
  double value_formula = 0.0;
  std::optional<double> value_oracle;
  Outcome conditioning_outcome = Outcome::plus;
};

/// Half the trace norm of r1 - r2. Throws InvalidArgument when the difference
/// is not Hermitian within 1e-12.
double trace_distance(const Mat2& r1, const Mat2& r2);
double trace_distance(const QubitDensity& r1, const QubitDensity& r2);

/// Trace distance between the evolved images of an initial pair, its rate by
/// central differences (one-sided at the ends) and the accumulated BLP
/// measure.
WitnessSeries blp_witness_series(const std::array<QubitDensity, 2>& pair, const BathParams& bath,
                                 double alpha, const TimeGrid& grid);

/// f(t, s) - f(t) f(s) with f = Re Gamma and f(t, s) = [f(t + s) + f(t - s)] / 2.
CPFResult cpf_formula(const BathParams& bath, double alpha, double t, double s);

/// Largest ring the CPF oracle will enumerate.
inline constexpr int kMaxOracleSpins = 20;

/// Joint outcome probabilities P(x, y, z) of the sigma^x measurement sequence,
/// indexed [x][y][z] with 0 <-> '+' and 1 <-> '-'.
using SequenceDistribution = std::array<std::array<std::array<double, 2>, 2>, 2>;

SequenceDistribution measurement_sequence_distribution(const QubitDensity& initial,
                                                       const BathParams& bath, double alpha,
                                                       double t, double s);

/// Exact three-measurement statistics: sigma^x measurements at time 0 (x),
/// after t (y) and after a further s (z), projective collapse of the qubit
/// only, bath configuration frozen (the coupling is diagonal in it). Returns
/// <O_z O_x>_y - <O_z>_y <O_x>_y conditioned on the requested y outcome.
///
/// The closed formula is reproduced exactly, for either y outcome, whenever
/// the initial state has <sigma^x> = 0 (e.g. |0>, |1>, the maximally mixed
/// state). For a state with a definite x outcome, such as |+>, the past is
/// deterministic and the correlator is identically zero.
///
/// Throws UndefinedConditionalError when P(y) < 1e-12.
CPFResult cpf_oracle(const QubitDensity& initial, const BathParams& bath, double alpha, double t,
                     double s, Outcome outcome_y);
CPFResult cpf_oracle(const SystemParams& sys, const BathParams& bath, double t, double s,
                     Outcome outcome_y);

}  // namespace spinbath
