#include "spinbath/witnesses.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

namespace spinbath {

namespace {

Mat2 x_projector(int sign) {
  Mat2 p;
  p << 0.5, 0.5 * sign, 0.5 * sign, 0.5;
  return p;
}

Mat2 coupling_unitary(double alpha, int magnetization, double interval) {
  const double angle = alpha * magnetization * interval;
  Mat2 u = Mat2::Zero();
  u(0, 0) = std::polar(1.0, -angle);
  u(1, 1) = std::polar(1.0, angle);
  return u;
}

}  // namespace

void TimeGrid::validate() const {
  if (steps < 2) throw InvalidArgument("grid: steps must be >= 2");
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_max > t_min)) {
    throw InvalidArgument("grid: require finite t_max > t_min");
  }
}

std::vector<double> TimeGrid::points() const {
  validate();
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) out[i] = at(i);
  out.back() = t_max;
  return out;
}

double trace_distance(const Mat2& r1, const Mat2& r2) {
  const Mat2 diff = r1 - r2;
  if ((diff - diff.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("trace_distance: difference is not Hermitian");
  }
  // Eigenvalues of a Hermitian 2x2: mean +- sqrt(half_gap^2 + |offdiag|^2).
  const double mean = 0.5 * (diff(0, 0).real() + diff(1, 1).real());
  const double half_gap = 0.5 * (diff(0, 0).real() - diff(1, 1).real());
  const double radius = std::hypot(half_gap, std::abs(diff(0, 1)));
  return 0.5 * (std::abs(mean + radius) + std::abs(mean - radius));
}

double trace_distance(const QubitDensity& r1, const QubitDensity& r2) {
  return trace_distance(r1.matrix(), r2.matrix());
}

WitnessSeries blp_witness_series(const std::array<QubitDensity, 2>& pair, const BathParams& bath,
                                 double alpha, const TimeGrid& grid) {
  grid.validate();
  if (grid.steps < 3) throw InvalidArgument("blp_witness_series: need at least 3 grid points");

  WitnessSeries series;
  series.times = grid.points();
  series.values.reserve(series.times.size());
  for (double t : series.times) {
    series.values.push_back(trace_distance(evolve_qubit(pair[0], bath, alpha, t),
                                           evolve_qubit(pair[1], bath, alpha, t)));
  }

  const auto& d = series.values;
  const std::size_t n = d.size();
  const double dt = grid.spacing();
  series.rates.resize(n);
  series.rates.front() = (d[1] - d[0]) / dt;
  series.rates.back() = (d[n - 1] - d[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) series.rates[i] = (d[i + 1] - d[i - 1]) / (2.0 * dt);

  for (std::size_t i = 0; i + 1 < n; ++i) series.blp_measure += std::max(d[i + 1] - d[i], 0.0);
  return series;
}

CPFResult cpf_formula(const BathParams& bath, double alpha, double t, double s) {
  if (t < 0.0 || s < 0.0) throw InvalidArgument("cpf_formula: intervals must be >= 0");
  const auto f = [&](double tau) { return decoherence_function(bath, alpha, tau).real(); };
  CPFResult r;
  r.t = t;
  r.s = s;
  r.value_formula = 0.5 * (f(t + s) + f(t - s)) - f(t) * f(s);
  return r;
}

SequenceDistribution measurement_sequence_distribution(const QubitDensity& initial,
                                                       const BathParams& bath, double alpha,
                                                       double t, double s) {
  bath.validate();
  if (bath.n > kMaxOracleSpins) {
    throw InvalidArgument("cpf_oracle: n = " + std::to_string(bath.n) +
                          " exceeds the enumeration limit " + std::to_string(kMaxOracleSpins));
  }
  if (t < 0.0 || s < 0.0) throw InvalidArgument("cpf_oracle: intervals must be >= 0");

  // Configurations enter only through their Gibbs weight and magnetization.
  std::map<int, double> weight_by_magnetization;
  const std::uint64_t total = std::uint64_t{1} << bath.n;
  const double log_z = partition_function(bath);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const SpinConfig cfg(bits, bath.n);
    weight_by_magnetization[cfg.magnetization()] +=
        std::exp(-bath.beta * energy(cfg, bath) - log_z);
  }

  const std::array<Mat2, 2> proj{x_projector(+1), x_projector(-1)};
  SequenceDistribution p{};
  for (const auto& [m, w] : weight_by_magnetization) {
    const Mat2 u_t = coupling_unitary(alpha, m, t);
    const Mat2 u_s = coupling_unitary(alpha, m, s);
    for (int x = 0; x < 2; ++x) {
      const Mat2 after_x = proj[x] * initial.matrix() * proj[x];
      const Mat2 before_y = u_t * after_x * u_t.adjoint();
      for (int y = 0; y < 2; ++y) {
        const Mat2 after_y = proj[y] * before_y * proj[y];
        const Mat2 before_z = u_s * after_y * u_s.adjoint();
        for (int z = 0; z < 2; ++z) {
          p[x][y][z] += w * (proj[z] * before_z).trace().real();
        }
      }
    }
  }
  return p;
}

CPFResult cpf_oracle(const QubitDensity& initial, const BathParams& bath, double alpha, double t,
                     double s, Outcome outcome_y) {
  const SequenceDistribution p = measurement_sequence_distribution(initial, bath, alpha, t, s);
  const int y = outcome_y == Outcome::plus ? 0 : 1;

  double p_y = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) p_y += p[x][y][z];
  if (p_y < 1e-12) {
    throw UndefinedConditionalError("cpf_oracle: conditioning outcome has probability " +
                                    std::to_string(p_y));
  }

  const auto value = [](int idx) { return idx == 0 ? 1.0 : -1.0; };
  double zx = 0.0;
  double z_mean = 0.0;
  double x_mean = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      const double cond = p[x][y][z] / p_y;
      zx += value(z) * value(x) * cond;
      z_mean += value(z) * cond;
      x_mean += value(x) * cond;
    }
  }

  CPFResult r = cpf_formula(bath, alpha, t, s);
  // Zero delay: z repeats y, so the correlator vanishes identically.
  r.value_oracle = s == 0.0 ? 0.0 : zx - z_mean * x_mean;
  r.conditioning_outcome = outcome_y;
  return r;
}

CPFResult cpf_oracle(const SystemParams& sys, const BathParams& bath, double t, double s,
                     Outcome outcome_y) {
  sys.validate();
  return cpf_oracle(QubitDensity::pure(sys.a, sys.b), bath, sys.alpha, t, s, outcome_y);
}

}  // namespace spinbath
