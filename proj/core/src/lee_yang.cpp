#include "spinbath/lee_yang.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinbath {

namespace {

constexpr double kDedupTolerance = 1e-10;
constexpr double kZeroValidationTolerance = 1e-8;
constexpr double kMultiplicityTolerance = 1e-6;

double angle_of(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a -= 2.0 * kPi;
  return a;
}

void sort_and_index(std::vector<LeeYangZero>& zeros) {
  for (auto& z : zeros) z.angle = angle_of(z.value);
  std::sort(zeros.begin(), zeros.end(),
            [](const LeeYangZero& a, const LeeYangZero& b) { return a.angle < b.angle; });
  for (std::size_t i = 0; i < zeros.size(); ++i) zeros[i].index = static_cast<int>(i);
}

// |Z(z)| / sum of |terms|, using the transfer-matrix route.
double relative_partition_magnitude(const BathParams& bath, Complex z) {
  const Complex field = -0.5 * std::log(z);
  const double coupling = bath.beta * bath.J;
  const LogComplex at_zero = ring_partition_sum(coupling, field, bath.n);
  const LogComplex reference =
      ring_partition_sum(coupling, Complex{field.real(), 0.0}, bath.n);
  if (at_zero.is_zero()) return 0.0;
  return std::exp(at_zero.log_abs - reference.log_abs);
}

double coefficient_scale(const FugacityPolynomial& poly, Complex z, int order) {
  double s = 0.0;
  const double r = std::abs(z);
  for (int k = order; k <= poly.degree(); ++k) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= (k - j);
    s += std::abs(poly.coefficients[k]) * falling * std::pow(r, k - order);
  }
  return s;
}

bool is_multiple_root(const FugacityPolynomial& poly, Complex c, int multiplicity) {
  for (int order = 0; order < multiplicity; ++order) {
    const double scale = coefficient_scale(poly, c, order);
    if (std::abs(poly.derivative(c, order)) > kMultiplicityTolerance * scale) return false;
  }
  return true;
}

Complex newton_polish(const FugacityPolynomial& poly, Complex z) {
  for (int iter = 0; iter < 30; ++iter) {
    const Complex p = poly.evaluate(z);
    const Complex dp = poly.derivative(z, 1);
    if (std::abs(dp) == 0.0) break;
    const Complex step = p / dp;
    const Complex candidate = z - step;
    if (!(std::abs(poly.evaluate(candidate)) < std::abs(p))) break;
    z = candidate;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

// Clusters raw eigenvalues; the mean of a cluster is far better conditioned
// than its members, so only isolated roots are polished.
void cluster_roots(const FugacityPolynomial& poly, const std::vector<Complex>& roots,
                   double radius, std::vector<LeeYangZero>& out) {
  const std::size_t count = roots.size();
  std::vector<int> label(count, -1);
  int next = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < count; ++j) {
        if (label[j] < 0 && std::abs(roots[j] - roots[cur]) < radius) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }

  for (int g = 0; g < next; ++g) {
    std::vector<Complex> members;
    for (std::size_t i = 0; i < count; ++i) {
      if (label[i] == g) members.push_back(roots[i]);
    }
    if (members.size() == 1) {
      out.push_back({newton_polish(poly, members.front()), 0, 0.0, 1});
      continue;
    }
    const Complex centroid =
        std::accumulate(members.begin(), members.end(), Complex{0.0, 0.0}) /
        static_cast<double>(members.size());
    const int m = static_cast<int>(members.size());
    if (is_multiple_root(poly, centroid, m)) {
      out.push_back({centroid, 0, 0.0, m});
    } else if (radius > 1e-7) {
      cluster_roots(poly, members, radius / 4.0, out);
    } else {
      for (const auto& r : members) out.push_back({newton_polish(poly, r), 0, 0.0, 1});
    }
  }
}


}  // namespace

Complex FugacityPolynomial::evaluate(Complex z) const { return derivative(z, 0); }

Complex FugacityPolynomial::derivative(Complex z, int order) const {
  Complex acc{0.0, 0.0};
  for (int k = degree(); k >= order; --k) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= (k - j);
    acc = acc * z + coefficients[k] * falling;
  }
  return acc;
}

FugacityPolynomial fugacity_polynomial(const BathParams& bath) {
  bath.validate();
  if (bath.n > kMaxPolynomialSpins) {
    throw InvalidArgument("fugacity_polynomial: n = " + std::to_string(bath.n) +
                          " exceeds the enumeration limit " +
                          std::to_string(kMaxPolynomialSpins));
  }
  const int n = bath.n;
  const double coupling = bath.beta * bath.J;
  // Tally configurations by (down count, aligned-bond count) first; the
  // weight depends on nothing else at zero field.
  std::vector<std::vector<std::uint64_t>> tally(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const SpinConfig cfg(bits, n);
    int aligned = 0;
    for (int i = 0; i < n; ++i) aligned += cfg.spin(i) == cfg.spin((i + 1) % n) ? 1 : 0;
    ++tally[cfg.down_count()][aligned];
  }

  // bond sum = 2 * aligned - n; weight exp(coupling * bond sum).
  const double shift = std::abs(coupling) * n;
  std::vector<double> coeffs(n + 1, 0.0);
  for (int k = 0; 2 * k <= n; ++k) {
    double sum = 0.0;
    for (int aligned = 0; aligned <= n; ++aligned) {
      if (tally[k][aligned] == 0) continue;
      sum += static_cast<double>(tally[k][aligned]) *
             std::exp(coupling * (2.0 * aligned - n) - shift);
    }
    coeffs[k] = sum;
    coeffs[n - k] = sum;
  }
  const double largest = *std::max_element(coeffs.begin(), coeffs.end());
  FugacityPolynomial poly;
  poly.log_scale = shift + std::log(largest);
  poly.coefficients.resize(n + 1);
  std::transform(coeffs.begin(), coeffs.end(), poly.coefficients.begin(),
                 [largest](double c) { return c / largest; });
  return poly;
}

std::vector<LeeYangZero> zeros_interacting(const BathParams& bath) {
  bath.validate();
  if (!(bath.J > 0.0) || !(bath.beta > 0.0)) {
    throw InvalidArgument("zeros_interacting: requires J > 0 and beta > 0");
  }
  const int n = bath.n;
  const double u = std::exp(-4.0 * bath.beta * bath.J);

  std::vector<Complex> candidates;
  candidates.reserve(2 * n);
  for (int idx = 1; idx <= n; ++idx) {
    const double k = kPi * (2.0 * idx - 1.0) / n;
    const double c = std::cos(k);
    const double s = std::sin(k);
    const double centre = -u + (1.0 - u) * c;
    // (u - 1) [...] <= 0: the principal root is purely imaginary.
    const double radicand = (u - 1.0) * (s * s + u * (1.0 + c) * (1.0 + c));
    const Complex root = std::sqrt(Complex{radicand, 0.0});
    candidates.push_back(centre + root);
    candidates.push_back(centre - root);
  }

  std::vector<LeeYangZero> zeros;
  for (const Complex& z : candidates) {
    const bool seen = std::any_of(zeros.begin(), zeros.end(), [&](const LeeYangZero& other) {
      return std::abs(other.value - z) < kDedupTolerance;
    });
    if (!seen) zeros.push_back({z, 0, 0.0, 1});
  }

  for (const auto& z : zeros) {
    const double residual = relative_partition_magnitude(bath, z.value);
    if (residual > kZeroValidationTolerance) {
      std::ostringstream msg;
      msg << "zeros_interacting: closed-form root " << z.value
          << " fails partition-function validation (relative |Z| = " << residual << ")";
      throw InternalConsistencyError(msg.str());
    }
  }
  if (static_cast<int>(zeros.size()) != n) {
    throw InternalConsistencyError("zeros_interacting: expected " + std::to_string(n) +
                                   " distinct zeros, found " + std::to_string(zeros.size()));
  }
  sort_and_index(zeros);
  return zeros;
}

std::vector<LeeYangZero> zeros_numeric(const BathParams& bath) {
  const FugacityPolynomial poly = fugacity_polynomial(bath);
  const int degree = poly.degree();
  const double lead = poly.coefficients[degree];

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -poly.coefficients[i] / lead;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "zeros_numeric: companion eigen-solver did not converge (n = " << bath.n
        << ", beta J = " << bath.beta * bath.J << ")";
    throw NumericError(msg.str());
  }

  std::vector<Complex> roots;
  roots.reserve(degree);
  for (int i = 0; i < degree; ++i) roots.push_back(solver.eigenvalues()(i));

  std::vector<LeeYangZero> zeros;
  cluster_roots(poly, roots, 0.5, zeros);
  sort_and_index(zeros);
  return zeros;
}

std::vector<LeeYangZero> lee_yang_zeros(const BathParams& bath) {
  bath.validate();
  if (bath.J > 0.0 && bath.beta > 0.0) return zeros_interacting(bath);
  if (bath.J == 0.0 || bath.beta == 0.0) {
    std::vector<LeeYangZero> single{{Complex{-1.0, 0.0}, 0, 0.0, bath.n}};
    sort_and_index(single);
    return single;
  }
  return zeros_numeric(bath);
}

std::vector<double> critical_times(const BathParams& bath, double alpha) {
  bath.validate();
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("critical_times: alpha must be > 0");
  }
  const double period = recoherence_period(alpha);
  // cos^n(2 alpha t) vanishes once per period.
  if (bath.beta == 0.0) return {kPi / (4.0 * alpha)};
  if (bath.h != 0.0) return {};
  if (bath.J < 0.0) {
    throw InvalidArgument("critical_times: antiferromagnetic coupling is not supported");
  }

  std::vector<double> times;
  for (const auto& z : lee_yang_zeros(bath)) {
    double t = z.angle / (4.0 * alpha);
    if (t >= period) t -= period;
    const bool seen = std::any_of(times.begin(), times.end(), [&](double other) {
      return std::abs(other - t) <= 1e-12 * period;
    });
    if (!seen) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  return times;
}

}  // namespace spinbath
