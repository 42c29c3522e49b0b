#include "spinbath/env_info.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace spinbath {

namespace {

constexpr double kEigenvalueFloor = 1e-14;
constexpr double kNegativeEigenvalueLimit = -1e-9;

// log(1 + e^y) without overflow.
double softplus(double y) { return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::pair<double, double> hermitian_eigenvalues(const Mat2& m) {
  const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
  const double half_gap = 0.5 * (m(0, 0).real() - m(1, 1).real());
  const double radius = std::hypot(half_gap, std::abs(m(0, 1)));
  return {mean + radius, mean - radius};
}

// 1 - S(rho) in bits for a qubit with Bloch radius r.
double entropy_deficit(double r) {
  if (r >= 1.0) return 1.0;
  if (r <= 0.0) return 0.0;
  double nats;
  if (r < 1e-3) {
    // sum_k r^{2k} / (k (2k - 1)), halved
    const double r2 = r * r;
    nats = 0.5 * r2 * (1.0 + r2 * (1.0 / 6.0 + r2 * (1.0 / 15.0 + r2 / 28.0)));
  } else {
    nats = 0.5 * ((1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r));
  }
  return nats / kLn2;
}

double bloch_radius(const Mat2& block, double trace) {
  if (trace <= 0.0) return 0.0;
  const double gap = block(0, 0).real() - block(1, 1).real();
  return std::hypot(gap, 2.0 * std::abs(block(0, 1))) / trace;
}

// -lambda log2(lambda) summed over `multiplicity` copies of lambda = mu / M.
double entropy_term(double mu, double log_multiplicity) {
  if (mu == 0.0) return 0.0;
  const double log_lambda = std::log(std::abs(mu)) - log_multiplicity;
  const double lambda_abs = std::exp(log_lambda);
  if (mu < 0.0) {
    if (-lambda_abs < kNegativeEigenvalueLimit) {
      throw InvalidStateError("von_neumann_entropy: eigenvalue " + std::to_string(-lambda_abs) +
                              " is negative");
    }
    return 0.0;
  }
  if (lambda_abs <= kEigenvalueFloor) return 0.0;
  return -mu * log_lambda / kLn2;
}

Mat2 make_block(const SystemParams& sys, double diagonal, Complex coherent) {
  Mat2 b;
  b(0, 0) = std::norm(sys.a) * diagonal;
  b(1, 1) = std::norm(sys.b) * diagonal;
  b(0, 1) = sys.a * std::conj(sys.b) * coherent;
  b(1, 0) = std::conj(b(0, 1));
  return b;
}

struct ScaledMatrix {
  Mat2 m;
  double log_scale = 0.0;
};

ScaledMatrix normalized(const Mat2& m, double log_scale) {
  const double largest = m.cwiseAbs().maxCoeff();
  if (largest == 0.0) return {m, log_scale};
  return {m / largest, log_scale + std::log(largest)};
}

ScaledMatrix multiply(const ScaledMatrix& a, const ScaledMatrix& b) {
  return normalized(a.m * b.m, a.log_scale + b.log_scale);
}

// Index 0 <-> spin +1.
Mat2 bond_matrix(double coupling, double scale) {
  Mat2 k;
  k(0, 0) = k(1, 1) = std::exp(coupling - scale);
  k(0, 1) = k(1, 0) = std::exp(-coupling - scale);
  return k;
}

// K (D_x K)^length: sum over the traced arc of `length` spins between two
// fixed fragment boundary spins (row: last fragment spin, column: first).
ScaledMatrix arc_matrix(double coupling, Complex field, int length) {
  const double scale = std::abs(coupling);
  const Mat2 k = bond_matrix(coupling, scale);
  Mat2 dk = k;
  dk.row(0) *= std::exp(field - std::abs(field.real()));
  dk.row(1) *= std::exp(-field - std::abs(field.real()));

  ScaledMatrix result{k, scale};
  ScaledMatrix power = normalized(dk, scale + std::abs(field.real()));
  for (int e = length; e > 0; e >>= 1) {
    if (e & 1) result = multiply(result, power);
    if (e > 1) power = multiply(power, power);
  }
  return result;
}

int spin_index(int spin) { return spin > 0 ? 0 : 1; }

void validate_inputs(const SystemParams& sys, const BathParams& bath, const FragmentSpec& frag) {
  sys.validate();
  bath.validate();
  frag.validate();
  if (frag.n != bath.n) throw InvalidArgument("fragment: ring size does not match the bath");
}

JointBlockState general_by_transfer(const SystemParams& sys, const BathParams& bath,
                                    const FragmentSpec& frag, double t) {
  const int n = bath.n;
  const int f = frag.size();
  const double coupling = bath.beta * bath.J;
  const double field = bath.beta * bath.h;
  const double phi = 2.0 * sys.alpha * t;
  const double log_z = partition_function(bath);

  std::vector<JointBlockState::Entry> entries;
  if (f == 0) {
    const Complex coherent =
        ratio(ring_partition_sum(coupling, Complex{field, -phi}, n), LogComplex{log_z, 0.0});
    entries.push_back({0, 0.0, make_block(sys, 1.0, coherent)});
    return JointBlockState(0, false, std::move(entries));
  }

  const ScaledMatrix arc_real = arc_matrix(coupling, Complex{field, 0.0}, n - f);
  const ScaledMatrix arc_shift = arc_matrix(coupling, Complex{field, -phi}, n - f);

  const std::uint64_t count = std::uint64_t{1} << f;
  entries.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const SpinConfig cfg(bits, f);
    double internal = 0.0;
    for (int i = 0; i + 1 < f; ++i) internal += cfg.spin(i) * cfg.spin(i + 1);
    const int m = cfg.magnetization();
    const double log_frag = coupling * internal + field * m - log_z;
    const int row = spin_index(cfg.spin(f - 1));
    const int col = spin_index(cfg.spin(0));

    const double diagonal =
        std::exp(log_frag + arc_real.log_scale) * arc_real.m(row, col).real();
    const Complex coherent = std::exp(log_frag + arc_shift.log_scale) * arc_shift.m(row, col) *
                             std::polar(1.0, -phi * m);
    entries.push_back({bits, 0.0, make_block(sys, diagonal, coherent)});
  }
  return JointBlockState(f, false, std::move(entries));
}

JointBlockState general_by_enumeration(const SystemParams& sys, const BathParams& bath,
                                       const FragmentSpec& frag, double t) {
  const int n = bath.n;
  if (n > kMaxFragmentConfigurationSpins) {
    throw InvalidArgument("joint_state_general: enumeration limited to n <= " +
                          std::to_string(kMaxFragmentConfigurationSpins));
  }
  const int f = frag.size();
  const double phi = 2.0 * sys.alpha * t;
  const double log_z = partition_function(bath);

  std::vector<double> diagonal(std::size_t{1} << f, 0.0);
  std::vector<Complex> coherent(std::size_t{1} << f, Complex{0.0, 0.0});
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const SpinConfig cfg(bits, n);
    std::uint64_t key = 0;
    for (int i = 0; i < f; ++i) key |= ((bits >> frag.sites[i]) & 1U) << i;
    const double w = std::exp(-bath.beta * energy(cfg, bath) - log_z);
    diagonal[key] += w;
    coherent[key] += w * std::polar(1.0, -phi * cfg.magnetization());
  }

  std::vector<JointBlockState::Entry> entries;
  entries.reserve(diagonal.size());
  for (std::uint64_t key = 0; key < diagonal.size(); ++key) {
    entries.push_back({key, 0.0, make_block(sys, diagonal[key], coherent[key])});
  }
  return JointBlockState(f, false, std::move(entries));
}

}  // namespace

FragmentSpec FragmentSpec::prefix(int size, int n) { return block(0, size, n); }

FragmentSpec FragmentSpec::block(int start, int size, int n) {
  if (size < 0 || size > n || n < 1) throw InvalidArgument("fragment: size must lie in [0, n]");
  FragmentSpec spec;
  spec.n = n;
  spec.sites.reserve(size);
  for (int i = 0; i < size; ++i) spec.sites.push_back((start + i) % n);
  return spec;
}

bool FragmentSpec::is_contiguous() const {
  for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
    if (sites[i + 1] != (sites[i] + 1) % n) return false;
  }
  return true;
}

void FragmentSpec::validate() const {
  if (n < 1) throw InvalidArgument("fragment: ring size must be >= 1");
  if (size() > n) throw InvalidArgument("fragment: more sites than the ring holds");
  std::set<int> seen;
  for (int s : sites) {
    if (s < 0 || s >= n) throw InvalidArgument("fragment: site index out of range");
    if (!seen.insert(s).second) throw InvalidArgument("fragment: repeated site index");
  }
}

JointBlockState::JointBlockState(int fragment_size, bool grouped, std::vector<Entry> entries)
    : fragment_size_(fragment_size), grouped_(grouped), entries_(std::move(entries)) {}

double JointBlockState::trace() const {
  double tr = 0.0;
  for (const auto& e : entries_) tr += e.block.trace().real();
  return tr;
}

Mat2 JointBlockState::system_marginal() const {
  Mat2 m = Mat2::Zero();
  for (const auto& e : entries_) m += e.block;
  return m;
}

double JointBlockState::hermiticity_error() const {
  double worst = 0.0;
  for (const auto& e : entries_) {
    worst = std::max(worst, (e.block - e.block.adjoint()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double JointBlockState::min_eigenvalue() const {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) {
    const double mu = hermitian_eigenvalues(e.block).second;
    lowest = std::min(lowest, mu * std::exp(-e.log_multiplicity));
  }
  return lowest;
}

JointBlockState JointBlockState::expanded() const {
  if (!grouped_) return *this;
  if (fragment_size_ > kMaxFragmentConfigurationSpins) {
    throw InvalidArgument("JointBlockState::expanded: fragment too large to expand");
  }
  std::vector<Mat2> per_member(fragment_size_ + 1, Mat2::Zero());
  for (const auto& e : entries_) {
    per_member[e.key] = e.block / std::round(std::exp(e.log_multiplicity));
  }
  const std::uint64_t count = std::uint64_t{1} << fragment_size_;
  std::vector<Entry> out;
  out.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    out.push_back({bits, 0.0, per_member[std::popcount(bits)]});
  }
  return JointBlockState(fragment_size_, false, std::move(out));
}

Complex fragment_decoherence_function(const BathParams& bath, int fragment_size, double alpha,
                                      double t) {
  bath.validate();
  if (bath.J != 0.0) {
    throw InvalidArgument("fragment_decoherence_function: requires J == 0");
  }
  if (fragment_size < 0 || fragment_size > bath.n) {
    throw InvalidArgument("fragment_decoherence_function: fragment size out of range");
  }
  const double phi = 2.0 * alpha * t;
  // cosh(x - i phi) / cosh(x) = cos(phi) - i tanh(x) sin(phi)
  const Complex per_site{std::cos(phi), -std::tanh(bath.beta * bath.h) * std::sin(phi)};
  return std::pow(per_site, bath.n - fragment_size);
}

JointBlockState joint_state_noninteracting(const SystemParams& sys, const BathParams& bath,
                                           const FragmentSpec& frag, double t) {
  validate_inputs(sys, bath, frag);
  if (bath.J != 0.0) throw InvalidArgument("joint_state_noninteracting: requires J == 0");

  const int f = frag.size();
  const double x = bath.beta * bath.h;
  const double phi = 2.0 * sys.alpha * t;
  const double log_up = -softplus(-2.0 * x);
  const double log_down = -softplus(2.0 * x);
  const Complex gamma_f = fragment_decoherence_function(bath, f, sys.alpha, t);

  std::vector<JointBlockState::Entry> entries;
  entries.reserve(f + 1);
  for (int k = 0; k <= f; ++k) {
    const double log_mult = log_binomial(f, k);
    const double class_probability = std::exp(log_mult + (f - k) * log_up + k * log_down);
    const Complex coherent = gamma_f * std::polar(class_probability, -phi * (f - 2 * k));
    entries.push_back({static_cast<std::uint64_t>(k), log_mult,
                       make_block(sys, class_probability, coherent)});
  }
  return JointBlockState(f, true, std::move(entries));
}

JointBlockState joint_state_general(const SystemParams& sys, const BathParams& bath,
                                    const FragmentSpec& frag, double t, JointStatePath path) {
  validate_inputs(sys, bath, frag);
  if (frag.size() > kMaxFragmentConfigurationSpins) {
    throw InvalidArgument("joint_state_general: fragment larger than " +
                          std::to_string(kMaxFragmentConfigurationSpins) + " sites");
  }
  if (path == JointStatePath::automatic) {
    path = frag.is_contiguous() ? JointStatePath::transfer_matrix : JointStatePath::enumeration;
  }
  if (path == JointStatePath::transfer_matrix) {
    if (!frag.is_contiguous()) {
      throw InvalidArgument("joint_state_general: transfer-matrix path needs a contiguous fragment");
    }
    return general_by_transfer(sys, bath, frag, t);
  }
  return general_by_enumeration(sys, bath, frag, t);
}

double von_neumann_entropy(const Mat2& rho) {
  const auto [hi, lo] = hermitian_eigenvalues(rho);
  return entropy_term(hi, 0.0) + entropy_term(lo, 0.0);
}

double von_neumann_entropy(const QubitDensity& rho) { return von_neumann_entropy(rho.matrix()); }

double von_neumann_entropy(const JointBlockState& state) {
  double s = 0.0;
  for (const auto& e : state.entries()) {
    const auto [hi, lo] = hermitian_eigenvalues(e.block);
    s += entropy_term(hi, e.log_multiplicity) + entropy_term(lo, e.log_multiplicity);
  }
  return s;
}

double fragment_entropy(const JointBlockState& state) {
  double s = 0.0;
  for (const auto& e : state.entries()) {
    s += entropy_term(e.block.trace().real(), e.log_multiplicity);
  }
  return s;
}

double mutual_information(const JointBlockState& state) {
  const double total = state.trace();
  const Mat2 marginal = state.system_marginal();
  double conditional = 0.0;
  for (const auto& e : state.entries()) {
    const double p = e.block.trace().real();
    if (p <= 0.0) continue;
    conditional += p / total * entropy_deficit(bloch_radius(e.block, p));
  }
  return conditional - entropy_deficit(bloch_radius(marginal, total));
}

double mutual_information(const SystemParams& sys, const BathParams& bath,
                          const FragmentSpec& frag, double t) {
  if (bath.J == 0.0) return mutual_information(joint_state_noninteracting(sys, bath, frag, t));
  return mutual_information(joint_state_general(sys, bath, frag, t));
}

PipCurve pip_curve(const SystemParams& sys, const BathParams& bath, double t) {
  sys.validate();
  bath.validate();
  if (bath.J != 0.0 && bath.n > kMaxFragmentConfigurationSpins) {
    throw InvalidArgument("pip_curve: interacting baths limited to n <= " +
                          std::to_string(kMaxFragmentConfigurationSpins));
  }
  PipCurve curve;
  curve.system_entropy = von_neumann_entropy(evolve_qubit(sys, bath, t));
  for (int k = 0; k <= bath.n; ++k) {
    curve.fractions.push_back(static_cast<double>(k) / bath.n);
    curve.mutual_information.push_back(
        mutual_information(sys, bath, FragmentSpec::prefix(k, bath.n), t));
  }
  return curve;
}

bool has_darwinism_plateau(const PipCurve& curve, double rel_tol, double min_entropy) {
  const double s = curve.system_entropy;
  if (s < min_entropy) return false;
  const std::size_t last = curve.mutual_information.size() - 1;  // f == 1 excluded
  for (std::size_t k0 = 0; k0 < last && curve.fractions[k0] <= 0.5; ++k0) {
    bool flat = true;
    for (std::size_t k = k0; k < last && flat; ++k) {
      flat = std::abs(curve.mutual_information[k] - s) <= rel_tol * s;
    }
    if (flat) return true;
  }
  return false;
}

SBSReport sbs_diagnostics(const JointBlockState& state, const SystemParams& sys,
                          double tolerance) {
  SBSReport report;
  double p0 = 0.0;
  double p1 = 0.0;
  for (const auto& e : state.entries()) {
    p0 += e.block(0, 0).real();
    p1 += e.block(1, 1).real();
    report.coherence_trace_norm += 2.0 * std::abs(e.block(0, 1));
  }
  report.pointer_probabilities = {p0, p1};

  report.degenerate = std::norm(sys.a) < 1e-14 || std::norm(sys.b) < 1e-14;
  if (report.degenerate) {
    report.conditional_fidelity = std::numeric_limits<double>::quiet_NaN();
    report.sbs = true;
    report.note = "single pointer state populated; broadcast structure holds trivially";
    return report;
  }

  // Conditional fragment states are diagonal: the Uhlmann fidelity is the
  // squared Bhattacharyya overlap. For grouped entries sum over a class of
  // sqrt(p q) per member equals sqrt(P Q) of the class totals.
  const int f = state.fragment_size();
  double overlap = 0.0;
  std::vector<double> up0(f, 0.0);
  std::vector<double> up1(f, 0.0);
  for (const auto& e : state.entries()) {
    const double q0 = std::max(0.0, e.block(0, 0).real()) / p0;
    const double q1 = std::max(0.0, e.block(1, 1).real()) / p1;
    overlap += std::sqrt(q0 * q1);
    for (int i = 0; i < f; ++i) {
      const double up_share = state.grouped_by_magnetization()
                                  ? static_cast<double>(f - static_cast<int>(e.key)) / f
                                  : (((e.key >> i) & 1U) ? 0.0 : 1.0);
      up0[i] += q0 * up_share;
      up1[i] += q1 * up_share;
    }
  }
  report.conditional_fidelity = overlap * overlap;
  report.per_site_fidelities.reserve(f);
  for (int i = 0; i < f; ++i) {
    const double o = std::sqrt(up0[i] * up1[i]) +
                     std::sqrt(std::max(0.0, 1.0 - up0[i]) * std::max(0.0, 1.0 - up1[i]));
    report.per_site_fidelities.push_back(o * o);
  }
  report.sbs = report.coherence_trace_norm <= tolerance && report.conditional_fidelity <= tolerance;
  if (!report.sbs) {
    report.note = report.conditional_fidelity > tolerance
                      ? "conditional fragment states are not perfectly distinguishable"
                      : "pointer coherences survive in the joint state";
  }
  return report;
}

}  // namespace spinbath
