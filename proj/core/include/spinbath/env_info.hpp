#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinbath/dephasing.hpp"

namespace spinbath {

/// Bath sites (0-based) accessible to an observer. Key bit i of a fragment
/// configuration refers to sites[i].
struct FragmentSpec {
  std::vector<int> sites;
  int n = 0;  ///< ring size the fragment lives in

  /// Sites 0, 1, ..., size - 1.
  static FragmentSpec prefix(int size, int n);
  /// size consecutive sites starting at `start`, wrapping around the ring.
  static FragmentSpec block(int start, int size, int n);

  int size() const { return static_cast<int>(sites.size()); }
  double fraction() const { return n > 0 ? static_cast<double>(size()) / n : 0.0; }
  /// Consecutive along the ring (the empty and full fragments count).
  bool is_contiguous() const;
  void validate() const;
};

/// rho_SF stored block-sparse. The joint evolution and the Gibbs state are
/// both diagonal in the fragment's sigma^z basis, so rho_SF is a direct sum
/// of 2x2 system blocks, one per fragment configuration.
///
/// An entry may stand for a whole class of configurations that share one
/// block (the J = 0 construction groups by fragment magnetization). Then
/// `block` is the sum over the class and exp(log_multiplicity) its size; every
/// member carries block / multiplicity. Ungrouped entries have
/// log_multiplicity == 0 and key == the fragment bit pattern.
class JointBlockState {
 public:
  struct Entry {
    std::uint64_t key = 0;
    double log_multiplicity = 0.0;
    Mat2 block = Mat2::Zero();
  };

  JointBlockState(int fragment_size, bool grouped, std::vector<Entry> entries);

  int fragment_size() const { return fragment_size_; }
  /// Entries keyed by fragment down-spin count rather than bit pattern.
  bool grouped_by_magnetization() const { return grouped_; }
  const std::vector<Entry>& entries() const { return entries_; }

  double trace() const;
  /// Tr_F rho_SF.
  Mat2 system_marginal() const;
  /// Largest violation of block Hermiticity.
  double hermiticity_error() const;
  /// Smallest eigenvalue over all member blocks.
  double min_eigenvalue() const;

  /// Per-configuration form; entries ordered by fragment bit pattern.
  /// Requires fragment_size() <= 24 for grouped states.
  JointBlockState expanded() const;

 private:
  int fragment_size_;
  bool grouped_;
  std::vector<Entry> entries_;
};

enum class JointStatePath { automatic, transfer_matrix, enumeration };

/// Closed form for J == 0: diagonal blocks |a|^2 rho_F, |b|^2 rho_F and
/// coherences a conj(b) Gamma_F(t) rho'_F(t), grouped by fragment
/// magnetization so that fragments of thousands of spins stay cheap.
JointBlockState joint_state_noninteracting(const SystemParams& sys, const BathParams& bath,
                                           const FragmentSpec& frag, double t);

/// Any J. The transfer-matrix path handles contiguous fragments in
/// O(2^|F| (n - |F|)): for each fragment configuration the traced-out arc is a
/// product of complex transfer matrices between the two fragment boundary
/// spins. The enumeration path sums all 2^n configurations (n <= 24).
JointBlockState joint_state_general(const SystemParams& sys, const BathParams& bath,
                                    const FragmentSpec& frag, double t,
                                    JointStatePath path = JointStatePath::automatic);

/// Largest fragment handled configuration by configuration.
inline constexpr int kMaxFragmentConfigurationSpins = 24;

/// [cosh(beta h - 2 i alpha t) / cosh(beta h)]^{n - |F|} for J == 0.
Complex fragment_decoherence_function(const BathParams& bath, int fragment_size, double alpha,
                                      double t);

/// Entropies are in bits. Eigenvalues with |lambda| <= 1e-14 count as zero;
/// below -1e-9 an InvalidStateError is thrown.
double von_neumann_entropy(const Mat2& rho);
double von_neumann_entropy(const QubitDensity& rho);
double von_neumann_entropy(const JointBlockState& state);

/// Entropy of the fragment marginal (diagonal, from the block traces).
double fragment_entropy(const JointBlockState& state);

/// I(S:F) in bits. Because rho_SF is block diagonal over fragment
/// configurations c, S(F) + S(SF) collapses to sum_c p_c S(rho_S|c) and
/// I = S(rho_S) - sum_c p_c S(rho_S|c); this form is evaluated through
/// 1 - S(r) for Bloch radii r, which keeps tiny informations accurate.
double mutual_information(const JointBlockState& state);
double mutual_information(const SystemParams& sys, const BathParams& bath,
                          const FragmentSpec& frag, double t);

struct PipCurve {
  std::vector<double> fractions;
  std::vector<double> mutual_information;
  double system_entropy = 0.0;
};

/// I(S:F) for nested prefix fragments of size 0..n. J == 0 uses the grouped
/// closed form (any n); otherwise n <= 24.
PipCurve pip_curve(const SystemParams& sys, const BathParams& bath, double t);

/// PIP plateau: some f0 <= 1/2 with |I(f) - S(rho_S)| <= rel_tol * S(rho_S)
/// for every f0 <= f < 1. Curves with S(rho_S) below min_entropy never count.
bool has_darwinism_plateau(const PipCurve& curve, double rel_tol = 0.05,
                           double min_entropy = 0.05);

struct SBSReport {
  /// Trace norm of the part of rho_SF off-diagonal in the pointer basis.
  double coherence_trace_norm = 0.0;
  std::vector<double> pointer_probabilities;
  /// Uhlmann fidelity (Tr sqrt(sqrt(rho_0) rho_1 sqrt(rho_0)))^2 between the
  /// fragment states conditioned on the two pointer states; 0 means
  /// perfectly distinguishable. NaN for a single-pointer state.
  double conditional_fidelity = 0.0;
  /// Same quantity for each single-site marginal.
  std::vector<double> per_site_fidelities;
  bool degenerate = false;
  bool sbs = false;
  std::string note;
};

inline constexpr double kSbsTolerance = 1e-6;

/// Pointer basis {|0>, |1>}. When a or b vanishes only one pointer state is
/// populated; that is trivially a broadcast state and the flag is set, with a
/// note.
SBSReport sbs_diagnostics(const JointBlockState& state, const SystemParams& sys,
                          double tolerance = kSbsTolerance);

}  // namespace spinbath
