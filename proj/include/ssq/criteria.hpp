#pragma once

// Entanglement criteria expressed through collective-spin moments.
//
// Sign convention: every "margin" or "value" is the left-hand side of a strict
// inequality "... < 0"; a negative result flags entanglement.

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ssq/geometry.hpp"
#include "ssq/spinops.hpp"

namespace ssq {

/// Margins below -kDetectionThreshold are detections.
inline constexpr double kDetectionThreshold = 1e-9;

enum class Verdict { Entangled, NotDetected };
Verdict verdict_for(double margin, double threshold = kDetectionThreshold);
std::string to_string(Verdict v);

/// |margin| <= threshold: the verdict is not_detected but the state sits on the
/// separable boundary as far as floating point can tell.
bool in_boundary_band(double margin, double threshold = kDetectionThreshold);

// ---------------------------------------------------------------------------
// Spin squeezing parameter

struct XiSquared {
  double value;
  Direction direction;  // minimizing direction, orthogonal to the mean spin
};

/// min over unit n ⊥ ⟨J⟩ of 2⟨ΔJ_n²⟩/J with J = N/2. Throws UndefinedMeanSpinError
/// when |⟨J⟩| < 1e-9.
XiSquared xi_squared(const MomentTensors& m);
XiSquared xi_squared(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Two-qubit entanglement

/// ⟨J_n²⟩ + N(N−2)/4 − sqrt((N²/4 − ⟨J_n²⟩)² + (N−1)²⟨J_n⟩²); requires N >= 2.
/// Only meaningful for symmetric states: the product |01⟩ already scores −1.
double bipartite_margin(const MomentTensors& m, const Direction& n);
double bipartite_margin(const DensityMatrix& rho, const Direction& n);

/// sin α (N²/4 − ⟨J_n²⟩) − (N−1) cos α ⟨J_n⟩ + ⟨J_n²⟩ + N(N−2)/4.
double bipartite_raw(const MomentTensors& m, const Direction& n, double alpha);
double bipartite_raw(const DensityMatrix& rho, const Direction& n, double alpha);

/// α minimizing bipartite_raw for fixed n, in [−π, π].
double bipartite_optimal_alpha(const MomentTensors& m, const Direction& n);

/// 4⟨ΔJ_n²⟩/N − (1 − 4⟨J_n⟩²/N²); same sign as bipartite_margin.
double bipartite_normalized(const MomentTensors& m, const Direction& n);

// ---------------------------------------------------------------------------
// Three-qubit entanglement through Lorentz-transformed witnesses

enum class Family { Ghz, W };
std::string to_string(Family f);

/// Real 4x4x4 coefficient table K_{αβγ}.
class KTensor {
public:
  KTensor(Family family, const std::array<double, 64>& data) : family_(family), data_(data) {}

  Family family() const { return family_; }
  double operator()(int a, int b, int c) const { return data_[static_cast<std::size_t>(16 * a + 4 * b + c)]; }
  const std::array<double, 64>& data() const { return data_; }
  /// tr of (1/8) K σσσ, i.e. ⟨ψ|ψ⟩ for the generating vector.
  double scale() const { return data_[0]; }

private:
  Family family_;
  std::array<double, 64> data_;
};

/// One monomial coef · first^a_α second^b_β second^c_γ of the K tensor.
struct KTerm {
  double coef;
  int a, b, c;
};
const std::vector<KTerm>& k_terms(Family family);

/// K(Λ, L, L) for GHZ or K(Λ, R, R) for W; (1/8) K_{αβγ} σ^α⊗σ^β⊗σ^γ equals the
/// partially transposed (first qubit) projector onto A⊗B⊗B|GHZ⟩ or A⊗U⊗U|W⟩.
/// Throws ParameterError for family W when `second` is not a rotation.
KTensor k_tensor(Family family, const LorentzMatrix& first, const LorentzMatrix& second);

/// Convenience: Λ from `a` (star convention), L/R from `b` (dagger convention).
KTensor k_tensor(Family family, const SL2C& a, const SL2C& b);

/// (K(Λ,L,L) + K(L,Λ,L) + K(L,L,Λ)) / 3, the substitution used for general states.
KTensor cyclic_average(const KTensor& k);

/// Full symmetrization over (αβγ).
KTensor symmetrize(const KTensor& k);

enum class TripartiteMode { Symmetric, General };

/// Real symmetric tensor T with margin = Σ K_{αβγ} T_{αβγ}:
/// T = sym{ 2⟨J^αJ^βJ^γ⟩ − 3 f^{αβ}_μ ⟨J^(γJ^μ)⟩ + f^{αβ}_μ f^{(γμ)}_ν ⟨J^ν⟩ }.
class TripartiteFunctional {
public:
  explicit TripartiteFunctional(const MomentTensors& m);
  double contract(const KTensor& k) const;
  /// Same value as contract(k_tensor(family, first, second)) without building K.
  double contract(Family family, const Eigen::Matrix4d& first, const Eigen::Matrix4d& second) const;
  double operator()(int a, int b, int c) const { return t_[static_cast<std::size_t>(16 * a + 4 * b + c)]; }

private:
  std::array<double, 64> t_{};
};

/// K_(αβγ){...}. In General mode the caller passes cyclic_average(K); the contraction
/// itself is the same in both modes.
double tripartite_margin(const MomentTensors& m, const KTensor& k, TripartiteMode mode);
double tripartite_margin(const DensityMatrix& rho, const KTensor& k, TripartiteMode mode);

/// tripartite_margin / K_{000}: invariant under rescaling of the witness vector.
double tripartite_normalized_margin(const MomentTensors& m, const KTensor& k);

// ---------------------------------------------------------------------------
// Witness-based inequalities

enum class WitnessKind { Ghz, W1, W2 };

/// 3/4·1 − |GHZ⟩⟨GHZ|, 2/3·1 − |W⟩⟨W|, 1/2·1 − |GHZ⟩⟨GHZ|, with GHZ and W written in the
/// frame (k, l, n) (the canonical frame maps x̂, ŷ, ẑ to k, l, n).
Eigen::Matrix<cplx, 8, 8> witness_matrix(WitnessKind kind, const Frame& frame);

enum class SsKind { Ss1, Ss2, Ss3, Ss1p, Ss2p };
std::string to_string(SsKind k);
WitnessKind witness_for(SsKind k);

/// Constant term of the inequality for N qubits, from exact integer arithmetic.
double ss_constant(SsKind kind, int n_qubits);

/// For Ss1p/Ss2p: ⟨J_k⟩ = ⟨J_n⟩ = 0 and ⟨J_k²⟩, ⟨J_n²⟩ >= N/4 (within tolerance).
bool ss_admissible(const MomentTensors& m, SsKind kind, const Frame& frame);

/// Left-hand side of the chosen inequality. Requires N >= 3 (ParameterError);
/// Ss1p/Ss2p throw PreconditionError when the frame is not admissible.
double ss_value(const MomentTensors& m, SsKind kind, const Frame& frame);
double ss_value(const DensityMatrix& rho, SsKind kind, const Frame& frame);

// ---------------------------------------------------------------------------

struct LorentzPair {
  Family family;
  SL2C first;
  SL2C second;
};

using CriterionParams = std::variant<std::monostate, Direction, Frame, LorentzPair>;

struct CriterionReport {
  std::string criterion;
  double margin = 0.0;
  Verdict verdict = Verdict::NotDetected;
  bool boundary = false;
  CriterionParams params;
  std::optional<double> xi_squared;
};

}  // namespace ssq
