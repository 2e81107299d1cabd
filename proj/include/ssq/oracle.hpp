#pragma once

// Ground truth for the criteria: PPT checks on small reductions, seeded random states,
// and the suites that compare criteria against direct traces and against PPT.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssq/criteria.hpp"
#include "ssq/search.hpp"

namespace ssq {

inline constexpr double kPptTolerance = 1e-10;
inline constexpr double kBoundaryBand = 1e-7;
inline constexpr double kProportionalityTolerance = 1e-9;

struct OracleVerdict {
  SubsystemSelection subsystem;  // the qubits the verdict talks about
  int transposed = 0;            // qubit carrying the transpose
  double min_pt_eigenvalue = 0.0;
  bool entangled = false;        // min_pt_eigenvalue < -1e-10
  std::optional<CVector> witness_vector;  // eigenvector of the negative eigenvalue
};

/// PPT test of a 2- or 3-qubit state with the transpose on `subsystem`.
OracleVerdict ppt_verdict(const DensityMatrix& rho, int subsystem = 0);

/// Most negative PPT eigenvalue over all pairs (or triples, every transpose position)
/// of an N-qubit state.
struct ReductionScan {
  int size = 0;  // 2 or 3
  double min_pt_eigenvalue = 0.0;
  bool entangled = false;
  std::vector<int> worst;  // qubits of the worst reduction
};
ReductionScan scan_reductions(const DensityMatrix& rho, int size);

// ---------------------------------------------------------------------------

enum class RandomKind {
  PureSymmetric,
  MixedSymmetric,       // Ginibre (N+1) x rank factor
  Product,              // tensor product of random single-qubit mixed states
  SeparableMixture,     // convex mixture of `terms` product states
  HaarPure,
  SeparableSymmetric,   // convex mixture of `terms` coherent products |θ,φ⟩^{⊗N}
};

struct RandomStateSpec {
  RandomKind kind = RandomKind::PureSymmetric;
  int n_qubits = 2;
  std::uint64_t seed = 0;
  int rank = 1;   // MixedSymmetric
  int terms = 1;  // mixtures

  void validate() const;
};

DensityMatrix generate(const RandomStateSpec& spec);
std::string to_string(RandomKind kind);

/// Splits a suite seed into per-sample seeds (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// ---------------------------------------------------------------------------

struct EquivalenceSample {
  int rank = 0;
  double margin = 0.0;
  double min_pt_eigenvalue = 0.0;
  bool detected = false;
  bool ppt_entangled = false;
  bool band = false;
};

struct EquivalenceSummary {
  int n_qubits = 0;
  int samples = 0;
  int agreements = 0;
  int false_positives = 0;  // outside the band
  int false_negatives = 0;  // outside the band
  int band = 0;
  double max_band_fraction = 0.02;
  std::vector<EquivalenceSample> details;

  int disagreements() const { return false_positives + false_negatives; }
  bool passed() const;
  nlohmann::json to_json() const;
};

/// Random mixed symmetric states (rank cycling 1..N+1) compared against ppt_verdict on
/// qubit 0. N=2 uses the direction search, N=3 the Lorentz search over GHZ and W.
EquivalenceSummary equivalence_suite(int n_qubits, int samples, const SearchConfig& cfg);

struct ProportionalityCheck {
  std::string name;      // e.g. "tripartite-ghz/symmetric"
  int n_qubits = 0;
  int samples = 0;
  double frozen = 0.0;   // constant used for the check
  double fitted = 0.0;   // least-squares fit over the samples
  double max_rel_err = 0.0;

  bool passed() const { return samples == 0 || max_rel_err <= kProportionalityTolerance; }
  nlohmann::json to_json() const;
};

struct ProportionalitySummary {
  std::vector<ProportionalityCheck> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

/// Constants linking moment-space values to summed per-triple traces.
inline constexpr double kTripartiteConstant = 12.0;
double ss_proportionality_constant(SsKind kind);  // ss1: 2, ss2: 6, ss3: 2

/// Σ_{a<b<c} tr(ϱ_abc M), M an 8x8 operator on (a, b, c) in that order.
double summed_triple_trace(const DensityMatrix& rho, const CMatrix& m);

/// (1/3) Σ_{a<b<c} Σ_{t} tr(ϱ_abc (|v⟩⟨v|)^{T_t}) with the projector placed so that
/// its first factor sits on qubit t.
double summed_triple_trace_all_positions(const DensityMatrix& rho, const CVector& v);

/// Pure 3-qubit vector A⊗B⊗B|GHZ⟩ or A⊗B⊗B|W⟩ (B must be unitary for W).
CVector family_vector(Family family, const SL2C& a, const SL2C& b);

ProportionalitySummary proportionality_suite(int n_qubits, int samples, std::uint64_t seed);

struct IdentitySummary {
  std::vector<std::pair<int, double>> pair_residuals;
  std::vector<std::pair<int, double>> triple_residuals;
  double tolerance = 1e-11;
  bool passed() const;
  nlohmann::json to_json() const;
};

IdentitySummary identity_suite(int max_qubits = 6);

struct RoundtripSummary {
  int samples = 0;
  double max_roundtrip_error = 0.0;
  double max_trace_error = 0.0;  // |tr(ϱW) − ∫P w dΩ|
  bool closed_form_ok = false;   // N=1 |0⟩⟨0| → (1 + 3cos θ)/(4π)
  double closed_form_error = 0.0;
  bool certificate_mixture = false;
  bool certificate_ghz_rejected = false;
  bool passed() const;
  nlohmann::json to_json() const;
};

/// Random symmetric states with N cycling through 1..6.
RoundtripSummary prep_roundtrip_suite(int samples, std::uint64_t seed);

}  // namespace ssq
