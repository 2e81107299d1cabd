#pragma once

// Parameter searches for the criteria: best direction, best frame, best SL(2,C) pair.
// Everything is deterministic in (moments, config).

#include <cstdint>
#include <limits>

#include <json.hpp>

#include "ssq/criteria.hpp"

namespace ssq {

struct SearchConfig {
  std::uint64_t seed = 0;
  int coarse_grid = 24;      // points per angle
  int restarts = 32;
  double rapidity_cap = 5.0;
  int refine_iters = 200;
  double tolerance = 1e-9;   // final pattern-search step length
  // Lorentz search stops starting new restarts once the margin is below this.
  double stop_below = -std::numeric_limits<double>::infinity();

  /// Throws ParameterError on non-positive fields or rapidity_cap > 20.
  void validate() const;
  /// Keys matching the field names override `base`; unknown keys are rejected.
  static SearchConfig from_json(const nlohmann::json& doc, SearchConfig base);
  static SearchConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct OptimizationResult {
  double best_margin = std::numeric_limits<double>::infinity();
  CriterionParams params;
  long evaluations = 0;
  bool converged = false;
};

/// Minimizes bipartite_margin over the sphere: (θ, φ) grid, then compass refinement
/// from the best few grid points.
OptimizationResult optimize_direction(const MomentTensors& m, const SearchConfig& cfg);
OptimizationResult optimize_direction(const DensityMatrix& rho, const SearchConfig& cfg);

/// Minimizes ss_value over SO(3). For ss1p/ss2p with nonzero mean spin the l axis is
/// pinned to ±⟨J⟩ (the only way to zero both ⟨J_k⟩ and ⟨J_n⟩); otherwise the whole
/// group is scanned under the variance-floor constraint. Throws PreconditionError
/// "no admissible frame found" when nothing passes.
OptimizationResult optimize_frame(const MomentTensors& m, SsKind kind, const SearchConfig& cfg);
OptimizationResult optimize_frame(const DensityMatrix& rho, SsKind kind, const SearchConfig& cfg);

/// Minimizes tripartite_normalized_margin over A = R1·diag(e^{r/2}, e^{-r/2})·R2,
/// 0 <= r <= rapidity_cap, and B of the same form (GHZ) or B ∈ SU(2) (W).
/// Restart 0 starts at the identity; the rest draw Haar SU(2) factors and uniform r.
OptimizationResult optimize_lorentz(const MomentTensors& m, Family family, const SearchConfig& cfg);
OptimizationResult optimize_lorentz(const DensityMatrix& rho, Family family, const SearchConfig& cfg);

/// Re-evaluates the criterion behind a result; equals best_margin.
double reevaluate(const MomentTensors& m, const CriterionParams& params, std::optional<SsKind> kind = {});

}  // namespace ssq
