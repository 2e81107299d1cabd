#include <doctest.h>

#include <cmath>

#include "ssq/search.hpp"
#include "support.hpp"

using namespace ssq;
using namespace ssq::testing;

namespace {

SearchConfig quick() {
  SearchConfig cfg;
  cfg.restarts = 8;
  return cfg;
}

bool same_params(const CriterionParams& a, const CriterionParams& b) {
  if (a.index() != b.index()) return false;
  if (const auto* d = std::get_if<Direction>(&a)) return d->vec() == std::get<Direction>(b).vec();
  if (const auto* f = std::get_if<Frame>(&a)) return f->rotation() == std::get<Frame>(b).rotation();
  if (const auto* l = std::get_if<LorentzPair>(&a)) {
    const auto& r = std::get<LorentzPair>(b);
    return l->first.matrix() == r.first.matrix() && l->second.matrix() == r.second.matrix();
  }
  return true;
}

}  // namespace

TEST_CASE("config validation and json") {
  SearchConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rapidity_cap = 25.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = SearchConfig{};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);

  const SearchConfig parsed = SearchConfig::from_json({{"seed", 7}, {"restarts", 4}});
  CHECK(parsed.seed == 7);
  CHECK(parsed.restarts == 4);
  CHECK(parsed.coarse_grid == 24);
  CHECK_THROWS_AS(SearchConfig::from_json({{"restart", 4}}), ParameterError);
  CHECK_THROWS_AS(SearchConfig::from_json({{"tolerance", -1.0}}), ParameterError);

  const SearchConfig back = SearchConfig::from_json(parsed.to_json());
  CHECK(back.to_json() == parsed.to_json());
}

TEST_CASE("direction search") {
  const OptimizationResult bell = optimize_direction(bell_sym(), SearchConfig{});
  CHECK(bell.best_margin <= -1.0 + 1e-12);

  for (int n = 2; n <= 4; ++n) {
    const OptimizationResult zero = optimize_direction(zeros(n), SearchConfig{});
    CHECK(zero.best_margin >= 0.0 - 1e-12);
    CHECK(verdict_for(zero.best_margin) == Verdict::NotDetected);
  }

  const OptimizationResult oat = optimize_direction(oat_x(4, 0.2), SearchConfig{});
  CHECK(oat.best_margin < 0.0);
  CHECK(oat.converged);
}

TEST_CASE("frame search") {
  CHECK(optimize_frame(ghz3(), SsKind::Ss1, quick()).best_margin < 0.0);
  CHECK(optimize_frame(zeros(3), SsKind::Ss1, quick()).best_margin >= -1e-12);
  CHECK(optimize_frame(w3(), SsKind::Ss3, quick()).best_margin < 0.0);

  // GHZ has zero mean spin, so the primed forms scan the whole group; the answer is admissible
  const MomentTensors ghz = moments(ghz3());
  for (SsKind kind : {SsKind::Ss1p, SsKind::Ss2p}) {
    const OptimizationResult primed = optimize_frame(ghz, kind, quick());
    CHECK(ss_admissible(ghz, kind, std::get<Frame>(primed.params)));
    CHECK(std::abs(reevaluate(ghz, primed.params, kind) - primed.best_margin) <= 1e-12);
  }
  // |000> pins l to the mean spin and stays undetected
  const OptimizationResult pinned = optimize_frame(zeros(3), SsKind::Ss1p, quick());
  CHECK(pinned.best_margin >= -1e-12);
  CHECK_THROWS_AS(optimize_frame(zeros(2), SsKind::Ss1, quick()), ParameterError);
}

TEST_CASE("lorentz search") {
  const OptimizationResult ghz = optimize_lorentz(ghz3(), Family::Ghz, quick());
  CHECK(ghz.best_margin < -1e-3);
  const OptimizationResult w = optimize_lorentz(w3(), Family::W, quick());
  CHECK(w.best_margin < -1e-3);
  const auto& pair = std::get<LorentzPair>(w.params);
  CHECK(lorentz_from_sl2c(pair.second, SpinorConvention::Dagger).is_rotation());

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DensityMatrix sep = random_state(RandomKind::SeparableSymmetric, 3, seed, 1, 3);
    for (Family fam : {Family::Ghz, Family::W}) CHECK(optimize_lorentz(sep, fam, quick()).best_margin >= -1e-9);
  }
}

TEST_CASE("results re-evaluate exactly through the criteria") {
  const DensityMatrix rho = random_state(RandomKind::MixedSymmetric, 3, 4, 2);
  const MomentTensors m = moments(rho);
  const SearchConfig cfg = quick();

  const OptimizationResult d = optimize_direction(m, cfg);
  CHECK(std::abs(reevaluate(m, d.params) - d.best_margin) <= 1e-12);
  for (SsKind kind : {SsKind::Ss1, SsKind::Ss2, SsKind::Ss3}) {
    const OptimizationResult f = optimize_frame(m, kind, cfg);
    CHECK(std::abs(reevaluate(m, f.params, kind) - f.best_margin) <= 1e-12);
  }
  for (Family fam : {Family::Ghz, Family::W}) {
    const OptimizationResult l = optimize_lorentz(m, fam, cfg);
    CHECK(std::abs(reevaluate(m, l.params) - l.best_margin) <= 1e-12);
  }
}

TEST_CASE("refinement never loses to the coarse grid") {
  const DensityMatrix rho = random_state(RandomKind::MixedSymmetric, 2, 9, 2);
  const MomentTensors m = moments(rho);
  SearchConfig cfg;
  const OptimizationResult r = optimize_direction(m, cfg);
  const int g = cfg.coarse_grid;
  for (int i = 0; i <= g; ++i) {
    for (int j = 0; j < 2 * g; ++j) {
      const Direction dir = Direction::from_angles(M_PI * i / g, M_PI * j / g);
      CHECK(r.best_margin <= bipartite_margin(m, dir) + 1e-15);
    }
  }
}

TEST_CASE("searches are deterministic") {
  const DensityMatrix rho = random_state(RandomKind::MixedSymmetric, 3, 13, 2);
  SearchConfig cfg = quick();
  cfg.seed = 42;
  for (Family fam : {Family::Ghz, Family::W}) {
    const OptimizationResult a = optimize_lorentz(rho, fam, cfg);
    const OptimizationResult b = optimize_lorentz(rho, fam, cfg);
    CHECK(a.best_margin == b.best_margin);
    CHECK(a.evaluations == b.evaluations);
    CHECK(same_params(a.params, b.params));
  }
  const OptimizationResult f1 = optimize_frame(rho, SsKind::Ss2, cfg);
  const OptimizationResult f2 = optimize_frame(rho, SsKind::Ss2, cfg);
  CHECK(f1.best_margin == f2.best_margin);
  CHECK(same_params(f1.params, f2.params));
}
