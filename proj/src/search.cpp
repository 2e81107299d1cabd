#include "ssq/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace ssq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Refined {
  std::vector<double> x;
  double value;
  long evaluations;
  bool converged;
};

// Compass search: polls ±step along each coordinate, moves on the first improvement,
// halves the step after a sweep without one.
template <class F>
Refined compass(F&& f, std::vector<double> x, double fx, const std::vector<double>& scales,
                double min_step, int max_sweeps) {
  double step = 1.0;
  long evals = 0;
  for (int sweep = 0; sweep < max_sweeps && step >= min_step; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (const double sign : {1.0, -1.0}) {
        std::vector<double> trial = x;
        trial[i] += sign * step * scales[i];
        const double ft = f(trial);
        ++evals;
        if (ft < fx) {
          x = std::move(trial);
          fx = ft;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {std::move(x), fx, evals, step < min_step};
}

Eigen::Vector3d take3(const std::vector<double>& x, std::size_t at) {
  return {x[at], x[at + 1], x[at + 2]};
}

double unit_angle(int i, int count, double span) { return span * i / count; }

// ---------------------------------------------------------------------------
// Frames pinned to the mean spin: l = sign·m̂, k in the orthogonal plane at angle ψ.

struct PinnedPlane {
  Eigen::Vector3d axis, e1, e2;
};

PinnedPlane pinned_plane(const Eigen::Vector3d& mean) {
  const Eigen::Vector3d u = mean.normalized();
  const Eigen::Vector3d helper =
      std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (helper - helper.dot(u) * u).normalized();
  return {u, e1, u.cross(e1)};
}

Frame pinned_frame(const PinnedPlane& p, double sign, double psi) {
  const Eigen::Vector3d l = sign * p.axis;
  const Eigen::Vector3d k = std::cos(psi) * p.e1 + std::sin(psi) * p.e2;
  return Frame(k, l, k.cross(l));
}

Eigen::Matrix4d star_map(const Eigen::Matrix2cd& a) {
  return lorentz_from_sl2c(SL2C(a), SpinorConvention::Star).matrix();
}

Eigen::Matrix4d dagger_map(const Eigen::Matrix2cd& a) {
  return lorentz_from_sl2c(SL2C(a), SpinorConvention::Dagger).matrix();
}

Eigen::Vector3d haar_rotation_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q(i) = gauss(rng);
  q.normalize();
  const Eigen::Vector3d v = q.tail<3>();
  const double s = v.norm();
  if (s == 0.0) return Eigen::Vector3d::Zero();
  return 2.0 * std::atan2(s, q(0)) * v / s;
}

}  // namespace

// ---------------------------------------------------------------------------

void SearchConfig::validate() const {
  if (coarse_grid <= 0 || restarts <= 0 || refine_iters <= 0) {
    throw ParameterError("search grid, restarts and refine_iters must be positive");
  }
  if (!(rapidity_cap > 0.0) || rapidity_cap > 20.0) {
    throw ParameterError("rapidity_cap must lie in (0, 20]");
  }
  if (!(tolerance > 0.0)) throw ParameterError("search tolerance must be positive");
}

SearchConfig SearchConfig::from_json(const nlohmann::json& doc, SearchConfig base) {
  if (!doc.is_object()) throw ParameterError("search config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "seed") base.seed = value.get<std::uint64_t>();
      else if (key == "coarse_grid") base.coarse_grid = value.get<int>();
      else if (key == "restarts") base.restarts = value.get<int>();
      else if (key == "rapidity_cap") base.rapidity_cap = value.get<double>();
      else if (key == "refine_iters") base.refine_iters = value.get<int>();
      else if (key == "tolerance") base.tolerance = value.get<double>();
      else throw ParameterError("unknown search config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ParameterError("search config key '" + key + "': " + e.what());
    }
  }
  base.validate();
  return base;
}

SearchConfig SearchConfig::from_json(const nlohmann::json& doc) { return from_json(doc, SearchConfig{}); }

nlohmann::json SearchConfig::to_json() const {
  return {{"seed", seed},           {"coarse_grid", coarse_grid}, {"restarts", restarts},
          {"rapidity_cap", rapidity_cap}, {"refine_iters", refine_iters}, {"tolerance", tolerance}};
}

// ---------------------------------------------------------------------------

OptimizationResult optimize_direction(const MomentTensors& m, const SearchConfig& cfg) {
  cfg.validate();
  auto at = [&](const std::vector<double>& x) {
    return bipartite_margin(m, Direction::from_angles(x[0], x[1]));
  };

  const int g = cfg.coarse_grid;
  struct Cell {
    double value;
    double theta, phi;
  };
  std::vector<Cell> cells;
  // Both poles are included; φ is irrelevant there so each pole is visited once.
  for (int i = 0; i <= g; ++i) {
    const double theta = unit_angle(i, g, kPi);
    const int nphi = (i == 0 || i == g) ? 1 : 2 * g;
    for (int j = 0; j < nphi; ++j) {
      const double phi = unit_angle(j, 2 * g, 2.0 * kPi);
      cells.push_back({at({theta, phi}), theta, phi});
    }
  }
  OptimizationResult out;
  out.evaluations = static_cast<long>(cells.size());

  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cells[a].value < cells[b].value; });

  const std::vector<double> scales = {kPi / g, kPi / g};
  std::vector<double> best = {cells[order[0]].theta, cells[order[0]].phi};
  double best_value = cells[order[0]].value;
  const std::size_t seeds = std::min<std::size_t>(3, order.size());
  for (std::size_t s = 0; s < seeds; ++s) {
    const Cell& c = cells[order[s]];
    Refined r = compass(at, {c.theta, c.phi}, c.value, scales, cfg.tolerance, cfg.refine_iters);
    out.evaluations += r.evaluations;
    if (r.value < best_value || (s == 0 && r.value <= best_value)) {
      best = r.x;
      best_value = r.value;
      out.converged = r.converged;
    }
  }
  const Direction n = Direction::from_angles(best[0], best[1]);
  out.params = n;
  out.best_margin = bipartite_margin(m, n);
  return out;
}

OptimizationResult optimize_direction(const DensityMatrix& rho, const SearchConfig& cfg) {
  return optimize_direction(moments(rho), cfg);
}

// ---------------------------------------------------------------------------

OptimizationResult optimize_frame(const MomentTensors& m, SsKind kind, const SearchConfig& cfg) {
  cfg.validate();
  if (m.n_qubits < 3) throw ParameterError("frame search needs N >= 3");
  const bool constrained = kind == SsKind::Ss1p || kind == SsKind::Ss2p;
  const Eigen::Vector3d mean(m.m1[1], m.m1[2], m.m1[3]);
  const bool pinned = constrained && mean.norm() > 1e-9;
  const PinnedPlane plane = pinned ? pinned_plane(mean) : PinnedPlane{};

  // Parameters: pinned → (sign index, ψ); free → ZYZ Euler angles.
  auto frame_of = [&](const std::vector<double>& x) {
    return pinned ? pinned_frame(plane, x[0], x[1]) : Frame::from_euler(x[0], x[1], x[2]);
  };
  auto at = [&](const std::vector<double>& x) {
    const Frame f = frame_of(x);
    if (constrained && !ss_admissible(m, kind, f)) return kInf;
    return ss_value(m, kind, f);
  };

  std::vector<std::vector<double>> grid;
  if (pinned) {
    const int npsi = 4 * cfg.coarse_grid;
    for (const double sign : {1.0, -1.0}) {
      for (int i = 0; i < npsi; ++i) grid.push_back({sign, unit_angle(i, npsi, 2.0 * kPi)});
    }
  } else {
    const int g = std::max(4, cfg.coarse_grid / 2);
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j <= g; ++j) {
        for (int k = 0; k < g; ++k) {
          grid.push_back({unit_angle(i, g, 2.0 * kPi), unit_angle(j, g, kPi),
                          unit_angle(k, g, 2.0 * kPi)});
        }
      }
    }
  }

  OptimizationResult out;
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = at(grid[i]);
  out.evaluations = static_cast<long>(grid.size());

  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  if (!std::isfinite(values[order[0]])) {
    throw PreconditionError(to_string(kind) + ": no admissible frame found");
  }

  std::vector<double> best = grid[order[0]];
  double best_value = values[order[0]];
  const std::size_t seeds = std::min<std::size_t>(3, order.size());
  for (std::size_t s = 0; s < seeds; ++s) {
    if (!std::isfinite(values[order[s]])) break;
    Refined r;
    if (pinned) {
      // The sign stays fixed; only ψ moves.
      const double sign = grid[order[s]][0];
      auto along_psi = [&](const std::vector<double>& x) { return at({sign, x[0]}); };
      r = compass(along_psi, {grid[order[s]][1]}, values[order[s]],
                  {kPi / (2.0 * cfg.coarse_grid)}, cfg.tolerance, cfg.refine_iters);
      r.x.insert(r.x.begin(), sign);
    } else {
      const double h = 2.0 * kPi / std::max(4, cfg.coarse_grid / 2);
      r = compass(at, grid[order[s]], values[order[s]], {h, h / 2.0, h}, cfg.tolerance,
                  cfg.refine_iters);
    }
    out.evaluations += r.evaluations;
    if (r.value < best_value || (s == 0 && r.value <= best_value)) {
      best = r.x;
      best_value = r.value;
      out.converged = r.converged;
    }
  }
  const Frame f = frame_of(best);
  out.params = f;
  out.best_margin = ss_value(m, kind, f);
  return out;
}

OptimizationResult optimize_frame(const DensityMatrix& rho, SsKind kind, const SearchConfig& cfg) {
  return optimize_frame(moments(rho), kind, cfg);
}

// ---------------------------------------------------------------------------

OptimizationResult optimize_lorentz(const MomentTensors& m, Family family, const SearchConfig& cfg) {
  cfg.validate();
  if (m.n_qubits < 3) throw ParameterError("Lorentz search needs N >= 3");
  const TripartiteFunctional t(m);
  const double cap = cfg.rapidity_cap;
  const bool ghz = family == Family::Ghz;
  // GHZ: (v1, r, v2, w1, s, w2); W: (v1, r, v2, u).
  const std::size_t dim = ghz ? 14 : 10;

  auto first_of = [&](const std::vector<double>& x) {
    return sl2c_from_parameters(take3(x, 0), std::clamp(x[3], 0.0, cap), take3(x, 4));
  };
  auto second_of = [&](const std::vector<double>& x) {
    if (ghz) return sl2c_from_parameters(take3(x, 7), std::clamp(x[10], 0.0, cap), take3(x, 11));
    return SL2C(su2_from_rotation_vector(take3(x, 7)));
  };
  auto at = [&](const std::vector<double>& x) {
    const Eigen::Matrix4d l1 = star_map(first_of(x).matrix());
    const Eigen::Matrix4d l2 = dagger_map(second_of(x).matrix());
    double scale = 0.0;
    for (const KTerm& k : k_terms(family)) scale += k.coef * l1(k.a, 0) * l2(k.b, 0) * l2(k.c, 0);
    return t.contract(family, l1, l2) / scale;
  };

  std::vector<double> scales(dim, 0.5);
  scales[3] = 0.5 * std::min(1.0, cap);
  if (ghz) scales[10] = scales[3];

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> rapidity(0.0, cap);

  OptimizationResult out;
  std::vector<double> best;
  double best_value = kInf;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<double> x(dim, 0.0);
    if (restart > 0) {
      auto put = [&](std::size_t at_index, const Eigen::Vector3d& v) {
        for (int i = 0; i < 3; ++i) x[at_index + static_cast<std::size_t>(i)] = v(i);
      };
      put(0, haar_rotation_vector(rng));
      x[3] = rapidity(rng);
      put(4, haar_rotation_vector(rng));
      put(7, haar_rotation_vector(rng));
      if (ghz) {
        x[10] = rapidity(rng);
        put(11, haar_rotation_vector(rng));
      }
    }
    const double fx = at(x);
    Refined r = compass(at, x, fx, scales, cfg.tolerance, cfg.refine_iters);
    out.evaluations += 1 + r.evaluations;
    if (r.value < best_value) {
      best = r.x;
      best_value = r.value;
      out.converged = r.converged;
    }
    if (best_value < cfg.stop_below) break;
  }
  LorentzPair pair{family, first_of(best), second_of(best)};
  out.best_margin = tripartite_normalized_margin(m, k_tensor(family, pair.first, pair.second));
  out.params = pair;
  return out;
}

OptimizationResult optimize_lorentz(const DensityMatrix& rho, Family family, const SearchConfig& cfg) {
  return optimize_lorentz(moments(rho), family, cfg);
}

double reevaluate(const MomentTensors& m, const CriterionParams& params, std::optional<SsKind> kind) {
  if (const auto* n = std::get_if<Direction>(&params)) return bipartite_margin(m, *n);
  if (const auto* f = std::get_if<Frame>(&params)) {
    if (!kind) throw ParameterError("frame parameters need an ss criterion kind");
    return ss_value(m, *kind, *f);
  }
  if (const auto* p = std::get_if<LorentzPair>(&params)) {
    return tripartite_normalized_margin(m, k_tensor(p->family, p->first, p->second));
  }
  throw ParameterError("no parameters to re-evaluate");
}

}  // namespace ssq
