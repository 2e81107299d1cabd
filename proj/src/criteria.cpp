#include "ssq/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ssq {

namespace {

constexpr std::size_t at(int a, int b, int c) { return static_cast<std::size_t>(16 * a + 4 * b + c); }

void require_pairs(int n) {
  if (n < 2) throw ParameterError("two-qubit criteria need N >= 2");
}

void require_triples(int n) {
  if (n < 3) throw ParameterError("three-qubit criteria need N >= 3");
}

struct DirectionalMoments {
  double mean;    // ⟨J_n⟩
  double second;  // ⟨J_n²⟩
};

DirectionalMoments along(const MomentTensors& m, const Direction& n) {
  return {mean_along(m, n.vec()), second_along(m, n.vec(), n.vec()).real()};
}

}  // namespace

Verdict verdict_for(double margin, double threshold) {
  return margin < -threshold ? Verdict::Entangled : Verdict::NotDetected;
}

bool in_boundary_band(double margin, double threshold) { return std::abs(margin) <= threshold; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Entangled: return "entangled";
    case Verdict::NotDetected: return "not_detected";
  }
  return "unknown";
}

std::string to_string(Family f) { return f == Family::Ghz ? "GHZ" : "W"; }

std::string to_string(SsKind k) {
  switch (k) {
    case SsKind::Ss1: return "ss1";
    case SsKind::Ss2: return "ss2";
    case SsKind::Ss3: return "ss3";
    case SsKind::Ss1p: return "ss1p";
    case SsKind::Ss2p: return "ss2p";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

XiSquared xi_squared(const MomentTensors& m) {
  const Eigen::Vector3d mean(m.m1[1], m.m1[2], m.m1[3]);
  if (mean.norm() < 1e-9) {
    throw UndefinedMeanSpinError("mean spin vanishes; the squeezing plane is undefined");
  }
  Eigen::Matrix3d cov;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      cov(i, j) = 0.5 * (m.m2[i + 1][j + 1] + m.m2[j + 1][i + 1]).real() - mean(i) * mean(j);
    }
  }
  const Eigen::Vector3d u = mean.normalized();
  const Eigen::Vector3d helper =
      std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (helper - helper.dot(u) * u).normalized();
  const Eigen::Vector3d e2 = u.cross(e1);
  Eigen::Matrix2d plane;
  plane << e1.dot(cov * e1), e1.dot(cov * e2), e2.dot(cov * e1), e2.dot(cov * e2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(plane);
  const Eigen::Vector2d w = es.eigenvectors().col(0);
  const Eigen::Vector3d n = (w(0) * e1 + w(1) * e2).normalized();
  const double j = 0.5 * m.n_qubits;
  return {2.0 * es.eigenvalues()(0) / j, Direction(n)};
}

XiSquared xi_squared(const DensityMatrix& rho) { return xi_squared(moments(rho)); }

double bipartite_margin(const MomentTensors& m, const Direction& n) {
  require_pairs(m.n_qubits);
  const double nq = m.n_qubits;
  const auto [mean, second] = along(m, n);
  const double a = nq * nq / 4.0 - second;
  const double b = (nq - 1.0) * mean;
  return second + nq * (nq - 2.0) / 4.0 - std::hypot(a, b);
}

double bipartite_margin(const DensityMatrix& rho, const Direction& n) {
  return bipartite_margin(moments(rho), n);
}

double bipartite_raw(const MomentTensors& m, const Direction& n, double alpha) {
  require_pairs(m.n_qubits);
  if (alpha < -std::numbers::pi || alpha > std::numbers::pi) {
    throw ParameterError("alpha must lie in [-pi, pi]");
  }
  const double nq = m.n_qubits;
  const auto [mean, second] = along(m, n);
  return std::sin(alpha) * (nq * nq / 4.0 - second) - (nq - 1.0) * std::cos(alpha) * mean +
         second + nq * (nq - 2.0) / 4.0;
}

double bipartite_raw(const DensityMatrix& rho, const Direction& n, double alpha) {
  return bipartite_raw(moments(rho), n, alpha);
}

double bipartite_optimal_alpha(const MomentTensors& m, const Direction& n) {
  require_pairs(m.n_qubits);
  const double nq = m.n_qubits;
  const auto [mean, second] = along(m, n);
  // minimize a sin α − b cos α: (sin α, cos α) ∝ (−a, b)
  return std::atan2(-(nq * nq / 4.0 - second), (nq - 1.0) * mean);
}

double bipartite_normalized(const MomentTensors& m, const Direction& n) {
  require_pairs(m.n_qubits);
  const double nq = m.n_qubits;
  const auto [mean, second] = along(m, n);
  return 4.0 * (second - mean * mean) / nq - (1.0 - 4.0 * mean * mean / (nq * nq));
}

// ---------------------------------------------------------------------------

const std::vector<KTerm>& k_terms(Family family) {
  // Round brackets in (βγ) appear as two half-weight orderings.
  static const std::vector<KTerm> ghz = {
      {1.0, 0, 0, 0}, {1.0, 0, 3, 3}, {1.0, 1, 1, 1}, {1.0, 3, 0, 3}, {1.0, 3, 3, 0},
      {-1.0, 1, 2, 2}, {1.0, 2, 1, 2}, {1.0, 2, 2, 1},
  };
  static const std::vector<KTerm> w = {
      {1.0, 0, 0, 0},   {-1.0, 3, 3, 3},  {1.0 / 3, 0, 0, 3}, {1.0 / 3, 0, 3, 0},
      {1.0 / 3, 3, 0, 0}, {-1.0 / 3, 0, 3, 3}, {-1.0 / 3, 3, 0, 3}, {-1.0 / 3, 3, 3, 0},
      {2.0 / 3, 1, 0, 1}, {2.0 / 3, 1, 1, 0}, {2.0 / 3, 1, 1, 3}, {2.0 / 3, 1, 3, 1},
      {-2.0 / 3, 2, 0, 2}, {-2.0 / 3, 2, 2, 0}, {-2.0 / 3, 2, 2, 3}, {-2.0 / 3, 2, 3, 2},
      // transverse part of |W><W|^{T1}
      {2.0 / 3, 0, 1, 1}, {2.0 / 3, 0, 2, 2}, {2.0 / 3, 3, 1, 1}, {2.0 / 3, 3, 2, 2},
  };
  return family == Family::Ghz ? ghz : w;
}

KTensor k_tensor(Family family, const LorentzMatrix& first, const LorentzMatrix& second) {
  if (family == Family::W && !second.is_rotation()) {
    throw ParameterError("the W family needs a pure rotation as its second transformation");
  }
  const Eigen::Matrix4d& l1 = first.matrix();
  const Eigen::Matrix4d& l2 = second.matrix();
  std::array<double, 64> data{};
  for (const KTerm& t : k_terms(family)) {
    for (int x = 0; x < 4; ++x) {
      const double fa = t.coef * l1(t.a, x);
      if (fa == 0.0) continue;
      for (int y = 0; y < 4; ++y) {
        for (int z = 0; z < 4; ++z) data[at(x, y, z)] += fa * l2(t.b, y) * l2(t.c, z);
      }
    }
  }
  return KTensor(family, data);
}

KTensor k_tensor(Family family, const SL2C& a, const SL2C& b) {
  return k_tensor(family, lorentz_from_sl2c(a, SpinorConvention::Star),
                  lorentz_from_sl2c(b, SpinorConvention::Dagger));
}

KTensor cyclic_average(const KTensor& k) {
  std::array<double, 64> out{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) out[at(a, b, c)] = (k(a, b, c) + k(b, a, c) + k(c, a, b)) / 3.0;
    }
  }
  return KTensor(k.family(), out);
}

KTensor symmetrize(const KTensor& k) {
  std::array<double, 64> out{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        out[at(a, b, c)] = (k(a, b, c) + k(a, c, b) + k(b, a, c) + k(b, c, a) + k(c, a, b) +
                            k(c, b, a)) /
                           6.0;
      }
    }
  }
  return KTensor(k.family(), out);
}

TripartiteFunctional::TripartiteFunctional(const MomentTensors& m) {
  const StructureConstants& f = structure_constants();
  std::array<cplx, 64> raw{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int g = 0; g < 4; ++g) {
        cplx v = 2.0 * m.m3[a][b][g];
        for (int mu = 0; mu < 4; ++mu) {
          const cplx fab = f(a, b, mu);
          if (fab == 0.0) continue;
          v -= 3.0 * fab * 0.5 * (m.m2[g][mu] + m.m2[mu][g]);
          for (int nu = 0; nu < 4; ++nu) {
            v += fab * 0.5 * (f(g, mu, nu) + f(mu, g, nu)) * m.m1[nu];
          }
        }
        raw[at(a, b, g)] = v;
      }
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        const cplx s = raw[at(a, b, c)] + raw[at(a, c, b)] + raw[at(b, a, c)] + raw[at(b, c, a)] +
                       raw[at(c, a, b)] + raw[at(c, b, a)];
        t_[at(a, b, c)] = s.real() / 6.0;
      }
    }
  }
}

double TripartiteFunctional::contract(Family family, const Eigen::Matrix4d& first,
                                      const Eigen::Matrix4d& second) const {
  // x[a] = T(first^a, ., .), then successive contractions with second.
  std::array<double, 64> x{};
  for (int a = 0; a < 4; ++a) {
    for (int i = 0; i < 4; ++i) {
      const double f = first(a, i);
      if (f == 0.0) continue;
      for (int j = 0; j < 16; ++j) x[static_cast<std::size_t>(16 * a + j)] += f * t_[static_cast<std::size_t>(16 * i + j)];
    }
  }
  std::array<double, 64> y{};  // y[a][b][γ]
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) acc += second(b, i) * x[at(a, i, j)];
        y[at(a, b, j)] = acc;
      }
    }
  }
  double total = 0.0;
  for (const KTerm& t : k_terms(family)) {
    double z = 0.0;
    for (int j = 0; j < 4; ++j) z += second(t.c, j) * y[at(t.a, t.b, j)];
    total += t.coef * z;
  }
  return total;
}

double TripartiteFunctional::contract(const KTensor& k) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < 64; ++i) acc += k.data()[i] * t_[i];
  return acc;
}

double tripartite_margin(const MomentTensors& m, const KTensor& k, TripartiteMode) {
  require_triples(m.n_qubits);
  return TripartiteFunctional(m).contract(k);
}

double tripartite_margin(const DensityMatrix& rho, const KTensor& k, TripartiteMode mode) {
  return tripartite_margin(moments(rho), k, mode);
}

double tripartite_normalized_margin(const MomentTensors& m, const KTensor& k) {
  return tripartite_margin(m, k, TripartiteMode::Symmetric) / k.scale();
}

// ---------------------------------------------------------------------------

Eigen::Matrix<cplx, 8, 8> witness_matrix(WitnessKind kind, const Frame& frame) {
  Eigen::Matrix<cplx, 8, 1> v = Eigen::Matrix<cplx, 8, 1>::Zero();
  double shift = 0.0;
  switch (kind) {
    case WitnessKind::Ghz:
    case WitnessKind::W2:
      v(0) = v(7) = 1.0 / std::numbers::sqrt2;
      shift = kind == WitnessKind::Ghz ? 0.75 : 0.5;
      break;
    case WitnessKind::W1:
      v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
      shift = 2.0 / 3.0;
      break;
  }
  const CMatrix u = tensor_power(su2_from_rotation(frame.rotation()), 3);
  const Eigen::Matrix<cplx, 8, 1> rotated = u * v;
  return shift * Eigen::Matrix<cplx, 8, 8>::Identity() - rotated * rotated.adjoint();
}

WitnessKind witness_for(SsKind k) {
  switch (k) {
    case SsKind::Ss1:
    case SsKind::Ss1p: return WitnessKind::Ghz;
    case SsKind::Ss2: return WitnessKind::W1;
    case SsKind::Ss3:
    case SsKind::Ss2p: return WitnessKind::W2;
  }
  return WitnessKind::Ghz;
}

double ss_constant(SsKind kind, int n_qubits) {
  const long long n = n_qubits;
  switch (kind) {
    case SsKind::Ss1: return static_cast<double>(n * (n - 2) * (5 * n - 2)) / 24.0;
    case SsKind::Ss2: return static_cast<double>(n * (n - 2) * (13 * n - 4)) / 24.0;
    case SsKind::Ss3: return static_cast<double>(n * n * (n - 2)) / 8.0;
    case SsKind::Ss1p: return static_cast<double>(5 * n * (n - 1) * (n - 2)) / 24.0;
    case SsKind::Ss2p: return static_cast<double>(n * (n - 1) * (n - 2)) / 8.0;
  }
  return 0.0;
}

bool ss_admissible(const MomentTensors& m, SsKind kind, const Frame& frame) {
  if (kind != SsKind::Ss1p && kind != SsKind::Ss2p) return true;
  const double nq = m.n_qubits;
  const double tol = 1e-9 * std::max(1.0, nq);
  const double floor = nq / 4.0 - tol;
  return std::abs(mean_along(m, frame.k())) <= tol && std::abs(mean_along(m, frame.n())) <= tol &&
         second_along(m, frame.k(), frame.k()).real() >= floor &&
         second_along(m, frame.n(), frame.n()).real() >= floor;
}

double ss_value(const MomentTensors& m, SsKind kind, const Frame& frame) {
  require_triples(m.n_qubits);
  if (!ss_admissible(m, kind, frame)) {
    throw PreconditionError(to_string(kind) +
                            " needs <J_k> = <J_n> = 0 and <J_k^2>, <J_n^2> >= N/4 in the frame");
  }
  const double nq = m.n_qubits;
  const Eigen::Vector3d& k = frame.k();
  const Eigen::Vector3d& l = frame.l();
  const Eigen::Vector3d& n = frame.n();
  const double c = ss_constant(kind, m.n_qubits);
  const double cubic_k = -third_along(m, k, k, k).real() / 3.0 + third_along(m, l, k, l).real();

  switch (kind) {
    case SsKind::Ss1:
    case SsKind::Ss3:
      return cubic_k - 0.5 * (nq - 2.0) * second_along(m, n, n).real() + mean_along(m, k) / 3.0 + c;
    case SsKind::Ss2:
      return third_along(m, n, n, n).real() - 2.0 * third_along(m, l, n, l).real() -
             2.0 * third_along(m, k, n, k).real() -
             0.5 * (nq - 2.0) *
                 (2.0 * second_along(m, k, k).real() + 2.0 * second_along(m, l, l).real() -
                  second_along(m, n, n).real()) -
             (nq * nq - 4.0 * nq + 8.0) / 4.0 * mean_along(m, n) + c;
    case SsKind::Ss1p:
    case SsKind::Ss2p:
      return cubic_k + c;
  }
  return 0.0;
}

double ss_value(const DensityMatrix& rho, SsKind kind, const Frame& frame) {
  return ss_value(moments(rho), kind, frame);
}

}  // namespace ssq
