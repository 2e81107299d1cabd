#include "ssq/spinops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

namespace ssq {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx sparse_trace(const SparseCMatrix& a, const CMatrix& m) {
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseCMatrix::InnerIterator it(a, i); it; ++it) acc += it.value() * m(it.col(), i);
  }
  return acc;
}

// Fills entries carrying a time index from the spatial ones: J^0 = h·1.
void fill_time_components(MomentTensors& m) {
  const double h = 0.5 * m.n_qubits;
  m.m1[0] = h;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 || b == 0) {
        const int rest = a == 0 ? b : a;
        m.m2[a][b] = (a == 0 && b == 0) ? cplx(h * h) : h * cplx(m.m1[rest]);
      }
      for (int c = 0; c < 4; ++c) {
        if (a != 0 && b != 0 && c != 0) continue;
        int spatial[3];
        int k = 0;
        for (int idx : {a, b, c}) {
          if (idx != 0) spatial[k++] = idx;
        }
        const double factor = std::pow(h, 3 - k);
        cplx lower = 1.0;
        if (k == 1) lower = m.m1[spatial[0]];
        if (k == 2) lower = m.m2[spatial[0]][spatial[1]];
        m.m3[a][b][c] = factor * lower;
      }
    }
  }
}

double spectral_norm(const CMatrix& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

std::array<CMatrix, 4> spin_irrep(int n_qubits) {
  const int d = n_qubits + 1;
  CMatrix lower = CMatrix::Zero(d, d);  // J_- : m -> m + 1
  for (int m = 0; m + 1 < d; ++m) lower(m + 1, m) = std::sqrt(double(m + 1) * (n_qubits - m));
  const CMatrix raise = lower.adjoint();
  std::array<CMatrix, 4> j;
  j[0] = 0.5 * n_qubits * CMatrix::Identity(d, d);
  j[1] = 0.5 * (raise + lower);
  j[2] = 0.5 * (-kI * raise + kI * lower);
  j[3] = CMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m) j[3](m, m) = 0.5 * n_qubits - m;
  return j;
}

}  // namespace

SpinOperators::SpinOperators(int n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits));
  std::array<std::vector<Eigen::Triplet<cplx>>, 4> trip;
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    trip[0].emplace_back(i, i, 0.5 * n_qubits);
    trip[3].emplace_back(i, i, 0.5 * n_qubits - std::popcount(ui));
    for (int a = 0; a < n_qubits; ++a) {
      const std::size_t mask = std::size_t{1} << (n_qubits - 1 - a);
      const auto flipped = static_cast<Eigen::Index>(ui ^ mask);
      trip[1].emplace_back(flipped, i, 0.5);
      trip[2].emplace_back(flipped, i, (ui & mask) ? -0.5 * kI : 0.5 * kI);
    }
  }
  for (std::size_t mu = 0; mu < 4; ++mu) {
    j_[mu].resize(d, d);
    j_[mu].setFromTriplets(trip[mu].begin(), trip[mu].end());
    j_[mu].makeCompressed();
  }
}

SpinOperators collective_spin(int n_qubits) { return SpinOperators(n_qubits); }

SparseCMatrix rotated_component(const SpinOperators& s, const Direction& n) {
  const Eigen::Vector3d& v = n.vec();
  SparseCMatrix out = cplx(v.x()) * s[1] + cplx(v.y()) * s[2] + cplx(v.z()) * s[3];
  out.prune(cplx(0.0));
  return out;
}

SparseCMatrix rotated_component(const SpinOperators& s, const Eigen::Vector3d& n) {
  return rotated_component(s, Direction(n));
}

MomentTensors moments(const DensityMatrix& rho, const SpinOperators& s) {
  if (rho.n_qubits() != s.n_qubits()) {
    throw ParameterError("state and spin operators act on different qubit counts");
  }
  MomentTensors m;
  m.n_qubits = rho.n_qubits();
  std::array<CMatrix, 3> jr;  // J^c rho
  for (int c = 0; c < 3; ++c) jr[c] = s[c + 1] * rho.entries();
  for (int a = 1; a < 4; ++a) m.m1[a] = jr[a - 1].trace().real();
  for (int a = 1; a < 4; ++a) {
    for (int b = 1; b < 4; ++b) m.m2[a][b] = sparse_trace(s[a], jr[b - 1]);
  }
  for (int b = 1; b < 4; ++b) {
    for (int c = 1; c < 4; ++c) {
      const CMatrix jjr = s[b] * jr[c - 1];
      for (int a = 1; a < 4; ++a) m.m3[a][b][c] = sparse_trace(s[a], jjr);
    }
  }
  fill_time_components(m);
  return m;
}

MomentTensors moments(const DensityMatrix& rho) { return moments(rho, collective_spin(rho.n_qubits())); }

MomentTensors moments(const DickeCoefficients& d) {
  const auto j = spin_irrep(d.n_qubits());
  const CMatrix& rho = d.matrix();
  MomentTensors m;
  m.n_qubits = d.n_qubits();
  for (int a = 1; a < 4; ++a) m.m1[a] = (j[a] * rho).trace().real();
  for (int a = 1; a < 4; ++a) {
    for (int b = 1; b < 4; ++b) m.m2[a][b] = (j[a] * j[b] * rho).trace();
  }
  for (int a = 1; a < 4; ++a) {
    for (int b = 1; b < 4; ++b) {
      const CMatrix jab = j[a] * j[b];
      for (int c = 1; c < 4; ++c) m.m3[a][b][c] = (jab * j[c] * rho).trace();
    }
  }
  fill_time_components(m);
  return m;
}

double mean_along(const MomentTensors& m, const Eigen::Vector3d& u) {
  return u.x() * m.m1[1] + u.y() * m.m1[2] + u.z() * m.m1[3];
}

cplx second_along(const MomentTensors& m, const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  cplx acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) acc += u(i) * v(j) * m.m2[i + 1][j + 1];
  }
  return acc;
}

cplx third_along(const MomentTensors& m, const Eigen::Vector3d& u, const Eigen::Vector3d& v,
                 const Eigen::Vector3d& w) {
  cplx acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double uv = u(i) * v(j);
      if (uv == 0.0) continue;
      for (int k = 0; k < 3; ++k) acc += uv * w(k) * m.m3[i + 1][j + 1][k + 1];
    }
  }
  return acc;
}

StructureConstants::StructureConstants() {
  auto eps = [](int i, int j, int l) -> double {
    return 0.5 * (i - j) * (j - l) * (l - i);  // Levi-Civita on {1,2,3}
  };
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int mu = 0; mu < 4; ++mu) {
        cplx v = 0.0;
        if (a == 0) {
          v = (b == mu) ? 1.0 : 0.0;
        } else if (b == 0) {
          v = (a == mu) ? 1.0 : 0.0;
        } else {
          if (mu != 0) v += kI * eps(a, b, mu);
          if (a == b && mu == 0) v += 1.0;
        }
        f_[a][b][mu] = v;
      }
    }
  }
}

const StructureConstants& structure_constants() {
  static const StructureConstants f;
  return f;
}

CMatrix pauli_string(int n_qubits, std::initializer_list<std::pair<int, int>> ops) {
  const auto d = dimension(n_qubits);
  std::size_t flip = 0;
  for (auto [site, p] : ops) {
    if (site < 0 || site >= n_qubits) throw ParameterError("Pauli string site out of range");
    if (p == 1 || p == 2) flip |= std::size_t{1} << (n_qubits - 1 - site);
  }
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    cplx phase = 1.0;
    for (auto [site, p] : ops) {
      const bool one = (i >> (n_qubits - 1 - site)) & 1U;
      if (p == 2) phase *= one ? -kI : kI;
      if (p == 3 && one) phase = -phase;
    }
    out(static_cast<Eigen::Index>(i ^ flip), static_cast<Eigen::Index>(i)) = phase;
  }
  return out;
}

double pair_identity_residual(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kIdentityMaxQubits) {
    throw ParameterError("pair identity check supports 1 <= N <= " +
                         std::to_string(kIdentityMaxQubits));
  }
  const SpinOperators s(n_qubits);
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits));
  double worst = 0.0;
  for (int i = 1; i < 4; ++i) {
    CMatrix lhs = CMatrix::Zero(d, d);
    for (int a = 0; a < n_qubits; ++a) {
      for (int b = a + 1; b < n_qubits; ++b) lhs += pauli_string(n_qubits, {{a, i}, {b, i}});
    }
    const CMatrix j = s.dense(i);
    const CMatrix rhs = 2.0 * j * j - 0.5 * n_qubits * CMatrix::Identity(d, d);
    worst = std::max(worst, spectral_norm(lhs - rhs));
  }
  return worst;
}

double triple_identity_residual(int n_qubits) {
  if (n_qubits < 3 || n_qubits > kIdentityMaxQubits) {
    throw ParameterError("triple identity check supports 3 <= N <= " +
                         std::to_string(kIdentityMaxQubits));
  }
  const SpinOperators s(n_qubits);
  const StructureConstants& f = structure_constants();
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits));
  std::array<CMatrix, 4> j;
  for (int mu = 0; mu < 4; ++mu) j[mu] = s.dense(mu);
  std::array<std::array<CMatrix, 4>, 4> jj;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) jj[a][b] = j[a] * j[b];
  }

  const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  double worst = 0.0;
  for (int alpha = 0; alpha < 4; ++alpha) {
    for (int beta = 0; beta < 4; ++beta) {
      for (int gamma = 0; gamma < 4; ++gamma) {
        const std::array<int, 3> idx = {alpha, beta, gamma};
        CMatrix lhs = CMatrix::Zero(d, d);
        CMatrix rhs = CMatrix::Zero(d, d);
        for (const auto& p : perms) {
          const int x = idx[p[0]], y = idx[p[1]], z = idx[p[2]];
          for (int a = 0; a < n_qubits; ++a) {
            for (int b = a + 1; b < n_qubits; ++b) {
              for (int c = b + 1; c < n_qubits; ++c) {
                lhs += pauli_string(n_qubits, {{a, x}, {b, y}, {c, z}});
              }
            }
          }
          rhs += 4.0 * jj[x][y] * j[z];
          for (int mu = 0; mu < 4; ++mu) {
            const cplx fxy = f(x, y, mu);
            if (fxy == 0.0) continue;
            rhs -= 6.0 * fxy * jj[z][mu];
            for (int nu = 0; nu < 4; ++nu) {
              const cplx ff = fxy * f(z, mu, nu);
              if (ff != 0.0) rhs += 2.0 * ff * j[nu];
            }
          }
        }
        lhs *= 3.0 / 6.0;
        rhs /= 6.0;
        worst = std::max(worst, spectral_norm(lhs - rhs));
      }
    }
  }
  return worst;
}

}  // namespace ssq
