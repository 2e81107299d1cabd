#include "ssq/prepfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace ssq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRealityTolerance = 1e-9;

int check_witness_size(const CMatrix& w) {
  if (w.rows() != w.cols() || w.rows() < 2) throw ParameterError("witness must be square");
  int n = 0;
  while ((Eigen::Index{1} << n) < w.rows()) ++n;
  if ((Eigen::Index{1} << n) != w.rows()) {
    throw ParameterError("witness dimension " + std::to_string(w.rows()) + " is not a power of two");
  }
  return n;
}

CVector coherent_full(int n_qubits, double theta, double phi) {
  const Eigen::Vector2cd q = coherent_qubit(theta, phi);
  CVector v(1);
  v(0) = 1.0;
  for (int k = 0; k < n_qubits; ++k) {
    CVector next(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * q(0);
      next(2 * i + 1) = v(i) * q(1);
    }
    v = std::move(next);
  }
  return v;
}

// Real vectorization of a Hermitian (N+1)x(N+1) matrix; its Euclidean norm is the
// Frobenius norm of the matrix.
Eigen::VectorXd hermitian_to_real(const CMatrix& h) {
  const Eigen::Index d = h.rows();
  Eigen::VectorXd out(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index p = 0; p < d; ++p) {
    out(k++) = h(p, p).real();
    for (Eigen::Index q = p + 1; q < d; ++q) {
      out(k++) = std::numbers::sqrt2 * h(p, q).real();
      out(k++) = std::numbers::sqrt2 * h(p, q).imag();
    }
  }
  return out;
}

}  // namespace

cplx spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw ParameterError("spherical harmonic needs |m| <= l");
  const unsigned ul = static_cast<unsigned>(l);
  const unsigned am = static_cast<unsigned>(std::abs(m));
  const cplx positive = std::sph_legendre(ul, am, theta) * std::polar(1.0, am * phi);
  if (m >= 0) return positive;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(positive);
}

CVector coherent_dicke(int n_qubits, double theta, double phi) {
  CVector a(n_qubits + 1);
  const double c = std::cos(theta / 2.0);
  const cplx s = std::polar(std::sin(theta / 2.0), phi);
  double binom = 1.0;
  for (int m = 0; m <= n_qubits; ++m) {
    a(m) = std::sqrt(binom) * std::pow(c, n_qubits - m) * std::pow(s, m);
    binom = binom * (n_qubits - m) / (m + 1);
  }
  return a;
}

HarmonicCoefficients::HarmonicCoefficients(int n_qubits, std::vector<cplx> c)
    : n_qubits_(n_qubits), c_(std::move(c)) {
  if (n_qubits < 1) throw ParameterError("harmonic coefficients need N >= 1");
  const std::size_t expected = static_cast<std::size_t>((n_qubits + 1) * (n_qubits + 1));
  if (c_.size() != expected) {
    throw ParameterError("expected " + std::to_string(expected) + " harmonic coefficients");
  }
  for (int l = 0; l <= n_qubits; ++l) {
    for (int m = 1; m <= l; ++m) {
      const cplx mirrored = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c_[index(l, m)]);
      if (std::abs(c_[index(l, -m)] - mirrored) > kRealityTolerance) {
        throw ParameterError("harmonic coefficients violate c_{l,-m} = (-1)^m conj(c_{l,m})");
      }
    }
  }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int count) {
  if (count < 1) throw ParameterError("Gauss-Legendre needs at least one node");
  // Golub–Welsch: eigenpairs of the symmetric Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Eigen::VectorXd weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), weights};
}

SphereQuadrature sphere_quadrature(int degree) {
  if (degree < 0) throw ParameterError("quadrature degree must be nonnegative");
  const int n_theta = degree / 2 + 1;
  const int n_phi = degree + 1;
  const auto [x, w] = gauss_legendre(n_theta);
  SphereQuadrature q;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(std::clamp(x(i), -1.0, 1.0));
    for (int j = 0; j < n_phi; ++j) {
      q.nodes.emplace_back(theta, 2.0 * kPi * j / n_phi);
      q.weights.push_back(w(i) * 2.0 * kPi / n_phi);
    }
  }
  return q;
}

HarmonicCoefficients p_expand(const DickeCoefficients& d) {
  const int n = d.n_qubits();
  const Eigen::Index dim = n + 1;
  const Eigen::Index unknowns = dim * dim;
  // G[(p,q), (l,m)] = ∫ Y_lm a_p conj(a_q) dΩ; the integrand has degree <= 2N.
  const SphereQuadrature quad = sphere_quadrature(2 * n);
  CMatrix g = CMatrix::Zero(unknowns, unknowns);
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const auto [theta, phi] = quad.nodes[k];
    const CVector a = coherent_dicke(n, theta, phi);
    const CMatrix proj = quad.weights[k] * (a * a.adjoint());
    for (int l = 0; l <= n; ++l) {
      for (int m = -l; m <= l; ++m) {
        const cplx y = spherical_harmonic(l, m, theta, phi);
        const Eigen::Index col = static_cast<Eigen::Index>(HarmonicCoefficients::index(l, m));
        for (Eigen::Index p = 0; p < dim; ++p) {
          for (Eigen::Index q = 0; q < dim; ++q) g(p * dim + q, col) += y * proj(p, q);
        }
      }
    }
  }
  CVector rhs(unknowns);
  for (Eigen::Index p = 0; p < dim; ++p) {
    for (Eigen::Index q = 0; q < dim; ++q) rhs(p * dim + q) = d.matrix()(p, q);
  }
  Eigen::FullPivLU<CMatrix> lu(g);
  if (!lu.isInvertible()) throw NumericalError("harmonic moment system is singular");
  const CVector sol = lu.solve(rhs);

  std::vector<cplx> c(static_cast<std::size_t>(unknowns));
  for (int l = 0; l <= n; ++l) {
    c[HarmonicCoefficients::index(l, 0)] = sol(static_cast<Eigen::Index>(HarmonicCoefficients::index(l, 0))).real();
    for (int m = 1; m <= l; ++m) {
      const double sign = m % 2 == 0 ? 1.0 : -1.0;
      const cplx pos = sol(static_cast<Eigen::Index>(HarmonicCoefficients::index(l, m)));
      const cplx neg = sol(static_cast<Eigen::Index>(HarmonicCoefficients::index(l, -m)));
      const cplx avg = 0.5 * (pos + sign * std::conj(neg));
      c[HarmonicCoefficients::index(l, m)] = avg;
      c[HarmonicCoefficients::index(l, -m)] = sign * std::conj(avg);
    }
  }
  return HarmonicCoefficients(n, std::move(c));
}

HarmonicCoefficients p_expand(const DensityMatrix& rho) { return p_expand(to_dicke(rho)); }

double p_evaluate(const HarmonicCoefficients& c, double theta, double phi) {
  cplx acc = 0.0;
  for (int l = 0; l <= c.n_qubits(); ++l) {
    for (int m = -l; m <= l; ++m) acc += c(l, m) * spherical_harmonic(l, m, theta, phi);
  }
  return acc.real();
}

DickeCoefficients p_reconstruct_dicke(const HarmonicCoefficients& c) {
  const int n = c.n_qubits();
  const SphereQuadrature quad = sphere_quadrature(2 * n);
  CMatrix rho = CMatrix::Zero(n + 1, n + 1);
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const auto [theta, phi] = quad.nodes[k];
    const CVector a = coherent_dicke(n, theta, phi);
    rho += (quad.weights[k] * p_evaluate(c, theta, phi)) * (a * a.adjoint());
  }
  return DickeCoefficients(n, 0.5 * (rho + rho.adjoint()));
}

DensityMatrix p_reconstruct(const HarmonicCoefficients& c) { return to_full(p_reconstruct_dicke(c)); }

std::vector<double> witness_polynomial(const CMatrix& w, const std::vector<SpherePoint>& grid) {
  const int n = check_witness_size(w);
  std::vector<double> out;
  out.reserve(grid.size());
  for (const auto& [theta, phi] : grid) {
    const CVector v = coherent_full(n, theta, phi);
    out.push_back(v.dot(w * v).real());
  }
  return out;
}

double integrate_p_times_witness(const HarmonicCoefficients& c, const CMatrix& w) {
  if (check_witness_size(w) != c.n_qubits()) {
    throw ParameterError("witness and P-function disagree on the qubit count");
  }
  const SphereQuadrature quad = sphere_quadrature(3 * c.n_qubits());
  const std::vector<double> values = witness_polynomial(w, quad.nodes);
  double acc = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    acc += quad.weights[k] * values[k] * p_evaluate(c, quad.nodes[k].first, quad.nodes[k].second);
  }
  return acc;
}

std::vector<SpherePoint> fibonacci_sphere(int count) {
  if (count < 1) throw ParameterError("Fibonacci grid needs at least one point");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<SpherePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // endpoints included, so both poles are nodes
    const double z = count == 1 ? 1.0 : 1.0 - 2.0 * i / (count - 1.0);
    out.emplace_back(std::acos(z), std::fmod(golden * i, 2.0 * kPi));
  }
  return out;
}

nlohmann::json GridMeasure::to_json() const {
  nlohmann::json doc = {{"nodes", nlohmann::json::array()}, {"weights", weights}};
  for (const auto& [theta, phi] : nodes) doc["nodes"].push_back({theta, phi});
  return doc;
}

DensityMatrix reconstruct(const GridMeasure& mu, int n_qubits) {
  CMatrix rho = CMatrix::Zero(n_qubits + 1, n_qubits + 1);
  for (std::size_t k = 0; k < mu.nodes.size(); ++k) {
    const CVector a = coherent_dicke(n_qubits, mu.nodes[k].first, mu.nodes[k].second);
    rho += mu.weights[k] * (a * a.adjoint());
  }
  return to_full(DickeCoefficients(n_qubits, rho));
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json doc = {{"certified", certified}, {"residual", residual}, {"resolution", resolution}};
  if (measure) doc["measure"] = measure->to_json();
  return doc;
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iters) {
  const Eigen::Index n = a.cols();
  if (a.rows() != b.size()) throw ParameterError("nnls: dimension mismatch");
  if (max_iters <= 0) max_iters = static_cast<int>(3 * n + 30);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() * static_cast<double>(std::max(a.rows(), n));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = z(static_cast<Eigen::Index>(k));
    return s;
  };

  for (int outer = 0; outer < max_iters; ++outer) {
    const Eigen::VectorXd grad = a.transpose() * (b - a * x);
    Eigen::Index pick = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad(j) > best) {
        best = grad(j);
        pick = j;
      }
    }
    if (pick < 0) break;
    passive[static_cast<std::size_t>(pick)] = true;

    for (int inner = 0; inner < max_iters; ++inner) {
      const Eigen::VectorXd s = solve_passive();
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

namespace {

struct Atoms {
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;
};

Eigen::VectorXd atoms_residual(const Atoms& atoms, int n, const Eigen::VectorXd& target) {
  Eigen::VectorXd r = -target;
  for (std::size_t k = 0; k < atoms.nodes.size(); ++k) {
    const CVector v = coherent_dicke(n, atoms.nodes[k].first, atoms.nodes[k].second);
    r += atoms.weights[k] * hermitian_to_real(v * v.adjoint());
  }
  return r;
}

// Moves and reweights the support atoms (weights as squares, so they stay
// nonnegative) by damped Gauss–Newton with a forward-difference Jacobian.
Atoms polish_atoms(Atoms atoms, int n, const Eigen::VectorXd& target, int max_iters) {
  const auto k_atoms = static_cast<Eigen::Index>(atoms.nodes.size());
  Eigen::VectorXd p(3 * k_atoms);
  for (Eigen::Index k = 0; k < k_atoms; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    p.segment<3>(3 * k) << atoms.nodes[uk].first, atoms.nodes[uk].second, std::sqrt(atoms.weights[uk]);
  }
  auto unpack = [&](const Eigen::VectorXd& q) {
    Atoms a;
    for (Eigen::Index k = 0; k < k_atoms; ++k) {
      a.nodes.emplace_back(q(3 * k), q(3 * k + 1));
      a.weights.push_back(q(3 * k + 2) * q(3 * k + 2));
    }
    return a;
  };
  Eigen::VectorXd f = atoms_residual(atoms, n, target);
  double lambda = 1e-3;
  for (int it = 0; it < max_iters && f.norm() > 1e-13; ++it) {
    Eigen::MatrixXd jac(f.size(), p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      Eigen::VectorXd q = p;
      const double h = 1e-7 * std::max(1.0, std::abs(p(j)));
      q(j) += h;
      jac.col(j) = (atoms_residual(unpack(q), n, target) - f) / h;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * f;
    bool accepted = false;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      Eigen::MatrixXd sys = jtj;
      sys.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
      const Eigen::VectorXd q = p - sys.ldlt().solve(g);
      const Eigen::VectorXd fq = atoms_residual(unpack(q), n, target);
      if (fq.norm() < f.norm()) {
        p = q;
        f = fq;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) break;
  }
  return unpack(p);
}

}  // namespace

Certificate separability_certificate(const DensityMatrix& rho, const std::vector<SpherePoint>& grid) {
  const DickeCoefficients d = to_dicke(rho);
  const int n = d.n_qubits();
  const Eigen::Index rows = (n + 1) * (n + 1);
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const CVector v = coherent_dicke(n, grid[k].first, grid[k].second);
    a.col(static_cast<Eigen::Index>(k)) = hermitian_to_real(v * v.adjoint());
  }
  const Eigen::VectorXd b = hermitian_to_real(d.matrix());
  Eigen::VectorXd x = nnls(a, b);

  Certificate cert;
  cert.resolution = static_cast<int>(grid.size());
  Atoms atoms;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (x(static_cast<Eigen::Index>(k)) > 0.0) {
      atoms.nodes.push_back(grid[k]);
      atoms.weights.push_back(x(static_cast<Eigen::Index>(k)));
    }
  }
  if (atoms.nodes.empty()) {
    cert.residual = b.norm();
    return cert;
  }
  if (atoms_residual(atoms, n, b).norm() > kCertificateTolerance) {
    // Off-grid atoms: let the support drift to where the state's atoms really are.
    atoms = polish_atoms(std::move(atoms), n, b, 200);
  }
  // Normalize and drop vanishing atoms before the final, exact residual.
  Atoms kept;
  double total = 0.0;
  for (double w : atoms.weights) total += w;
  for (std::size_t k = 0; k < atoms.nodes.size(); ++k) {
    if (atoms.weights[k] / total > 1e-15) {
      kept.nodes.push_back(atoms.nodes[k]);
      kept.weights.push_back(atoms.weights[k] / total);
    }
  }
  cert.residual = atoms_residual(kept, n, b).norm();
  cert.certified = cert.residual <= kCertificateTolerance;
  if (cert.certified) cert.measure = GridMeasure{std::move(kept.nodes), std::move(kept.weights)};
  return cert;
}

Certificate separability_certificate(const DensityMatrix& rho, int grid_resolution) {
  if (grid_resolution < kCertificateMinResolution) {
    throw ParameterError("certificate grid resolution must be at least 8");
  }
  return separability_certificate(rho, fibonacci_sphere(grid_resolution));
}

Certificate separability_certificate(const DensityMatrix& rho) {
  Certificate last;
  for (const int resolution : {64, 256, 1024}) {
    last = separability_certificate(rho, resolution);
    if (last.certified) break;
  }
  return last;
}

}  // namespace ssq
