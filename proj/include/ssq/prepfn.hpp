#pragma once

// P-representation of symmetric states: ρ = ∫ dΩ P(θ,φ) |θ,φ⟩⟨θ,φ|^{⊗N}.
// Harmonics are orthonormal with the Condon–Shortley phase.

#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssq/qcore.hpp"

namespace ssq {

using SpherePoint = std::pair<double, double>;  // (θ, φ)

/// Y_l^m(θ, φ), orthonormal on the sphere.
cplx spherical_harmonic(int l, int m, double theta, double phi);

/// Dicke amplitudes of |θ,φ⟩^{⊗N}: sqrt(C(N,m)) cos^{N-m}(θ/2) (e^{iφ} sin(θ/2))^m.
CVector coherent_dicke(int n_qubits, double theta, double phi);

class HarmonicCoefficients {
public:
  /// c holds (N+1)² entries ordered l = 0..N, m = -l..l. Checks the reality condition
  /// c_{l,-m} = (-1)^m conj(c_{l,m}) to 1e-9 (ParameterError otherwise).
  HarmonicCoefficients(int n_qubits, std::vector<cplx> c);

  int n_qubits() const { return n_qubits_; }
  cplx operator()(int l, int m) const { return c_[index(l, m)]; }
  const std::vector<cplx>& data() const { return c_; }
  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }

private:
  int n_qubits_;
  std::vector<cplx> c_;
};

/// Product rule: Gauss–Legendre in cos θ times uniform φ, exact for spherical
/// polynomials of total degree <= `degree`. Weights sum to 4π.
struct SphereQuadrature {
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;
};
SphereQuadrature sphere_quadrature(int degree);

/// Gauss–Legendre nodes and weights on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int count);

HarmonicCoefficients p_expand(const DickeCoefficients& d);
/// Throws RepresentationError for states off the symmetric subspace.
HarmonicCoefficients p_expand(const DensityMatrix& rho);

DickeCoefficients p_reconstruct_dicke(const HarmonicCoefficients& c);
DensityMatrix p_reconstruct(const HarmonicCoefficients& c);

/// Real value of P at (θ, φ).
double p_evaluate(const HarmonicCoefficients& c, double theta, double phi);

/// w(θ,φ) = ⟨θ,φ|^{⊗N} W |θ,φ⟩^{⊗N}; W is 2^N × 2^N. ParameterError when W is not square
/// with power-of-two size.
std::vector<double> witness_polynomial(const CMatrix& w, const std::vector<SpherePoint>& grid);

/// ∫ P w dΩ by quadrature exact for the product.
double integrate_p_times_witness(const HarmonicCoefficients& c, const CMatrix& w);

/// `count` nearly uniform points on a golden-angle spiral that starts and ends at the poles.
std::vector<SpherePoint> fibonacci_sphere(int count);

struct GridMeasure {
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;

  nlohmann::json to_json() const;
};

/// Σ_k w_k |θ_k,φ_k⟩⟨θ_k,φ_k|^{⊗N}.
DensityMatrix reconstruct(const GridMeasure& mu, int n_qubits);

struct Certificate {
  bool certified = false;
  std::optional<GridMeasure> measure;  // atoms with positive weight only
  double residual = 0.0;               // Euclidean residual of the moment match
  int resolution = 0;

  nlohmann::json to_json() const;
};

inline constexpr double kCertificateTolerance = 1e-8;
inline constexpr int kCertificateMinResolution = 8;

/// Nonnegative least squares over the given nodes. If that leaves a residual, the
/// support atoms are moved off the grid by damped Gauss–Newton. Certified iff the
/// final measure reproduces rho within 1e-8.
Certificate separability_certificate(const DensityMatrix& rho, const std::vector<SpherePoint>& grid);
/// Fibonacci grid with `grid_resolution` >= 8 nodes.
Certificate separability_certificate(const DensityMatrix& rho, int grid_resolution);
/// Tries 64, 256, 1024 nodes in turn.
Certificate separability_certificate(const DensityMatrix& rho);

/// min ‖Ax − b‖ subject to x >= 0 (Lawson–Hanson active set).
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iters = 0);

}  // namespace ssq
