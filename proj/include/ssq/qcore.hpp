#pragma once

// Dense state algebra for n-qubit registers.
//
// Basis convention: computational basis index i = sum_q b_q * 2^(n-1-q), i.e. qubit 0
// is the most significant bit. Dicke index m counts the number of 1s.

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ssq/errors.hpp"

namespace ssq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kDefaultMaxQubits = 12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kSymmetricResidualTolerance = 1e-10;

/// Qubit cap from SSQ_MAX_QUBITS, falling back to kDefaultMaxQubits.
int max_qubits();

/// Throws ResourceError when n exceeds max_qubits(), ParameterError when n < 1.
void check_qubit_count(int n_qubits);

inline std::size_t dimension(int n_qubits) { return std::size_t{1} << n_qubits; }

class DensityMatrix;

class PureState {
public:
  PureState(int n_qubits, CVector amplitudes);

  int n_qubits() const { return n_qubits_; }
  const CVector& amplitudes() const { return amplitudes_; }
  DensityMatrix projector() const;

private:
  int n_qubits_;
  CVector amplitudes_;
};

class DensityMatrix {
public:
  /// Validates Hermiticity, unit trace and positivity (minimum eigenvalue >= -1e-10).
  DensityMatrix(int n_qubits, CMatrix entries);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }

private:
  int n_qubits_;
  CMatrix entries_;
};

/// Symmetric-subspace state in the Dicke basis (index m = number of excitations).
class DickeCoefficients {
public:
  DickeCoefficients(int n_qubits, CMatrix matrix);

  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return matrix_; }

private:
  int n_qubits_;
  CMatrix matrix_;
};

class SubsystemSelection {
public:
  SubsystemSelection(std::vector<int> kept, int n_qubits);

  const std::vector<int>& kept() const { return kept_; }
  int size() const { return static_cast<int>(kept_.size()); }

private:
  std::vector<int> kept_;
};

namespace family {
struct Ghz {};
struct W {};
struct Coherent {
  double theta = 0.0;
  double phi = 0.0;
};
struct Computational {
  std::string bits;
};
struct Psi0 {
  double alpha = 0.0;
};
}  // namespace family

using NamedFamily =
    std::variant<family::Ghz, family::W, family::Coherent, family::Computational, family::Psi0>;

PureState build_named_state(const NamedFamily& fam, int n_qubits);

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
Eigen::Vector2cd coherent_qubit(double theta, double phi);

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSelection& keep);

/// Transpose on one tensor factor, with respect to the computational basis.
CMatrix partial_transpose(const CMatrix& op, int n_qubits, int subsystem);
CMatrix partial_transpose(const DensityMatrix& rho, int subsystem);

cplx expectation(const DensityMatrix& rho, const CMatrix& op);

/// 2^N x (N+1) isometry whose column m is the normalized Dicke state with m excitations.
CMatrix dicke_isometry(int n_qubits);

DensityMatrix to_full(const DickeCoefficients& d);

/// Projects onto the Dicke basis; throws RepresentationError when rho has weight
/// off the symmetric subspace beyond kSymmetricResidualTolerance.
DickeCoefficients to_dicke(const DensityMatrix& rho);

/// Frobenius norm of rho - P rho P, P the symmetric projector.
double symmetric_residual(const DensityMatrix& rho);

const Eigen::Matrix2cd& pauli(int index);

/// Tensor power U ⊗ ... ⊗ U (n factors).
CMatrix tensor_power(const Eigen::Matrix2cd& u, int n);

/// u^{⊗n} applied to |psi><psi| style operators: (u^{⊗n}) rho (u^{⊗n})†.
DensityMatrix rotate_state(const DensityMatrix& rho, const Eigen::Matrix2cd& u);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Smallest eigenvalue of a Hermitian matrix (Hermitian part is used).
double min_eigenvalue(const CMatrix& hermitian);

}  // namespace ssq
