#pragma once

// Collective spin operators J^mu = (J^0, J^1, J^2, J^3) with J^0 = (N/2)·1 and
// J^i = Σ_a σ^i_a / 2, their moment tensors, and the exact operator identities
// that connect single-qubit Pauli sums to collective moments.

#include <array>

#include <Eigen/Sparse>

#include "ssq/geometry.hpp"
#include "ssq/qcore.hpp"

namespace ssq {

using SparseCMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

class SpinOperators {
public:
  explicit SpinOperators(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  /// mu = 0..3.
  const SparseCMatrix& operator[](int mu) const { return j_[static_cast<std::size_t>(mu)]; }
  CMatrix dense(int mu) const { return CMatrix((*this)[mu]); }

private:
  int n_qubits_;
  std::array<SparseCMatrix, 4> j_;
};

/// Throws ResourceError above max_qubits().
SpinOperators collective_spin(int n_qubits);

SparseCMatrix rotated_component(const SpinOperators& s, const Direction& n);
/// Same, validating that `n` is a unit vector (ParameterError otherwise).
SparseCMatrix rotated_component(const SpinOperators& s, const Eigen::Vector3d& n);

/// Operator-ordered moments ⟨J^a⟩, ⟨J^a J^b⟩, ⟨J^a J^b J^c⟩ with a, b, c in 0..3.
struct MomentTensors {
  int n_qubits = 0;
  std::array<double, 4> m1{};
  std::array<std::array<cplx, 4>, 4> m2{};
  std::array<std::array<std::array<cplx, 4>, 4>, 4> m3{};
};

MomentTensors moments(const DensityMatrix& rho, const SpinOperators& s);
MomentTensors moments(const DensityMatrix& rho);
/// Same tensors computed in the spin-N/2 irrep of the Dicke basis.
MomentTensors moments(const DickeCoefficients& d);

/// ⟨J_u⟩, ⟨J_u J_v⟩, ⟨J_u J_v J_w⟩ for spatial vectors u, v, w.
double mean_along(const MomentTensors& m, const Eigen::Vector3d& u);
cplx second_along(const MomentTensors& m, const Eigen::Vector3d& u, const Eigen::Vector3d& v);
cplx third_along(const MomentTensors& m, const Eigen::Vector3d& u, const Eigen::Vector3d& v,
                 const Eigen::Vector3d& w);

/// σ^α σ^β = Σ_μ f^{αβ}_μ σ^μ.
class StructureConstants {
public:
  StructureConstants();
  cplx operator()(int alpha, int beta, int mu) const {
    return f_[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(beta)]
             [static_cast<std::size_t>(mu)];
  }

private:
  std::array<std::array<std::array<cplx, 4>, 4>, 4> f_{};
};

const StructureConstants& structure_constants();

/// Dense Pauli string: ops[k] = (site, pauli index).
CMatrix pauli_string(int n_qubits, std::initializer_list<std::pair<int, int>> ops);

/// max_i ‖Σ_{a<b} σ^i_a σ^i_b − (2 (J^i)² − N/2)‖ (spectral norm).
double pair_identity_residual(int n_qubits);

/// Largest spectral-norm residual of
///   3 Σ_{a<b<c} σ_a^(α σ_b^β σ_c^γ) = 4 J^(αJ^βJ^γ) − 6 f^(αβ_μ J^γ J^μ) + 2 f^(αβ_μ f^γμ)_ν J^ν
/// over all (α, β, γ), round brackets averaging over permutations of α, β, γ.
double triple_identity_residual(int n_qubits);

/// Identity checks build dense 2^N matrices; they refuse N above this.
inline constexpr int kIdentityMaxQubits = 8;

}  // namespace ssq
