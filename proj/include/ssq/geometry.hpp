#pragma once

#include <Eigen/Dense>

#include "ssq/qcore.hpp"

namespace ssq {

inline constexpr double kUnitTolerance = 1e-10;
inline constexpr double kLorentzTolerance = 1e-9;

/// Unit 3-vector.
class Direction {
public:
  explicit Direction(const Eigen::Vector3d& v);
  static Direction from_angles(double theta, double phi);

  const Eigen::Vector3d& vec() const { return v_; }
  double theta() const;
  double phi() const;

private:
  Eigen::Vector3d v_;
};

/// Right-handed orthonormal triple (k, l, n).
class Frame {
public:
  Frame(const Eigen::Vector3d& k, const Eigen::Vector3d& l, const Eigen::Vector3d& n);
  static Frame canonical();
  /// Columns of Rz(a) Ry(b) Rz(c).
  static Frame from_euler(double a, double b, double c);
  static Frame from_rotation(const Eigen::Matrix3d& r);

  const Eigen::Vector3d& k() const { return k_; }
  const Eigen::Vector3d& l() const { return l_; }
  const Eigen::Vector3d& n() const { return n_; }
  /// Rotation matrix with columns k, l, n.
  Eigen::Matrix3d rotation() const;

private:
  Eigen::Vector3d k_, l_, n_;
};

/// Element of SL(2,C): det A = 1 within 1e-10.
class SL2C {
public:
  explicit SL2C(const Eigen::Matrix2cd& a);
  static SL2C identity();

  const Eigen::Matrix2cd& matrix() const { return a_; }

private:
  Eigen::Matrix2cd a_;
};

/// Proper orthochronous Lorentz matrix; row mu holds the image of sigma^mu.
class LorentzMatrix {
public:
  explicit LorentzMatrix(const Eigen::Matrix4d& m);
  static LorentzMatrix identity();

  const Eigen::Matrix4d& matrix() const { return m_; }
  double operator()(int mu, int nu) const { return m_(mu, nu); }
  /// Time row and column equal (1,0,0,0) within 1e-9.
  bool is_rotation() const;

private:
  Eigen::Matrix4d m_;
};

/// Which side of the spinor map is taken: star gives A* s A^T (first qubit, after
/// partial transposition), dagger gives A s A^†.
enum class SpinorConvention { Star, Dagger };

LorentzMatrix lorentz_from_sl2c(const SL2C& a, SpinorConvention convention);

/// exp(-i |v|/2 v̂·σ); v is a rotation vector.
Eigen::Matrix2cd su2_from_rotation_vector(const Eigen::Vector3d& v);
Eigen::Vector3d rotation_vector_from_su2(const Eigen::Matrix2cd& u);
/// SU(2) element U with U σ_j U† = Σ_i R_ij σ_i.
Eigen::Matrix2cd su2_from_rotation(const Eigen::Matrix3d& r);
/// R_ij = tr(σ_i U σ_j U†) / 2.
Eigen::Matrix3d rotation_from_su2(const Eigen::Matrix2cd& u);

/// R1 · diag(e^{r/2}, e^{-r/2}) · R2 with R1, R2 given as rotation vectors.
SL2C sl2c_from_parameters(const Eigen::Vector3d& left, double rapidity,
                          const Eigen::Vector3d& right);

}  // namespace ssq
