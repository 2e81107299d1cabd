#include "ssq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

namespace ssq {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_unit(const Eigen::Vector3d& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > kUnitTolerance) {
    throw ParameterError(std::string(what) + " must be a unit vector (norm " +
                         std::to_string(v.norm()) + ")");
  }
}

}  // namespace

Direction::Direction(const Eigen::Vector3d& v) : v_(v) { check_unit(v_, "direction"); }

Direction Direction::from_angles(double theta, double phi) {
  return Direction(Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                   std::sin(theta) * std::sin(phi), std::cos(theta)));
}

double Direction::theta() const { return std::acos(std::clamp(v_.z(), -1.0, 1.0)); }
double Direction::phi() const { return std::atan2(v_.y(), v_.x()); }

Frame::Frame(const Eigen::Vector3d& k, const Eigen::Vector3d& l, const Eigen::Vector3d& n)
    : k_(k), l_(l), n_(n) {
  check_unit(k_, "frame axis k");
  check_unit(l_, "frame axis l");
  check_unit(n_, "frame axis n");
  if (std::abs(k_.dot(l_)) > kUnitTolerance || std::abs(k_.dot(n_)) > kUnitTolerance ||
      std::abs(l_.dot(n_)) > kUnitTolerance) {
    throw ParameterError("frame axes must be pairwise orthogonal");
  }
  if (std::abs(rotation().determinant() - 1.0) > kUnitTolerance) {
    throw ParameterError("frame must be right-handed");
  }
}

Frame Frame::canonical() {
  return Frame(Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ());
}

Frame Frame::from_euler(double a, double b, double c) {
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) *
                             Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
                             Eigen::AngleAxisd(c, Eigen::Vector3d::UnitZ()))
                                .toRotationMatrix();
  return from_rotation(r);
}

Frame Frame::from_rotation(const Eigen::Matrix3d& r) {
  return Frame(r.col(0), r.col(1), r.col(2));
}

Eigen::Matrix3d Frame::rotation() const {
  Eigen::Matrix3d r;
  r << k_, l_, n_;
  return r;
}

SL2C::SL2C(const Eigen::Matrix2cd& a) : a_(a) {
  const cplx det = a_.determinant();
  if (std::abs(det - 1.0) > 1e-10) {
    throw ParameterError("SL(2,C) element needs det = 1 (got " + std::to_string(det.real()) +
                         (det.imag() < 0 ? "" : "+") + std::to_string(det.imag()) + "i)");
  }
}

SL2C SL2C::identity() { return SL2C(Eigen::Matrix2cd::Identity()); }

LorentzMatrix::LorentzMatrix(const Eigen::Matrix4d& m) : m_(m) {
  const Eigen::Matrix4d eta = Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
  const double scale = std::max(1.0, m_.squaredNorm());
  if ((m_.transpose() * eta * m_ - eta).cwiseAbs().maxCoeff() > kLorentzTolerance * scale) {
    throw ParameterError("matrix does not preserve the Minkowski form");
  }
  if (m_(0, 0) < 1.0 - kLorentzTolerance) {
    throw ParameterError("Lorentz matrix is not orthochronous");
  }
  // the determinant is quartic in the entries, so its rounding error grows like scale²
  if (std::abs(m_.determinant() - 1.0) > kLorentzTolerance * scale * scale) {
    throw ParameterError("Lorentz matrix is not proper");
  }
}

LorentzMatrix LorentzMatrix::identity() { return LorentzMatrix(Eigen::Matrix4d::Identity()); }

bool LorentzMatrix::is_rotation() const {
  for (int i = 1; i < 4; ++i) {
    if (std::abs(m_(0, i)) > kLorentzTolerance || std::abs(m_(i, 0)) > kLorentzTolerance) {
      return false;
    }
  }
  return std::abs(m_(0, 0) - 1.0) <= kLorentzTolerance;
}

LorentzMatrix lorentz_from_sl2c(const SL2C& a, SpinorConvention convention) {
  const Eigen::Matrix2cd& m = a.matrix();
  const bool star = convention == SpinorConvention::Star;
  const Eigen::Matrix2cd left = star ? Eigen::Matrix2cd(m.conjugate()) : m;
  const Eigen::Matrix2cd right = star ? Eigen::Matrix2cd(m.transpose()) : Eigen::Matrix2cd(m.adjoint());
  Eigen::Matrix4d out;
  for (int mu = 0; mu < 4; ++mu) {
    const Eigen::Matrix2cd image = left * pauli(mu) * right;
    for (int nu = 0; nu < 4; ++nu) out(mu, nu) = 0.5 * (pauli(nu) * image).trace().real();
  }
  return LorentzMatrix(out);
}

Eigen::Matrix2cd su2_from_rotation_vector(const Eigen::Vector3d& v) {
  const double angle = v.norm();
  if (angle == 0.0) return Eigen::Matrix2cd::Identity();
  const Eigen::Vector3d axis = v / angle;
  const Eigen::Matrix2cd axis_sigma = axis.x() * pauli(1) + axis.y() * pauli(2) + axis.z() * pauli(3);
  return std::cos(angle / 2.0) * Eigen::Matrix2cd::Identity() - kI * std::sin(angle / 2.0) * axis_sigma;
}

Eigen::Vector3d rotation_vector_from_su2(const Eigen::Matrix2cd& u) {
  const double a0 = 0.5 * u.trace().real();
  Eigen::Vector3d a;
  for (int k = 0; k < 3; ++k) a(k) = (0.5 * kI * (pauli(k + 1) * u).trace()).real();
  const double s = a.norm();
  if (s == 0.0) return Eigen::Vector3d::Zero();
  const double angle = 2.0 * std::atan2(s, a0);
  return angle * a / s;
}

Eigen::Matrix2cd su2_from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  return q.w() * Eigen::Matrix2cd::Identity() -
         kI * (q.x() * pauli(1) + q.y() * pauli(2) + q.z() * pauli(3));
}

Eigen::Matrix3d rotation_from_su2(const Eigen::Matrix2cd& u) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = 0.5 * (pauli(i + 1) * u * pauli(j + 1) * u.adjoint()).trace().real();
    }
  }
  return r;
}

SL2C sl2c_from_parameters(const Eigen::Vector3d& left, double rapidity,
                          const Eigen::Vector3d& right) {
  Eigen::Matrix2cd boost = Eigen::Matrix2cd::Zero();
  boost(0, 0) = std::exp(rapidity / 2.0);
  boost(1, 1) = std::exp(-rapidity / 2.0);
  return SL2C(su2_from_rotation_vector(left) * boost * su2_from_rotation_vector(right));
}

}  // namespace ssq
