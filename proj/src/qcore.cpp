#include "ssq/qcore.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

namespace ssq {

namespace {

constexpr cplx kI{0.0, 1.0};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Full-register offset of a sub-register index whose bits (MSB first) sit on `qubits`.
std::vector<std::size_t> scatter_offsets(const std::vector<int>& qubits, int n_qubits) {
  const std::size_t count = std::size_t{1} << qubits.size();
  std::vector<std::size_t> out(count, 0);
  const int k = static_cast<int>(qubits.size());
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t full = 0;
    for (int j = 0; j < k; ++j) {
      if ((idx >> (k - 1 - j)) & 1U) full |= std::size_t{1} << (n_qubits - 1 - qubits[j]);
    }
    out[idx] = full;
  }
  return out;
}

void check_subsystem(int subsystem, int n_qubits) {
  if (subsystem < 0 || subsystem >= n_qubits) {
    throw ParameterError("qubit index " + std::to_string(subsystem) + " out of range for " +
                         std::to_string(n_qubits) + " qubits");
  }
}

// Left-multiplies `m` by u acting on qubit q.
void apply_left(CMatrix& m, const Eigen::Matrix2cd& u, int q, int n_qubits) {
  const std::size_t mask = std::size_t{1} << (n_qubits - 1 - q);
  const auto rows = static_cast<std::size_t>(m.rows());
  for (std::size_t i = 0; i < rows; ++i) {
    if (i & mask) continue;
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | mask);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const cplx a = m(i0, c);
      const cplx b = m(i1, c);
      m(i0, c) = u(0, 0) * a + u(0, 1) * b;
      m(i1, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

}  // namespace

int max_qubits() {
  if (const char* env = std::getenv("SSQ_MAX_QUBITS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultMaxQubits;
}

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1) throw ParameterError("n_qubits must be positive");
  if (n_qubits > max_qubits()) {
    throw ResourceError("n_qubits = " + std::to_string(n_qubits) + " exceeds the cap of " +
                        std::to_string(max_qubits()) + " (SSQ_MAX_QUBITS)");
  }
}

PureState::PureState(int n_qubits, CVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(n_qubits_);
  if (static_cast<std::size_t>(amplitudes_.size()) != dimension(n_qubits_)) {
    throw ParameterError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                         ", expected 2^" + std::to_string(n_qubits_));
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw RepresentationError("pure state is not normalized (|psi|^2 = " + std::to_string(norm2) +
                              ")");
  }
}

DensityMatrix PureState::projector() const {
  return DensityMatrix(n_qubits_, amplitudes_ * amplitudes_.adjoint());
}

DensityMatrix::DensityMatrix(int n_qubits, CMatrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  check_qubit_count(n_qubits_);
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits_));
  if (entries_.rows() != d || entries_.cols() != d) {
    throw ParameterError("density matrix must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTolerance) {
    throw RepresentationError("density matrix is not Hermitian (deviation " +
                              std::to_string(herm) + ")");
  }
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
  const double tr = entries_.trace().real();
  if (std::abs(tr - 1.0) > kNormTolerance) {
    throw RepresentationError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  bool psd = true;
  if (d <= 256) {
    psd = min_eigenvalue(entries_) >= -kPsdTolerance;
  } else {
    CMatrix shifted = entries_;
    shifted.diagonal().array() += kPsdTolerance;
    psd = Eigen::LLT<CMatrix>(shifted).info() == Eigen::Success;
  }
  if (!psd) throw RepresentationError("density matrix has an eigenvalue below -1e-10");
}

DickeCoefficients::DickeCoefficients(int n_qubits, CMatrix matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  if (n_qubits_ < 1) throw ParameterError("n_qubits must be positive");
  const Eigen::Index d = n_qubits_ + 1;
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw ParameterError("Dicke matrix must be (N+1)x(N+1)");
  }
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTolerance) throw RepresentationError("Dicke matrix is not Hermitian");
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  if (std::abs(matrix_.trace().real() - 1.0) > kNormTolerance) {
    throw RepresentationError("Dicke matrix trace differs from 1");
  }
  if (min_eigenvalue(matrix_) < -kPsdTolerance) {
    throw RepresentationError("Dicke matrix has an eigenvalue below -1e-10");
  }
}

SubsystemSelection::SubsystemSelection(std::vector<int> kept, int n_qubits)
    : kept_(std::move(kept)) {
  if (kept_.empty()) throw ParameterError("subsystem selection is empty");
  for (std::size_t i = 0; i < kept_.size(); ++i) {
    check_subsystem(kept_[i], n_qubits);
    if (i > 0 && kept_[i] <= kept_[i - 1]) {
      throw ParameterError("subsystem selection must be strictly increasing");
    }
  }
}

Eigen::Vector2cd coherent_qubit(double theta, double phi) {
  return {cplx(std::cos(theta / 2.0), 0.0), std::exp(kI * phi) * std::sin(theta / 2.0)};
}

PureState build_named_state(const NamedFamily& fam, int n_qubits) {
  check_qubit_count(n_qubits);
  const std::size_t d = dimension(n_qubits);
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(d));

  struct Builder {
    int n;
    std::size_t d;
    CVector& amps;

    void operator()(const family::Ghz&) const {
      if (n < 2) throw ParameterError("GHZ needs at least 2 qubits");
      amps(0) = amps(static_cast<Eigen::Index>(d - 1)) = 1.0 / std::numbers::sqrt2;
    }
    void operator()(const family::W&) const {
      if (n < 2) throw ParameterError("W needs at least 2 qubits");
      const double a = 1.0 / std::sqrt(static_cast<double>(n));
      for (int q = 0; q < n; ++q) amps(Eigen::Index{1} << q) = a;
    }
    void operator()(const family::Coherent& c) const {
      const Eigen::Vector2cd one = coherent_qubit(c.theta, c.phi);
      for (std::size_t i = 0; i < d; ++i) {
        cplx a = 1.0;
        for (int q = 0; q < n; ++q) a *= one((i >> (n - 1 - q)) & 1U);
        amps(static_cast<Eigen::Index>(i)) = a;
      }
      amps.normalize();
    }
    void operator()(const family::Computational& c) const {
      if (static_cast<int>(c.bits.size()) != n) {
        throw ParameterError("bitstring length must equal n_qubits");
      }
      std::size_t idx = 0;
      for (char ch : c.bits) {
        if (ch != '0' && ch != '1') throw ParameterError("bitstring must contain only 0 and 1");
        idx = (idx << 1) | static_cast<std::size_t>(ch == '1');
      }
      amps(static_cast<Eigen::Index>(idx)) = 1.0;
    }
    void operator()(const family::Psi0& p) const {
      if (n != 2) throw ParameterError("psi0 is a two-qubit family");
      if (p.alpha < -std::numbers::pi || p.alpha > std::numbers::pi) {
        throw ParameterError("psi0 requires -pi <= alpha <= pi");
      }
      amps(0) = std::sin(p.alpha / 2.0);
      amps(3) = std::cos(p.alpha / 2.0);
    }
  };
  std::visit(Builder{n_qubits, d, amps}, fam);
  return PureState(n_qubits, std::move(amps));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSelection& keep) {
  const int n = rho.n_qubits();
  for (int q : keep.kept()) check_subsystem(q, n);
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(keep.kept().begin(), keep.kept().end(), q)) traced.push_back(q);
  }
  const auto kept_off = scatter_offsets(keep.kept(), n);
  const auto traced_off = scatter_offsets(traced, n);
  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  const CMatrix& full = rho.entries();
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      cplx acc = 0.0;
      for (std::size_t t : traced_off) {
        acc += full(static_cast<Eigen::Index>(kept_off[r] | t),
                    static_cast<Eigen::Index>(kept_off[c] | t));
      }
      out(r, c) = acc;
    }
  }
  return DensityMatrix(keep.size(), std::move(out));
}

CMatrix partial_transpose(const CMatrix& op, int n_qubits, int subsystem) {
  check_subsystem(subsystem, n_qubits);
  if (static_cast<std::size_t>(op.rows()) != dimension(n_qubits) || op.rows() != op.cols()) {
    throw ParameterError("operator dimension does not match n_qubits");
  }
  const std::size_t mask = std::size_t{1} << (n_qubits - 1 - subsystem);
  const auto d = static_cast<std::size_t>(op.rows());
  CMatrix out(op.rows(), op.cols());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t si = (i & ~mask) | (j & mask);
      const std::size_t sj = (j & ~mask) | (i & mask);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          op(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(sj));
    }
  }
  return out;
}

CMatrix partial_transpose(const DensityMatrix& rho, int subsystem) {
  return partial_transpose(rho.entries(), rho.n_qubits(), subsystem);
}

cplx expectation(const DensityMatrix& rho, const CMatrix& op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
    throw ParameterError("operator dimension does not match the state");
  }
  // tr(rho op) = sum_ij rho_ij op_ji
  return (rho.entries().transpose().cwiseProduct(op)).sum();
}

CMatrix dicke_isometry(int n_qubits) {
  check_qubit_count(n_qubits);
  const std::size_t d = dimension(n_qubits);
  CMatrix v = CMatrix::Zero(static_cast<Eigen::Index>(d), n_qubits + 1);
  for (std::size_t i = 0; i < d; ++i) {
    const int m = std::popcount(i);
    v(static_cast<Eigen::Index>(i), m) = 1.0 / std::sqrt(binomial(n_qubits, m));
  }
  return v;
}

DensityMatrix to_full(const DickeCoefficients& d) {
  const CMatrix v = dicke_isometry(d.n_qubits());
  return DensityMatrix(d.n_qubits(), v * d.matrix() * v.adjoint());
}

double symmetric_residual(const DensityMatrix& rho) {
  const CMatrix v = dicke_isometry(rho.n_qubits());
  const CMatrix inner = v.adjoint() * rho.entries() * v;
  return (rho.entries() - v * inner * v.adjoint()).norm();
}

DickeCoefficients to_dicke(const DensityMatrix& rho) {
  const CMatrix v = dicke_isometry(rho.n_qubits());
  CMatrix inner = v.adjoint() * rho.entries() * v;
  const double residual = (rho.entries() - v * inner * v.adjoint()).norm();
  if (residual > kSymmetricResidualTolerance) {
    throw RepresentationError("state is not supported on the symmetric subspace (residual " +
                              std::to_string(residual) + ")");
  }
  return DickeCoefficients(rho.n_qubits(), std::move(inner));
}

const Eigen::Matrix2cd& pauli(int index) {
  static const std::array<Eigen::Matrix2cd, 4> table = [] {
    std::array<Eigen::Matrix2cd, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -kI, kI, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  if (index < 0 || index > 3) throw ParameterError("Pauli index must be 0..3");
  return table[static_cast<std::size_t>(index)];
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix tensor_power(const Eigen::Matrix2cd& u, int n) {
  if (n < 1) throw ParameterError("tensor power needs n >= 1");
  CMatrix out = u;
  for (int i = 1; i < n; ++i) out = kron(out, u);
  return out;
}

DensityMatrix rotate_state(const DensityMatrix& rho, const Eigen::Matrix2cd& u) {
  const int n = rho.n_qubits();
  CMatrix m = rho.entries();
  for (int q = 0; q < n; ++q) apply_left(m, u, q, n);
  m = m.adjoint().eval();
  for (int q = 0; q < n; ++q) apply_left(m, u, q, n);
  m = m.adjoint().eval();
  return DensityMatrix(n, std::move(m));
}

double min_eigenvalue(const CMatrix& hermitian) {
  const CMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace ssq
