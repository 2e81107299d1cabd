#pragma once

// Small state builders shared by the unit tests and the acceptance binary.

#include <cmath>

#include "ssq/oracle.hpp"
#include "ssq/qcore.hpp"

namespace ssq::testing {

inline DensityMatrix named(const NamedFamily& fam, int n) { return build_named_state(fam, n).projector(); }

inline DensityMatrix ghz3() { return named(family::Ghz{}, 3); }
inline DensityMatrix w3() { return named(family::W{}, 3); }
inline DensityMatrix zeros(int n) { return named(family::Coherent{0.0, 0.0}, n); }

inline DensityMatrix bell_sym() {
  CMatrix d = CMatrix::Zero(3, 3);
  d(1, 1) = 1.0;
  return to_full(DickeCoefficients(2, d));
}

inline DensityMatrix maximally_mixed(int n) {
  const auto dim = static_cast<Eigen::Index>(dimension(n));
  return DensityMatrix(n, CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

/// exp(−iχ (J^3)²) applied to the coherent state |θ,φ⟩^{⊗N}.
inline DensityMatrix one_axis_twisted(int n, double chi, double theta, double phi) {
  CVector psi = build_named_state(family::Coherent{theta, phi}, n).amplitudes();
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const int ones = __builtin_popcountll(static_cast<unsigned long long>(i));
    const double jz = n / 2.0 - ones;
    psi(i) *= std::polar(1.0, -chi * jz * jz);
  }
  return PureState(n, psi).projector();
}

/// Twisting of the coherent state along +x, the usual squeezing protocol.
inline DensityMatrix oat_x(int n, double chi) { return one_axis_twisted(n, chi, M_PI / 2.0, 0.0); }

inline DensityMatrix random_state(RandomKind kind, int n, std::uint64_t seed, int rank = 1, int terms = 1) {
  RandomStateSpec spec;
  spec.kind = kind;
  spec.n_qubits = n;
  spec.seed = seed;
  spec.rank = rank;
  spec.terms = terms;
  return generate(spec);
}

}  // namespace ssq::testing
