#include <doctest.h>

#include <cmath>
#include <random>

#include "ssq/criteria.hpp"
#include "ssq/prepfn.hpp"
#include "support.hpp"

using namespace ssq;
using namespace ssq::testing;

namespace {

constexpr double kFourPi = 4.0 * M_PI;

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix random_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

DensityMatrix coherent_mixture(int n, const std::vector<SpherePoint>& nodes, const std::vector<double>& w) {
  CMatrix rho = CMatrix::Zero(n + 1, n + 1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const CVector a = coherent_dicke(n, nodes[k].first, nodes[k].second);
    rho += w[k] * a * a.adjoint();
  }
  return to_full(DickeCoefficients(n, rho));
}

}  // namespace

TEST_CASE("spherical harmonics") {
  CHECK(std::abs(spherical_harmonic(0, 0, 0.4, 1.0) - 1.0 / std::sqrt(kFourPi)) < 1e-15);
  CHECK(std::abs(spherical_harmonic(1, 0, 0.4, 1.0) - std::sqrt(3.0 / kFourPi) * std::cos(0.4)) < 1e-15);
  // Condon–Shortley: Y_11 = -sqrt(3/8π) sin θ e^{iφ}
  const cplx y11 = spherical_harmonic(1, 1, 0.4, 1.0);
  CHECK(std::abs(y11 + std::sqrt(3.0 / (8.0 * M_PI)) * std::sin(0.4) * std::polar(1.0, 1.0)) < 1e-15);
  CHECK(std::abs(spherical_harmonic(1, -1, 0.4, 1.0) + std::conj(y11)) < 1e-15);
  CHECK_THROWS_AS(spherical_harmonic(1, 2, 0.0, 0.0), ParameterError);
}

TEST_CASE("quadrature is exact for polynomials of the stated degree") {
  const auto [x, w] = gauss_legendre(5);
  CHECK(std::abs(w.sum() - 2.0) < 1e-14);
  CHECK(std::abs((w.array() * x.array().pow(8)).sum() - 2.0 / 9.0) < 1e-14);

  const SphereQuadrature q = sphere_quadrature(6);
  double total = 0.0;
  cplx overlap = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    total += q.weights[k];
    overlap += q.weights[k] * spherical_harmonic(3, 2, q.nodes[k].first, q.nodes[k].second) *
               std::conj(spherical_harmonic(3, 2, q.nodes[k].first, q.nodes[k].second));
  }
  CHECK(std::abs(total - kFourPi) < 1e-13);
  CHECK(std::abs(overlap - 1.0) < 1e-13);
}

TEST_CASE("p expansion examples") {
  const HarmonicCoefficients mixed = p_expand(maximally_mixed(1));
  CHECK(std::abs(mixed(0, 0) - 1.0 / std::sqrt(kFourPi)) < 1e-12);
  CHECK(std::abs(mixed(1, 0)) < 1e-12);
  CHECK(std::abs(mixed(1, 1)) < 1e-12);

  const HarmonicCoefficients up = p_expand(zeros(1));
  for (double theta : {0.0, 0.5, 1.7, 3.0}) {
    CHECK(std::abs(p_evaluate(up, theta, 0.9) - (1.0 + 3.0 * std::cos(theta)) / kFourPi) < 1e-10);
  }
  CHECK(max_abs(p_reconstruct(up).entries() - zeros(1).entries()) < 1e-12);

  const HarmonicCoefficients sym = p_expand(DickeCoefficients(2, CMatrix::Identity(3, 3) / 3.0));
  for (int m = -1; m <= 1; ++m) CHECK(std::abs(sym(1, m)) < 1e-12);
  CHECK(std::abs(sym(0, 0) - 1.0 / std::sqrt(kFourPi)) < 1e-12);
  CHECK(max_abs(p_reconstruct_dicke(sym).matrix() - CMatrix::Identity(3, 3) / 3.0) < 1e-10);

  CHECK_THROWS_AS(p_expand(named(family::Computational{"01"}, 2)), RepresentationError);
}

TEST_CASE("coefficient reality condition") {
  std::vector<cplx> c(4, 0.0);
  c[0] = 1.0 / std::sqrt(kFourPi);
  c[HarmonicCoefficients::index(1, 1)] = cplx(0.1, 0.2);
  c[HarmonicCoefficients::index(1, -1)] = cplx(-0.1, 0.2);
  CHECK_NOTHROW(HarmonicCoefficients(1, c));
  c[HarmonicCoefficients::index(1, -1)] = cplx(0.1, 0.2);
  CHECK_THROWS_AS(HarmonicCoefficients(1, c), ParameterError);
  CHECK_THROWS_AS(HarmonicCoefficients(2, c), ParameterError);
}

TEST_CASE("round trip and witness integral") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    const DensityMatrix rho = random_state(RandomKind::MixedSymmetric, n, seed, 1 + static_cast<int>(seed % 3) % (n + 1));
    const HarmonicCoefficients c = p_expand(rho);
    CHECK(std::abs(c(0, 0) - 1.0 / std::sqrt(kFourPi)) < 1e-10);
    CHECK(max_abs(p_reconstruct(c).entries() - rho.entries()) < 1e-8);
    const CMatrix w = random_hermitian(static_cast<int>(dimension(n)), seed);
    CHECK(std::abs(integrate_p_times_witness(c, w) - expectation(rho, w).real()) < 1e-8);
  }
}

TEST_CASE("witness polynomials") {
  const std::vector<SpherePoint> north = {{0.0, 0.0}};
  const CMatrix wghz = witness_matrix(WitnessKind::Ghz, Frame::canonical());
  const CMatrix ww1 = witness_matrix(WitnessKind::W1, Frame::canonical());
  CHECK(std::abs(witness_polynomial(wghz, north)[0] - 0.25) < 1e-15);
  CHECK(std::abs(witness_polynomial(ww1, north)[0] - 2.0 / 3.0) < 1e-15);
  for (double v : witness_polynomial(CMatrix::Identity(8, 8), fibonacci_sphere(50))) {
    CHECK(std::abs(v - 1.0) < 1e-14);
  }

  const std::vector<SpherePoint> grid = fibonacci_sphere(2000);
  for (WitnessKind kind : {WitnessKind::Ghz, WitnessKind::W1, WitnessKind::W2}) {
    const std::vector<double> values = witness_polynomial(witness_matrix(kind, Frame::canonical()), grid);
    CHECK(*std::min_element(values.begin(), values.end()) >= -1e-10);
  }
  CHECK_THROWS_AS(witness_polynomial(CMatrix::Identity(6, 6), north), ParameterError);
  CHECK_THROWS_AS(witness_polynomial(CMatrix::Identity(4, 8), north), ParameterError);
}

TEST_CASE("fibonacci grid") {
  const std::vector<SpherePoint> grid = fibonacci_sphere(64);
  CHECK(grid.size() == 64);
  CHECK(grid.front().first == 0.0);
  CHECK(std::abs(grid.back().first - M_PI) < 1e-15);
}

TEST_CASE("nnls") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, -1, 0;
  const Eigen::VectorXd x = nnls(a, b);
  CHECK(x.minCoeff() >= 0.0);
  CHECK(std::abs(x(1)) < 1e-14);
  CHECK(std::abs(x(0) - 0.5) < 1e-12);
}

TEST_CASE("certificate on a single coherent product") {
  const std::vector<SpherePoint> grid = fibonacci_sphere(64);
  const SpherePoint target = grid[21];
  const DensityMatrix rho = coherent_mixture(4, {target}, {1.0});
  const Certificate cert = separability_certificate(rho, grid);
  REQUIRE(cert.certified);
  REQUIRE(cert.measure.has_value());
  CHECK(cert.measure->nodes.size() == 1);
  CHECK(std::abs(cert.measure->weights[0] - 1.0) < 1e-10);
}

TEST_CASE("certificate recovers a mixture of four coherent products") {
  const std::vector<SpherePoint> grid = fibonacci_sphere(64);
  const std::vector<SpherePoint> nodes = {grid[3], grid[17], grid[30], grid[51]};
  const DensityMatrix rho = coherent_mixture(4, nodes, {0.25, 0.25, 0.25, 0.25});
  const Certificate cert = separability_certificate(rho, grid);
  REQUIRE(cert.certified);
  double total = 0.0;
  for (std::size_t k = 0; k < cert.measure->nodes.size(); ++k) {
    total += cert.measure->weights[k];
    CHECK(std::abs(cert.measure->weights[k] - 0.25) < 1e-6);
  }
  CHECK(std::abs(total - 1.0) < 1e-10);
  CHECK(max_abs(reconstruct(*cert.measure, 4).entries() - rho.entries()) < 1e-7);
}

TEST_CASE("certificate soundness") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const DensityMatrix rho = random_state(RandomKind::SeparableSymmetric, 3, seed, 1, 3);
    const Certificate cert = separability_certificate(rho);
    if (!cert.certified) continue;  // inconclusive is allowed
    CHECK(cert.residual <= kCertificateTolerance);
    double total = 0.0;
    for (double w : cert.measure->weights) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
    const DensityMatrix back = reconstruct(*cert.measure, 3);
    CHECK(max_abs(back.entries() - rho.entries()) < 1e-7);
    const KTensor k = k_tensor(Family::Ghz, SL2C::identity(), SL2C::identity());
    CHECK(tripartite_margin(back, k, TripartiteMode::Symmetric) >= -1e-9);
    CHECK(ss_value(back, SsKind::Ss1, Frame::canonical()) >= -1e-9);
  }
}

TEST_CASE("certificate on off-grid states") {
  // |000> and a generic coherent product both certify even though only the poles are grid nodes
  CHECK(separability_certificate(zeros(3), 64).certified);
  CHECK(separability_certificate(named(family::Coherent{1.234, 0.567}, 3), 64).certified);
}

TEST_CASE("ghz is never certified") {
  for (int res : {8, 64, 256, 1024}) CHECK_FALSE(separability_certificate(ghz3(), res).certified);
  const Certificate escalated = separability_certificate(ghz3());
  CHECK_FALSE(escalated.certified);
  CHECK(escalated.resolution == 1024);
  CHECK_FALSE(escalated.measure.has_value());
  CHECK_THROWS_AS(separability_certificate(ghz3(), 4), ParameterError);
}
