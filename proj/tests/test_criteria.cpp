#include <doctest.h>

#include <cmath>
#include <random>

#include "ssq/criteria.hpp"
#include "ssq/geometry.hpp"
#include "support.hpp"

using namespace ssq;
using namespace ssq::testing;

namespace {

const Direction kZ(Eigen::Vector3d::UnitZ());

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return rotation_from_su2(su2_from_rotation_vector(Eigen::Vector3d(g(rng), g(rng), g(rng))));
}

SL2C random_sl2c(std::mt19937_64& rng, double max_rapidity) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> r(0.0, max_rapidity);
  return sl2c_from_parameters(Eigen::Vector3d(g(rng), g(rng), g(rng)), r(rng),
                              Eigen::Vector3d(g(rng), g(rng), g(rng)));
}

Frame rotate(const Frame& f, const Eigen::Matrix3d& r) { return Frame(r * f.k(), r * f.l(), r * f.n()); }

const std::array<SsKind, 3> kPlainSs = {SsKind::Ss1, SsKind::Ss2, SsKind::Ss3};

}  // namespace

TEST_CASE("verdict thresholds") {
  CHECK(verdict_for(-2e-9) == Verdict::Entangled);
  CHECK(verdict_for(-1e-9) == Verdict::NotDetected);
  CHECK(verdict_for(0.0) == Verdict::NotDetected);
  CHECK(in_boundary_band(-1e-9));
  CHECK(in_boundary_band(5e-10));
  CHECK_FALSE(in_boundary_band(-2e-9));
  CHECK(to_string(Verdict::Entangled) == "entangled");
  CHECK(to_string(Verdict::NotDetected) == "not_detected");
}

TEST_CASE("xi squared") {
  for (int n = 2; n <= 5; ++n) {
    const XiSquared xi = xi_squared(named(family::Coherent{0.7, 2.1}, n));
    CHECK(std::abs(xi.value - 1.0) < 1e-9);
  }
  const XiSquared squeezed = xi_squared(oat_x(4, 0.2));
  CHECK(squeezed.value < 1.0);
  CHECK(std::abs(squeezed.direction.vec().x()) < 1e-9);  // orthogonal to the mean spin along x
  CHECK_THROWS_AS(xi_squared(maximally_mixed(3)), UndefinedMeanSpinError);
}

TEST_CASE("bipartite examples") {
  CHECK(std::abs(bipartite_margin(bell_sym(), kZ) + 1.0) < 1e-12);
  CHECK(std::abs(bipartite_margin(ghz3(), kZ) - 3.0) < 1e-12);
  CHECK(std::abs(bipartite_raw(bell_sym(), kZ, M_PI / 2.0) - 1.0) < 1e-12);
  CHECK(std::abs(bipartite_raw(zeros(2), kZ, 0.0)) < 1e-12);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const Direction n(random_rotation(rng).col(0));
    CHECK(bipartite_margin(zeros(2), n) >= -1e-12);
  }
  CHECK_THROWS_AS(bipartite_margin(zeros(1), kZ), ParameterError);
  CHECK_THROWS_AS(bipartite_raw(zeros(2), kZ, 4.0), ParameterError);
}

TEST_CASE("minimization consistency of the bipartite margin") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const MomentTensors m = moments(random_state(RandomKind::MixedSymmetric, n, seed, 1 + seed % 3));
    const Direction dir(random_rotation(rng).col(2));
    double grid_min = std::numeric_limits<double>::infinity();
    for (double a = -M_PI; a <= M_PI; a += 1e-3) grid_min = std::min(grid_min, bipartite_raw(m, dir, a));
    const double margin = bipartite_margin(m, dir);
    CHECK(grid_min >= margin - 1e-12);
    CHECK(margin >= grid_min - 1e-6);
    CHECK(std::abs(bipartite_raw(m, dir, bipartite_optimal_alpha(m, dir)) - margin) < 1e-12);
    // the normalized form shares the sign
    const double normalized = bipartite_normalized(m, dir);
    if (std::abs(margin) > 1e-9) CHECK((normalized < 0) == (margin < 0));
  }
}

TEST_CASE("lorentz maps") {
  CHECK((lorentz_from_sl2c(SL2C::identity(), SpinorConvention::Star).matrix() -
         Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  const double r = 0.8;
  Eigen::Matrix2cd boost = Eigen::Matrix2cd::Zero();
  boost(0, 0) = std::exp(r / 2.0);
  boost(1, 1) = std::exp(-r / 2.0);
  const Eigen::Matrix4d l = lorentz_from_sl2c(SL2C(boost), SpinorConvention::Dagger).matrix();
  CHECK(std::abs(l(0, 0) - std::cosh(r)) < 1e-14);
  CHECK(std::abs(l(3, 3) - std::cosh(r)) < 1e-14);
  CHECK(std::abs(l(0, 3) - std::sinh(r)) < 1e-14);
  CHECK(std::abs(l(3, 0) - std::sinh(r)) < 1e-14);
  CHECK(std::abs(l(1, 1) - 1.0) < 1e-14);
  CHECK(std::abs(l(2, 2) - 1.0) < 1e-14);

  const double theta = 0.6;
  const Eigen::Matrix2cd rz = su2_from_rotation_vector(Eigen::Vector3d(0, 0, theta));
  const LorentzMatrix rot = lorentz_from_sl2c(SL2C(rz), SpinorConvention::Dagger);
  CHECK(rot.is_rotation());
  CHECK(std::abs(rot(1, 1) - std::cos(theta)) < 1e-14);
  CHECK(std::abs(rot(3, 3) - 1.0) < 1e-14);

  Eigen::Matrix2cd bad = Eigen::Matrix2cd::Identity() * 2.0;
  CHECK_THROWS_AS(SL2C{bad}, ParameterError);
}

TEST_CASE("k tensor at identity") {
  const KTensor ghz = k_tensor(Family::Ghz, LorentzMatrix::identity(), LorentzMatrix::identity());
  const std::map<std::array<int, 3>, double> expect = {
      {{0, 0, 0}, 1}, {{0, 3, 3}, 1}, {{1, 1, 1}, 1}, {{1, 2, 2}, -1},
      {{2, 1, 2}, 1}, {{2, 2, 1}, 1}, {{3, 0, 3}, 1}, {{3, 3, 0}, 1}};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        const auto it = expect.find({a, b, c});
        CHECK(ghz(a, b, c) == (it == expect.end() ? 0.0 : it->second));
      }
    }
  }
}

TEST_CASE("k tensor reproduces the transposed family projector") {
  std::mt19937_64 rng(9);
  auto operator_of = [](const KTensor& k) {
    CMatrix op = CMatrix::Zero(8, 8);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int c = 0; c < 4; ++c) {
          if (k(a, b, c) != 0.0) {
            op += k(a, b, c) / 8.0 * kron(kron(pauli(a), pauli(b)), pauli(c));
          }
        }
      }
    }
    return op;
  };
  for (int trial = 0; trial < 10; ++trial) {
    for (Family fam : {Family::Ghz, Family::W}) {
      const SL2C a = trial == 0 ? SL2C::identity() : random_sl2c(rng, 2.0);
      const SL2C b = trial == 0 ? SL2C::identity() : random_sl2c(rng, fam == Family::W ? 0.0 : 2.0);
      const CVector v = family_vector(fam, a, b);
      const CMatrix expect = partial_transpose(CMatrix(v * v.adjoint()), 3, 0);
      const CMatrix got = operator_of(k_tensor(fam, a, b));
      CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, expect.cwiseAbs().maxCoeff()));
    }
  }
  const SL2C boosted = sl2c_from_parameters(Eigen::Vector3d::Zero(), 1.0, Eigen::Vector3d::Zero());
  CHECK_THROWS_AS(k_tensor(Family::W, SL2C::identity(), boosted), ParameterError);
}

TEST_CASE("tripartite examples") {
  const KTensor kghz = k_tensor(Family::Ghz, SL2C::identity(), SL2C::identity());
  const KTensor kw = k_tensor(Family::W, SL2C::identity(), SL2C::identity());
  // identity parameters: both states lie on the positive side
  const double ghz_margin = tripartite_margin(ghz3(), kghz, TripartiteMode::Symmetric);
  const double w_margin = tripartite_margin(w3(), kw, TripartiteMode::Symmetric);
  CHECK(std::abs(ghz_margin - kTripartiteConstant * 0.5) < 1e-12);
  CHECK(std::abs(w_margin - kTripartiteConstant * 5.0 / 9.0) < 1e-12);

  // the margin equals c3 times the direct trace for every sample
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = random_state(RandomKind::MixedSymmetric, 3, seed, 2);
    for (Family fam : {Family::Ghz, Family::W}) {
      const KTensor k = fam == Family::Ghz ? kghz : kw;
      const CVector v = family_vector(fam, SL2C::identity(), SL2C::identity());
      const double direct = summed_triple_trace(rho, partial_transpose(CMatrix(v * v.adjoint()), 3, 0));
      CHECK(std::abs(tripartite_margin(rho, k, TripartiteMode::Symmetric) - kTripartiteConstant * direct) < 1e-11);
    }
  }
  CHECK_THROWS_AS(tripartite_margin(zeros(2), kghz, TripartiteMode::Symmetric), ParameterError);
}

TEST_CASE("general mode equals the symmetrized contraction") {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = random_state(RandomKind::HaarPure, 4, 7);
  const MomentTensors m = moments(rho);
  for (int trial = 0; trial < 5; ++trial) {
    const KTensor k = k_tensor(Family::Ghz, random_sl2c(rng, 1.5), random_sl2c(rng, 1.5));
    const double general = tripartite_margin(m, cyclic_average(k), TripartiteMode::General);
    CHECK(std::abs(general - tripartite_margin(m, symmetrize(k), TripartiteMode::General)) <
          1e-9 * std::max(1.0, std::abs(general)));
    CHECK(std::abs(general - tripartite_margin(m, k, TripartiteMode::Symmetric)) <
          1e-9 * std::max(1.0, std::abs(general)));
  }
}

TEST_CASE("fast contraction agrees with the explicit K tensor") {
  std::mt19937_64 rng(4);
  const TripartiteFunctional t(moments(random_state(RandomKind::MixedSymmetric, 3, 1, 3)));
  for (int trial = 0; trial < 10; ++trial) {
    for (Family fam : {Family::Ghz, Family::W}) {
      const SL2C a = random_sl2c(rng, 2.0);
      const SL2C b = random_sl2c(rng, fam == Family::W ? 0.0 : 2.0);
      const LorentzMatrix la = lorentz_from_sl2c(a, SpinorConvention::Star);
      const LorentzMatrix lb = lorentz_from_sl2c(b, SpinorConvention::Dagger);
      const double slow = t.contract(k_tensor(fam, la, lb));
      const double fast = t.contract(fam, la.matrix(), lb.matrix());
      CHECK(std::abs(slow - fast) < 1e-9 * std::max(1.0, std::abs(slow)));
    }
  }
}

TEST_CASE("witness values") {
  const Frame canon = Frame::canonical();
  auto tr = [](const DensityMatrix& rho, WitnessKind kind, const Frame& f) {
    return expectation(rho, CMatrix(witness_matrix(kind, f))).real();
  };
  CHECK(std::abs(tr(ghz3(), WitnessKind::Ghz, canon) + 0.25) < 1e-12);
  CHECK(std::abs(tr(w3(), WitnessKind::W1, canon) + 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(tr(ghz3(), WitnessKind::W2, canon) + 0.5) < 1e-12);

  // rotating the frame rotates the witness
  std::mt19937_64 rng(1);
  const Eigen::Matrix3d r = random_rotation(rng);
  const DensityMatrix rotated = rotate_state(ghz3(), su2_from_rotation(r));
  CHECK(std::abs(tr(rotated, WitnessKind::Ghz, Frame::from_rotation(r)) + 0.25) < 1e-12);
}

TEST_CASE("ss constants") {
  CHECK(ss_constant(SsKind::Ss1, 3) == doctest::Approx(13.0 / 8.0));
  CHECK(ss_constant(SsKind::Ss2, 3) == doctest::Approx(35.0 / 8.0));
  CHECK(ss_constant(SsKind::Ss3, 3) == doctest::Approx(9.0 / 8.0));
  CHECK(ss_constant(SsKind::Ss1p, 3) == doctest::Approx(30.0 / 24.0));
  CHECK(ss_constant(SsKind::Ss2p, 4) == doctest::Approx(3.0));
}

TEST_CASE("ss values") {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 20; ++k) {
    const Frame f = Frame::from_rotation(random_rotation(rng));
    for (SsKind kind : kPlainSs) CHECK(ss_value(zeros(3), kind, f) >= -1e-12);
  }
  const MomentTensors mixed = moments(maximally_mixed(3));
  CHECK(second_along(mixed, Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitZ()).real() ==
        doctest::Approx(0.75));
  CHECK(ss_value(mixed, SsKind::Ss1, Frame::canonical()) > 0.0);
  CHECK(ss_value(mixed, SsKind::Ss1, Frame::canonical()) <= ss_constant(SsKind::Ss1, 3));

  CHECK_THROWS_AS(ss_value(zeros(2), SsKind::Ss1, Frame::canonical()), ParameterError);
  // |000> has <J_z> = 3/2, so a frame with n = z is not admissible for the primed forms
  CHECK_THROWS_AS(ss_value(zeros(3), SsKind::Ss1p, Frame::canonical()), PreconditionError);
}

TEST_CASE("frame covariance") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 2;
    const DensityMatrix rho = random_state(RandomKind::MixedSymmetric, n, static_cast<std::uint64_t>(trial), 2);
    const Eigen::Matrix3d r0 = random_rotation(rng);
    const Eigen::Matrix2cd u = su2_from_rotation(r0);
    const DensityMatrix moved = rotate_state(rho, u);
    const MomentTensors m = moments(rho);
    const MomentTensors mm = moments(moved);

    const Direction dir(random_rotation(rng).col(0));
    const Direction moved_dir(r0 * dir.vec());
    CHECK(std::abs(bipartite_margin(m, dir) - bipartite_margin(mm, moved_dir)) < 1e-10);
    CHECK(std::abs(xi_squared(m).value - xi_squared(mm).value) < 1e-10);

    const Frame f = Frame::from_rotation(random_rotation(rng));
    for (SsKind kind : kPlainSs) {
      CHECK(std::abs(ss_value(m, kind, f) - ss_value(mm, kind, rotate(f, r0))) < 1e-10);
    }

    // tripartite: rotating the state by U is undone by A -> conj(U) A, B -> U B
    for (Family fam : {Family::Ghz, Family::W}) {
      const SL2C a = random_sl2c(rng, 1.0);
      const SL2C b = random_sl2c(rng, fam == Family::W ? 0.0 : 1.0);
      const SL2C a2(Eigen::Matrix2cd(u.conjugate() * a.matrix()));
      const SL2C b2(Eigen::Matrix2cd(u * b.matrix()));
      const double before = tripartite_margin(m, k_tensor(fam, a, b), TripartiteMode::Symmetric);
      const double after = tripartite_margin(mm, k_tensor(fam, a2, b2), TripartiteMode::Symmetric);
      CHECK(std::abs(before - after) < 1e-10 * std::max(1.0, std::abs(before)));
    }
  }
}

TEST_CASE("the bipartite criterion needs a symmetric state") {
  // |01> is a product state, yet <J_z> = <J_z^2> = 0 gives margin -1: the inequality
  // trades the transverse pair terms for the Casimir, which only holds on Sym.
  const DensityMatrix product = named(family::Computational{"01"}, 2);
  CHECK(std::abs(bipartite_margin(product, kZ) + 1.0) < 1e-12);
  CHECK_FALSE(ppt_verdict(product).entangled);
}

TEST_CASE("separable states never violate a criterion") {
  std::mt19937_64 rng(21);
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const MomentTensors m = moments(random_state(RandomKind::SeparableMixture, n, seed, 1, 1 + seed % 5));
    const MomentTensors sym = moments(random_state(RandomKind::SeparableSymmetric, n, seed, 1, 1 + seed % 5));
    // pair-level criteria are stated for symmetric states
    const Direction dir(random_rotation(rng).col(0));
    worst = std::min(worst, bipartite_margin(sym, dir));
    if (std::hypot(sym.m1[1], sym.m1[2], sym.m1[3]) > 1e-6) worst = std::min(worst, xi_squared(sym).value - 1.0);
    if (n < 3) continue;
    const Frame f = Frame::from_rotation(random_rotation(rng));
    for (SsKind kind : kPlainSs) worst = std::min({worst, ss_value(m, kind, f), ss_value(sym, kind, f)});
    for (Family fam : {Family::Ghz, Family::W}) {
      const KTensor k = k_tensor(fam, random_sl2c(rng, 2.0), random_sl2c(rng, fam == Family::W ? 0.0 : 2.0));
      worst = std::min(worst, tripartite_normalized_margin(m, cyclic_average(k)));
      worst = std::min(worst, tripartite_normalized_margin(sym, k));
    }
  }
  CHECK(worst >= -1e-9);
}
