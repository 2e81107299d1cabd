#include "ssq/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "ssq/prepfn.hpp"

namespace ssq {

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix ginibre(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss;
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cplx(gauss(rng), gauss(rng));
  }
  return g;
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Eigen::Vector3d random_rotation_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::Vector4d q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  const Eigen::Vector3d v = q.tail<3>();
  const double s = v.norm();
  return s == 0.0 ? Eigen::Vector3d::Zero() : Eigen::Vector3d(2.0 * std::atan2(s, q(0)) * v / s);
}

Eigen::Matrix2cd random_qubit_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Eigen::Vector3d r = std::cbrt(unif(rng)) * random_unit(rng);
  return 0.5 * (pauli(0) + r.x() * pauli(1) + r.y() * pauli(2) + r.z() * pauli(3));
}

std::vector<double> simplex_weights(std::mt19937_64& rng, int terms) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (double& x : w) total += (x = expo(rng));
  for (double& x : w) x /= total;
  return w;
}

CMatrix normalized(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  return h / h.trace().real();
}

CMatrix product_state(std::mt19937_64& rng, int n) {
  CMatrix out = random_qubit_state(rng);
  for (int q = 1; q < n; ++q) out = kron(out, random_qubit_state(rng));
  return out;
}

// New qubit j of the result is qubit perm[j] of v (3 qubits).
CVector permute3(const CVector& v, const std::array<int, 3>& perm) {
  CVector out(8);
  for (int i = 0; i < 8; ++i) {
    int src = 0;
    for (int j = 0; j < 3; ++j) {
      const int bit = (i >> (2 - j)) & 1;
      src |= bit << (2 - perm[static_cast<std::size_t>(j)]);
    }
    out(i) = v(src);
  }
  return out;
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  if (k > n) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

SL2C random_sl2c(std::mt19937_64& rng, double max_rapidity) {
  std::uniform_real_distribution<double> r(0.0, max_rapidity);
  const Eigen::Vector3d left = random_rotation_vector(rng);
  const double rapidity = r(rng);
  return sl2c_from_parameters(left, rapidity, random_rotation_vector(rng));
}

double relative_error(double value, double reference, double floor) {
  return std::abs(value - reference) / std::max({std::abs(value), std::abs(reference), floor});
}

}  // namespace

// ---------------------------------------------------------------------------

OracleVerdict ppt_verdict(const DensityMatrix& rho, int subsystem) {
  const int n = rho.n_qubits();
  if (n != 2 && n != 3) throw ParameterError("PPT oracle takes 2- or 3-qubit states");
  if (subsystem < 0 || subsystem >= n) throw ParameterError("transposed qubit out of range");
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;

  const CMatrix pt = partial_transpose(rho, subsystem);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (pt + pt.adjoint()));
  OracleVerdict v{SubsystemSelection(all, n), subsystem, es.eigenvalues()(0), false, std::nullopt};
  v.entangled = v.min_pt_eigenvalue < -kPptTolerance;
  if (v.entangled) v.witness_vector = es.eigenvectors().col(0);
  return v;
}

ReductionScan scan_reductions(const DensityMatrix& rho, int size) {
  if (size != 2 && size != 3) throw ParameterError("reductions are pairs or triples");
  ReductionScan scan;
  scan.size = size;
  scan.min_pt_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& keep : combinations(rho.n_qubits(), size)) {
    const DensityMatrix reduced = partial_trace(rho, SubsystemSelection(keep, rho.n_qubits()));
    // For pairs the spectrum does not depend on which factor is transposed.
    const int positions = size == 2 ? 1 : 3;
    for (int t = 0; t < positions; ++t) {
      const double e = ppt_verdict(reduced, t).min_pt_eigenvalue;
      if (e < scan.min_pt_eigenvalue) {
        scan.min_pt_eigenvalue = e;
        scan.worst = keep;
      }
    }
  }
  if (scan.worst.empty()) scan.min_pt_eigenvalue = 0.0;
  scan.entangled = scan.min_pt_eigenvalue < -kPptTolerance;
  return scan;
}

// ---------------------------------------------------------------------------

void RandomStateSpec::validate() const {
  check_qubit_count(n_qubits);
  if (kind == RandomKind::MixedSymmetric && (rank < 1 || rank > n_qubits + 1)) {
    throw ParameterError("symmetric rank must lie in 1..N+1");
  }
  if ((kind == RandomKind::SeparableMixture || kind == RandomKind::SeparableSymmetric) && terms < 1) {
    throw ParameterError("mixtures need at least one term");
  }
}

std::string to_string(RandomKind kind) {
  switch (kind) {
    case RandomKind::PureSymmetric: return "pure_symmetric";
    case RandomKind::MixedSymmetric: return "mixed_symmetric";
    case RandomKind::Product: return "product";
    case RandomKind::SeparableMixture: return "separable_mixture";
    case RandomKind::HaarPure: return "haar_pure";
    case RandomKind::SeparableSymmetric: return "separable_symmetric";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DensityMatrix generate(const RandomStateSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int n = spec.n_qubits;
  const auto dim = static_cast<Eigen::Index>(dimension(n));
  switch (spec.kind) {
    case RandomKind::PureSymmetric:
    case RandomKind::MixedSymmetric: {
      const int rank = spec.kind == RandomKind::PureSymmetric ? 1 : spec.rank;
      const CMatrix g = ginibre(rng, n + 1, rank);
      return to_full(DickeCoefficients(n, normalized(g * g.adjoint())));
    }
    case RandomKind::Product: return DensityMatrix(n, normalized(product_state(rng, n)));
    case RandomKind::SeparableMixture: {
      const std::vector<double> w = simplex_weights(rng, spec.terms);
      CMatrix acc = CMatrix::Zero(dim, dim);
      for (double wk : w) acc += wk * product_state(rng, n);
      return DensityMatrix(n, normalized(acc));
    }
    case RandomKind::HaarPure: {
      const CMatrix g = ginibre(rng, dim, 1);
      return DensityMatrix(n, normalized(g * g.adjoint()));
    }
    case RandomKind::SeparableSymmetric: {
      const std::vector<double> w = simplex_weights(rng, spec.terms);
      CMatrix acc = CMatrix::Zero(n + 1, n + 1);
      for (double wk : w) {
        const Eigen::Vector3d u = random_unit(rng);
        const CVector a = coherent_dicke(n, std::acos(std::clamp(u.z(), -1.0, 1.0)), std::atan2(u.y(), u.x()));
        acc += wk * (a * a.adjoint());
      }
      return to_full(DickeCoefficients(n, normalized(acc)));
    }
  }
  throw ParameterError("unknown random state kind");
}

// ---------------------------------------------------------------------------

bool EquivalenceSummary::passed() const {
  return disagreements() == 0 && band <= max_band_fraction * samples;
}

nlohmann::json EquivalenceSummary::to_json() const {
  nlohmann::json doc = {{"n_qubits", n_qubits},
                        {"samples", samples},
                        {"agreements", agreements},
                        {"false_positives", false_positives},
                        {"false_negatives", false_negatives},
                        {"disagreements", disagreements()},
                        {"band", band},
                        {"band_width", kBoundaryBand},
                        {"max_band_fraction", max_band_fraction},
                        {"passed", passed()},
                        {"details", nlohmann::json::array()}};
  for (const auto& s : details) {
    doc["details"].push_back({{"rank", s.rank},
                              {"margin", s.margin},
                              {"min_pt_eigenvalue", s.min_pt_eigenvalue},
                              {"detected", s.detected},
                              {"ppt_entangled", s.ppt_entangled},
                              {"band", s.band}});
  }
  return doc;
}

EquivalenceSummary equivalence_suite(int n_qubits, int samples, const SearchConfig& cfg) {
  if (n_qubits != 2 && n_qubits != 3) throw ParameterError("equivalence suite runs for N = 2 or 3");
  if (samples < 0) throw ParameterError("sample count must be nonnegative");
  cfg.validate();
  SearchConfig search = cfg;
  // A margin this far below zero is a detection; more restarts cannot change that.
  search.stop_below = std::min(cfg.stop_below, -1e-6);

  EquivalenceSummary out;
  out.n_qubits = n_qubits;
  out.samples = samples;
  for (int i = 0; i < samples; ++i) {
    RandomStateSpec spec;
    spec.kind = RandomKind::MixedSymmetric;
    spec.n_qubits = n_qubits;
    spec.rank = 1 + i % (n_qubits + 1);
    spec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    const DensityMatrix rho = generate(spec);
    const MomentTensors m = moments(rho);

    EquivalenceSample s;
    s.rank = spec.rank;
    if (n_qubits == 2) {
      s.margin = optimize_direction(m, search).best_margin;
    } else {
      s.margin = optimize_lorentz(m, Family::Ghz, search).best_margin;
      if (s.margin >= search.stop_below) {
        s.margin = std::min(s.margin, optimize_lorentz(m, Family::W, search).best_margin);
      }
    }
    const OracleVerdict ppt = ppt_verdict(rho, 0);
    s.min_pt_eigenvalue = ppt.min_pt_eigenvalue;
    s.ppt_entangled = ppt.entangled;
    s.detected = verdict_for(s.margin) == Verdict::Entangled;
    s.band = std::abs(s.margin) <= kBoundaryBand;
    if (s.band) {
      ++out.band;
    } else if (s.detected == s.ppt_entangled) {
      ++out.agreements;
    } else if (s.detected) {
      ++out.false_positives;
    } else {
      ++out.false_negatives;
    }
    out.details.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json ProportionalityCheck::to_json() const {
  return {{"name", name},       {"n_qubits", n_qubits},       {"samples", samples},
          {"frozen", frozen},   {"fitted", fitted},           {"max_rel_err", max_rel_err},
          {"tolerance", kProportionalityTolerance}, {"passed", passed()}};
}

bool ProportionalitySummary::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

nlohmann::json ProportionalitySummary::to_json() const {
  nlohmann::json doc = {{"passed", passed()}, {"checks", nlohmann::json::array()}};
  for (const auto& c : checks) doc["checks"].push_back(c.to_json());
  return doc;
}

double ss_proportionality_constant(SsKind kind) {
  switch (kind) {
    case SsKind::Ss1:
    case SsKind::Ss3: return 2.0;
    case SsKind::Ss2: return 6.0;
    default: throw ParameterError("only ss1, ss2 and ss3 are exact witness averages");
  }
}

double summed_triple_trace(const DensityMatrix& rho, const CMatrix& m) {
  if (m.rows() != 8 || m.cols() != 8) throw ParameterError("triple operator must be 8x8");
  double acc = 0.0;
  for (const auto& keep : combinations(rho.n_qubits(), 3)) {
    acc += expectation(partial_trace(rho, SubsystemSelection(keep, rho.n_qubits())), m).real();
  }
  return acc;
}

double summed_triple_trace_all_positions(const DensityMatrix& rho, const CVector& v) {
  if (v.size() != 8) throw ParameterError("triple vector must have 8 entries");
  std::array<CMatrix, 3> placed;
  const std::array<std::array<int, 3>, 3> perms = {{{0, 1, 2}, {1, 0, 2}, {1, 2, 0}}};
  for (int t = 0; t < 3; ++t) {
    const CVector w = permute3(v, perms[static_cast<std::size_t>(t)]);
    placed[static_cast<std::size_t>(t)] = partial_transpose(CMatrix(w * w.adjoint()), 3, t);
  }
  double acc = 0.0;
  for (const auto& keep : combinations(rho.n_qubits(), 3)) {
    const DensityMatrix r = partial_trace(rho, SubsystemSelection(keep, rho.n_qubits()));
    for (const CMatrix& m : placed) acc += expectation(r, m).real();
  }
  return acc / 3.0;
}

CVector family_vector(Family family, const SL2C& a, const SL2C& b) {
  CVector v = CVector::Zero(8);
  if (family == Family::Ghz) {
    v(0) = v(7) = 1.0 / std::numbers::sqrt2;
  } else {
    const Eigen::Matrix2cd& u = b.matrix();
    if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).norm() > 1e-9) {
      throw ParameterError("the W family needs a unitary second factor");
    }
    v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
  }
  const CMatrix op = kron(kron(a.matrix(), b.matrix()), b.matrix());
  return op * v;
}

ProportionalitySummary proportionality_suite(int n_qubits, int samples, std::uint64_t seed) {
  if (n_qubits < 3 || n_qubits > 5) throw ParameterError("proportionality suite runs for N = 3..5");
  if (samples < 0) throw ParameterError("sample count must be nonnegative");

  struct Pairing {
    std::vector<double> moment, direct;
  };
  auto finish = [&](const std::string& name, double frozen, const Pairing& p) {
    ProportionalityCheck c;
    c.name = name;
    c.n_qubits = n_qubits;
    c.samples = static_cast<int>(p.moment.size());
    c.frozen = frozen;
    double num = 0.0, den = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < p.moment.size(); ++i) {
      num += p.moment[i] * p.direct[i];
      den += p.direct[i] * p.direct[i];
      scale += std::abs(p.moment[i]);
    }
    c.fitted = den > 0.0 ? num / den : 0.0;
    // Values that happen to sit near zero are compared against the typical magnitude.
    const double floor = p.moment.empty() ? 1.0 : 1e-3 * scale / static_cast<double>(p.moment.size());
    for (std::size_t i = 0; i < p.moment.size(); ++i) {
      c.max_rel_err = std::max(c.max_rel_err, relative_error(p.moment[i], frozen * p.direct[i], floor));
    }
    return c;
  };

  std::mt19937_64 rng(seed ^ (0x5bd1e995ULL * static_cast<std::uint64_t>(n_qubits)));
  std::array<Pairing, 2> symmetric, general;
  std::array<Pairing, 3> ss;
  const std::array<SsKind, 3> ss_kinds = {SsKind::Ss1, SsKind::Ss2, SsKind::Ss3};

  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    RandomStateSpec sym_spec{RandomKind::MixedSymmetric, n_qubits, s, 1 + i % (n_qubits + 1), 1};
    RandomStateSpec gen_spec{RandomKind::HaarPure, n_qubits, derive_seed(s, 1), 1, 1};
    const DensityMatrix sym = generate(sym_spec);
    const DensityMatrix gen = generate(gen_spec);
    const MomentTensors m_sym = moments(sym);
    const MomentTensors m_gen = moments(gen);

    for (const Family family : {Family::Ghz, Family::W}) {
      const std::size_t f = family == Family::Ghz ? 0 : 1;
      const SL2C a = random_sl2c(rng, 1.5);
      const SL2C b = family == Family::Ghz ? random_sl2c(rng, 1.5)
                                           : SL2C(su2_from_rotation_vector(random_rotation_vector(rng)));
      const KTensor k = k_tensor(family, a, b);
      const CVector v = family_vector(family, a, b);
      if (n_qubits == 3) {
        symmetric[f].moment.push_back(tripartite_margin(m_sym, k, TripartiteMode::Symmetric));
        symmetric[f].direct.push_back(
            summed_triple_trace(sym, partial_transpose(CMatrix(v * v.adjoint()), 3, 0)));
      }
      general[f].moment.push_back(tripartite_margin(m_gen, cyclic_average(k), TripartiteMode::General));
      general[f].direct.push_back(summed_triple_trace_all_positions(gen, v));
    }

    const Frame frame = Frame::from_rotation(
        Eigen::AngleAxisd(random_rotation_vector(rng).norm(), random_unit(rng)).toRotationMatrix());
    for (std::size_t j = 0; j < ss_kinds.size(); ++j) {
      const DensityMatrix& rho = (i % 2 == 0) ? sym : gen;
      ss[j].moment.push_back(ss_value(moments(rho), ss_kinds[j], frame));
      ss[j].direct.push_back(summed_triple_trace(rho, witness_matrix(witness_for(ss_kinds[j]), frame)));
    }
  }

  ProportionalitySummary out;
  if (n_qubits == 3) {
    out.checks.push_back(finish("tripartite-ghz/symmetric", kTripartiteConstant, symmetric[0]));
    out.checks.push_back(finish("tripartite-w/symmetric", kTripartiteConstant, symmetric[1]));
  }
  out.checks.push_back(finish("tripartite-ghz/general", kTripartiteConstant, general[0]));
  out.checks.push_back(finish("tripartite-w/general", kTripartiteConstant, general[1]));
  for (std::size_t j = 0; j < ss_kinds.size(); ++j) {
    out.checks.push_back(finish(to_string(ss_kinds[j]), ss_proportionality_constant(ss_kinds[j]), ss[j]));
  }
  return out;
}

// ---------------------------------------------------------------------------

bool IdentitySummary::passed() const {
  auto ok = [&](const auto& v) {
    return std::all_of(v.begin(), v.end(), [&](const auto& p) { return p.second <= tolerance; });
  };
  return ok(pair_residuals) && ok(triple_residuals);
}

nlohmann::json IdentitySummary::to_json() const {
  nlohmann::json doc = {{"tolerance", tolerance}, {"passed", passed()}};
  for (const auto& [n, r] : pair_residuals) doc["pair"].push_back({{"n_qubits", n}, {"residual", r}});
  for (const auto& [n, r] : triple_residuals) doc["triple"].push_back({{"n_qubits", n}, {"residual", r}});
  return doc;
}

IdentitySummary identity_suite(int max_qubits) {
  if (max_qubits < 2 || max_qubits > kIdentityMaxQubits) {
    throw ParameterError("identity suite runs for 2 <= N <= " + std::to_string(kIdentityMaxQubits));
  }
  IdentitySummary out;
  for (int n = 2; n <= max_qubits; ++n) {
    out.pair_residuals.emplace_back(n, pair_identity_residual(n));
    if (n >= 3) out.triple_residuals.emplace_back(n, triple_identity_residual(n));
  }
  return out;
}

// ---------------------------------------------------------------------------

bool RoundtripSummary::passed() const {
  return max_roundtrip_error <= 1e-8 && max_trace_error <= 1e-8 && closed_form_ok &&
         certificate_mixture && certificate_ghz_rejected;
}

nlohmann::json RoundtripSummary::to_json() const {
  return {{"samples", samples},
          {"max_roundtrip_error", max_roundtrip_error},
          {"max_trace_error", max_trace_error},
          {"closed_form_ok", closed_form_ok},
          {"closed_form_error", closed_form_error},
          {"certificate_mixture", certificate_mixture},
          {"certificate_ghz_rejected", certificate_ghz_rejected},
          {"passed", passed()}};
}

RoundtripSummary prep_roundtrip_suite(int samples, std::uint64_t seed) {
  if (samples < 0) throw ParameterError("sample count must be nonnegative");
  RoundtripSummary out;
  out.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const int n = 1 + i % 6;
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const DensityMatrix rho = generate({RandomKind::MixedSymmetric, n, s, 1 + i % (n + 1), 1});
    const HarmonicCoefficients c = p_expand(rho);
    const CMatrix back = p_reconstruct_dicke(c).matrix();
    out.max_roundtrip_error =
        std::max(out.max_roundtrip_error, (back - to_dicke(rho).matrix()).cwiseAbs().maxCoeff());

    // Any Hermitian W satisfies tr(ϱW) = ∫ P w dΩ.
    std::mt19937_64 rng(derive_seed(s, 7));
    const CMatrix g = ginibre(rng, rho.dim(), rho.dim());
    const CMatrix w = 0.5 * (g + g.adjoint());
    out.max_trace_error = std::max(
        out.max_trace_error, std::abs(expectation(rho, w).real() - integrate_p_times_witness(c, w)));
  }

  const DensityMatrix up = build_named_state(family::Computational{"0"}, 1).projector();
  const HarmonicCoefficients c1 = p_expand(up);
  for (int i = 0; i <= 16; ++i) {
    const double theta = kPi * i / 16.0;
    for (const double phi : {0.0, 1.0, 4.0}) {
      const double expected = (1.0 + 3.0 * std::cos(theta)) / (4.0 * kPi);
      out.closed_form_error = std::max(out.closed_form_error, std::abs(p_evaluate(c1, theta, phi) - expected));
    }
  }
  out.closed_form_ok = out.closed_form_error <= 1e-10;

  // Uniform mixture of four coherent products sitting on grid nodes.
  const std::vector<SpherePoint> grid = fibonacci_sphere(64);
  const int n = 4;
  CMatrix mix = CMatrix::Zero(n + 1, n + 1);
  for (const int node : {3, 17, 30, 51}) {
    const CVector a = coherent_dicke(n, grid[static_cast<std::size_t>(node)].first,
                                     grid[static_cast<std::size_t>(node)].second);
    mix += 0.25 * (a * a.adjoint());
  }
  const Certificate cert = separability_certificate(to_full(DickeCoefficients(n, mix)), 64);
  out.certificate_mixture = cert.certified && cert.measure &&
                            std::all_of(cert.measure->weights.begin(), cert.measure->weights.end(),
                                        [](double w) { return std::abs(w - 0.25) <= 1e-6; }) &&
                            cert.measure->weights.size() == 4;

  const DensityMatrix ghz = build_named_state(family::Ghz{}, 3).projector();
  out.certificate_ghz_rejected = true;
  for (const int resolution : {64, 256, 1024}) {
    if (separability_certificate(ghz, resolution).certified) out.certificate_ghz_rejected = false;
  }
  return out;
}

}  // namespace ssq
