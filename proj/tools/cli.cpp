#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "ssq/oracle.hpp"
#include "ssq/prepfn.hpp"
#include "ssq/state_io.hpp"

#ifndef SSQ_VERSION
#define SSQ_VERSION "0.0.0"
#endif

namespace ssq::cli {

namespace {

using nlohmann::json;

json vec3(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

json cmat(const Eigen::Matrix2cd& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int j = 0; j < 2; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json rmat(const Eigen::Matrix4d& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  return rows;
}

json params_json(const CriterionParams& p) {
  if (const auto* n = std::get_if<Direction>(&p)) {
    return {{"type", "direction"}, {"n", vec3(n->vec())}, {"theta", n->theta()}, {"phi", n->phi()}};
  }
  if (const auto* f = std::get_if<Frame>(&p)) {
    return {{"type", "frame"}, {"k", vec3(f->k())}, {"l", vec3(f->l())}, {"n", vec3(f->n())}};
  }
  if (const auto* l = std::get_if<LorentzPair>(&p)) {
    return {{"type", "sl2c_pair"},
            {"family", to_string(l->family)},
            {"A", cmat(l->first.matrix())},
            {"B", cmat(l->second.matrix())},
            {"Lambda", rmat(lorentz_from_sl2c(l->first, SpinorConvention::Star).matrix())},
            {"L", rmat(lorentz_from_sl2c(l->second, SpinorConvention::Dagger).matrix())}};
  }
  return nullptr;
}

json not_applicable(const std::string& id, const std::string& reason) {
  return {{"criterion", id}, {"verdict", "not_applicable"}, {"reason", reason}};
}

json searched(const std::string& id, const OptimizationResult& r) {
  return {{"criterion", id},
          {"margin", r.best_margin},
          {"verdict", to_string(verdict_for(r.best_margin))},
          {"boundary", in_boundary_band(r.best_margin)},
          {"params", params_json(r.params)},
          {"evaluations", r.evaluations},
          {"converged", r.converged}};
}

std::optional<SsKind> ss_kind(const std::string& id) {
  if (id == "ss1") return SsKind::Ss1;
  if (id == "ss2") return SsKind::Ss2;
  if (id == "ss3") return SsKind::Ss3;
  if (id == "ss1p") return SsKind::Ss1p;
  if (id == "ss2p") return SsKind::Ss2p;
  return std::nullopt;
}

json evaluate_criterion(const std::string& id, const LoadedState& st, const MomentTensors& m,
                        bool symmetric, const SearchConfig& cfg) {
  const int n = st.rho.n_qubits();
  if (id == "xi2") {
    if (!symmetric) return not_applicable(id, "xi2 only certifies entanglement for symmetric states");
    try {
      const XiSquared xi = xi_squared(m);
      const double margin = xi.value - 1.0;
      return {{"criterion", id},
              {"margin", margin},
              {"xi_squared", xi.value},
              {"verdict", to_string(verdict_for(margin))},
              {"boundary", in_boundary_band(margin)},
              {"params", params_json(xi.direction)}};
    } catch (const UndefinedMeanSpinError& e) {
      return not_applicable(id, e.what());
    }
  }
  if (id == "bipartite") {
    if (n < 2) return not_applicable(id, "needs at least 2 qubits");
    // The inequality uses the Casimir of the symmetric subspace; |01> would be flagged.
    if (!symmetric) return not_applicable(id, "the bipartite criterion holds for symmetric states only");
    return searched(id, optimize_direction(m, cfg));
  }
  if (id == "tripartite-ghz" || id == "tripartite-w") {
    if (n < 3) return not_applicable(id, "needs at least 3 qubits");
    const Family family = id == "tripartite-ghz" ? Family::Ghz : Family::W;
    const OptimizationResult r = optimize_lorentz(m, family, cfg);
    json entry = searched(id, r);
    const auto& pair = std::get<LorentzPair>(r.params);
    const KTensor k = k_tensor(family, pair.first, pair.second);
    // The normalized margin is scale free; the raw value is the unnormalized contraction.
    entry["raw_margin"] = tripartite_margin(m, k, symmetric ? TripartiteMode::Symmetric : TripartiteMode::General);
    entry["mode"] = symmetric ? "symmetric" : "general";
    return entry;
  }
  if (const auto kind = ss_kind(id)) {
    if (n < 3) return not_applicable(id, "needs at least 3 qubits");
    try {
      return searched(id, optimize_frame(m, *kind, cfg));
    } catch (const PreconditionError& e) {
      return not_applicable(id, e.what());
    }
  }
  if (id == "prep-certificate") {
    if (!symmetric) return not_applicable(id, "state is not supported on the symmetric subspace");
    const Certificate cert = separability_certificate(st.rho);
    json entry = {{"criterion", id},
                  {"verdict", cert.certified ? "certified_separable" : "not_certified"},
                  {"residual", cert.residual},
                  {"resolution", cert.resolution}};
    if (cert.measure) entry["measure"] = cert.measure->to_json();
    return entry;
  }
  throw ParameterError("unknown criterion '" + id + "'");
}

json oracle_cross_check(const DensityMatrix& rho, bool symmetric, json& criteria) {
  const int n = rho.n_qubits();
  json doc = {{"pairs", nullptr}, {"triples", nullptr}};
  auto scan_json = [](const ReductionScan& s) {
    return json{{"min_pt_eigenvalue", s.min_pt_eigenvalue}, {"entangled", s.entangled}, {"worst", s.worst}};
  };
  std::optional<ReductionScan> pairs, triples;
  if (n >= 2) doc["pairs"] = scan_json(*(pairs = scan_reductions(rho, 2)));
  if (n >= 3) doc["triples"] = scan_json(*(triples = scan_reductions(rho, 3)));

  // PPT decides 2-qubit states always and 3-qubit states when symmetric.
  json issues = json::array();
  for (const auto& entry : criteria) {
    const std::string id = entry["criterion"];
    const std::string verdict = entry["verdict"];
    const bool pair_level = id == "xi2" || id == "bipartite";
    if (verdict == "entangled") {
      if (pair_level && pairs && !pairs->entangled) issues.push_back(id + " flags entanglement but every pair is PPT");
      if (!pair_level && symmetric && triples && !triples->entangled) {
        issues.push_back(id + " flags entanglement but every triple is PPT");
      }
    }
    if (verdict == "certified_separable" &&
        ((pairs && pairs->entangled) || (triples && triples->entangled))) {
      issues.push_back(id + " certifies separability but a reduction is NPT");
    }
  }
  doc["triples_decisive"] = symmetric;
  doc["inconsistencies"] = issues;
  doc["consistent"] = issues.empty();
  return doc;
}

std::vector<std::string> expand_criteria(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& item : raw) {
    std::stringstream ss(item);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (id.empty()) continue;
      if (id == "all") {
        for (const auto& c : criterion_ids()) out.push_back(c);
        continue;
      }
      if (std::find(criterion_ids().begin(), criterion_ids().end(), id) == criterion_ids().end()) {
        throw ParameterError("unknown criterion '" + id + "'");
      }
      out.push_back(id);
    }
  }
  if (out.empty()) throw ParameterError("criteria list is empty");
  // Keep the first occurrence of each id.
  std::vector<std::string> unique;
  for (const auto& id : out) {
    if (std::find(unique.begin(), unique.end(), id) == unique.end()) unique.push_back(id);
  }
  return unique;
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) line += (line.empty() ? "" : ",") + c;
  return line + "\n";
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids = {"xi2",  "bipartite", "tripartite-ghz", "tripartite-w",
                                               "ss1",  "ss2",       "ss3",            "ss1p",
                                               "ss2p", "prep-certificate"};
  return ids;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256 initialisation failed");
  }
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

Outcome run_detect(const DetectRequest& req) {
  const auto start = std::chrono::steady_clock::now();
  req.cfg.validate();
  const std::vector<std::string> ids = expand_criteria(req.criteria);
  const LoadedState st = load_state_file(req.state_path);
  const DensityMatrix& rho = st.rho;
  const int n = rho.n_qubits();
  const bool symmetric = st.dicke.has_value() || symmetric_residual(rho) <= kSymmetricResidualTolerance;
  const MomentTensors m = st.dicke ? moments(*st.dicke) : moments(rho);

  json criteria = json::array();
  for (const auto& id : ids) criteria.push_back(evaluate_criterion(id, st, m, symmetric, req.cfg));

  Outcome out;
  out.report = {{"tool", "ssq"},
                {"version", SSQ_VERSION},
                {"command", "detect"},
                {"input", {{"path", req.state_path},
                           {"sha256", sha256_file(req.state_path)},
                           {"n_qubits", n},
                           {"kind", to_string(st.kind)},
                           {"symmetric", symmetric}}},
                {"config", req.cfg.to_json()},
                {"threshold", kDetectionThreshold}};
  if (n >= 2 && n <= 6) {
    out.report["oracle"] = oracle_cross_check(rho, symmetric, criteria);
  } else {
    out.report["oracle"] = nullptr;
  }
  out.report["criteria"] = criteria;

  std::ostringstream summary;
  for (const auto& c : criteria) summary << c["criterion"].get<std::string>() << "=" << c["verdict"].get<std::string>() << " ";
  if (out.report["oracle"].is_object() && !out.report["oracle"]["consistent"].get<bool>()) {
    summary << "ORACLE INCONSISTENCY";
  }
  out.summary = summary.str();
  if (req.timing) {
    out.report["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

Outcome run_verify(const VerifyRequest& req) {
  const auto start = std::chrono::steady_clock::now();
  req.cfg.validate();
  if (req.samples && *req.samples < 0) throw ParameterError("--samples must be nonnegative");
  Outcome out;
  bool passed = false;
  std::string failing;
  json detail;
  std::string csv;

  if (req.suite == "identities") {
    const IdentitySummary s = identity_suite(6);
    passed = s.passed();
    detail = s.to_json();
    csv = csv_line({"identity", "n_qubits", "residual"});
    for (const auto& [nq, r] : s.pair_residuals) csv += csv_line({"pair", std::to_string(nq), num(r)});
    for (const auto& [nq, r] : s.triple_residuals) csv += csv_line({"triple", std::to_string(nq), num(r)});
    if (!passed) failing = "identity residual above " + num(s.tolerance);
  } else if (req.suite == "equivalence-n2" || req.suite == "equivalence-n3") {
    const int nq = req.suite == "equivalence-n2" ? 2 : 3;
    SearchConfig cfg = req.cfg;
    cfg.seed = req.seed;
    const EquivalenceSummary s = equivalence_suite(nq, req.samples.value_or(nq == 2 ? 500 : 200), cfg);
    passed = s.passed();
    detail = s.to_json();
    csv = csv_line({"n_qubits", "samples", "agreements", "false_positives", "false_negatives", "band", "passed"});
    csv += csv_line({std::to_string(nq), std::to_string(s.samples), std::to_string(s.agreements),
                     std::to_string(s.false_positives), std::to_string(s.false_negatives),
                     std::to_string(s.band), passed ? "true" : "false"});
    if (!passed) {
      failing = "disagreements=" + std::to_string(s.disagreements()) + " band=" + std::to_string(s.band);
    }
  } else if (req.suite == "proportionality") {
    const int samples = req.samples.value_or(100);
    detail = json::array();
    passed = true;
    csv = csv_line({"check", "n_qubits", "samples", "frozen", "fitted", "max_rel_err", "passed"});
    for (int nq = 3; nq <= 5; ++nq) {
      const ProportionalitySummary s = proportionality_suite(nq, samples, req.seed);
      passed = passed && s.passed();
      detail.push_back(s.to_json());
      for (const auto& c : s.checks) {
        csv += csv_line({c.name, std::to_string(nq), std::to_string(c.samples), num(c.frozen), num(c.fitted),
                         num(c.max_rel_err), c.passed() ? "true" : "false"});
        if (!c.passed() && failing.empty()) {
          failing = c.name + " (N=" + std::to_string(nq) + ") max_rel_err=" + num(c.max_rel_err);
        }
      }
    }
  } else if (req.suite == "prep-roundtrip") {
    const RoundtripSummary s = prep_roundtrip_suite(req.samples.value_or(50), req.seed);
    passed = s.passed();
    detail = s.to_json();
    csv = csv_line({"metric", "value"});
    for (const auto& [k, v] : detail.items()) csv += csv_line({k, v.dump()});
    if (!passed) failing = "roundtrip=" + num(s.max_roundtrip_error) + " trace=" + num(s.max_trace_error);
  } else {
    throw ParameterError("unknown suite '" + req.suite + "'");
  }

  out.exit_code = passed ? kExitOk : kExitSuiteFailure;
  out.report = {{"tool", "ssq"},
                {"version", SSQ_VERSION},
                {"command", "verify"},
                {"suite", req.suite},
                {"seed", req.seed},
                {"passed", passed},
                {"detail", detail}};
  if (!failing.empty()) out.report["failing"] = failing;
  out.summary = req.suite + ": " + (passed ? "PASS" : "FAIL " + failing);
  out.csv = csv;
  if (req.timing) {
    out.report["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement detection through generalized spin-squeezing inequalities", "ssq"};
  app.set_version_flag("--version", std::string("ssq ") + SSQ_VERSION);
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> restarts, samples;
  std::optional<double> rapidity_cap;
  std::string config_path, out_path, csv_path, state_path, suite;
  std::vector<std::string> criteria;
  bool timing = false;

  auto add_search_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--restarts", restarts, "Lorentz search restarts");
    sub->add_option("--rapidity-cap", rapidity_cap, "Largest boost rapidity searched");
    sub->add_option("--config", config_path, "JSON file with search config keys");
    sub->add_option("--out", out_path, "Write the JSON report here");
    sub->add_flag("--timing", timing, "Include wall time in the report");
  };

  CLI::App* detect = app.add_subcommand("detect", "Run entanglement criteria on a state file");
  detect->add_option("--state", state_path, "State JSON file")->required();
  detect->add_option("--criteria", criteria, "Comma separated criteria ids or 'all'")->delimiter(',');
  add_search_flags(detect);

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "identities | equivalence-n2 | equivalence-n3 | proportionality | prep-roundtrip")
      ->required();
  verify->add_option("--samples", samples, "Number of random samples");
  verify->add_option("--csv", csv_path, "Write the suite summary table here");
  add_search_flags(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    SearchConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ParameterError("cannot open config file '" + config_path + "'");
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(std::string("malformed JSON in config file: ") + e.what());
      }
      cfg = SearchConfig::from_json(doc);
    }
    if (seed) cfg.seed = *seed;
    if (restarts) cfg.restarts = *restarts;
    if (rapidity_cap) cfg.rapidity_cap = *rapidity_cap;

    Outcome result;
    if (detect->parsed()) {
      if (criteria.empty()) criteria = {"all"};
      result = run_detect({state_path, criteria, cfg, timing});
    } else {
      result = run_verify({suite, samples, cfg.seed, cfg, timing});
      if (!csv_path.empty()) write_file(csv_path, result.csv);
    }
    const std::string text = result.report.dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
    } else {
      write_file(out_path, text);
    }
    // With --out the summary owns stdout; otherwise stdout carries the JSON report.
    (out_path.empty() ? err : out) << result.summary << "\n";
    if (result.report.contains("oracle") && result.report["oracle"].is_object() &&
        !result.report["oracle"]["consistent"].get<bool>()) {
      err << "WARNING: criterion verdicts disagree with the PPT oracle; see report.oracle\n";
    }
    return result.exit_code;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace ssq::cli
