#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace ssq;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ssq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SSQ_TEST_DATA) + "/" + name; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ssq_test_" + name);
}

json verdicts(const json& report) {
  json out = json::object();
  for (const auto& c : report["criteria"]) out[c["criterion"].get<std::string>()] = c["verdict"];
  return out;
}

}  // namespace

TEST_CASE("detect: GHZ with ss1 and tripartite-ghz") {
  const Run r = run_cli({"detect", "--state", data("ghz3.json"), "--criteria", "ss1,tripartite-ghz", "--restarts", "8"});
  REQUIRE(r.code == cli::kExitOk);
  const json report = json::parse(r.out);
  const json v = verdicts(report);
  CHECK(v["ss1"] == "entangled");
  CHECK(v["tripartite-ghz"] == "entangled");
  CHECK(report["oracle"]["consistent"] == true);
  CHECK(report["input"]["n_qubits"] == 3);
  CHECK(report["input"]["sha256"].get<std::string>().size() == 64);
  CHECK_FALSE(report.contains("wall_time_seconds"));
  CHECK(r.err.find("ss1=entangled") != std::string::npos);
}

TEST_CASE("detect: |0000> with every criterion") {
  const Run r = run_cli({"detect", "--state", data("zero4.json"), "--criteria", "all", "--restarts", "4"});
  REQUIRE(r.code == cli::kExitOk);
  const json report = json::parse(r.out);
  CHECK(report["criteria"].size() == cli::criterion_ids().size());
  for (const auto& c : report["criteria"]) {
    const std::string v = c["verdict"];
    CHECK_MESSAGE(v != "entangled", c["criterion"].get<std::string>());
    if (c.contains("margin")) CHECK(c["margin"].get<double>() >= -1e-9);
  }
  CHECK(verdicts(report)["prep-certificate"] == "certified_separable");
  CHECK(report["oracle"]["consistent"] == true);
}

TEST_CASE("detect: Dicke input and oracle agreement") {
  const Run r = run_cli({"detect", "--state", data("bell_dicke.json"), "--criteria", "bipartite,xi2,ss1"});
  REQUIRE(r.code == cli::kExitOk);
  const json report = json::parse(r.out);
  const json v = verdicts(report);
  CHECK(v["bipartite"] == "entangled");
  CHECK(v["xi2"] == "not_applicable");  // zero mean spin
  CHECK(v["ss1"] == "not_applicable");  // needs three qubits
  CHECK(report["oracle"]["pairs"]["entangled"] == true);
  CHECK(report["oracle"]["consistent"] == true);
}

TEST_CASE("input errors exit 2") {
  CHECK(run_cli({"detect", "--state", data("malformed.json")}).code == cli::kExitInputError);
  CHECK(run_cli({"detect", "--state", data("missing.json")}).code == cli::kExitInputError);
  CHECK(run_cli({"detect", "--state", data("ghz3.json"), "--criteria", "nope"}).code == cli::kExitInputError);
  CHECK(run_cli({"detect", "--state", data("ghz3.json"), "--rapidity-cap", "50"}).code == cli::kExitInputError);
  CHECK(run_cli({"verify", "--suite", "no-such-suite"}).code == cli::kExitInputError);
  CHECK(run_cli({"verify"}).code == cli::kExitInputError);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitInputError);
}

TEST_CASE("resource cap exits 3") {
  const char* old = std::getenv("SSQ_MAX_QUBITS");
  const std::string saved = old ? old : "";
  setenv("SSQ_MAX_QUBITS", "2", 1);
  const Run r = run_cli({"detect", "--state", data("ghz3.json"), "--criteria", "bipartite"});
  if (old) setenv("SSQ_MAX_QUBITS", saved.c_str(), 1); else unsetenv("SSQ_MAX_QUBITS");
  CHECK(r.code == cli::kExitResourceCap);
}

TEST_CASE("verify suites") {
  const Run ids = run_cli({"verify", "--suite", "identities"});
  CHECK(ids.code == cli::kExitOk);
  CHECK(json::parse(ids.out)["passed"] == true);

  const auto csv = temp_path("eq.csv");
  const Run eq = run_cli({"verify", "--suite", "equivalence-n2", "--samples", "40", "--csv", csv.string()});
  CHECK(eq.code == cli::kExitOk);
  CHECK(eq.err.find("PASS") != std::string::npos);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK_FALSE(header.empty());
  std::filesystem::remove(csv);

  CHECK(run_cli({"verify", "--suite", "prep-roundtrip", "--samples", "6"}).code == cli::kExitOk);
  CHECK(run_cli({"verify", "--suite", "proportionality", "--samples", "5"}).code == cli::kExitOk);
}

TEST_CASE("reports are byte-identical across runs") {
  const auto a = temp_path("a.json");
  const auto b = temp_path("b.json");
  for (const auto& path : {a, b}) {
    const Run r = run_cli({"detect", "--state", data("w3.json"), "--seed", "5", "--restarts", "6", "--out", path.string()});
    REQUIRE(r.code == cli::kExitOk);
  }
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("config files") {
  const auto cfg = temp_path("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"restarts": 3, "coarse_grid": 10})";
  }
  const Run r = run_cli({"detect", "--state", data("ghz3.json"), "--criteria", "bipartite", "--config", cfg.string()});
  REQUIRE(r.code == cli::kExitOk);
  const json report = json::parse(r.out);
  CHECK(report["config"]["restarts"] == 3);
  CHECK(report["config"]["coarse_grid"] == 10);
  {
    std::ofstream f(cfg);
    f << R"({"restartz": 3})";
  }
  CHECK(run_cli({"detect", "--state", data("ghz3.json"), "--config", cfg.string()}).code == cli::kExitInputError);
  std::filesystem::remove(cfg);

  const Run timed = run_cli({"detect", "--state", data("ghz3.json"), "--criteria", "bipartite", "--timing"});
  CHECK(json::parse(timed.out).contains("wall_time_seconds"));
}

TEST_CASE("sha256") {
  const auto p = temp_path("abc.txt");
  {
    std::ofstream f(p, std::ios::binary);
    f << "abc";
  }
  CHECK(cli::sha256_file(p.string()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(p);
}
