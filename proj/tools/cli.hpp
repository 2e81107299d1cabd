#pragma once

// The `ssq` command line: detect (run criteria on a state file) and verify (run an
// oracle suite). Exit codes: 0 ok, 1 suite failure, 2 input error, 3 resource cap.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssq/search.hpp"

namespace ssq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSuiteFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitResourceCap = 3;

/// Every criterion id accepted by `detect`, in report order.
const std::vector<std::string>& criterion_ids();

struct DetectRequest {
  std::string state_path;
  std::vector<std::string> criteria;
  SearchConfig cfg;
  bool timing = false;
};

struct VerifyRequest {
  std::string suite;
  std::optional<int> samples;
  std::uint64_t seed = 0;
  SearchConfig cfg;
  bool timing = false;
};

struct Outcome {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string summary;  // one-line human summary
  std::string csv;      // verify only
};

/// Throws ssq::Error subclasses on bad input; run() maps them to exit codes.
Outcome run_detect(const DetectRequest& req);
Outcome run_verify(const VerifyRequest& req);

/// Full command line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace ssq::cli
