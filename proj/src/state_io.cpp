#include "ssq/state_io.hpp"

#include <fstream>
#include <sstream>

namespace ssq {

namespace {

using nlohmann::json;

cplx parse_complex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParameterError("complex entries must be [re, im] pairs");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

CVector parse_vector(const json& data, std::size_t expected) {
  if (!data.is_array() || data.size() != expected) {
    throw ParameterError("state data must be an array of " + std::to_string(expected) +
                         " amplitudes");
  }
  CVector v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(data[i]);
  return v;
}

CMatrix parse_matrix(const json& data, std::size_t expected) {
  if (!data.is_array() || data.size() != expected) {
    throw ParameterError("matrix data must have " + std::to_string(expected) + " rows");
  }
  const auto d = static_cast<Eigen::Index>(expected);
  CMatrix m(d, d);
  for (std::size_t r = 0; r < expected; ++r) {
    if (!data[r].is_array() || data[r].size() != expected) {
      throw ParameterError("matrix row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < expected; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(data[r][c]);
    }
  }
  return m;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<DickeCoefficients> try_dicke(const DensityMatrix& rho) {
  if (symmetric_residual(rho) > kSymmetricResidualTolerance) return std::nullopt;
  return to_dicke(rho);
}

}  // namespace

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Pure: return "pure";
    case StateKind::Density: return "density";
    case StateKind::Dicke: return "dicke";
  }
  return "unknown";
}

LoadedState parse_state(const json& doc) {
  if (!doc.is_object()) throw ParameterError("state file must be a JSON object");
  if (!doc.contains("n_qubits") || !doc["n_qubits"].is_number_integer()) {
    throw ParameterError("state file needs an integer n_qubits");
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ParameterError("state file needs a string kind");
  }
  if (!doc.contains("data")) throw ParameterError("state file needs data");
  const int n = doc["n_qubits"].get<int>();
  check_qubit_count(n);
  const std::string kind = doc["kind"].get<std::string>();
  const json& data = doc["data"];

  if (kind == "pure") {
    PureState psi(n, parse_vector(data, dimension(n)));
    DensityMatrix rho = psi.projector();
    auto dicke = n <= 10 ? try_dicke(rho) : std::nullopt;
    return {StateKind::Pure, std::move(rho), std::move(psi), std::move(dicke)};
  }
  if (kind == "density") {
    DensityMatrix rho(n, parse_matrix(data, dimension(n)));
    auto dicke = n <= 10 ? try_dicke(rho) : std::nullopt;
    return {StateKind::Density, std::move(rho), std::nullopt, std::move(dicke)};
  }
  if (kind == "dicke") {
    DickeCoefficients d(n, parse_matrix(data, static_cast<std::size_t>(n) + 1));
    DensityMatrix rho = to_full(d);
    return {StateKind::Dicke, std::move(rho), std::nullopt, std::move(d)};
  }
  throw ParameterError("unknown state kind '" + kind + "'");
}

LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open state file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("malformed JSON in state file: ") + e.what());
  }
  return parse_state(doc);
}

json state_to_json(const PureState& psi) {
  json data = json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    data.push_back(complex_json(psi.amplitudes()(i)));
  }
  return {{"n_qubits", psi.n_qubits()}, {"kind", "pure"}, {"data", std::move(data)}};
}

json state_to_json(const DensityMatrix& rho) {
  return {{"n_qubits", rho.n_qubits()}, {"kind", "density"}, {"data", matrix_json(rho.entries())}};
}

json state_to_json(const DickeCoefficients& d) {
  return {{"n_qubits", d.n_qubits()}, {"kind", "dicke"}, {"data", matrix_json(d.matrix())}};
}

}  // namespace ssq
