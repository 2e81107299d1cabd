#pragma once

// JSON state files:
//   { "n_qubits": int, "kind": "pure" | "density" | "dicke", "data": ... }
// Complex numbers are [re, im] pairs; matrices are row-major arrays of rows.

#include <optional>
#include <string>

#include <json.hpp>

#include "ssq/qcore.hpp"

namespace ssq {

enum class StateKind { Pure, Density, Dicke };

struct LoadedState {
  StateKind kind;
  DensityMatrix rho;
  std::optional<PureState> pure;
  std::optional<DickeCoefficients> dicke;  // set for "dicke" files and symmetric inputs
};

LoadedState parse_state(const nlohmann::json& doc);
LoadedState load_state_file(const std::string& path);

nlohmann::json state_to_json(const PureState& psi);
nlohmann::json state_to_json(const DensityMatrix& rho);
nlohmann::json state_to_json(const DickeCoefficients& d);

std::string to_string(StateKind kind);

}  // namespace ssq
