#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ssq/criteria.hpp"
#include "ssq/oracle.hpp"
#include "ssq/prepfn.hpp"
#include "ssq/search.hpp"
#include "ssq/spinops.hpp"

namespace py = pybind11;
using namespace ssq;

namespace {

int qubits_for(const CMatrix& m) {
  int n = 0;
  while ((Eigen::Index{1} << n) < m.rows()) ++n;
  if (m.rows() != m.cols() || (Eigen::Index{1} << n) != m.rows() || n < 1) {
    throw ParameterError("expected a square matrix of size 2^N");
  }
  return n;
}

DensityMatrix density(const CMatrix& m) { return DensityMatrix(qubits_for(m), m); }

py::object to_py(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

SsKind ss_kind(const std::string& id) {
  static const std::map<std::string, SsKind> kinds = {{"ss1", SsKind::Ss1}, {"ss2", SsKind::Ss2}, {"ss3", SsKind::Ss3},
                                                       {"ss1p", SsKind::Ss1p}, {"ss2p", SsKind::Ss2p}};
  const auto it = kinds.find(id);
  if (it == kinds.end()) throw ParameterError("unknown ss kind '" + id + "'");
  return it->second;
}

Family family_of(const std::string& id) {
  if (id == "ghz" || id == "GHZ") return Family::Ghz;
  if (id == "w" || id == "W") return Family::W;
  throw ParameterError("family must be 'ghz' or 'w'");
}

RandomKind random_kind(const std::string& id) {
  for (RandomKind k : {RandomKind::PureSymmetric, RandomKind::MixedSymmetric, RandomKind::Product,
                       RandomKind::SeparableMixture, RandomKind::HaarPure, RandomKind::SeparableSymmetric}) {
    if (to_string(k) == id) return k;
  }
  throw ParameterError("unknown random state kind '" + id + "'");
}

SearchConfig config(const py::dict& kw) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, value] : kw) {
    const std::string k = py::str(key);
    if (py::isinstance<py::int_>(value)) doc[k] = value.cast<long long>();
    else doc[k] = value.cast<double>();
  }
  return SearchConfig::from_json(doc);
}

py::dict result_dict(const OptimizationResult& r) {
  py::dict d;
  d["best_margin"] = r.best_margin;
  d["evaluations"] = r.evaluations;
  d["converged"] = r.converged;
  d["verdict"] = to_string(verdict_for(r.best_margin));
  if (const auto* n = std::get_if<Direction>(&r.params)) {
    d["direction"] = Eigen::Vector3d(n->vec());
  } else if (const auto* f = std::get_if<Frame>(&r.params)) {
    d["frame"] = Eigen::Matrix3d(f->rotation());
  } else if (const auto* l = std::get_if<LorentzPair>(&r.params)) {
    d["A"] = Eigen::Matrix2cd(l->first.matrix());
    d["B"] = Eigen::Matrix2cd(l->second.matrix());
  }
  return d;
}

Frame frame_of(const Eigen::Matrix3d& r) { return Frame::from_rotation(r); }

}  // namespace

PYBIND11_MODULE(_ssq, m) {
  m.doc() = "Entanglement criteria for symmetric qubit states built on collective-spin moments";

  py::register_exception<Error>(m, "SsqError", PyExc_ValueError);

  // states
  m.def("ghz", [](int n) { return CMatrix(build_named_state(family::Ghz{}, n).projector().entries()); }, py::arg("n"));
  m.def("w", [](int n) { return CMatrix(build_named_state(family::W{}, n).projector().entries()); }, py::arg("n"));
  m.def(
      "coherent",
      [](int n, double theta, double phi) {
        return CMatrix(build_named_state(family::Coherent{theta, phi}, n).projector().entries());
      },
      py::arg("n"), py::arg("theta"), py::arg("phi") = 0.0);
  m.def("from_dicke", [](const CMatrix& d) { return CMatrix(to_full(DickeCoefficients(static_cast<int>(d.rows()) - 1, d)).entries()); },
        py::arg("dicke"), "Embed an (N+1)x(N+1) Dicke-basis density matrix into the 2^N space.");
  m.def("to_dicke", [](const CMatrix& rho) { return CMatrix(to_dicke(density(rho)).matrix()); }, py::arg("rho"));
  m.def(
      "random_state",
      [](const std::string& kind, int n, std::uint64_t seed, int rank, int terms) {
        RandomStateSpec spec;
        spec.kind = random_kind(kind);
        spec.n_qubits = n;
        spec.seed = seed;
        spec.rank = rank;
        spec.terms = terms;
        return CMatrix(generate(spec).entries());
      },
      py::arg("kind"), py::arg("n"), py::arg("seed") = 0, py::arg("rank") = 1, py::arg("terms") = 1);
  m.def("partial_transpose", [](const CMatrix& rho, int q) { return partial_transpose(density(rho), q); },
        py::arg("rho"), py::arg("subsystem") = 0);

  // criteria
  m.def(
      "xi_squared",
      [](const CMatrix& rho) {
        const XiSquared xi = xi_squared(density(rho));
        return py::make_tuple(xi.value, Eigen::Vector3d(xi.direction.vec()));
      },
      py::arg("rho"));
  m.def("bipartite_margin", [](const CMatrix& rho, const Eigen::Vector3d& n) { return bipartite_margin(density(rho), Direction(n)); },
        py::arg("rho"), py::arg("n"));
  m.def(
      "tripartite_margin",
      [](const CMatrix& rho, const std::string& fam, const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        return tripartite_margin(density(rho), k_tensor(family_of(fam), SL2C(a), SL2C(b)), TripartiteMode::Symmetric);
      },
      py::arg("rho"), py::arg("family"), py::arg("A") = Eigen::Matrix2cd::Identity().eval(),
      py::arg("B") = Eigen::Matrix2cd::Identity().eval());
  m.def("ss_value", [](const CMatrix& rho, const std::string& kind, const Eigen::Matrix3d& frame) {
        return ss_value(density(rho), ss_kind(kind), frame_of(frame));
      },
      py::arg("rho"), py::arg("kind"), py::arg("frame") = Eigen::Matrix3d::Identity().eval());
  m.def(
      "witness_matrix",
      [](const std::string& kind, const Eigen::Matrix3d& frame) {
        const WitnessKind k = kind == "ghz" ? WitnessKind::Ghz : kind == "w1" ? WitnessKind::W1
                              : kind == "w2" ? WitnessKind::W2
                                             : throw ParameterError("witness must be ghz, w1 or w2");
        return CMatrix(witness_matrix(k, frame_of(frame)));
      },
      py::arg("kind"), py::arg("frame") = Eigen::Matrix3d::Identity().eval());

  // searches; keyword arguments are SearchConfig fields
  m.def("optimize_direction", [](const CMatrix& rho, const py::kwargs& kw) {
    return result_dict(optimize_direction(density(rho), config(kw)));
  }, py::arg("rho"));
  m.def("optimize_frame", [](const CMatrix& rho, const std::string& kind, const py::kwargs& kw) {
    return result_dict(optimize_frame(density(rho), ss_kind(kind), config(kw)));
  }, py::arg("rho"), py::arg("kind"));
  m.def("optimize_lorentz", [](const CMatrix& rho, const std::string& fam, const py::kwargs& kw) {
    return result_dict(optimize_lorentz(density(rho), family_of(fam), config(kw)));
  }, py::arg("rho"), py::arg("family"));

  // oracle
  m.def(
      "ppt_verdict",
      [](const CMatrix& rho, int subsystem) {
        const OracleVerdict v = ppt_verdict(density(rho), subsystem);
        py::dict d;
        d["min_pt_eigenvalue"] = v.min_pt_eigenvalue;
        d["entangled"] = v.entangled;
        d["witness_vector"] = v.witness_vector ? py::cast(CVector(*v.witness_vector)) : py::none();
        return d;
      },
      py::arg("rho"), py::arg("subsystem") = 0);
  m.def("identity_suite", [](int max_n) { return to_py(identity_suite(max_n).to_json()); }, py::arg("max_qubits") = 6);
  m.def("equivalence_suite", [](int n, int samples, const py::kwargs& kw) {
    return to_py(equivalence_suite(n, samples, config(kw)).to_json());
  }, py::arg("n"), py::arg("samples"));
  m.def("proportionality_suite", [](int n, int samples, std::uint64_t seed) {
    return to_py(proportionality_suite(n, samples, seed).to_json());
  }, py::arg("n"), py::arg("samples"), py::arg("seed") = 0);

  // P-representation
  m.def(
      "p_expand",
      [](const CMatrix& rho) {
        const HarmonicCoefficients c = p_expand(density(rho));
        return std::vector<cplx>(c.data());
      },
      py::arg("rho"), "Coefficients c_{l,m} ordered l = 0..N, m = -l..l.");
  m.def(
      "p_reconstruct",
      [](int n, const std::vector<cplx>& c) { return CMatrix(p_reconstruct(HarmonicCoefficients(n, c)).entries()); },
      py::arg("n"), py::arg("coefficients"));
  m.def(
      "p_evaluate",
      [](int n, const std::vector<cplx>& c, double theta, double phi) {
        return p_evaluate(HarmonicCoefficients(n, c), theta, phi);
      },
      py::arg("n"), py::arg("coefficients"), py::arg("theta"), py::arg("phi"));
  m.def(
      "separability_certificate",
      [](const CMatrix& rho, std::optional<int> resolution) {
        const DensityMatrix st = density(rho);
        return to_py((resolution ? separability_certificate(st, *resolution) : separability_certificate(st)).to_json());
      },
      py::arg("rho"), py::arg("resolution") = py::none());
}
