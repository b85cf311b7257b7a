#pragma once

// JSON encodings.
//
//   space       {"dim": n, "norm": "sup" | "l1", "weights": [...]}   (weights only for l1)
//   operator    {"matrix": [[...], ...]}
//   filtration  {"space": {...}, "operators": [{"matrix": ...}, ...]}
//   sequence    {"vectors": [[...], ...]}
//   instance    {"space": {...}, "operators": [...]?, "vectors": [...]?}
//
// An instance file is therefore also a valid filtration document.  Doubles are
// written with round-trip precision, so reading back reproduces every bit.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lattice_lab/filtration.hpp"
#include "lattice_lab/lattice.hpp"
#include "lattice_lab/martingale.hpp"
#include "lattice_lab/operator.hpp"

namespace lattice_lab::io {

using nlohmann::json;

inline json space_to_json(const LatticeSpace& s) {
  json j = {{"dim", s.dim()}, {"norm", to_string(s.norm_kind())}};
  if (s.norm_kind() == NormKind::WeightedL1)
    j["weights"] = std::vector<double>(s.weights().begin(), s.weights().end());
  return j;
}

inline SpaceRef space_from_json(const json& j) {
  if (!j.is_object()) throw lattice_error("space: expected an object");
  if (!j.contains("dim") || !j["dim"].is_number_unsigned()) throw lattice_error("space: 'dim' must be a positive integer");
  const auto dim = j["dim"].get<std::size_t>();
  const std::string kind = j.value("norm", std::string("sup"));
  if (kind == "sup") return make_space(LatticeSpace::sup(dim));
  if (kind != "l1") throw lattice_error("space: 'norm' must be \"sup\" or \"l1\"");
  if (!j.contains("weights")) throw lattice_error("space: l1 spaces need 'weights'");
  auto weights = j["weights"].get<std::vector<double>>();
  if (weights.size() != dim) throw lattice_error("space: 'weights' length does not match 'dim'");
  return make_space(LatticeSpace::weighted_l1(std::move(weights)));
}

inline json operator_to_json(const PosOperator& T) { return {{"matrix", T.rows()}}; }

inline PosOperator operator_from_json(const json& j, const SpaceRef& space) {
  if (!j.is_object() || !j.contains("matrix")) throw lattice_error("operator: expected {\"matrix\": [[...]]}");
  return PosOperator::from_rows(space, j["matrix"].get<std::vector<std::vector<double>>>());
}

inline json filtration_to_json(const Filtration& F) {
  json ops = json::array();
  for (const auto& E : F.operators()) ops.push_back(operator_to_json(E));
  return {{"space", space_to_json(*F.space())}, {"operators", ops}};
}

inline Filtration filtration_from_json(const json& j, const SpaceRef& space) {
  if (!j.contains("operators") || !j["operators"].is_array()) throw lattice_error("filtration: missing 'operators' array");
  std::vector<PosOperator> ops;
  for (const auto& op : j["operators"]) ops.push_back(operator_from_json(op, space));
  return Filtration(space, std::move(ops));
}

inline Filtration filtration_from_json(const json& j) {
  if (!j.contains("space")) throw lattice_error("filtration: missing 'space'");
  return filtration_from_json(j, space_from_json(j["space"]));
}

inline json sequence_to_json(const MartingaleSeq& A) {
  json vs = json::array();
  for (const auto& x : A.vectors()) vs.push_back(std::vector<double>(x.coords().begin(), x.coords().end()));
  return {{"vectors", vs}};
}

inline MartingaleSeq sequence_from_json(const json& j, const SpaceRef& space) {
  if (!j.contains("vectors") || !j["vectors"].is_array()) throw lattice_error("sequence: missing 'vectors' array");
  std::vector<LatticeVector> xs;
  for (const auto& v : j["vectors"]) xs.emplace_back(space, v.get<std::vector<double>>());
  return MartingaleSeq(space, std::move(xs));
}

struct InstanceFile {
  SpaceRef space;
  std::optional<Filtration> filtration;
  std::optional<MartingaleSeq> sequence;
};

inline json instance_to_json(const InstanceFile& inst) {
  json j = {{"space", space_to_json(*inst.space)}};
  if (inst.filtration) j["operators"] = filtration_to_json(*inst.filtration)["operators"];
  if (inst.sequence) j["vectors"] = sequence_to_json(*inst.sequence)["vectors"];
  return j;
}

/// Parses iff every dimension agrees; a sequence next to a filtration must match its horizon.
inline InstanceFile instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("space")) throw lattice_error("instance: expected an object with 'space'");
  InstanceFile inst;
  inst.space = space_from_json(j["space"]);
  if (j.contains("operators")) inst.filtration = filtration_from_json(j, inst.space);
  if (j.contains("vectors")) inst.sequence = sequence_from_json(j, inst.space);
  if (inst.filtration && inst.sequence && inst.filtration->horizon() != inst.sequence->size())
    throw lattice_error("instance: sequence length does not match filtration horizon");
  return inst;
}

/// Throws json::parse_error on malformed text and lattice_error on schema problems.
inline InstanceFile read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lattice_error("cannot open '" + path + "'");
  return instance_from_json(json::parse(in));
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw lattice_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline json report_to_json(const ClassificationReport& r) {
  return {{"horizon", r.horizon},
          {"is_martingale", r.is_martingale},
          {"e_witness", r.e_witness ? json(*r.e_witness) : json(nullptr)},
          {"x_verdict", to_string(r.x_verdict)},
          {"x_defects", r.x_defects},
          {"one_step_defects", r.one_step_defects},
          {"seq_norm", r.seq_norm},
          {"window_start", r.window_start},
          {"tolerances", {{"tol", r.tol}, {"eps_x", r.eps_x}, {"window_fraction", r.window_fraction}}},
          {"notes",
           "finite-horizon classification; d_N compares only x_N with E_N x_N; "
           "an E-witness must lie strictly below the horizon"}};
}

inline json validation_to_json(const ValidationReport& r) {
  json laws = json::array();
  for (const auto& c : r.laws) {
    json w = c.witness ? json::array({c.witness->first, c.witness->second}) : json(nullptr);
    laws.push_back({{"law", c.law}, {"passed", c.passed}, {"worst", c.worst}, {"witness", w}});
  }
  return {{"ok", r.ok()}, {"tol", r.tol}, {"laws", laws}};
}

}  // namespace lattice_lab::io
