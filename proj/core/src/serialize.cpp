#include "qcorr/serialize.hpp"

#include <nlohmann/json.hpp>

namespace qcorr {

namespace {

using nlohmann::json;

json label_json(const ModeLabel& l) {
  json j;
  j["path"] = to_string(l.path);
  if (l.polarization) j["polarization"] = to_string(*l.polarization);
  if (l.frequency_bin) j["frequency_bin"] = *l.frequency_bin;
  j["species"] = to_string(l.species);
  return j;
}

json registry_json(const ModeRegistry& reg) {
  json modes = json::array();
  for (const auto& m : reg.modes()) modes.push_back(label_json(m.label));
  json j;
  j["modes"] = std::move(modes);
  j["max_excitations"] = reg.max_excitations();
  return j;
}

json occ_json(const FockBasisState& s) {
  json j = json::array();
  for (auto n : s.occ) j.push_back(static_cast<int>(n));
  return j;
}

json cplx_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string to_debug_json(const FockKet& ket, int indent) {
  json j;
  j["registry"] = registry_json(*ket.registry());
  json terms = json::array();
  for (const auto& [s, a] : ket.amplitudes()) {
    json t;
    t["occ"] = occ_json(s);
    t["amplitude"] = cplx_json(a);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  j["norm"] = ket.norm();
  return j.dump(indent);
}

std::string to_debug_json(const DensityOperator& rho, int indent) {
  json j;
  j["registry"] = registry_json(*rho.registry());
  json basis = json::array();
  for (const auto& s : rho.basis()) basis.push_back(occ_json(s));
  j["basis"] = std::move(basis);
  json rows = json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cplx_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  j["trace"] = rho.trace();
  return j.dump(indent);
}

}  // namespace qcorr
