#include "linres/serialize.hpp"

namespace linres {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  // Row-major flat list; dimensions travel alongside.
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) rows.push_back(m(i, j));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j, const char* field) {
  if (!j.is_array()) {
    throw std::invalid_argument(std::string("reservoir json: '") + field +
                                "' must be an array");
  }
  Vector v(j.size());
  Index i = 0;
  for (const auto& x : j) {
    if (!x.is_number()) {
      throw std::invalid_argument(std::string("reservoir json: '") + field +
                                  "' must contain only numbers");
    }
    v[i++] = x.get<double>();
  }
  return v;
}

}  // namespace

nlohmann::json to_json(const Reservoir& r) {
  json j;
  j["kind"] = to_string(r.spec.kind);
  j["n"] = r.spec.n;
  j["rho"] = r.spec.rho;
  j["seed"] = r.spec.seed;
  j["input_seed"] = r.spec.input_seed;
  j["rescale_mode"] = to_string(r.spec.rescale_mode);
  j["W"] = matrix_to_json(r.W);
  j["w"] = vector_to_json(r.w);
  return j;
}

Reservoir reservoir_from_json(const nlohmann::json& j) {
  for (const char* field :
       {"kind", "n", "rho", "seed", "input_seed", "rescale_mode", "W", "w"}) {
    if (!j.contains(field)) {
      throw std::invalid_argument(std::string("reservoir json: missing '") +
                                  field + "'");
    }
  }
  Reservoir r;
  r.spec.kind = topology_kind_from_string(j.at("kind").get<std::string>());
  r.spec.n = j.at("n").get<int>();
  r.spec.rho = j.at("rho").get<double>();
  r.spec.seed = j.at("seed").get<std::uint64_t>();
  r.spec.input_seed = j.at("input_seed").get<std::uint64_t>();
  r.spec.rescale_mode =
      rescale_mode_from_string(j.at("rescale_mode").get<std::string>());

  if (r.spec.n < 2) {
    throw std::invalid_argument("reservoir json: n must be >= 2");
  }
  const Index n = r.spec.n;
  const Vector flat = vector_from_json(j.at("W"), "W");
  if (flat.size() != n * n) {
    throw std::invalid_argument(
        "reservoir json: W entry count does not equal n*n");
  }
  r.W.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index jj = 0; jj < n; ++jj) r.W(i, jj) = flat[i * n + jj];
  }
  r.w = vector_from_json(j.at("w"), "w");
  if (r.w.size() != n) {
    throw std::invalid_argument("reservoir json: w length does not equal n");
  }
  if (!all_finite(r.W) || !r.w.allFinite()) {
    throw std::invalid_argument("reservoir json: non-finite entries");
  }
  return r;
}

nlohmann::json to_json(const EncodedInput& e) {
  json j;
  j["s"] = vector_to_json(e.s);
  j["horizon"] = e.horizon;
  j["tail_estimate"] = e.tail_estimate;
  return j;
}

nlohmann::json to_json(const ControllabilityReport& rep) {
  json j;
  j["n"] = rep.C.cols();
  j["rank"] = rep.rank;
  j["rank_tolerance"] = rep.rank_tolerance;
  j["singular_values"] = vector_to_json(rep.singular_values);
  j["column_norms"] = vector_to_json(rep.column_norms);
  j["nullspace_dim"] = rep.nullspace.cols();
  j["nullspace"] = matrix_to_json(rep.nullspace);
  j["trailing_energy_fraction"] = kTrailingEnergyFraction;
  return j;
}

}  // namespace linres
