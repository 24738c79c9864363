#pragma once

#include "lssmor/io_util.hpp"
#include "lssmor/model.hpp"

namespace lssmor::io {

inline Json model_to_json(const LssModel& model) {
  Json j;
  j["D"] = model.num_modes();
  j["m"] = model.inputs();
  j["p"] = model.outputs();
  j["modes"] = Json::array();
  for (const auto& md : model.modes()) {
    Json jm;
    jm["E"] = matrix_to_json(md.E);
    jm["A"] = matrix_to_json(md.A);
    jm["B"] = matrix_to_json(md.B);
    jm["C"] = matrix_to_json(md.C);
    j["modes"].push_back(std::move(jm));
  }
  j["couplings"] = Json::array();
  for (const auto& [key, k] : model.stored_couplings())
    j["couplings"].push_back(Json{{"from", key.from}, {"to", key.to}, {"K", matrix_to_json(k)}});
  return j;
}

/// Parses the model JSON format; `E` defaults to the identity when omitted.
inline LssModel model_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("model: top level must be an object");
  if (!j.contains("modes") || !j["modes"].is_array()) throw ParseError("model: missing 'modes' array");
  std::vector<ModeMatrices<double>> modes;
  int idx = 0;
  for (const auto& jm : j["modes"]) {
    ++idx;
    const std::string where = "model.modes[" + std::to_string(idx) + "]";
    for (const char* key : {"A", "B", "C"})
      if (!jm.contains(key)) throw ParseError(where + ": missing '" + key + "'");
    ModeMatrices<double> md;
    md.A = matrix_from_json(jm["A"], where + ".A");
    md.B = matrix_from_json(jm["B"], where + ".B");
    md.C = matrix_from_json(jm["C"], where + ".C");
    md.E = jm.contains("E") ? matrix_from_json(jm["E"], where + ".E") : MatrixXd::Identity(md.A.rows(), md.A.rows());
    modes.push_back(std::move(md));
  }
  if (j.contains("D") && j["D"].get<int>() != static_cast<int>(modes.size()))
    throw ParseError("model: 'D' disagrees with the number of modes");
  LssModel::Couplings ks;
  if (j.contains("couplings")) {
    for (const auto& jc : j["couplings"]) {
      if (!jc.contains("from") || !jc.contains("to") || !jc.contains("K"))
        throw ParseError("model.couplings: entries need 'from', 'to' and 'K'");
      const Switch key{jc["from"].get<int>(), jc["to"].get<int>()};
      if (ks.count(key)) throw ParseError("model.couplings: duplicate coupling");
      ks[key] = matrix_from_json(jc["K"], "model.couplings");
    }
  }
  const int m = j.contains("m") ? j["m"].get<int>() : (modes.empty() ? 0 : static_cast<int>(modes[0].B.cols()));
  const int p = j.contains("p") ? j["p"].get<int>() : (modes.empty() ? 0 : static_cast<int>(modes[0].C.rows()));
  return LssModel(std::move(modes), std::move(ks), m, p);
}

inline LssModel load_model(const std::filesystem::path& path) {
  return model_from_json(parse_json(read_file(path), path.string()));
}

inline void save_model(const std::filesystem::path& path, const LssModel& model) {
  write_file_atomic(path, dump(model_to_json(model)) + "\n");
}

}  // namespace lssmor::io
