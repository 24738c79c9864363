#pragma once

#include "lssmor/io_util.hpp"
#include "lssmor/reduction.hpp"

namespace lssmor::io {

inline Json loewner_data_to_json(const LoewnerData& data) {
  Json j;
  j["realified"] = data.realified;
  j["modes"] = Json::array();
  for (Mode q = 1; q <= data.num_modes(); ++q)
    j["modes"].push_back(Json{{"mode", q},
                              {"loewner", matrix_to_json(data.L(q))},
                              {"shifted_loewner", matrix_to_json(data.Ls(q))},
                              {"input", matrix_to_json(data.V(q))},
                              {"output", matrix_to_json(data.W(q))}});
  j["coupling"] = Json::array();
  for (const auto& [key, xi] : data.coupling_data)
    j["coupling"].push_back(Json{{"from", key.first}, {"to", key.second}, {"data", matrix_to_json(xi)}});
  return j;
}

inline Json report_to_json(const ReductionReport& rep) {
  Json j;
  j["method"] = "loewner";
  j["tol"] = rep.tol;
  j["realified"] = rep.realified;
  j["max_imag_discarded"] = rep.max_imag_discarded;
  j["modes"] = Json::array();
  for (const auto& m : rep.modes) {
    Json sv = Json::array();
    for (Eigen::Index i = 0; i < m.singular_values.size(); ++i) sv.push_back(m.singular_values[i]);
    j["modes"].push_back(
        Json{{"mode", m.mode}, {"rank", m.rank}, {"largest_neglected", m.largest_neglected}, {"singular_values", sv}});
  }
  return j;
}

inline std::string singular_values_to_csv(const ReductionReport& rep) {
  std::string out = "mode,index,sigma,sigma_rel\n";
  for (const auto& m : rep.modes) {
    const double top = m.singular_values.size() ? m.singular_values[0] : 0.0;
    for (Eigen::Index i = 0; i < m.singular_values.size(); ++i)
      out += std::to_string(m.mode) + "," + std::to_string(i + 1) + "," + fmt(m.singular_values[i]) + "," +
             fmt(top > 0 ? m.singular_values[i] / top : 0.0) + "\n";
  }
  return out;
}

}  // namespace lssmor::io
