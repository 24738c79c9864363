#pragma once

#include "lssmor/io_util.hpp"
#include "lssmor/tuples.hpp"

namespace lssmor::io {

enum class LayoutKind { two_mode, cyclic };

/// Point lists plus the layout used to nest them into words.
struct TupleSpec {
  std::vector<Complex> right, left;
  LayoutKind kind = LayoutKind::two_mode;
  std::vector<int> right_groups, left_groups;  // two-mode layout
  int depth = 1;                               // cyclic layout
  int modes = 0;                               // cyclic layout; 0 means "take from the model"
};

inline TupleSets build_tuples(const TupleSpec& spec, int model_modes) {
  if (spec.right.empty() || spec.left.empty()) throw ConfigError("no interpolation points");
  if (spec.kind == LayoutKind::two_mode) {
    if (model_modes != 0 && model_modes != 2) throw ConfigError("two-mode layout used with a model of " +
                                                                std::to_string(model_modes) + " modes");
    return build_two_mode(spec.right, spec.left, spec.right_groups, spec.left_groups);
  }
  const int d = spec.modes ? spec.modes : model_modes;
  if (d < 1) throw ConfigError("cyclic layout needs a mode count");
  if (model_modes != 0 && d != model_modes) throw ConfigError("tuple spec and model disagree on mode count");
  return build_cyclic(d, spec.right, spec.left, spec.depth);
}

inline Json points_to_json(const std::vector<Complex>& pts) {
  Json a = Json::array();
  for (Complex p : pts) a.push_back(Json::array({p.real(), p.imag()}));
  return a;
}

inline Json tuple_spec_to_json(const TupleSpec& spec) {
  Json j;
  j["right"] = points_to_json(spec.right);
  j["left"] = points_to_json(spec.left);
  Json layout;
  if (spec.kind == LayoutKind::two_mode) {
    layout["kind"] = "two-mode";
    if (spec.right_groups == spec.left_groups) {
      layout["groups"] = spec.right_groups;
    } else {
      layout["right_groups"] = spec.right_groups;
      layout["left_groups"] = spec.left_groups;
    }
  } else {
    layout["kind"] = "cyclic";
    layout["depth"] = spec.depth;
    if (spec.modes) layout["modes"] = spec.modes;
  }
  j["layout"] = layout;
  return j;
}

inline TupleSpec tuple_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("tuple spec: top level must be an object");
  TupleSpec spec;
  auto points = [&](const char* key) {
    std::vector<Complex> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ParseError(std::string("tuple spec: '") + key + "' must be an array");
    for (const auto& p : j[key]) out.push_back(json_complex(p, std::string("tuple spec.") + key));
    return out;
  };
  spec.right = points("right");
  spec.left = points("left");
  const Json layout = j.value("layout", Json::object());
  const std::string kind = layout.value("kind", std::string("two-mode"));
  auto ints = [&](const char* key) {
    std::vector<int> out;
    if (!layout[key].is_array()) throw ParseError(std::string("tuple spec: layout.") + key + " must be an array");
    for (const auto& g : layout[key]) out.push_back(g.get<int>());
    return out;
  };
  if (kind == "two-mode") {
    spec.kind = LayoutKind::two_mode;
    if (layout.contains("groups")) spec.right_groups = spec.left_groups = ints("groups");
    if (layout.contains("right_groups")) spec.right_groups = ints("right_groups");
    if (layout.contains("left_groups")) spec.left_groups = ints("left_groups");
    if (spec.right_groups.empty() && !spec.right.empty()) {
      if (spec.right.size() % 2) throw ParseError("tuple spec: odd number of right points for a single group");
      spec.right_groups = {static_cast<int>(spec.right.size() / 2)};
    }
    if (spec.left_groups.empty() && !spec.left.empty()) {
      if (spec.left.size() % 2) throw ParseError("tuple spec: odd number of left points for a single group");
      spec.left_groups = {static_cast<int>(spec.left.size() / 2)};
    }
  } else if (kind == "cyclic") {
    spec.kind = LayoutKind::cyclic;
    spec.depth = layout.value("depth", 1);
    spec.modes = layout.value("modes", 0);
  } else {
    throw ParseError("tuple spec: unknown layout kind '" + kind + "'");
  }
  return spec;
}

inline TupleSpec load_tuple_spec(const std::filesystem::path& path) {
  return tuple_spec_from_json(parse_json(read_file(path), path.string()));
}

}  // namespace lssmor::io
