#pragma once

#include "lssmor/lssmor.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace lssmor::cli {

struct PointGenerator {
  int count = 0;  // points per side
  std::string range = "0.1:100";
  std::string spacing = "log";
  std::string axis = "imag";
  bool conjugate = false;
  int depth = 1;
};

inline std::pair<double, double> parse_range(const std::string& text) {
  const auto parts = io::split(text, ':');
  if (parts.size() != 2) throw ConfigError("range must look like lo:hi");
  try {
    return {io::parse_double(parts[0]), io::parse_double(parts[1])};
  } catch (const ParseError&) {
    throw ConfigError("malformed range '" + text + "'");
  }
}

/// Interleaves one generated grid between the right and left sides. For
/// two modes the words are grouped with `depth` levels per group; with
/// `conjugate` each group is followed by its mirror image.
inline io::TupleSpec generate_spec(const PointGenerator& g, int num_modes) {
  if (g.count < 1) throw ConfigError("no interpolation points");
  if (g.depth < 1) throw ConfigError("depth must be positive");
  const auto [lo, hi] = parse_range(g.range);
  const Spacing spacing = g.spacing == "linear" ? Spacing::linear : Spacing::logarithmic;
  if (g.spacing != "linear" && g.spacing != "log") throw ConfigError("spacing must be log or linear");
  if (g.axis != "real" && g.axis != "imag") throw ConfigError("axis must be real or imag");
  const Axis axis = g.axis == "real" ? Axis::real : Axis::imaginary;
  if (g.conjugate && axis == Axis::real) throw ConfigError("conjugate closure is automatic on the real axis");

  io::TupleSpec spec;
  if (num_modes == 2) {
    const int per_group = 2 * g.depth * (g.conjugate ? 2 : 1);
    if (g.count % per_group)
      throw ConfigError("point count must be a multiple of " + std::to_string(per_group) + " for this layout");
    const int base = g.conjugate ? g.count / 2 : g.count;
    const auto grid = generate_points(2 * base, lo, hi, spacing, axis);
    std::vector<Complex> right, left;
    for (std::size_t i = 0; i < grid.size(); ++i) (i % 2 ? left : right).push_back(grid[i]);
    auto expand = [&](const std::vector<Complex>& pts) {
      if (!g.conjugate) return pts;
      std::vector<Complex> out;
      const std::size_t gs = 2 * static_cast<std::size_t>(g.depth);
      for (std::size_t s = 0; s < pts.size(); s += gs) {
        for (std::size_t i = s; i < s + gs; ++i) out.push_back(pts[i]);
        for (std::size_t i = s; i < s + gs; ++i) out.push_back(std::conj(pts[i]));
      }
      return out;
    };
    spec.right = expand(right);
    spec.left = expand(left);
    spec.kind = io::LayoutKind::two_mode;
    spec.right_groups = spec.left_groups = std::vector<int>(static_cast<std::size_t>(g.count / (2 * g.depth)), g.depth);
  } else {
    if (g.conjugate) throw ConfigError("conjugate-closed generation needs the two-mode layout");
    if (g.count != num_modes * g.depth)
      throw ConfigError("cyclic layout needs exactly modes*depth = " + std::to_string(num_modes * g.depth) + " points");
    const auto grid = generate_points(2 * g.count, lo, hi, spacing, axis);
    for (std::size_t i = 0; i < grid.size(); ++i) (i % 2 ? spec.left : spec.right).push_back(grid[i]);
    spec.kind = io::LayoutKind::cyclic;
    spec.depth = g.depth;
    spec.modes = num_modes;
  }
  return spec;
}

inline std::map<Mode, int> parse_ranks(const std::string& text, int num_modes) {
  std::map<Mode, int> out;
  if (text.empty()) return out;
  try {
    if (text.find('=') == std::string::npos) {
      const int r = static_cast<int>(io::parse_double(text));
      for (Mode q = 1; q <= num_modes; ++q) out[q] = r;
      return out;
    }
    for (const auto& part : io::split(text, ',')) {
      const auto kv = io::split(part, '=');
      if (kv.size() != 2) throw ConfigError("rank overrides must look like q=r,...");
      const Mode q = static_cast<Mode>(io::parse_double(kv[0]));
      if (q < 1 || q > num_modes) throw ConfigError("rank override for unknown mode " + kv[0]);
      out[q] = static_cast<int>(io::parse_double(kv[1]));
    }
  } catch (const ParseError&) {
    throw ConfigError("malformed rank list '" + text + "'");
  }
  return out;
}

inline std::vector<double> parse_omega(const std::string& text) {
  const auto parts = io::split(text, ':');
  if (parts.size() != 3) throw ConfigError("omega grid must look like lo:hi:count");
  try {
    return log_grid(io::parse_double(parts[0]), io::parse_double(parts[1]),
                    static_cast<int>(io::parse_double(parts[2])));
  } catch (const ParseError&) {
    throw ConfigError("malformed omega grid '" + text + "'");
  }
}

inline void check_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
}

struct Options {
  std::string model, tuples, samples, out = ".", method = "loewner", ranks, signal, input = "zero",
                                      omega = "0.01:100:200";
  std::vector<std::string> candidates;
  double tol = 1e-12;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  bool exact = false;
  int modes = 0;
  PointGenerator gen;
};

inline io::TupleSpec resolve_spec(const Options& o, int num_modes) {
  if (!o.tuples.empty()) return io::load_tuple_spec(o.tuples);
  if (o.gen.count > 0) return generate_spec(o.gen, num_modes);
  throw ConfigError("no interpolation points (give --tuples or --points)");
}

inline void write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  io::write_file_atomic(dir / name, text);
}

inline int cmd_validate(const Options& o, std::ostream& out) {
  const LssModel model = io::load_model(o.model);
  const auto violations = validate(model);
  io::Json j;
  j["valid"] = violations.empty();
  j["violations"] = io::Json::array();
  for (const auto& v : violations) j["violations"].push_back({{"where", v.location}, {"message", v.message}});
  out << io::dump(j) << "\n";
  if (!violations.empty()) throw InvalidModel(violations.front().location + ": " + violations.front().message);
  return 0;
}

inline int cmd_sample(const Options& o, std::ostream& out) {
  const LssModel model = io::load_model(o.model);
  require_valid(model);
  const auto spec = resolve_spec(o, model.num_modes());
  const TupleSets t = io::build_tuples(spec, model.num_modes());
  const SampleSet s = sample_for_loewner(model, t, model_hash(io::dump(io::model_to_json(model), -1)));
  write_text(o.out, "samples.csv", io::samples_to_csv(s));
  write_text(o.out, "tuples.json", io::dump(io::tuple_spec_to_json(spec)) + "\n");
  out << io::dump(io::Json{{"samples", s.size()}, {"source", s.source}}) << "\n";
  return 0;
}

inline int cmd_reduce(const Options& o, std::ostream& out) {
  check_tol(o.tol);
  const std::filesystem::path dir = o.out;
  if (o.method == "bt") {
    const LssModel model = io::load_model(o.model);
    const auto ranks = parse_ranks(o.ranks, model.num_modes());
    if (ranks.empty()) throw ConfigError("balanced truncation needs --rank");
    int r = ranks.begin()->second;
    for (const auto& [q, rq] : ranks)
      if (rq != r) throw ConfigError("balanced truncation uses one order for all modes");
    const BtResult res = bt_reduce(model, r);
    io::save_model(dir / "reduced.json", res.model);
    io::Json rep{{"method", "bt"}, {"requested_order", r}, {"order", res.rank_used}, {"rank_capped", res.rank_capped}};
    rep["hankel_singular_values"] = io::Json::array();
    for (Eigen::Index i = 0; i < res.hankel.size(); ++i) rep["hankel_singular_values"].push_back(res.hankel[i]);
    write_text(dir, "report.json", io::dump(rep) + "\n");
    std::string csv = "index,sigma\n";
    for (Eigen::Index i = 0; i < res.hankel.size(); ++i)
      csv += std::to_string(i + 1) + "," + io::fmt(res.hankel[i]) + "\n";
    write_text(dir, "singular_values.csv", csv);
    out << io::dump(rep) << "\n";
    return 0;
  }
  if (o.method != "loewner") throw ConfigError("method must be loewner or bt");

  LoewnerData data;
  if (!o.samples.empty()) {
    const SampleSet s = io::samples_from_csv(io::read_file(o.samples));
    if (o.tuples.empty()) throw ConfigError("reducing from samples needs --tuples");
    const auto spec = io::load_tuple_spec(o.tuples);
    int d = o.modes ? o.modes : (spec.kind == io::LayoutKind::two_mode ? 2 : spec.modes);
    data = from_samples(s, io::build_tuples(spec, d));
  } else {
    const LssModel model = io::load_model(o.model);
    require_valid(model);
    const auto spec = resolve_spec(o, model.num_modes());
    data = from_state(model, io::build_tuples(spec, model.num_modes()));
  }

  double discarded = 0.0;
  if (data.max_abs_imag() > 0.0 && is_conjugate_closed(data.tuples)) {
    Realified rd = realify(data);
    discarded = rd.max_imag;
    data = std::move(rd.data);
  }
  Reduction red;
  if (o.exact) {
    red.model = exact_realization(data);
    red.report.tol = o.tol;
    red.report.realified = data.realified;
    for (Mode q = 1; q <= data.num_modes(); ++q) {
      Eigen::JacobiSVD<MatrixXcd> svd(data.L(q));
      red.report.modes.push_back({q, svd.singularValues(), static_cast<int>(data.L(q).rows()), 0.0});
    }
  } else {
    TruncationOptions topt;
    topt.tol = o.tol;
    topt.ranks = parse_ranks(o.ranks, data.num_modes());
    red = svd_truncate(data, topt);
  }
  red.report.max_imag_discarded = discarded;
  if (max_abs_imag(red.model) > 1e-12)
    throw DegenerateData("reduced model is complex; use conjugate-closed interpolation points");
  io::save_model(dir / "reduced.json", to_real(red.model));
  io::Json rep = io::report_to_json(red.report);
  rep["exact"] = o.exact;
  write_text(dir, "report.json", io::dump(rep) + "\n");
  write_text(dir, "singular_values.csv", io::singular_values_to_csv(red.report));
  write_text(dir, "loewner_data.json", io::dump(io::loewner_data_to_json(data)) + "\n");
  io::Json summary{{"method", "loewner"}, {"realified", data.realified}};
  summary["ranks"] = io::Json::array();
  for (const auto& m : red.report.modes) summary["ranks"].push_back(m.rank);
  out << io::dump(summary) << "\n";
  return 0;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  const LssModel model = io::load_model(o.model);
  require_valid(model);
  if (o.signal.empty()) throw ConfigError("simulate needs --signal");
  const auto signal = io::parse_signal(o.signal, model.num_modes(), o.seed);
  const Trajectory tr = simulate(model, signal, io::parse_input(o.input), SimOptions{o.dt});
  const std::filesystem::path dir = o.out;
  write_text(dir, "trajectory.csv", io::trajectory_to_csv(tr));
  const auto omegas = parse_omega(o.omega);
  for (Mode q = 1; q <= model.num_modes(); ++q)
    write_text(dir, "freq_mode" + std::to_string(q) + ".csv", io::freq_response_to_csv(freq_response(model, q, omegas)));
  out << io::dump(io::Json{{"samples", tr.t.size()}, {"horizon", signal.horizon()}}) << "\n";
  return 0;
}

inline int cmd_compare(const Options& o, std::ostream& out) {
  const LssModel ref = io::load_model(o.model);
  require_valid(ref);
  if (o.candidates.empty()) throw ConfigError("compare needs at least one --candidate");
  if (o.signal.empty()) throw ConfigError("compare needs --signal");
  const auto signal = io::parse_signal(o.signal, ref.num_modes(), o.seed);
  const auto input = io::parse_input(o.input);
  const auto omegas = parse_omega(o.omega);

  std::vector<std::string> labels;
  std::vector<Comparison> results;
  for (const auto& path : o.candidates) {
    const LssModel cand = io::load_model(path);
    require_valid(cand);
    labels.push_back(std::filesystem::path(path).stem().string());
    results.push_back(compare(ref, cand, signal, input, omegas, SimOptions{o.dt}));
  }

  std::string freq = "omega,mode,ref_re,ref_im";
  for (const auto& l : labels) freq += "," + l + "_re," + l + "_im," + l + "_rel_error";
  freq += "\n";
  for (std::size_t q = 0; q < results[0].freq.size(); ++q)
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const auto& f0 = results[0].freq[q];
      freq += io::fmt(omegas[i]) + "," + std::to_string(f0.mode) + "," + io::fmt(f0.reference[i].real()) + "," +
              io::fmt(f0.reference[i].imag());
      for (const auto& r : results)
        freq += "," + io::fmt(r.freq[q].candidate[i].real()) + "," + io::fmt(r.freq[q].candidate[i].imag()) + "," +
                io::fmt(r.freq[q].rel_error[i]);
      freq += "\n";
    }
  std::string time = "t,mode,y_ref";
  for (const auto& l : labels) time += ",y_" + l + ",abs_error_" + l + ",rel_error_" + l;
  time += "\n";
  const auto& t0 = results[0].time;
  for (std::size_t i = 0; i < t0.t.size(); ++i) {
    time += io::fmt(t0.t[i]) + "," + std::to_string(t0.mode[i]) + "," + io::fmt(t0.reference[i]);
    for (const auto& r : results)
      time += "," + io::fmt(r.time.candidate[i]) + "," + io::fmt(r.time.abs_error[i]) + "," + io::fmt(r.time.rel_error[i]);
    time += "\n";
  }
  io::Json summary = io::Json::object();
  for (std::size_t c = 0; c < results.size(); ++c) {
    const auto& r = results[c];
    summary[labels[c]] = {{"freq_rel_error", {{"max", r.freq_summary.max}, {"l2", r.freq_summary.l2}}},
                          {"time_abs_error", {{"max", r.time_abs_summary.max}, {"l2", r.time_abs_summary.l2}}},
                          {"time_rel_error", {{"max", r.time_rel_summary.max}, {"l2", r.time_rel_summary.l2}}}};
  }
  const std::filesystem::path dir = o.out;
  write_text(dir, "freq_error.csv", freq);
  write_text(dir, "time_error.csv", time);
  write_text(dir, "summary.json", io::dump(summary) + "\n");
  out << io::dump(summary) << "\n";
  return 0;
}

inline void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << io::dump(io::Json{{"error", code}, {"message", message}}, -1) << "\n";
}

/// Entry point shared by the executable and the tests. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Loewner-based model reduction for linear switched systems"};
  app.require_subcommand(1);
  Options o;

  auto add_points = [&](CLI::App* c) {
    c->add_option("--tuples", o.tuples, "tuple spec JSON");
    c->add_option("--points", o.gen.count, "generate this many points per side");
    c->add_option("--range", o.gen.range, "generator range lo:hi");
    c->add_option("--spacing", o.gen.spacing, "log or linear");
    c->add_option("--axis", o.gen.axis, "real or imag");
    c->add_flag("--conjugate", o.gen.conjugate, "add conjugate mirror groups");
    c->add_option("--depth", o.gen.depth, "levels per group (two-mode) or depth (cyclic)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a model file");
  validate_cmd->add_option("--model", o.model)->required();

  auto* sample_cmd = app.add_subcommand("sample", "sample transfer values for Loewner data");
  sample_cmd->add_option("--model", o.model)->required();
  sample_cmd->add_option("--out", o.out);
  add_points(sample_cmd);

  auto* reduce_cmd = app.add_subcommand("reduce", "build a reduced model");
  reduce_cmd->add_option("--model", o.model);
  reduce_cmd->add_option("--samples", o.samples, "sample CSV instead of a model");
  reduce_cmd->add_option("--modes", o.modes, "mode count when reducing from samples");
  reduce_cmd->add_option("--method", o.method, "loewner or bt");
  reduce_cmd->add_option("--tol", o.tol, "relative singular value cutoff");
  reduce_cmd->add_option("--rank", o.ranks, "q=r,... or a single order");
  reduce_cmd->add_flag("--exact", o.exact, "interpolating realization without truncation");
  reduce_cmd->add_option("--out", o.out);
  add_points(reduce_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "time and frequency response");
  sim_cmd->add_option("--model", o.model)->required();
  sim_cmd->add_option("--signal", o.signal, "q:dwell,... or random:horizon,count");
  sim_cmd->add_option("--input", o.input, "zero, step:A or sin:A,f");
  sim_cmd->add_option("--dt", o.dt, "maximum step");
  sim_cmd->add_option("--omega", o.omega, "lo:hi:count");
  sim_cmd->add_option("--seed", o.seed);
  sim_cmd->add_option("--out", o.out);

  auto* cmp_cmd = app.add_subcommand("compare", "compare reduced models against a reference");
  cmp_cmd->add_option("--model", o.model, "reference model")->required();
  cmp_cmd->add_option("--candidate", o.candidates, "reduced model (repeatable)");
  cmp_cmd->add_option("--signal", o.signal);
  cmp_cmd->add_option("--input", o.input);
  cmp_cmd->add_option("--dt", o.dt);
  cmp_cmd->add_option("--omega", o.omega);
  cmp_cmd->add_option("--seed", o.seed);
  cmp_cmd->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (sample_cmd->parsed()) return cmd_sample(o, out);
    if (reduce_cmd->parsed()) {
      if (o.model.empty() && o.samples.empty()) throw ConfigError("reduce needs --model or --samples");
      return cmd_reduce(o, out);
    }
    if (sim_cmd->parsed()) return cmd_simulate(o, out);
    if (cmp_cmd->parsed()) return cmd_compare(o, out);
  } catch (const ConfigError& e) {
    report_error(err, e.code(), e.what());
    return 2;
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error(err, "Error", e.what());
    return 1;
  }
  return 2;
}

}  // namespace lssmor::cli
