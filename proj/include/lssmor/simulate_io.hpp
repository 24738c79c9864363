#pragma once

#include "lssmor/io_util.hpp"
#include "lssmor/simulate.hpp"

namespace lssmor::io {

/// "zero", "step:A" or "sin:A,f" (A sin(2 pi f t)).
inline InputFunction parse_input(const std::string& text) {
  if (text == "zero") return inputs::zero();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("unknown input '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  try {
    if (kind == "step" && args.size() == 1) return inputs::step(parse_double(args[0]));
    if (kind == "sin" && args.size() == 2) return inputs::sine(parse_double(args[0]), parse_double(args[1]));
  } catch (const ParseError&) {
    throw ConfigError("malformed input '" + text + "'");
  }
  throw ConfigError("unknown input '" + text + "'");
}

/// "q:dwell,q:dwell,..." or "random:horizon,count" (uses `seed`).
inline SwitchingSignal parse_signal(const std::string& text, int num_modes, std::uint64_t seed) {
  if (text.rfind("random:", 0) == 0) {
    const auto args = split(text.substr(7), ',');
    if (args.size() != 2) throw ConfigError("random signal needs 'random:horizon,count'");
    try {
      return SwitchingSignal::random(num_modes, parse_double(args[0]), static_cast<int>(parse_double(args[1])), seed);
    } catch (const ParseError&) {
      throw ConfigError("malformed signal '" + text + "'");
    }
  }
  SwitchingSignal s;
  for (const auto& part : split(text, ',')) {
    const auto kv = split(part, ':');
    if (kv.size() != 2) throw ConfigError("signal segments must look like mode:dwell");
    try {
      s.segments.emplace_back(static_cast<Mode>(parse_double(kv[0])), parse_double(kv[1]));
    } catch (const ParseError&) {
      throw ConfigError("malformed signal '" + text + "'");
    }
  }
  s.validate(num_modes);
  return s;
}

inline std::string trajectory_to_csv(const Trajectory& tr) {
  std::string out = "t,y,mode\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    out += fmt(tr.t[i]) + "," + fmt(tr.y(static_cast<Eigen::Index>(i), 0)) + "," + std::to_string(tr.mode[i]) + "\n";
  return out;
}

inline std::string freq_response_to_csv(const FreqResponse& fr) {
  std::string out = "omega,re,im,mag\n";
  for (std::size_t i = 0; i < fr.omega.size(); ++i)
    out += fmt(fr.omega[i]) + "," + fmt(fr.values[i].real()) + "," + fmt(fr.values[i].imag()) + "," +
           fmt(std::abs(fr.values[i])) + "\n";
  return out;
}

}  // namespace lssmor::io
