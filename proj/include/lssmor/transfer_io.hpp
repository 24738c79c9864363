#pragma once

#include "lssmor/io_util.hpp"
#include "lssmor/transfer.hpp"

namespace lssmor::io {

inline const char* kSampleHeader = "modes,points_re,points_im,value_re,value_im";

inline std::string samples_to_csv(const SampleSet& s) {
  std::string out = std::string(kSampleHeader) + "\n";
  for (const auto& [w, v] : s.values) {
    std::string modes, re, im;
    for (std::size_t i = 0; i < w.length(); ++i) {
      if (i) {
        modes += '-';
        re += ';';
        im += ';';
      }
      modes += std::to_string(w.modes[i]);
      re += fmt(w.points[i].real());
      im += fmt(w.points[i].imag());
    }
    out += modes + "," + re + "," + im + "," + fmt(v.real()) + "," + fmt(v.imag()) + "\n";
  }
  return out;
}

inline SampleSet samples_from_csv(const std::string& text) {
  SampleSet s;
  s.source = "external";
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kSampleHeader) throw ParseError("expected header '" + std::string(kSampleHeader) + "'", lineno);
      header_seen = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 5) throw ParseError("expected 5 columns, found " + std::to_string(cols.size()), lineno);
    const auto ms = split(cols[0], '-');
    const auto re = split(cols[1], ';');
    const auto im = split(cols[2], ';');
    if (ms.size() != re.size() || ms.size() != im.size())
      throw ParseError("mode and point lists differ in length", lineno);
    Word w;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const double q = parse_double(ms[i], lineno);
      if (q != std::floor(q) || q < 1) throw ParseError("bad mode '" + ms[i] + "'", lineno);
      w.modes.push_back(static_cast<Mode>(q));
      w.points.emplace_back(parse_double(re[i], lineno), parse_double(im[i], lineno));
    }
    const Complex v(parse_double(cols[3], lineno), parse_double(cols[4], lineno));
    if (!s.values.emplace(std::move(w), v).second) throw ParseError("duplicate word", lineno);
  }
  if (!header_seen) throw ParseError("empty sample file");
  return s;
}

}  // namespace lssmor::io
