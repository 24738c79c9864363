#pragma once

#include "lssmor/common.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace lssmor::io {

using Json = nlohmann::ordered_json;

/// Locale-independent, 17 significant digits.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text, int line = 0) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
  if (b < e && *b == '+') ++b;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e || b == e) throw ParseError("not a number: '" + text + "'", line);
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Writes to a sibling temporary file and renames it over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("IoError", "cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error("IoError", "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("IoError", "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

/// JSON dump with numbers at 17 significant digits.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  const std::string pad(static_cast<std::size_t>(std::max(indent, 0)), ' ');
  auto rec = [&](auto&& self, const Json& v, int depth) -> void {
    auto newline = [&](int dd) {
      if (indent < 0) return;
      out += '\n';
      for (int i = 0; i < dd; ++i) out += pad;
    };
    auto is_numeric_row = [](const Json& a) {
      return a.is_array() && std::all_of(a.begin(), a.end(), [](const Json& y) { return y.is_number(); });
    };
    switch (v.type()) {
      case Json::value_t::number_float:
        out += fmt(v.get<double>());
        break;
      case Json::value_t::array: {
        if (v.empty()) {
          out += "[]";
          break;
        }
        const bool compact = std::all_of(v.begin(), v.end(), [&](const Json& x) {
          return x.is_number() || is_numeric_row(x);
        });
        out += '[';
        bool first = true;
        for (const auto& x : v) {
          if (!first) out += compact ? ", " : ",";
          first = false;
          if (!compact) newline(depth + 1);
          self(self, x, depth + 1);
        }
        if (!compact) newline(depth);
        out += ']';
        break;
      }
      case Json::value_t::object: {
        if (v.empty()) {
          out += "{}";
          break;
        }
        out += '{';
        bool first = true;
        for (const auto& [k, x] : v.items()) {
          if (!first) out += ',';
          first = false;
          newline(depth + 1);
          out += Json(k).dump();
          out += indent < 0 ? ":" : ": ";
          self(self, x, depth + 1);
        }
        newline(depth);
        out += '}';
        break;
      }
      default:
        out += v.dump();
    }
  };
  rec(rec, j, 0);
  return out;
}

template <typename Derived>
Json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex)
        row.push_back(Json::array({std::real(m(i, j)), std::imag(m(i, j))}));
      else
        row.push_back(static_cast<double>(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double json_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline Complex json_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [re, im]");
  return {json_number(j[0], where), json_number(j[1], where)};
}

inline MatrixXd matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : 0;
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError(where + ": ragged or malformed row " + std::to_string(i + 1));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = json_number(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline MatrixXcd complex_matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : 0;
  MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError(where + ": ragged or malformed row " + std::to_string(i + 1));
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = json_complex(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

}  // namespace lssmor::io
