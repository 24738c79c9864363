#pragma once

#include "lssmor/common.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <optional>

namespace lssmor {

/// A mode sequence paired with one interpolation point per position.
struct Word {
  std::vector<Mode> modes;
  std::vector<Complex> points;

  std::size_t length() const { return modes.size(); }
  Mode first_mode() const { return modes.front(); }
  Mode last_mode() const { return modes.back(); }
  Complex first_point() const { return points.front(); }
  Complex last_point() const { return points.back(); }

  Word concat(const Word& tail) const {
    Word w = *this;
    w.modes.insert(w.modes.end(), tail.modes.begin(), tail.modes.end());
    w.points.insert(w.points.end(), tail.points.begin(), tail.points.end());
    return w;
  }
  Word drop_first() const { return {{modes.begin() + 1, modes.end()}, {points.begin() + 1, points.end()}}; }
  Word drop_last() const { return {{modes.begin(), modes.end() - 1}, {points.begin(), points.end() - 1}}; }
  Word conj() const {
    Word w = *this;
    for (auto& p : w.points) p = std::conj(p);
    return w;
  }
  bool is_real() const {
    return std::all_of(points.begin(), points.end(), [](Complex p) { return p.imag() == 0.0; });
  }

  bool operator==(const Word& o) const { return modes == o.modes && points == o.points; }
  bool operator<(const Word& o) const {
    if (modes != o.modes) return modes < o.modes;
    return std::lexicographical_compare(points.begin(), points.end(), o.points.begin(), o.points.end(),
                                        [](Complex a, Complex b) {
                                          return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
                                        });
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < modes.size(); ++i) s += (i ? "," : "") + std::to_string(modes[i]);
    s += ";";
    for (std::size_t i = 0; i < points.size(); ++i) s += (i ? "," : "") + format_complex(points[i]);
    return s + ")";
  }
};

enum class Side { right, left };

/// Words grouped by mode. Right words are filed under their first mode,
/// left words under their last mode; order within a mode is significant.
template <Side S>
struct WordSet {
  std::vector<std::vector<Word>> by_mode;

  WordSet() = default;
  explicit WordSet(int num_modes) : by_mode(static_cast<std::size_t>(num_modes)) {}

  int num_modes() const { return static_cast<int>(by_mode.size()); }
  const std::vector<Word>& operator()(Mode q) const { return by_mode.at(static_cast<std::size_t>(q - 1)); }
  std::vector<Word>& operator()(Mode q) { return by_mode.at(static_cast<std::size_t>(q - 1)); }
  int count(Mode q) const { return static_cast<int>((*this)(q).size()); }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& v : by_mode) n += v.size();
    return n;
  }
  /// Files `w` under its anchoring mode.
  void add(Word w) {
    const Mode q = S == Side::right ? w.first_mode() : w.last_mode();
    (*this)(q).push_back(std::move(w));
  }
};

using RightWords = WordSet<Side::right>;
using LeftWords = WordSet<Side::left>;

struct TupleSets {
  RightWords right;
  LeftWords left;
  int num_modes() const { return right.num_modes(); }
};

inline std::vector<Complex> all_points(const TupleSets& t, Side side) {
  std::vector<Complex> out;
  auto collect = [&](const auto& set) {
    for (const auto& ws : set.by_mode)
      for (const auto& w : ws) out.insert(out.end(), w.points.begin(), w.points.end());
  };
  side == Side::right ? collect(t.right) : collect(t.left);
  return out;
}

/// Structural checks shared by all builders and by hand-assembled sets:
/// well-formed words, no repeated consecutive modes, the prefix/suffix
/// closure property, and disjoint left/right point sets.
inline void check_tuples(const TupleSets& t) {
  const int d = t.right.num_modes();
  if (d < 1 || t.left.num_modes() != d) throw InvalidTuples("left and right sets need the same positive mode count");
  auto wellformed = [&](const Word& w, Mode anchor, bool right) {
    if (w.modes.empty() || w.modes.size() != w.points.size())
      throw InvalidTuples("malformed word " + w.str());
    for (Mode q : w.modes)
      if (q < 1 || q > d) throw InvalidTuples("mode out of range in word " + w.str());
    for (std::size_t i = 1; i < w.modes.size(); ++i)
      if (w.modes[i] == w.modes[i - 1]) throw InvalidTuples("repeated consecutive mode in word " + w.str());
    if ((right ? w.first_mode() : w.last_mode()) != anchor) throw InvalidTuples("word filed under wrong mode: " + w.str());
  };
  auto contains = [](const std::vector<Word>& ws, const Word& w) { return std::find(ws.begin(), ws.end(), w) != ws.end(); };
  for (Mode q = 1; q <= d; ++q) {
    for (const auto& w : t.right(q)) {
      wellformed(w, q, true);
      if (w.length() > 1) {
        const Word tail = w.drop_first();
        if (!contains(t.right(tail.first_mode()), tail)) throw InvalidTuples("right set not prefix-closed at " + w.str());
      }
    }
    for (const auto& w : t.left(q)) {
      wellformed(w, q, false);
      if (w.length() > 1) {
        const Word head = w.drop_last();
        if (!contains(t.left(head.last_mode()), head)) throw InvalidTuples("left set not suffix-closed at " + w.str());
      }
    }
  }
  const auto rp = all_points(t, Side::right);
  const auto lp = all_points(t, Side::left);
  for (Complex l : lp)
    for (Complex r : rp)
      if (l == r) throw CoincidentPoints(l, r);
}

/// Two-mode nested layout. Each right group of size m consumes 2m
/// consecutive right points; the i-th level of mode 1 starts with an odd
/// point and continues with the previous level of mode 2, and vice versa.
/// Left groups mirror this with words growing at the end.
inline TupleSets build_two_mode(const std::vector<Complex>& right_points, const std::vector<Complex>& left_points,
                                const std::vector<int>& right_groups, const std::vector<int>& left_groups) {
  auto consumed = [](const std::vector<int>& groups) {
    std::size_t n = 0;
    for (int g : groups) {
      if (g < 1) throw InvalidTuples("group sizes must be positive");
      n += 2 * static_cast<std::size_t>(g);
    }
    return n;
  };
  if (consumed(right_groups) != right_points.size())
    throw CountMismatch("right points: expected " + std::to_string(consumed(right_groups)) + ", got " +
                        std::to_string(right_points.size()));
  if (consumed(left_groups) != left_points.size())
    throw CountMismatch("left points: expected " + std::to_string(consumed(left_groups)) + ", got " +
                        std::to_string(left_points.size()));

  TupleSets t{RightWords(2), LeftWords(2)};
  std::size_t offset = 0;
  for (int m : right_groups) {
    Word prev1, prev2;  // previous level of mode 1 and mode 2 within the group
    for (int g = 1; g <= m; ++g) {
      const Complex a = right_points[offset + 2 * g - 2];
      const Complex b = right_points[offset + 2 * g - 1];
      Word w1 = Word{{1}, {a}}.concat(prev2);
      Word w2 = Word{{2}, {b}}.concat(prev1);
      t.right.add(w1);
      t.right.add(w2);
      prev1 = std::move(w1);
      prev2 = std::move(w2);
    }
    offset += 2 * static_cast<std::size_t>(m);
  }
  offset = 0;
  for (int m : left_groups) {
    Word prev1, prev2;
    for (int h = 1; h <= m; ++h) {
      const Complex a = left_points[offset + 2 * h - 2];
      const Complex b = left_points[offset + 2 * h - 1];
      Word w1 = prev2.concat(Word{{1}, {a}});
      Word w2 = prev1.concat(Word{{2}, {b}});
      t.left.add(w1);
      t.left.add(w2);
      prev1 = std::move(w1);
      prev2 = std::move(w2);
    }
    offset += 2 * static_cast<std::size_t>(m);
  }
  check_tuples(t);
  return t;
}

/// Cyclic layout for any number of modes. Level d of mode q uses point
/// index (d-1)*D + q. Right words prepend to the previous level of mode
/// q-1; left words append to the previous level of mode q-1 on even levels
/// and of mode q+1 on odd levels (indices cyclic).
inline TupleSets build_cyclic(int num_modes, const std::vector<Complex>& right_points,
                              const std::vector<Complex>& left_points, int depth) {
  if (num_modes < 1 || depth < 1) throw InvalidTuples("cyclic layout needs positive mode count and depth");
  if (num_modes == 1 && depth > 1) throw InvalidTuples("cyclic layout with a single mode supports depth 1 only");
  const std::size_t need = static_cast<std::size_t>(num_modes) * static_cast<std::size_t>(depth);
  if (right_points.size() != need)
    throw CountMismatch("right points: expected " + std::to_string(need) + ", got " + std::to_string(right_points.size()));
  if (left_points.size() != need)
    throw CountMismatch("left points: expected " + std::to_string(need) + ", got " + std::to_string(left_points.size()));

  const int dm = num_modes;
  auto wrap = [dm](int q) { return ((q - 1) % dm + dm) % dm + 1; };
  TupleSets t{RightWords(dm), LeftWords(dm)};
  std::vector<Word> prev_right(static_cast<std::size_t>(dm)), prev_left(static_cast<std::size_t>(dm));
  for (int d = 1; d <= depth; ++d) {
    std::vector<Word> cur_right, cur_left;
    for (Mode q = 1; q <= dm; ++q) {
      const std::size_t idx = static_cast<std::size_t>((d - 1) * dm + q - 1);
      cur_right.push_back(Word{{q}, {right_points[idx]}}.concat(prev_right[static_cast<std::size_t>(wrap(q - 1) - 1)]));
      const Mode pred = d % 2 == 0 ? wrap(q - 1) : wrap(q + 1);
      cur_left.push_back(prev_left[static_cast<std::size_t>(pred - 1)].concat(Word{{q}, {left_points[idx]}}));
    }
    for (auto& w : cur_right) t.right.add(w);
    for (auto& w : cur_left) t.left.add(w);
    prev_right = std::move(cur_right);
    prev_left = std::move(cur_left);
  }
  check_tuples(t);
  return t;
}

/// Shift and diagonal matrices describing how the word sets are nested.
///   first_marker(q)   1 x k_q, ones at right words of length one
///   last_marker(q)    l_q x 1, ones at left words of length one
///   right_diag(q)     k_q x k_q, first point of each right word
///   left_diag(q)      l_q x l_q, last point of each left word
///   right_shift(i,g)  k_i x k_g, column u marks the mode-i right word
///                     obtained by dropping the first letter of word u
///   left_shift(j,h)   l_h x l_j, row v marks the mode-j left word
///                     obtained by dropping the last letter of word v
/// Entries are complex so the same type survives unitary transforms.
struct Selectors {
  std::vector<int> right_counts, left_counts;
  std::vector<MatrixXcd> first_markers, last_markers, right_diags, left_diags;
  std::map<std::pair<Mode, Mode>, MatrixXcd> right_shifts, left_shifts;  // only nonzero blocks stored

  int num_modes() const { return static_cast<int>(right_counts.size()); }
  int right_count(Mode q) const { return right_counts.at(static_cast<std::size_t>(q - 1)); }
  int left_count(Mode q) const { return left_counts.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& first_marker(Mode q) const { return first_markers.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& last_marker(Mode q) const { return last_markers.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& right_diag(Mode q) const { return right_diags.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& left_diag(Mode q) const { return left_diags.at(static_cast<std::size_t>(q - 1)); }

  bool has_right_shift(Mode i, Mode g) const { return right_shifts.count({i, g}) != 0; }
  bool has_left_shift(Mode j, Mode h) const { return left_shifts.count({j, h}) != 0; }
  MatrixXcd right_shift(Mode i, Mode g) const {
    auto it = right_shifts.find({i, g});
    return it != right_shifts.end() ? it->second : MatrixXcd::Zero(right_count(i), right_count(g));
  }
  MatrixXcd left_shift(Mode j, Mode h) const {
    auto it = left_shifts.find({j, h});
    return it != left_shifts.end() ? it->second : MatrixXcd::Zero(left_count(h), left_count(j));
  }
};

namespace detail {

inline std::optional<std::size_t> find_word(const std::vector<Word>& ws, const Word& w, std::size_t preferred) {
  if (preferred < ws.size() && ws[preferred] == w) return preferred;
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (ws[i] == w) return i;
  return std::nullopt;
}

}  // namespace detail

inline Selectors selector_data(const TupleSets& t) {
  const int d = t.num_modes();
  Selectors s;
  for (Mode q = 1; q <= d; ++q) {
    const auto& rw = t.right(q);
    const auto& lw = t.left(q);
    const auto k = static_cast<Eigen::Index>(rw.size());
    const auto l = static_cast<Eigen::Index>(lw.size());
    s.right_counts.push_back(static_cast<int>(k));
    s.left_counts.push_back(static_cast<int>(l));
    MatrixXcd fm = MatrixXcd::Zero(1, k), rd = MatrixXcd::Zero(k, k);
    for (Eigen::Index u = 0; u < k; ++u) {
      rd(u, u) = rw[static_cast<std::size_t>(u)].first_point();
      if (rw[static_cast<std::size_t>(u)].length() == 1) fm(0, u) = 1.0;
    }
    MatrixXcd lm = MatrixXcd::Zero(l, 1), ld = MatrixXcd::Zero(l, l);
    for (Eigen::Index v = 0; v < l; ++v) {
      ld(v, v) = lw[static_cast<std::size_t>(v)].last_point();
      if (lw[static_cast<std::size_t>(v)].length() == 1) lm(v, 0) = 1.0;
    }
    s.first_markers.push_back(std::move(fm));
    s.right_diags.push_back(std::move(rd));
    s.last_markers.push_back(std::move(lm));
    s.left_diags.push_back(std::move(ld));
  }
  for (Mode g = 1; g <= d; ++g) {
    const auto& rw = t.right(g);
    for (std::size_t u = 0; u < rw.size(); ++u) {
      if (rw[u].length() < 2) continue;
      const Word tail = rw[u].drop_first();
      const Mode i = tail.first_mode();
      const auto v = detail::find_word(t.right(i), tail, u == 0 ? rw.size() : u - 1);
      if (!v) throw InvalidTuples("right set not prefix-closed at " + rw[u].str());
      auto [it, fresh] = s.right_shifts.try_emplace({i, g}, MatrixXcd::Zero(s.right_count(i), s.right_count(g)));
      it->second(static_cast<Eigen::Index>(*v), static_cast<Eigen::Index>(u)) = 1.0;
    }
  }
  for (Mode h = 1; h <= d; ++h) {
    const auto& lw = t.left(h);
    for (std::size_t v = 0; v < lw.size(); ++v) {
      if (lw[v].length() < 2) continue;
      const Word head = lw[v].drop_last();
      const Mode j = head.last_mode();
      const auto w = detail::find_word(t.left(j), head, v == 0 ? lw.size() : v - 1);
      if (!w) throw InvalidTuples("left set not suffix-closed at " + lw[v].str());
      auto [it, fresh] = s.left_shifts.try_emplace({j, h}, MatrixXcd::Zero(s.left_count(h), s.left_count(j)));
      it->second(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(*w)) = 1.0;
    }
  }
  return s;
}

/// True when, for every cyclic offset c, the shifts right_shift(g+c, g)
/// coincide across all modes g, and likewise left_shift(h+c, h). For two
/// modes this states that both modes share one right and one left shift.
inline bool shift_conditions_hold(const Selectors& s) {
  const int d = s.num_modes();
  auto wrap = [d](int q) { return ((q - 1) % d + d) % d + 1; };
  for (int c = 1; c < d; ++c) {
    const MatrixXcd r0 = s.right_shift(wrap(1 + c), 1);
    const MatrixXcd l0 = s.left_shift(wrap(1 + c), 1);
    for (Mode g = 2; g <= d; ++g) {
      const MatrixXcd r = s.right_shift(wrap(g + c), g);
      const MatrixXcd l = s.left_shift(wrap(g + c), g);
      if (r.rows() != r0.rows() || r.cols() != r0.cols() || r != r0) return false;
      if (l.rows() != l0.rows() || l.cols() != l0.cols() || l != l0) return false;
    }
  }
  return true;
}

/// Whether every word has its conjugate word in the same mode set.
inline bool is_conjugate_closed(const TupleSets& t) {
  auto closed = [](const auto& set) {
    for (const auto& ws : set.by_mode)
      for (const auto& w : ws)
        if (!w.is_real() && std::find(ws.begin(), ws.end(), w.conj()) == ws.end()) return false;
    return true;
  };
  return closed(t.right) && closed(t.left);
}

enum class Spacing { linear, logarithmic };
enum class Axis { real, imaginary };

/// `count` points between `lo` and `hi` (both positive for log spacing),
/// placed on the positive real axis or on the imaginary axis.
inline std::vector<Complex> generate_points(int count, double lo, double hi, Spacing spacing, Axis axis) {
  if (count < 1) throw InvalidTuples("point count must be positive");
  if (spacing == Spacing::logarithmic && !(lo > 0 && hi > 0)) throw InvalidTuples("log spacing needs a positive range");
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    double x = spacing == Spacing::linear ? lo + f * (hi - lo)
                                          : std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    if (i == 0) x = lo;
    if (i == count - 1 && count > 1) x = hi;
    out.push_back(axis == Axis::real ? Complex(x, 0.0) : Complex(0.0, x));
  }
  return out;
}

}  // namespace lssmor
