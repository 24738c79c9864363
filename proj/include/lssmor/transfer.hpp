#pragma once

#include "lssmor/model.hpp"
#include "lssmor/tuples.hpp"

#include <cstdio>
#include <set>

namespace lssmor {

/// Value of the generalized transfer function for `word`,
///   C_{q1} Phi_{q1}(s1) K_{q2->q1} Phi_{q2}(s2) ... K_{qk->q(k-1)} Phi_{qk}(sk) B_{qk},
/// evaluated right to left with factorized solves. Returns the p x m block.
template <typename Scalar>
MatrixXcd eval_transfer_matrix(const BasicLssModel<Scalar>& model, const Word& word) {
  if (word.modes.empty() || word.modes.size() != word.points.size())
    throw InvalidTuples("cannot evaluate malformed word " + word.str());
  const int k = static_cast<int>(word.length());
  MatrixXcd x = model.mode(word.modes.back()).B.template cast<Complex>();
  for (int pos = k - 1; pos >= 0; --pos) {
    const Mode q = word.modes[static_cast<std::size_t>(pos)];
    if (pos < k - 1) x = model.coupling(word.modes[static_cast<std::size_t>(pos + 1)], q).template cast<Complex>() * x;
    try {
      x = resolvent_solve(model, q, word.points[static_cast<std::size_t>(pos)], x);
    } catch (const SingularResolvent& e) {
      throw SingularResolvent(e.mode(), e.point(), pos);
    }
  }
  return model.mode(word.modes.front()).C.template cast<Complex>() * x;
}

/// Scalar transfer value for single-input single-output models.
template <typename Scalar>
Complex eval_transfer(const BasicLssModel<Scalar>& model, const Word& word) {
  if (model.inputs() != 1 || model.outputs() != 1)
    throw DimensionMismatch("scalar transfer evaluation needs a single-input single-output model");
  return eval_transfer_matrix(model, word)(0, 0);
}

/// Transfer samples keyed by word, plus a provenance tag (model hash or
/// "external").
struct SampleSet {
  std::map<Word, Complex> values;
  std::string source = "external";

  bool contains(const Word& w) const { return values.count(w) != 0; }
  Complex at(const Word& w) const {
    auto it = values.find(w);
    if (it == values.end()) throw MissingSample(w.str());
    return it->second;
  }
  std::size_t size() const { return values.size(); }
};

/// Every word whose transfer value enters the Loewner data built from `t`:
/// the right and left words themselves and every left-right concatenation
/// across distinct anchor modes. Divided-difference seams reuse these.
inline std::set<Word> required_words(const TupleSets& t) {
  std::set<Word> out;
  const int d = t.num_modes();
  for (Mode q = 1; q <= d; ++q) {
    out.insert(t.right(q).begin(), t.right(q).end());
    out.insert(t.left(q).begin(), t.left(q).end());
  }
  for (Mode j = 1; j <= d; ++j)
    for (Mode i = 1; i <= d; ++i) {
      if (i == j) continue;
      for (const auto& lw : t.left(j))
        for (const auto& rw : t.right(i)) out.insert(lw.concat(rw));
    }
  // Pencil entries pair a left word ending in q with a right word starting
  // in q; both seam variants are concatenations that share one letter.
  for (Mode q = 1; q <= d; ++q)
    for (const auto& lw : t.left(q))
      for (const auto& rw : t.right(q)) {
        out.insert(lw.concat(rw.drop_first()));
        out.insert(lw.drop_last().concat(rw));
      }
  return out;
}

inline std::string model_hash(const std::string& canonical_text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(detail::fnv1a(canonical_text)));
  return buf;
}

/// Samples every word needed to assemble Loewner data for `t`.
template <typename Scalar>
SampleSet sample_for_loewner(const BasicLssModel<Scalar>& model, const TupleSets& t, std::string source = "model") {
  if (t.num_modes() != model.num_modes()) throw DimensionMismatch("tuple sets and model disagree on mode count");
  check_tuples(t);
  SampleSet s;
  s.source = std::move(source);
  for (const auto& w : required_words(t)) s.values.emplace(w, eval_transfer(model, w));
  return s;
}

}  // namespace lssmor
