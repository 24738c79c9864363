#pragma once

#include "lssmor/loewner.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace lssmor {

using linalg::numerical_rank;

/// Interpolating model read off square, nonsingular Loewner data:
/// E = -L, A = -Ls, B = V, C = W, and K_{i->j} = Xi_{i,j}.
inline ComplexLssModel exact_realization(const LoewnerData& data) {
  const int d = data.num_modes();
  std::vector<ModeMatrices<Complex>> modes;
  for (Mode q = 1; q <= d; ++q) {
    if (data.L(q).rows() != data.L(q).cols())
      throw DimensionMismatch("exact realization needs square Loewner matrices (mode " + std::to_string(q) + ")");
    if (data.L(q).size() == 0 || linalg::rcond<Complex>(data.L(q)) < kSingularRcond) throw SingularLoewner(q);
    modes.push_back({-data.L(q), -data.Ls(q), data.V(q), data.W(q)});
  }
  ComplexLssModel::Couplings ks;
  for (const auto& [key, xi] : data.coupling_data) ks[{key.first, key.second}] = xi;
  ComplexLssModel model(std::move(modes), std::move(ks), 1, 1);

  for (Mode q = 1; q <= d; ++q) {
    const auto& md = model.mode(q);
    auto check = [&](Complex s) {
      if (linalg::rcond<Complex>(MatrixXcd(s * md.E - md.A)) < kSingularRcond) throw EigenpointCollision(q, s);
    };
    auto scan = [&](const auto& set) {
      for (const auto& ws : set.by_mode)
        for (const auto& w : ws)
          for (std::size_t i = 0; i < w.length(); ++i)
            if (w.modes[i] == q) check(w.points[i]);
    };
    scan(data.tuples.right);
    scan(data.tuples.left);
  }
  return model;
}

enum class RankRule {
  loewner,  // rank and projections from the Loewner matrix alone
  pencil,   // max rank of [L Ls] and [L; Ls]; projections from those
};

struct TruncationOptions {
  double tol = 1e-12;
  std::map<Mode, int> ranks;  // explicit per-mode overrides
  RankRule rule = RankRule::loewner;
};

struct ModeReport {
  Mode mode = 1;
  VectorXd singular_values;
  int rank = 0;
  double largest_neglected = 0.0;
};

struct ReductionReport {
  double tol = 0.0;
  bool realified = false;
  double max_imag_discarded = 0.0;
  std::vector<ModeReport> modes;
};

struct Reduction {
  ComplexLssModel model;
  ReductionReport report;
};

namespace detail {

struct SvdFactors {
  MatrixXcd u, v;
  VectorXd s;
};

inline SvdFactors svd(const MatrixXcd& m, bool real) {
  if (real) {
    Eigen::JacobiSVD<MatrixXd> svd(m.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU().cast<Complex>(), svd.matrixV().cast<Complex>(), svd.singularValues()};
  }
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

}  // namespace detail

/// Projects the Loewner data onto the dominant singular subspaces of each
/// mode. With Y, X the leading r_q left/right singular vectors:
///   E = -Y^H L X,  A = -Y^H Ls X,  B = Y^H V,  C = W X,
///   K_{i->j} = Y_j^H Xi_{i,j} X_i.
/// Exactly real data is decomposed with a real SVD so the result is real.
inline Reduction svd_truncate(const LoewnerData& data, const TruncationOptions& opts = {}) {
  if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
  const int d = data.num_modes();
  const bool real = data.max_abs_imag() == 0.0;
  Reduction out;
  out.report.tol = opts.tol;
  out.report.realified = data.realified;
  std::vector<MatrixXcd> ys, xs;
  std::vector<ModeMatrices<Complex>> modes;
  for (Mode q = 1; q <= d; ++q) {
    const MatrixXcd& l = data.L(q);
    if (l.size() == 0) throw DegenerateData("mode " + std::to_string(q) + " has no interpolation data");
    const auto main = detail::svd(l, real);
    if (!(main.s.size() > 0 && main.s[0] > 0.0))
      throw DegenerateData("Loewner matrix of mode " + std::to_string(q) + " is zero");
    const int max_rank = static_cast<int>(std::min(l.rows(), l.cols()));
    MatrixXcd y = main.u, x = main.v;
    int r = numerical_rank(main.s, opts.tol);
    if (opts.rule == RankRule::pencil) {
      MatrixXcd row_cat(l.rows(), 2 * l.cols()), col_cat(2 * l.rows(), l.cols());
      row_cat << l, data.Ls(q);
      col_cat << l, data.Ls(q);
      const auto a = detail::svd(row_cat, real);
      const auto b = detail::svd(col_cat, real);
      r = std::max(numerical_rank(a.s, opts.tol), numerical_rank(b.s, opts.tol));
      y = a.u;
      x = b.v;
    }
    if (auto it = opts.ranks.find(q); it != opts.ranks.end()) {
      if (it->second < 1 || it->second > max_rank)
        throw RankTooLarge("rank " + std::to_string(it->second) + " for mode " + std::to_string(q) +
                           " outside [1, " + std::to_string(max_rank) + "]");
      r = it->second;
    }
    r = std::min(r, max_rank);
    if (r < 1) throw DegenerateData("numerical rank of mode " + std::to_string(q) + " is zero");
    y = y.leftCols(r).eval();
    x = x.leftCols(r).eval();
    ModeMatrices<Complex> md{-(y.adjoint() * l * x), -(y.adjoint() * data.Ls(q) * x), y.adjoint() * data.V(q),
                             data.W(q) * x};
    if (linalg::rcond<Complex>(md.E) < kSingularRcond) throw SingularLoewner(q);
    modes.push_back(std::move(md));
    out.report.modes.push_back({q, main.s, r, r < main.s.size() ? main.s[r] : 0.0});
    ys.push_back(std::move(y));
    xs.push_back(std::move(x));
  }
  ComplexLssModel::Couplings ks;
  for (const auto& [key, xi] : data.coupling_data) {
    const auto [i, j] = key;
    ks[{i, j}] = ys[static_cast<std::size_t>(j - 1)].adjoint() * xi * xs[static_cast<std::size_t>(i - 1)];
  }
  out.model = ComplexLssModel(std::move(modes), std::move(ks), 1, 1);
  return out;
}

namespace detail {

/// Unitary that pairs each word with its conjugate. For a pair (a, b) the
/// right transform acts on columns with (1/sqrt2)[[1,-i],[1,i]] and the left
/// one on rows with its transpose; real words are left alone.
inline MatrixXcd pairing_transform(const std::vector<Word>& words, bool left, Mode q) {
  const auto n = static_cast<Eigen::Index>(words.size());
  MatrixXcd t = MatrixXcd::Zero(n, n);
  std::vector<bool> done(words.size(), false);
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  for (std::size_t a = 0; a < words.size(); ++a) {
    if (done[a]) continue;
    const auto ia = static_cast<Eigen::Index>(a);
    if (words[a].is_real()) {
      t(ia, ia) = 1.0;
      done[a] = true;
      continue;
    }
    const Word partner = words[a].conj();
    std::size_t b = a + 1;
    while (b < words.size() && (done[b] || !(words[b] == partner))) ++b;
    if (b >= words.size())
      throw NotConjugateClosed(std::string(left ? "left" : "right") + " word " + words[a].str() + " of mode " +
                               std::to_string(q) + " has no conjugate partner");
    const auto ib = static_cast<Eigen::Index>(b);
    if (left) {
      t(ia, ia) = h;
      t(ia, ib) = h;
      t(ib, ia) = -i * h;
      t(ib, ib) = i * h;
    } else {
      t(ia, ia) = h;
      t(ia, ib) = -i * h;
      t(ib, ia) = h;
      t(ib, ib) = i * h;
    }
    done[a] = done[b] = true;
  }
  return t;
}

}  // namespace detail

struct Realified {
  LoewnerData data;
  double max_imag = 0.0;  // largest imaginary part discarded
};

/// Unitary change of basis that makes data from conjugate-closed word sets
/// real. Selector matrices are transformed alongside so every Sylvester
/// identity keeps holding. Throws NotConjugateClosed when a word lacks its
/// conjugate, and DegenerateData when the transformed data is not real to
/// within `tol` relative to its largest entry.
inline Realified realify(const LoewnerData& data, double tol = 1e-12) {
  const int d = data.num_modes();
  std::vector<MatrixXcd> tr, tl;
  for (Mode q = 1; q <= d; ++q) {
    tr.push_back(detail::pairing_transform(data.tuples.right(q), false, q));
    tl.push_back(detail::pairing_transform(data.tuples.left(q), true, q));
  }
  auto R = [&](Mode q) -> const MatrixXcd& { return tr[static_cast<std::size_t>(q - 1)]; };
  auto Lt = [&](Mode q) -> const MatrixXcd& { return tl[static_cast<std::size_t>(q - 1)]; };

  LoewnerData out = data;
  Selectors& s = out.selectors;
  for (Mode q = 1; q <= d; ++q) {
    const auto k = static_cast<std::size_t>(q - 1);
    out.loewner[k] = Lt(q) * data.L(q) * R(q);
    out.shifted_loewner[k] = Lt(q) * data.Ls(q) * R(q);
    out.input_data[k] = Lt(q) * data.V(q);
    out.output_data[k] = data.W(q) * R(q);
    s.right_diags[k] = R(q).adjoint() * data.selectors.right_diag(q) * R(q);
    s.first_markers[k] = data.selectors.first_marker(q) * R(q);
    s.left_diags[k] = Lt(q) * data.selectors.left_diag(q) * Lt(q).adjoint();
    s.last_markers[k] = Lt(q) * data.selectors.last_marker(q);
  }
  for (auto& [key, xi] : out.coupling_data) xi = Lt(key.second) * data.Xi(key.first, key.second) * R(key.first);
  for (auto& [key, sh] : s.right_shifts) sh = R(key.first).adjoint() * sh * R(key.second);
  for (auto& [key, sh] : s.left_shifts) sh = Lt(key.second) * sh * Lt(key.first).adjoint();

  double scale = 0.0;
  for (const auto* group : {&out.loewner, &out.shifted_loewner, &out.input_data, &out.output_data})
    for (const auto& x : *group) scale = std::max(scale, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
  for (const auto& [key, x] : out.coupling_data) scale = std::max(scale, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);

  Realified res{std::move(out), 0.0};
  res.max_imag = res.data.max_abs_imag();
  if (res.max_imag > tol * std::max(1.0, scale))
    throw DegenerateData("realified data keeps imaginary parts up to " + std::to_string(res.max_imag));
  auto drop = [](MatrixXcd& x) { x = x.real().cast<Complex>(); };
  for (auto* group : {&res.data.loewner, &res.data.shifted_loewner, &res.data.input_data, &res.data.output_data})
    for (auto& x : *group) drop(x);
  for (auto& [key, x] : res.data.coupling_data) drop(x);
  res.data.realified = true;
  return res;
}

}  // namespace lssmor
