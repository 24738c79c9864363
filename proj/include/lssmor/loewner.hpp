#pragma once

#include "lssmor/transfer.hpp"

namespace lssmor {

/// Loewner pencil, input/output data and cross-mode coupling data for every
/// mode, together with the word sets and selector matrices they were built on.
struct LoewnerData {
  TupleSets tuples;
  Selectors selectors;
  std::vector<MatrixXcd> loewner;          // l_q x k_q
  std::vector<MatrixXcd> shifted_loewner;  // l_q x k_q
  std::vector<MatrixXcd> input_data;       // l_q x 1, samples on left words
  std::vector<MatrixXcd> output_data;      // 1 x k_q, samples on right words
  std::map<std::pair<Mode, Mode>, MatrixXcd> coupling_data;  // (i,j): l_j x k_i
  bool realified = false;

  int num_modes() const { return static_cast<int>(loewner.size()); }
  const MatrixXcd& L(Mode q) const { return loewner.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& Ls(Mode q) const { return shifted_loewner.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& V(Mode q) const { return input_data.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& W(Mode q) const { return output_data.at(static_cast<std::size_t>(q - 1)); }
  const MatrixXcd& Xi(Mode i, Mode j) const { return coupling_data.at({i, j}); }

  double max_abs_imag() const {
    double m = 0.0;
    for (const auto* group : {&loewner, &shifted_loewner, &input_data, &output_data})
      for (const auto& x : *group) m = std::max(m, detail::max_abs_imag(x));
    for (const auto& [key, x] : coupling_data) m = std::max(m, detail::max_abs_imag(x));
    return m;
  }
};

namespace detail {

template <typename Scalar>
void require_siso(const BasicLssModel<Scalar>& model) {
  if (model.inputs() != 1 || model.outputs() != 1)
    throw DimensionMismatch("Loewner data requires a single-input single-output model");
}

template <typename Scalar>
class ChainBuilder {
 public:
  explicit ChainBuilder(const BasicLssModel<Scalar>& model) : model_(model) {}

  /// Phi_{q1}(s1) K Phi_{q2}(s2) ... B for a right word.
  const VectorXcd& right(const Word& w) {
    if (auto it = right_.find(w); it != right_.end()) return it->second;
    const Mode q = w.first_mode();
    VectorXcd rhs = w.length() == 1 ? VectorXcd(model_.mode(q).B.template cast<Complex>().col(0))
                                    : VectorXcd(model_.coupling(w.modes[1], q).template cast<Complex>() *
                                                right(w.drop_first()));
    return right_.emplace(w, resolvent_solve(model_, q, w.first_point(), rhs)).first->second;
  }

  /// C_{q1} Phi_{q1}(m1) K ... Phi_q(ml) for a left word, as a row.
  const Eigen::RowVectorXcd& left(const Word& w) {
    if (auto it = left_.find(w); it != left_.end()) return it->second;
    const Mode q = w.last_mode();
    Eigen::RowVectorXcd lhs;
    if (w.length() == 1) {
      lhs = model_.mode(q).C.template cast<Complex>().row(0);
    } else {
      const Mode prev = w.modes[w.length() - 2];
      lhs = left(w.drop_last()) * model_.coupling(q, prev).template cast<Complex>();
    }
    Resolvent<Scalar> res(model_, q, w.last_point());
    return left_.emplace(w, res.solve_left(lhs)).first->second;
  }

 private:
  const BasicLssModel<Scalar>& model_;
  std::map<Word, VectorXcd> right_;
  std::map<Word, Eigen::RowVectorXcd> left_;
};

}  // namespace detail

/// Generalized controllability matrices: one column per right word.
template <typename Scalar>
std::vector<MatrixXcd> controllability_matrices(const BasicLssModel<Scalar>& model, const RightWords& words) {
  detail::require_siso(model);
  detail::ChainBuilder<Scalar> chains(model);
  std::vector<MatrixXcd> out;
  for (Mode q = 1; q <= words.num_modes(); ++q) {
    MatrixXcd r(model.order(q), words.count(q));
    for (int u = 0; u < words.count(q); ++u) r.col(u) = chains.right(words(q)[static_cast<std::size_t>(u)]);
    out.push_back(std::move(r));
  }
  return out;
}

/// Generalized observability matrices: one row per left word.
template <typename Scalar>
std::vector<MatrixXcd> observability_matrices(const BasicLssModel<Scalar>& model, const LeftWords& words) {
  detail::require_siso(model);
  detail::ChainBuilder<Scalar> chains(model);
  std::vector<MatrixXcd> out;
  for (Mode q = 1; q <= words.num_modes(); ++q) {
    MatrixXcd o(words.count(q), model.order(q));
    for (int v = 0; v < words.count(q); ++v) o.row(v) = chains.left(words(q)[static_cast<std::size_t>(v)]);
    out.push_back(std::move(o));
  }
  return out;
}

/// Loewner data from state-space matrices and the controllability and
/// observability matrices of the word sets.
template <typename Scalar>
LoewnerData from_state(const BasicLssModel<Scalar>& model, const TupleSets& t) {
  require_valid(model);
  detail::require_siso(model);
  if (t.num_modes() != model.num_modes()) throw DimensionMismatch("tuple sets and model disagree on mode count");
  check_tuples(t);
  const auto rs = controllability_matrices(model, t.right);
  const auto os = observability_matrices(model, t.left);
  LoewnerData data{t, selector_data(t), {}, {}, {}, {}, {}, false};
  const int d = model.num_modes();
  for (Mode q = 1; q <= d; ++q) {
    const auto& md = model.mode(q);
    const auto& r = rs[static_cast<std::size_t>(q - 1)];
    const auto& o = os[static_cast<std::size_t>(q - 1)];
    data.loewner.push_back(-(o * md.E.template cast<Complex>() * r));
    data.shifted_loewner.push_back(-(o * md.A.template cast<Complex>() * r));
    data.input_data.push_back(o * md.B.template cast<Complex>());
    data.output_data.push_back(md.C.template cast<Complex>() * r);
  }
  for (Mode i = 1; i <= d; ++i)
    for (Mode j = 1; j <= d; ++j)
      if (i != j)
        data.coupling_data[{i, j}] =
            os[static_cast<std::size_t>(j - 1)] * model.coupling(i, j).template cast<Complex>() * rs[static_cast<std::size_t>(i - 1)];
  return data;
}

/// Loewner data assembled purely from transfer samples via divided
/// differences. Entry (v,u) of mode q pairs left word v (ending in q) with
/// right word u (starting in q); the two seam words differ only in the
/// point at the shared mode-q position.
inline LoewnerData from_samples(const SampleSet& samples, const TupleSets& t) {
  check_tuples(t);
  const int d = t.num_modes();
  LoewnerData data{t, selector_data(t), {}, {}, {}, {}, {}, false};
  for (Mode q = 1; q <= d; ++q) {
    const auto& lw = t.left(q);
    const auto& rw = t.right(q);
    const auto l = static_cast<Eigen::Index>(lw.size());
    const auto k = static_cast<Eigen::Index>(rw.size());
    MatrixXcd ll(l, k), ls(l, k), v(l, 1), w(1, k);
    for (Eigen::Index a = 0; a < l; ++a) {
      const Word& left = lw[static_cast<std::size_t>(a)];
      v(a, 0) = samples.at(left);
      for (Eigen::Index b = 0; b < k; ++b) {
        const Word& right = rw[static_cast<std::size_t>(b)];
        const Complex mu = left.last_point();
        const Complex lambda = right.first_point();
        if (mu == lambda) throw CoincidentPoints(mu, lambda);
        const Complex h_mu = samples.at(left.concat(right.drop_first()));
        const Complex h_lambda = samples.at(left.drop_last().concat(right));
        ll(a, b) = (h_mu - h_lambda) / (mu - lambda);
        ls(a, b) = (mu * h_mu - lambda * h_lambda) / (mu - lambda);
      }
    }
    for (Eigen::Index b = 0; b < k; ++b) w(0, b) = samples.at(rw[static_cast<std::size_t>(b)]);
    data.loewner.push_back(std::move(ll));
    data.shifted_loewner.push_back(std::move(ls));
    data.input_data.push_back(std::move(v));
    data.output_data.push_back(std::move(w));
  }
  for (Mode i = 1; i <= d; ++i)
    for (Mode j = 1; j <= d; ++j) {
      if (i == j) continue;
      const auto& lw = t.left(j);
      const auto& rw = t.right(i);
      MatrixXcd xi(static_cast<Eigen::Index>(lw.size()), static_cast<Eigen::Index>(rw.size()));
      for (std::size_t a = 0; a < lw.size(); ++a)
        for (std::size_t b = 0; b < rw.size(); ++b)
          xi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = samples.at(lw[a].concat(rw[b]));
      data.coupling_data[{i, j}] = std::move(xi);
    }
  return data;
}

struct ResidualEntry {
  std::string identity;
  Mode mode;
  double relative;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
  double max() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.relative);
    return m;
  }
};

namespace detail {

inline double relative_residual(const MatrixXcd& lhs, const MatrixXcd& rhs) {
  const double scale = lhs.norm();
  const double diff = (lhs - rhs).norm();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace detail

/// Residuals of the data-side Sylvester identities for every mode:
///   right-pencil   Ls = L Lam + V R + sum_j Xi_{j,h} S_j^(h)
///   left-pencil    Ls = M L + L W + sum_j T_j^(h) Xi_{h,j}
///   loewner        M L - L Lam = V R - L W + sum_j (Xi S - T Xi)
///   shifted        M Ls - Ls Lam = M V R - L W Lam + sum_j (M Xi S - T Xi Lam)
inline ResidualReport sylvester_residuals(const LoewnerData& data) {
  ResidualReport rep;
  const auto& s = data.selectors;
  const int d = data.num_modes();
  for (Mode h = 1; h <= d; ++h) {
    const MatrixXcd& lam = s.right_diag(h);
    const MatrixXcd& m = s.left_diag(h);
    const MatrixXcd vr = data.V(h) * s.first_marker(h);
    const MatrixXcd lw = s.last_marker(h) * data.W(h);
    MatrixXcd xs = MatrixXcd::Zero(data.L(h).rows(), data.L(h).cols());
    MatrixXcd tx = xs;
    MatrixXcd mxs = xs, txl = xs;
    for (Mode j = 1; j <= d; ++j) {
      if (j == h) continue;
      if (s.has_right_shift(j, h)) {
        const MatrixXcd term = data.Xi(j, h) * s.right_shift(j, h);
        xs += term;
        mxs += m * term;
      }
      if (s.has_left_shift(j, h)) {
        const MatrixXcd term = s.left_shift(j, h) * data.Xi(h, j);
        tx += term;
        txl += term * lam;
      }
    }
    rep.entries.push_back({"right-pencil", h, detail::relative_residual(data.Ls(h), data.L(h) * lam + vr + xs)});
    rep.entries.push_back({"left-pencil", h, detail::relative_residual(data.Ls(h), m * data.L(h) + lw + tx)});
    rep.entries.push_back({"loewner", h, detail::relative_residual(m * data.L(h) - data.L(h) * lam, vr - lw + xs - tx)});
    rep.entries.push_back({"shifted", h,
                           detail::relative_residual(m * data.Ls(h) - data.Ls(h) * lam, m * vr - lw * lam + mxs - txl)});
  }
  return rep;
}

/// Residuals of the state-side identities satisfied by the controllability
/// and observability matrices of `t`:
///   controllability  A_g R_g + sum_i K_{i->g} R_i S_i^(g) + B_g R^(g) = E_g R_g Lam_g
///   observability    O_h A_h + sum_j T_j^(h) O_j K_{h->j} + L^(h) C_h = M_h O_h E_h
template <typename Scalar>
ResidualReport state_residuals(const BasicLssModel<Scalar>& model, const TupleSets& t) {
  const auto rs = controllability_matrices(model, t.right);
  const auto os = observability_matrices(model, t.left);
  const Selectors s = selector_data(t);
  ResidualReport rep;
  const int d = model.num_modes();
  for (Mode g = 1; g <= d; ++g) {
    const auto& md = model.mode(g);
    const MatrixXcd e = md.E.template cast<Complex>(), a = md.A.template cast<Complex>();
    const MatrixXcd& r = rs[static_cast<std::size_t>(g - 1)];
    const MatrixXcd& o = os[static_cast<std::size_t>(g - 1)];
    MatrixXcd lhs_c = a * r + md.B.template cast<Complex>() * s.first_marker(g);
    MatrixXcd lhs_o = o * a + s.last_marker(g) * md.C.template cast<Complex>();
    for (Mode i = 1; i <= d; ++i) {
      if (i == g) continue;
      if (s.has_right_shift(i, g))
        lhs_c += model.coupling(i, g).template cast<Complex>() * rs[static_cast<std::size_t>(i - 1)] * s.right_shift(i, g);
      if (s.has_left_shift(i, g))
        lhs_o += s.left_shift(i, g) * os[static_cast<std::size_t>(i - 1)] * model.coupling(g, i).template cast<Complex>();
    }
    rep.entries.push_back({"controllability", g, detail::relative_residual(lhs_c, e * r * s.right_diag(g))});
    rep.entries.push_back({"observability", g, detail::relative_residual(lhs_o, s.left_diag(g) * o * e)});
  }
  return rep;
}

/// Stacked Kronecker form of the coupled controllability equations; the
/// unknown is [vec R_1; ...; vec R_D].
template <typename Scalar>
std::pair<MatrixXcd, VectorXcd> controllability_operator(const BasicLssModel<Scalar>& model, const Selectors& s) {
  const int d = model.num_modes();
  std::vector<Eigen::Index> offset(static_cast<std::size_t>(d) + 1, 0);
  for (Mode q = 1; q <= d; ++q)
    offset[static_cast<std::size_t>(q)] = offset[static_cast<std::size_t>(q - 1)] + model.order(q) * s.right_count(q);
  const Eigen::Index total = offset.back();
  MatrixXcd op = MatrixXcd::Zero(total, total);
  VectorXcd rhs(total);
  for (Mode g = 1; g <= d; ++g) {
    const auto& md = model.mode(g);
    const auto ig = offset[static_cast<std::size_t>(g - 1)];
    const auto kg = s.right_count(g);
    const auto ng = md.order();
    op.block(ig, ig, ng * kg, ng * kg) =
        linalg::kron(MatrixXcd::Identity(kg, kg), md.A.template cast<Complex>()) -
        linalg::kron(s.right_diag(g).transpose(), md.E.template cast<Complex>());
    for (Mode i = 1; i <= d; ++i) {
      if (i == g || !s.has_right_shift(i, g)) continue;
      const auto ii = offset[static_cast<std::size_t>(i - 1)];
      op.block(ig, ii, ng * kg, model.order(i) * s.right_count(i)) +=
          linalg::kron(s.right_shift(i, g).transpose(), model.coupling(i, g).template cast<Complex>());
    }
    const MatrixXcd b = -(md.B.template cast<Complex>() * s.first_marker(g));
    rhs.segment(ig, ng * kg) = linalg::vec<Complex>(b);
  }
  return {op, rhs};
}

/// Stacked Kronecker form of the coupled observability equations; the
/// unknown is [vec O_1; ...; vec O_D].
template <typename Scalar>
std::pair<MatrixXcd, VectorXcd> observability_operator(const BasicLssModel<Scalar>& model, const Selectors& s) {
  const int d = model.num_modes();
  std::vector<Eigen::Index> offset(static_cast<std::size_t>(d) + 1, 0);
  for (Mode q = 1; q <= d; ++q)
    offset[static_cast<std::size_t>(q)] = offset[static_cast<std::size_t>(q - 1)] + model.order(q) * s.left_count(q);
  const Eigen::Index total = offset.back();
  MatrixXcd op = MatrixXcd::Zero(total, total);
  VectorXcd rhs(total);
  for (Mode h = 1; h <= d; ++h) {
    const auto& md = model.mode(h);
    const auto ih = offset[static_cast<std::size_t>(h - 1)];
    const auto lh = s.left_count(h);
    const auto nh = md.order();
    op.block(ih, ih, nh * lh, nh * lh) =
        linalg::kron(md.A.template cast<Complex>().transpose(), MatrixXcd::Identity(lh, lh)) -
        linalg::kron(md.E.template cast<Complex>().transpose(), s.left_diag(h));
    for (Mode j = 1; j <= d; ++j) {
      if (j == h || !s.has_left_shift(j, h)) continue;
      const auto ij = offset[static_cast<std::size_t>(j - 1)];
      op.block(ih, ij, nh * lh, model.order(j) * s.left_count(j)) +=
          linalg::kron(model.coupling(h, j).template cast<Complex>().transpose(), s.left_shift(j, h));
    }
    const MatrixXcd c = -(s.last_marker(h) * md.C.template cast<Complex>());
    rhs.segment(ih, nh * lh) = linalg::vec<Complex>(c);
  }
  return {op, rhs};
}

namespace detail {

inline std::optional<VectorXcd> solve_stacked(const MatrixXcd& op, const VectorXcd& rhs) {
  auto lu = linalg::try_factor<Complex>(op);
  if (!lu) return std::nullopt;
  return VectorXcd(lu->solve(rhs));
}

}  // namespace detail

/// Controllability matrices obtained by solving the coupled Sylvester
/// system directly; empty when the operator is singular.
template <typename Scalar>
std::optional<std::vector<MatrixXcd>> solve_controllability(const BasicLssModel<Scalar>& model, const Selectors& s) {
  auto [op, rhs] = controllability_operator(model, s);
  auto x = detail::solve_stacked(op, rhs);
  if (!x) return std::nullopt;
  std::vector<MatrixXcd> out;
  Eigen::Index pos = 0;
  for (Mode q = 1; q <= model.num_modes(); ++q) {
    const auto n = model.order(q), k = s.right_count(q);
    out.push_back(linalg::unvec<Complex>(x->segment(pos, n * k), n, k));
    pos += n * k;
  }
  return out;
}

template <typename Scalar>
std::optional<std::vector<MatrixXcd>> solve_observability(const BasicLssModel<Scalar>& model, const Selectors& s) {
  auto [op, rhs] = observability_operator(model, s);
  auto x = detail::solve_stacked(op, rhs);
  if (!x) return std::nullopt;
  std::vector<MatrixXcd> out;
  Eigen::Index pos = 0;
  for (Mode q = 1; q <= model.num_modes(); ++q) {
    const auto n = model.order(q), l = s.left_count(q);
    out.push_back(linalg::unvec<Complex>(x->segment(pos, n * l), l, n));
    pos += n * l;
  }
  return out;
}

}  // namespace lssmor
