#pragma once

#include "lssmor/model.hpp"

#include <Eigen/SVD>

namespace lssmor {

/// Per-mode gramians. `reach[q]` solves A P E^T + E P A^T + B B^T = 0 and
/// `observe[q]` solves A^T Q E + E^T Q A + C^T C = 0. The state-coordinate
/// observability gramian E^T Q E is kept separately for balancing.
struct ModeGramians {
  std::vector<MatrixXd> reach, observe, observe_state;
  MatrixXd reach_avg, observe_avg;  // averages of reach and observe_state
};

namespace detail {

inline void require_common_order(const LssModel& model) {
  for (Mode q = 2; q <= model.num_modes(); ++q)
    if (model.order(q) != model.order(1))
      throw DimensionMismatch("balanced truncation needs every mode to have the same order");
}

inline void require_stable(Mode q, const MatrixXd& a_tilde) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(a_tilde.cast<Complex>(), false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (!(es.eigenvalues()[i].real() < 0.0)) throw UnstableMode(q);
}

}  // namespace detail

inline ModeGramians mode_gramians(const LssModel& model) {
  require_valid(model);
  detail::require_common_order(model);
  ModeGramians g;
  const int d = model.num_modes();
  const auto n = model.order(1);
  g.reach_avg = MatrixXd::Zero(n, n);
  g.observe_avg = MatrixXd::Zero(n, n);
  for (Mode q = 1; q <= d; ++q) {
    const auto& md = model.mode(q);
    Eigen::PartialPivLU<MatrixXd> e_lu(md.E);
    const MatrixXd at = e_lu.solve(md.A);
    const MatrixXd bt = e_lu.solve(md.B);
    detail::require_stable(q, at);
    const MatrixXd p = linalg::solve_lyapunov(at, bt * bt.transpose());
    const MatrixXd qs = linalg::solve_lyapunov(at.transpose(), md.C.transpose() * md.C);
    const MatrixXd e_inv = e_lu.inverse();
    MatrixXd q_gen = e_inv.transpose() * qs * e_inv;
    q_gen = 0.5 * (q_gen + q_gen.transpose()).eval();
    g.reach.push_back(p);
    g.observe.push_back(q_gen);
    g.observe_state.push_back(qs);
    g.reach_avg += p / d;
    g.observe_avg += qs / d;
  }
  return g;
}

struct BtResult {
  LssModel model;
  VectorXd hankel;     // singular values of the averaged square-root product
  int rank_used = 0;
  bool rank_capped = false;  // requested order exceeded the numerical rank
  ModeGramians gramians;
};

/// Square-root balanced truncation on averaged gramians. With
/// P = U U^T, E^T Q E = L L^T and L^T U = Z S Y^T:
///   V = U Y_r S_r^{-1/2},  T = S_r^{-1/2} Z_r^T L^T,
/// and each mode is projected as (I, T E^{-1} A V, T E^{-1} B, C V) with
/// couplings T E_to^{-1} K V. A requested order above the numerical rank
/// of S is capped and flagged instead of failing.
inline BtResult bt_reduce(const LssModel& model, int order, double rank_tol = 1e-14) {
  if (order < 1) throw RankTooLarge("reduced order must be positive");
  BtResult res;
  res.gramians = mode_gramians(model);
  const auto n = model.order(1);
  if (order > n) throw RankTooLarge("reduced order " + std::to_string(order) + " exceeds state dimension " +
                                    std::to_string(n));
  const MatrixXd u = linalg::psd_factor(res.gramians.reach_avg);
  const MatrixXd l = linalg::psd_factor(res.gramians.observe_avg);
  Eigen::JacobiSVD<MatrixXd> svd(l.transpose() * u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  res.hankel = svd.singularValues();
  const int rank = linalg::numerical_rank(res.hankel, rank_tol);
  if (rank < 1) throw Error("RankDeficientGramians", "gramian product has zero numerical rank");
  res.rank_used = std::min(order, rank);
  res.rank_capped = res.rank_used < order;
  const int r = res.rank_used;
  const VectorXd inv_sqrt = res.hankel.head(r).cwiseSqrt().cwiseInverse();
  const MatrixXd v = u * svd.matrixV().leftCols(r) * inv_sqrt.asDiagonal();
  const MatrixXd t = inv_sqrt.asDiagonal() * svd.matrixU().leftCols(r).transpose() * l.transpose();

  std::vector<ModeMatrices<double>> modes;
  std::vector<MatrixXd> left;  // T E_q^{-1}
  for (Mode q = 1; q <= model.num_modes(); ++q) {
    const auto& md = model.mode(q);
    const MatrixXd wt = Eigen::PartialPivLU<MatrixXd>(md.E).transpose().solve(MatrixXd(t.transpose()));
    const MatrixXd w = wt.transpose();
    modes.push_back({MatrixXd::Identity(r, r), w * md.A * v, w * md.B, md.C * v});
    left.push_back(w);
  }
  LssModel::Couplings ks;
  for (Mode a = 1; a <= model.num_modes(); ++a)
    for (Mode b = 1; b <= model.num_modes(); ++b)
      if (a != b) ks[{a, b}] = left[static_cast<std::size_t>(b - 1)] * model.coupling(a, b) * v;
  res.model = LssModel(std::move(modes), std::move(ks), model.inputs(), model.outputs());
  return res;
}

}  // namespace lssmor
