#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

using namespace lssmor;
using namespace testing_support;

namespace {

/// Kronecker-form solution of A X + X A^T + Q = 0.
MatrixXd kron_lyapunov(const MatrixXd& a, const MatrixXd& q) {
  const auto n = a.rows();
  const MatrixXd i = MatrixXd::Identity(n, n);
  const MatrixXd op = linalg::kron(i, a) + linalg::kron(a, i);
  const VectorXd x = op.fullPivLu().solve(-linalg::vec<double>(q));
  return linalg::unvec<double>(x, n, n);
}

double lyap_residual(const MatrixXd& a, const MatrixXd& e, const MatrixXd& x, const MatrixXd& q) {
  return (a * x * e.transpose() + e * x * a.transpose() + q).norm() / q.norm();
}

}  // namespace

TEST_CASE("mode gramians solve their Lyapunov equations", "[balanced_truncation]") {
  std::mt19937_64 rng(41);
  const auto m = random_model(rng, {5, 5, 5});
  const auto g = mode_gramians(m);
  for (Mode q = 1; q <= 3; ++q) {
    const auto& md = m.mode(q);
    CHECK(lyap_residual(md.A, md.E, g.reach[q - 1], md.B * md.B.transpose()) < 1e-10);
    CHECK(lyap_residual(md.A.transpose(), md.E.transpose(), g.observe[q - 1], md.C.transpose() * md.C) < 1e-10);
    CHECK(linalg::rel_diff(g.observe_state[q - 1], md.E.transpose() * g.observe[q - 1] * md.E) < 1e-10);
    CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(g.reach[q - 1]).eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("single-mode truncation matches textbook balanced truncation", "[balanced_truncation]") {
  std::mt19937_64 rng(42);
  const auto md = random_mode(rng, 6, 1, 1, true);
  const LssModel m({md});
  const MatrixXd p = kron_lyapunov(md.A, md.B * md.B.transpose());
  const MatrixXd q = kron_lyapunov(md.A.transpose(), md.C.transpose() * md.C);
  const MatrixXd lp = p.llt().matrixL(), lq = q.llt().matrixL();
  Eigen::JacobiSVD<MatrixXd> svd(lq.transpose() * lp, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd hsv = svd.singularValues();
  // squared Hankel values are the eigenvalues of P Q
  const VectorXcd pq = Eigen::EigenSolver<MatrixXd>(p * q).eigenvalues();
  CHECK(std::abs(pq.sum() - hsv.squaredNorm()) < 1e-10 * hsv.squaredNorm());

  const auto res = bt_reduce(m, 3);
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(std::abs(res.hankel[i] - hsv[i]) < 1e-9 * hsv[0]);

  const VectorXd s = svd.singularValues().head(3).cwiseSqrt().cwiseInverse();
  const MatrixXd v = lp * svd.matrixV().leftCols(3) * s.asDiagonal();
  const MatrixXd w = s.asDiagonal() * svd.matrixU().leftCols(3).transpose() * lq.transpose();
  const LssModel oracle({{MatrixXd::Identity(3, 3), w * md.A * v, w * md.B, md.C * v}});
  for (const auto& pt : random_points(rng, 10, 0.1)) {
    const Word word{{1}, {pt}};
    CHECK(rel_err(eval_transfer(res.model, word), eval_transfer(oracle, word)) < 1e-8);
  }
  // balanced: reduced gramians are both diag(hsv)
  const auto g = mode_gramians(res.model);
  const MatrixXd target = res.hankel.head(3).asDiagonal();
  CHECK(linalg::rel_diff(g.reach[0], target) < 1e-8);
  CHECK(linalg::rel_diff(g.observe[0], target) < 1e-8);
}

TEST_CASE("full-order truncation is an equivalence", "[balanced_truncation]") {
  std::mt19937_64 rng(43);
  const auto m = random_model(rng, {4, 4});
  const auto res = bt_reduce(m, 4);
  CHECK_FALSE(res.rank_capped);
  CHECK(res.model.stored_couplings().size() == 2);
  CHECK(res.model.mode(1).E.isIdentity());
  for (const auto& w : random_words(rng, 2, 4)) CHECK(rel_err(eval_transfer(res.model, w), eval_transfer(m, w)) < 1e-8);
}

TEST_CASE("reduced order is capped at the numerical rank", "[balanced_truncation]") {
  MatrixXd a(2, 2), b(2, 1), c(1, 2);
  a << -1, 0, 0, -2;
  b << 1, 0;
  c << 1, 1;
  const LssModel m({{MatrixXd::Identity(2, 2), a, b, c}});
  const auto res = bt_reduce(m, 2);
  CHECK(res.rank_capped);
  CHECK(res.rank_used == 1);
  CHECK(res.model.order(1) == 1);
  CHECK(std::abs(eval_transfer(res.model, Word{{1}, {1.0}}) - Complex(0.5)) < 1e-12);
}

TEST_CASE("balanced truncation rejects unsuitable models", "[balanced_truncation]") {
  std::mt19937_64 rng(44);
  CHECK_THROWS_AS(bt_reduce(random_model(rng, {2, 3}), 1), DimensionMismatch);
  auto md = random_mode(rng, 2, 1, 1, true);
  md.A(0, 0) = 5.0;
  md.A(1, 0) = 0.0;
  try {
    bt_reduce(LssModel({random_mode(rng, 2, 1, 1, true), md}), 1);
    FAIL("expected UnstableMode");
  } catch (const UnstableMode& e) {
    CHECK(e.mode() == 2);
  }
  CHECK_THROWS_AS(bt_reduce(random_model(rng, {3, 3}), 4), RankTooLarge);
  CHECK_THROWS_AS(bt_reduce(random_model(rng, {3, 3}), 0), RankTooLarge);
}
