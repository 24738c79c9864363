#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace lssmor;
using namespace testing_support;

TEST_CASE("Sylvester solver agrees with the Kronecker formulation", "[linalg]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial, m = 1 + trial % 3;
    const MatrixXcd a = MatrixXcd::Random(n, n) - 3.0 * MatrixXcd::Identity(n, n);
    const MatrixXcd b = MatrixXcd::Random(m, m) - 3.0 * MatrixXcd::Identity(m, m);
    const MatrixXcd c = MatrixXcd::Random(n, m);
    const MatrixXcd x = linalg::solve_sylvester(a, b, c);
    const MatrixXcd op = linalg::kron(MatrixXcd::Identity(m, m), a) + linalg::kron(b.transpose(), MatrixXcd::Identity(n, n));
    const VectorXcd oracle = op.fullPivLu().solve(linalg::vec<Complex>(c));
    CHECK((linalg::vec<Complex>(x) - oracle).norm() <= 1e-12 * oracle.norm());
  }
}

TEST_CASE("scalar Lyapunov equation has the closed-form solution", "[linalg]") {
  MatrixXd a(1, 1), q(1, 1);
  a << -1.0;
  q << 1.0;
  CHECK(linalg::solve_lyapunov(a, q)(0, 0) == Catch::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("Sylvester solver rejects a singular operator", "[linalg]") {
  MatrixXcd a(1, 1), b(1, 1), c(1, 1);
  a << 1.0;
  b << -1.0;
  c << 1.0;
  CHECK_THROWS_AS(linalg::solve_sylvester(a, b, c), Error);
}

TEST_CASE("numerical rank counts values above the relative cutoff", "[linalg]") {
  VectorXd s(4);
  s << 1.0, 1e-3, 1e-13, 0.0;
  CHECK(linalg::numerical_rank(s, 1e-12) == 2);
  CHECK(linalg::numerical_rank(s, 1e-14) == 3);
  CHECK(linalg::numerical_rank(VectorXd::Zero(3), 1e-12) == 0);
  CHECK(linalg::numerical_rank(VectorXd(), 1e-12) == 0);
}

TEST_CASE("factorization refuses numerically singular matrices", "[linalg]") {
  MatrixXd s(2, 2);
  s << 1, 2, 2, 4;
  CHECK_FALSE(linalg::try_factor<double>(s).has_value());
  CHECK(linalg::try_factor<double>(MatrixXd::Identity(3, 3)).has_value());
  CHECK(linalg::rcond<double>(s) < kSingularRcond);
}

TEST_CASE("psd factor reproduces the matrix", "[linalg]") {
  const MatrixXd f = MatrixXd::Random(4, 2);
  const MatrixXd p = f * f.transpose();
  const MatrixXd u = linalg::psd_factor(p);
  CHECK((u * u.transpose() - p).norm() <= 1e-13 * p.norm());
}
