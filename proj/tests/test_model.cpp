#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace lssmor;
using namespace testing_support;

TEST_CASE("evaporator model is valid", "[model]") {
  CHECK(validate(evaporator()).empty());
  CHECK(evaporator().num_modes() == 2);
  CHECK(evaporator().order(2) == 2);
}

TEST_CASE("validation reports a singular descriptor matrix", "[model]") {
  auto m = evaporator();
  auto modes = m.modes();
  modes[0].E << 1, 1, 1, 1;
  const LssModel bad(modes, m.stored_couplings());
  const auto v = validate(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "E_1 singular");
  CHECK_THROWS_AS(require_valid(bad), InvalidModel);
}

TEST_CASE("validation reports identity coupling between unequal orders", "[model]") {
  std::mt19937_64 rng(3);
  const LssModel m({random_mode(rng, 2, 1, 1, true), random_mode(rng, 3, 1, 1, true)});
  const auto v = validate(m);
  REQUIRE(v.size() == 2);
  for (const auto& x : v) CHECK(x.message == "default identity coupling needs equal dims");
  CHECK_THROWS_AS(m.coupling(1, 2), DimensionMismatch);
}

TEST_CASE("validation catches shape and index errors", "[model]") {
  auto m = evaporator();
  auto ks = m.stored_couplings();
  ks[{1, 1}] = MatrixXd::Identity(2, 2);
  ks[{1, 3}] = MatrixXd::Identity(2, 2);
  CHECK(validate(LssModel(m.modes(), ks)).size() == 2);
  auto modes = m.modes();
  modes[1].B = MatrixXd::Ones(3, 1);
  CHECK_FALSE(validate(LssModel(modes, m.stored_couplings(), 1, 1)).empty());
  CHECK_FALSE(validate(LssModel(std::vector<ModeMatrices<double>>{})).empty());
}

TEST_CASE("missing couplings resolve to identity", "[model]") {
  const LssModel m(evaporator().modes());
  CHECK(m.coupling(1, 2) == MatrixXd::Identity(2, 2));
  CHECK_FALSE(m.has_stored_coupling(1, 2));
}

TEST_CASE("resolvent solve matches a hand computation", "[model]") {
  // (2I - diag(-1,-1/2))^{-1} [0;1] = [0; 0.4]
  const MatrixXcd x = resolvent_solve(evaporator(), 1, 2.0, MatrixXcd(VectorXcd::Unit(2, 1)));
  CHECK(std::abs(x(0, 0)) == 0.0);
  CHECK(std::abs(x(1, 0) - 0.4) <= 1e-15);
}

TEST_CASE("resolvent at an eigenvalue is reported as singular", "[model]") {
  try {
    resolvent_solve(evaporator(), 1, -0.5, MatrixXcd(VectorXcd::Unit(2, 1)));
    FAIL("expected SingularResolvent");
  } catch (const SingularResolvent& e) {
    CHECK(e.mode() == 1);
    CHECK(e.point() == Complex(-0.5));
  }
}

TEST_CASE("left resolvent solve is the transpose problem", "[model]") {
  std::mt19937_64 rng(11);
  const auto m = random_model(rng, {4, 4});
  const Resolvent<double> r(m, 2, Complex(0.7, 0.4));
  const MatrixXcd rhs = MatrixXcd::Random(1, 4);
  const MatrixXcd z = r.solve_left(rhs);
  const auto& md = m.mode(2);
  const MatrixXcd pencil = Complex(0.7, 0.4) * md.E.cast<Complex>() - md.A.cast<Complex>();
  CHECK((z * pencil - rhs).norm() <= 1e-12);
}

TEST_CASE("equivalence transforms keep transfer values", "[model]") {
  std::mt19937_64 rng(5);
  const auto m = random_model(rng, {3, 2});
  std::vector<MatrixXd> zl{MatrixXd::Random(3, 3) + 3 * MatrixXd::Identity(3, 3),
                           MatrixXd::Random(2, 2) + 3 * MatrixXd::Identity(2, 2)};
  std::vector<MatrixXd> zr{MatrixXd::Random(3, 3) + 3 * MatrixXd::Identity(3, 3),
                           MatrixXd::Random(2, 2) + 3 * MatrixXd::Identity(2, 2)};
  const auto t = equivalence_transform(m, zl, zr);
  for (const auto& w : random_words(rng, 2, 3)) CHECK(rel_err(eval_transfer(t, w), eval_transfer(m, w)) <= 1e-10);
}

TEST_CASE("singular equivalence transforms are rejected", "[model]") {
  const auto m = evaporator();
  std::vector<MatrixXd> z{MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(equivalence_transform(m, z, z), SingularTransform);
}

TEST_CASE("model JSON round trip is exact", "[model]") {
  std::mt19937_64 rng(9);
  const auto m = random_model(rng, {3, 2, 3});
  const auto back = io::model_from_json(io::parse_json(io::dump(io::model_to_json(m)), "model"));
  REQUIRE(back.num_modes() == 3);
  for (Mode q = 1; q <= 3; ++q) {
    CHECK(back.mode(q).A == m.mode(q).A);
    CHECK(back.mode(q).E == m.mode(q).E);
    CHECK(back.mode(q).B == m.mode(q).B);
    CHECK(back.mode(q).C == m.mode(q).C);
  }
  CHECK(back.stored_couplings().size() == m.stored_couplings().size());
  for (const auto& [k, v] : m.stored_couplings()) CHECK(back.stored_couplings().at(k) == v);
}

TEST_CASE("model JSON parsing reports malformed input", "[model]") {
  CHECK_THROWS_AS(io::model_from_json(io::parse_json(R"({"modes": [{"A": [[1, 2], [3]]}]})", "m")), ParseError);
  CHECK_THROWS_AS(io::parse_json("{", "m"), ParseError);
  CHECK_THROWS_AS(io::model_from_json(io::parse_json(R"({"D": 3, "modes": []})", "m")), ParseError);
}

TEST_CASE("complex models convert back to real within tolerance", "[model]") {
  const auto c = to_complex(evaporator());
  CHECK(max_abs_imag(c) == 0.0);
  const auto r = to_real(c);
  CHECK(r.mode(2).A == evaporator().mode(2).A);
  auto modes = c.modes();
  modes[0].A(0, 0) += Complex(0, 1e-6);
  CHECK_THROWS_AS(to_real(ComplexLssModel(modes, c.stored_couplings(), 1, 1)), DegenerateData);
}
