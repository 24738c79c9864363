#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace lssmor;
using namespace testing_support;

TEST_CASE("evaporator transfer values", "[transfer]") {
  const auto m = evaporator();
  CHECK(std::abs(eval_transfer(m, Word{{1}, {2.0}}) - Complex(0.2)) < 1e-15);
  CHECK(std::abs(eval_transfer(m, Word{{2, 1}, {0.0, 2.0}}) - Complex(0.4)) < 1e-15);
}

TEST_CASE("factorized evaluation agrees with the explicit-inverse oracle", "[transfer]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = random_model(rng, {3, 4, 2});
    for (const auto& w : random_words(rng, 3, 4)) CHECK(rel_err(eval_transfer(m, w), oracle_transfer(m, w)) < 1e-10);
  }
}

TEST_CASE("matrix-valued evaluation for multi-port models", "[transfer]") {
  std::mt19937_64 rng(4);
  auto a = random_mode(rng, 3, 2, 2, false), b = random_mode(rng, 3, 2, 2, false);
  const LssModel m({a, b});
  const Word w{{1, 2}, {Complex(1, 1), Complex(2, -1)}};
  const MatrixXcd h = eval_transfer_matrix(m, w);
  const MatrixXcd expect = a.C.cast<Complex>() * (w.points[0] * a.E - a.A).cast<Complex>().inverse() *
                           (w.points[1] * b.E - b.A).cast<Complex>().inverse() * b.B.cast<Complex>();
  CHECK(h.rows() == 2);
  CHECK(linalg::rel_diff(h, expect) < 1e-12);
  CHECK_THROWS_AS(eval_transfer(m, w), DimensionMismatch);
}

TEST_CASE("singular resolvent reports its position in the word", "[transfer]") {
  const auto m = evaporator();
  try {
    eval_transfer(m, Word{{1, 2, 1}, {2.0, 3.0, -0.5}});
    FAIL("expected SingularResolvent");
  } catch (const SingularResolvent& e) {
    CHECK(e.mode() == 1);
    CHECK(e.level() == 2);
    CHECK(e.point() == Complex(-0.5));
  }
}

TEST_CASE("required words", "[transfer]") {
  CHECK(required_words(evaporator_tuples()).size() == 16);
  // k = 3 per mode in a single group: 2 (k^2 + 2k) words
  std::vector<Complex> r, l;
  for (int i = 0; i < 6; ++i) {
    r.emplace_back(1.0 + i);
    l.emplace_back(10.0 + i);
  }
  CHECK(required_words(build_two_mode(r, l, {3}, {3})).size() == 30);
}

TEST_CASE("sampling covers exactly the required words", "[transfer]") {
  const auto s = sample_for_loewner(evaporator(), evaporator_tuples());
  CHECK(s.size() == 16);
  CHECK(s.source == "model");
  for (const auto& [w, v] : s.values) CHECK(rel_err(v, oracle_transfer(evaporator(), w)) < 1e-14);
  CHECK_THROWS_AS(s.at(Word{{1}, {99.0}}), MissingSample);
}

TEST_CASE("sample CSV round trip is exact", "[transfer]") {
  std::mt19937_64 rng(5);
  const auto m = random_model(rng, {3, 3});
  const auto t = build_two_mode(random_points(rng, 4), random_points(rng, 4, 5.0), {2}, {2});
  const auto s = sample_for_loewner(m, t);
  const auto text = io::samples_to_csv(s);
  const auto back = io::samples_from_csv(text);
  REQUIRE(back.size() == s.size());
  for (const auto& [w, v] : s.values) CHECK(back.at(w) == v);
  CHECK(io::samples_to_csv(back) == text);
}

TEST_CASE("malformed sample CSV reports line numbers", "[transfer]") {
  const std::string head = std::string(io::kSampleHeader) + "\n";
  auto line_of = [](const std::string& text) {
    try {
      io::samples_from_csv(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("bogus\n") == 1);
  CHECK(line_of(head + "1,2,0,1,0\n1,2,0\n") == 3);
  CHECK(line_of(head + "1-2,2,0;0,1,0\n") == 2);
  CHECK(line_of(head + "1,abc,0,1,0\n") == 2);
  CHECK(line_of(head + "1,2,0,1,0\n1,2,0,5,0\n") == 3);
  CHECK(line_of(head + "0,2,0,1,0\n") == 2);
  CHECK_THROWS_AS(io::samples_from_csv(""), ParseError);
}
