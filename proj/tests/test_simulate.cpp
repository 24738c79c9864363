#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace lssmor;
using namespace testing_support;

namespace {

LssModel first_order(double pole) {
  return LssModel({{MatrixXd::Identity(1, 1), MatrixXd::Constant(1, 1, pole), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1)}});
}

}  // namespace

TEST_CASE("step response of a first-order lag", "[simulate]") {
  const auto tr = simulate(first_order(-1.0), SwitchingSignal{{{1, 1.0}}}, inputs::step(1.0));
  CHECK(tr.t.size() == 1001);
  CHECK(tr.t.back() == 1.0);
  CHECK(std::abs(tr.y(1000, 0) - (1.0 - std::exp(-1.0))) <= 1e-6);
  CHECK(tr.switch_residuals.empty());
}

TEST_CASE("responses are linear in the input", "[simulate]") {
  std::mt19937_64 rng(51);
  const auto m = random_model(rng, {3, 4});
  const auto sig = SwitchingSignal::random(2, 2.0, 5, 7);
  const auto a = simulate(m, sig, inputs::step(1.0));
  const auto b = simulate(m, sig, inputs::sine(1.0, 0.7));
  const auto c = simulate(m, sig, [](double t) { return 2.0 + 3.0 * std::sin(2.0 * std::numbers::pi * 0.7 * t); });
  CHECK(linalg::rel_diff(c.y, MatrixXd(2.0 * a.y + 3.0 * b.y)) < 1e-12);
  CHECK(a.switch_residuals.size() == sig.segments.size() - 1);
  for (double r : a.switch_residuals) CHECK(r < 1e-12);
}

TEST_CASE("switching between identical identity-coupled modes changes nothing", "[simulate]") {
  std::mt19937_64 rng(52);
  const auto md = random_mode(rng, 3, 1, 1, true);
  const LssModel twin({md, md});
  const auto a = simulate(twin, SwitchingSignal{{{1, 0.3}, {2, 0.7}}}, inputs::sine(1.0, 1.0));
  const auto b = simulate(LssModel({md}), SwitchingSignal{{{1, 1.0}}}, inputs::sine(1.0, 1.0));
  REQUIRE(a.t.size() == b.t.size());
  CHECK(linalg::rel_diff(a.y, b.y) < 1e-12);
  CHECK(std::find(a.t.begin(), a.t.end(), 0.3) != a.t.end());
  CHECK(a.mode[300] == 1);
  CHECK(a.mode[301] == 2);
}

TEST_CASE("grid hits every switch instant", "[simulate]") {
  const auto sig = SwitchingSignal{{{1, 0.00125}, {2, 0.0105}, {1, 0.002}}};
  const auto tr = simulate(evaporator(), sig, inputs::step(1.0));
  double t = 0.0;
  for (const auto& [q, dwell] : sig.segments) {
    t += dwell;
    CHECK(std::any_of(tr.t.begin(), tr.t.end(), [&](double x) { return std::abs(x - t) < 1e-15; }));
  }
  for (std::size_t i = 1; i < tr.t.size(); ++i) CHECK(tr.t[i] - tr.t[i - 1] <= 1e-3 + 1e-15);
}

TEST_CASE("divergent states are reported", "[simulate]") {
  try {
    simulate(first_order(50.0), SwitchingSignal{{{1, 10.0}}}, inputs::step(1.0));
    FAIL("expected NonFiniteState");
  } catch (const NonFiniteState&) {
  }
}

TEST_CASE("switching signal validation", "[simulate]") {
  const auto m = evaporator();
  CHECK_THROWS_AS(simulate(m, SwitchingSignal{}, inputs::zero()), InvalidSignal);
  CHECK_THROWS_AS(simulate(m, SwitchingSignal{{{3, 1.0}}}, inputs::zero()), InvalidSignal);
  CHECK_THROWS_AS(simulate(m, SwitchingSignal{{{1, -1.0}}}, inputs::zero()), InvalidSignal);
  CHECK_THROWS_AS(simulate(m, SwitchingSignal{{{1, 0.0}}}, inputs::zero()), InvalidSignal);
  const auto r = SwitchingSignal::random(3, 4.0, 6, 99);
  CHECK(std::abs(r.horizon() - 4.0) < 1e-12);
  for (std::size_t i = 1; i < r.segments.size(); ++i) CHECK(r.segments[i].first != r.segments[i - 1].first);
  const auto again = SwitchingSignal::random(3, 4.0, 6, 99);
  CHECK(again.segments == r.segments);
}

TEST_CASE("frequency response", "[simulate]") {
  const auto fr = freq_response(evaporator(), 1, {1.0});
  CHECK(std::abs(fr.values[0] - Complex(0.2, -0.4)) < 1e-15);
  const auto grid = log_grid(0.01, 100.0, 5);
  CHECK(grid.front() == 0.01);
  CHECK(std::abs(grid[2] - 1.0) < 1e-12);
  CHECK(std::abs(grid.back() - 100.0) < 1e-10);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), ConfigError);
}

TEST_CASE("comparing a model with itself gives zero error", "[simulate]") {
  const auto m = evaporator();
  const auto c = compare(m, m, SwitchingSignal{{{1, 0.5}, {2, 0.5}}}, inputs::step(1.0), log_grid(0.1, 10, 7));
  CHECK(c.freq.size() == 2);
  CHECK(c.freq_summary.max == 0.0);
  CHECK(c.time_abs_summary.max == 0.0);
  CHECK(c.time_rel_summary.l2 == 0.0);
}

TEST_CASE("error summaries", "[simulate]") {
  const auto s = summarize({3.0, 4.0});
  CHECK(s.max == 4.0);
  CHECK(s.l2 == 5.0);
  const auto r = relative_errors({1.0, 1.0}, {2.0, 0.0});
  CHECK(r[0] == 0.5);
  CHECK(r[1] == 1.0 / (1e-12 * 2.0));
}

TEST_CASE("parsing inputs and signals", "[simulate]") {
  CHECK(io::parse_input("zero")(1.0) == 0.0);
  CHECK(io::parse_input("step:2.5")(0.3) == 2.5);
  CHECK(std::abs(io::parse_input("sin:2,0.25")(1.0) - 2.0) < 1e-15);
  CHECK_THROWS_AS(io::parse_input("ramp:1"), ConfigError);
  CHECK_THROWS_AS(io::parse_input("step:x"), ConfigError);
  const auto s = io::parse_signal("1:0.5,2:1.5", 2, 0);
  CHECK(s.segments == std::vector<std::pair<Mode, double>>{{1, 0.5}, {2, 1.5}});
  CHECK(io::parse_signal("random:3,4", 2, 5).segments == SwitchingSignal::random(2, 3.0, 4, 5).segments);
  CHECK_THROWS_AS(io::parse_signal("1-0.5", 2, 0), ConfigError);
  CHECK_THROWS_AS(io::parse_signal("3:1", 2, 0), InvalidSignal);
}
