#pragma once

#include "lssmor/transfer.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace lssmor {

/// Ordered (mode, dwell time) pairs; the system starts at t = 0 in the
/// first mode and switches when each dwell time elapses.
struct SwitchingSignal {
  std::vector<std::pair<Mode, double>> segments;

  double horizon() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.second;
    return t;
  }

  void validate(int num_modes) const {
    if (segments.empty()) throw InvalidSignal("switching signal has no segments");
    for (const auto& [q, dwell] : segments) {
      if (q < 1 || q > num_modes) throw InvalidSignal("switching signal uses unknown mode " + std::to_string(q));
      if (!(dwell > 0.0) || !std::isfinite(dwell)) throw InvalidSignal("dwell times must be positive and finite");
    }
  }

  /// `count` segments with random modes (no immediate repeats when more
  /// than one mode exists) and random switch instants over [0, horizon].
  static SwitchingSignal random(int num_modes, double horizon, int count, std::uint64_t seed) {
    if (count < 1 || !(horizon > 0.0)) throw InvalidSignal("random signal needs positive count and horizon");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> cuts{0.0, horizon};
    for (int i = 1; i < count; ++i) cuts.push_back(horizon * unit(rng));
    std::sort(cuts.begin(), cuts.end());
    SwitchingSignal s;
    Mode prev = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double dwell = cuts[i + 1] - cuts[i];
      if (dwell <= 0.0) continue;
      Mode q = 1 + static_cast<Mode>(rng() % static_cast<std::uint64_t>(num_modes));
      if (num_modes > 1)
        while (q == prev) q = 1 + static_cast<Mode>(rng() % static_cast<std::uint64_t>(num_modes));
      s.segments.emplace_back(q, dwell);
      prev = q;
    }
    return s;
  }
};

using InputFunction = std::function<double(double)>;

namespace inputs {

inline InputFunction zero() {
  return [](double) { return 0.0; };
}
inline InputFunction step(double amplitude) {
  return [amplitude](double t) { return t >= 0.0 ? amplitude : 0.0; };
}
/// amplitude * sin(2 pi f t)
inline InputFunction sine(double amplitude, double frequency) {
  return [amplitude, frequency](double t) { return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t); };
}

}  // namespace inputs

struct Trajectory {
  std::vector<double> t;
  std::vector<Mode> mode;
  MatrixXd y;  // samples x outputs
  std::vector<double> switch_residuals;  // |E x+ - K x-| / max(|K x-|, 1) per switch
};

struct SimOptions {
  double max_step = 1e-3;
  double blowup = 1e150;
};

/// Fixed-step RK4 on x' = E^{-1}(A x + B u) from x(0) = 0. Each dwell
/// interval is split into equal steps no longer than `max_step`, so every
/// switch instant is a grid point (it belongs to the interval it closes).
/// At a switch from q to q' the state jumps through E_{q'} x+ = K_{q->q'} x-.
inline Trajectory simulate(const LssModel& model, const SwitchingSignal& signal, const InputFunction& u,
                           const SimOptions& opts = {}) {
  require_valid(model);
  signal.validate(model.num_modes());
  if (!(opts.max_step > 0.0)) throw ConfigError("step size must be positive");

  const int d = model.num_modes();
  std::vector<Eigen::PartialPivLU<MatrixXd>> e_lu;
  std::vector<MatrixXd> a_t, b_t;
  for (Mode q = 1; q <= d; ++q) {
    e_lu.emplace_back(model.mode(q).E);
    a_t.push_back(e_lu.back().solve(model.mode(q).A));
    b_t.push_back(e_lu.back().solve(model.mode(q).B));
  }

  std::size_t total_steps = 1;
  for (const auto& seg : signal.segments)
    total_steps += static_cast<std::size_t>(std::ceil(seg.second / opts.max_step - 1e-9));
  Trajectory tr;
  tr.t.reserve(total_steps);
  tr.mode.reserve(total_steps);
  std::vector<VectorXd> ys;
  ys.reserve(total_steps);

  const Mode first = signal.segments.front().first;
  VectorXd x = VectorXd::Zero(model.order(first));
  auto record = [&](double t, Mode q, const VectorXd& state) {
    if (!state.allFinite() || state.cwiseAbs().maxCoeff() > opts.blowup) throw NonFiniteState(t);
    tr.t.push_back(t);
    tr.mode.push_back(q);
    ys.push_back(model.mode(q).C * state);
  };
  record(0.0, first, x);

  double t0 = 0.0;
  Mode prev = first;
  for (std::size_t seg = 0; seg < signal.segments.size(); ++seg) {
    const auto [q, dwell] = signal.segments[seg];
    if (seg > 0) {
      const VectorXd kx = model.coupling(prev, q) * x;
      x = e_lu[static_cast<std::size_t>(q - 1)].solve(kx);
      tr.switch_residuals.push_back((model.mode(q).E * x - kx).norm() / std::max(kx.norm(), 1.0));
    }
    const auto steps = std::max<long>(1, static_cast<long>(std::ceil(dwell / opts.max_step - 1e-9)));
    const double h = dwell / static_cast<double>(steps);
    const MatrixXd& a = a_t[static_cast<std::size_t>(q - 1)];
    const MatrixXd& b = b_t[static_cast<std::size_t>(q - 1)];
    auto f = [&](double t, const VectorXd& s) -> VectorXd { return a * s + b * u(t); };
    for (long i = 0; i < steps; ++i) {
      const double t = t0 + h * static_cast<double>(i);
      const VectorXd k1 = f(t, x);
      const VectorXd k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
      const VectorXd k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
      const VectorXd k4 = f(t + h, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double tn = i + 1 == steps ? t0 + dwell : t0 + h * static_cast<double>(i + 1);
      record(tn, q, x);
    }
    t0 += dwell;
    prev = q;
  }
  tr.y.resize(static_cast<Eigen::Index>(ys.size()), model.outputs());
  for (std::size_t i = 0; i < ys.size(); ++i) tr.y.row(static_cast<Eigen::Index>(i)) = ys[i].transpose();
  return tr;
}

struct FreqResponse {
  Mode mode = 1;
  std::vector<double> omega;
  std::vector<Complex> values;
};

/// H_q(j omega) on the given grid.
template <typename Scalar>
FreqResponse freq_response(const BasicLssModel<Scalar>& model, Mode q, const std::vector<double>& omegas) {
  FreqResponse fr{q, omegas, {}};
  for (double w : omegas) fr.values.push_back(eval_transfer(model, Word{{q}, {Complex(0.0, w)}}));
  return fr;
}

inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw ConfigError("log grid needs 0 < lo <= hi and count >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(i == 0 ? lo : i == count - 1 ? hi : std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
  }
  return out;
}

/// Relative error with the denominator floored at max(|ref|, 1e-12 max|ref|).
inline std::vector<double> relative_errors(const std::vector<double>& abs_err, const std::vector<double>& ref_mag) {
  double peak = 0.0;
  for (double r : ref_mag) peak = std::max(peak, r);
  const double floor = peak > 0.0 ? 1e-12 * peak : 1.0;
  std::vector<double> out;
  for (std::size_t i = 0; i < abs_err.size(); ++i) out.push_back(abs_err[i] / std::max(ref_mag[i], floor));
  return out;
}

struct ErrorSummary {
  double max = 0.0;
  double l2 = 0.0;  // root of the sum of squares
};

inline ErrorSummary summarize(const std::vector<double>& e) {
  ErrorSummary s;
  for (double x : e) {
    s.max = std::max(s.max, x);
    s.l2 += x * x;
  }
  s.l2 = std::sqrt(s.l2);
  return s;
}

struct FreqComparison {
  Mode mode = 1;
  std::vector<double> omega;
  std::vector<Complex> reference, candidate;
  std::vector<double> rel_error;  // |H_ref - H_cand| / floored |H_ref|
};

struct TimeComparison {
  std::vector<double> t;
  std::vector<Mode> mode;
  std::vector<double> reference, candidate;
  std::vector<double> abs_error, rel_error;
};

struct Comparison {
  std::vector<FreqComparison> freq;  // one per mode
  TimeComparison time;
  ErrorSummary freq_summary, time_abs_summary, time_rel_summary;
};

/// Frequency- and time-domain comparison of a candidate against a
/// reference model. Both models must be single-input single-output and
/// share the mode count.
inline Comparison compare(const LssModel& reference, const LssModel& candidate, const SwitchingSignal& signal,
                          const InputFunction& u, const std::vector<double>& omegas, const SimOptions& opts = {}) {
  if (reference.num_modes() != candidate.num_modes()) throw DimensionMismatch("models differ in mode count");
  if (reference.outputs() != 1 || candidate.outputs() != 1 || reference.inputs() != 1 || candidate.inputs() != 1)
    throw DimensionMismatch("comparison needs single-input single-output models");
  Comparison c;
  std::vector<double> all_freq;
  for (Mode q = 1; q <= reference.num_modes(); ++q) {
    const auto a = freq_response(reference, q, omegas);
    const auto b = freq_response(candidate, q, omegas);
    FreqComparison fc{q, omegas, a.values, b.values, {}};
    std::vector<double> err, mag;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      err.push_back(std::abs(a.values[i] - b.values[i]));
      mag.push_back(std::abs(a.values[i]));
    }
    fc.rel_error = relative_errors(err, mag);
    all_freq.insert(all_freq.end(), fc.rel_error.begin(), fc.rel_error.end());
    c.freq.push_back(std::move(fc));
  }
  c.freq_summary = summarize(all_freq);

  const Trajectory ta = simulate(reference, signal, u, opts);
  const Trajectory tb = simulate(candidate, signal, u, opts);
  auto& tc = c.time;
  tc.t = ta.t;
  tc.mode = ta.mode;
  std::vector<double> mag;
  for (std::size_t i = 0; i < ta.t.size(); ++i) {
    const double ya = ta.y(static_cast<Eigen::Index>(i), 0), yb = tb.y(static_cast<Eigen::Index>(i), 0);
    tc.reference.push_back(ya);
    tc.candidate.push_back(yb);
    tc.abs_error.push_back(std::abs(ya - yb));
    mag.push_back(std::abs(ya));
  }
  tc.rel_error = relative_errors(tc.abs_error, mag);
  c.time_abs_summary = summarize(tc.abs_error);
  c.time_rel_summary = summarize(tc.rel_error);
  return c;
}

}  // namespace lssmor
