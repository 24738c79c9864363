#pragma once

#include "lssmor/lssmor.hpp"

#include <random>

namespace testing_support {

using namespace lssmor;

inline LssModel evaporator() {
  MatrixXd a1(2, 2), a2(2, 2), b(2, 1), c(1, 2);
  a1 << -1, 0, 0, -0.5;
  a2 << -1, 2, -0.5, -0.5;
  b << 0, 1;
  c << 0.5, 0.5;
  const MatrixXd i = MatrixXd::Identity(2, 2);
  return LssModel({{i, a1, b, c}, {i, a2, b, c}}, {{{1, 2}, i}, {{2, 1}, i}});
}

inline TupleSets evaporator_tuples() { return build_two_mode({-1.5, 1, -2, 1.5}, {2, 0, 0.5, -0.5}, {2}, {2}); }

/// Stable random mode: E well conditioned, E^{-1} A with spectrum in Re < -0.3.
inline ModeMatrices<double> random_mode(std::mt19937_64& rng, int n, int m, int p, bool identity_e) {
  std::normal_distribution<double> g(0.0, 1.0);
  auto rnd = [&](int r, int c) {
    MatrixXd x(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) x(i, j) = g(rng);
    return x;
  };
  MatrixXd e = identity_e ? MatrixXd::Identity(n, n) : MatrixXd(MatrixXd::Identity(n, n) + 0.2 * rnd(n, n));
  MatrixXd core = rnd(n, n) / std::sqrt(static_cast<double>(n));
  const double radius = Eigen::JacobiSVD<MatrixXd>(core).singularValues()(0);
  core -= (radius + 0.3) * MatrixXd::Identity(n, n);
  return {e, e * core, rnd(n, m), rnd(p, n)};
}

/// Random stable switched system. Couplings are random where orders differ
/// and random or implicit identity otherwise.
inline LssModel random_model(std::mt19937_64& rng, const std::vector<int>& orders, bool identity_e = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ModeMatrices<double>> modes;
  for (int n : orders) modes.push_back(random_mode(rng, n, 1, 1, identity_e));
  LssModel::Couplings ks;
  const int d = static_cast<int>(orders.size());
  for (Mode a = 1; a <= d; ++a)
    for (Mode b = 1; b <= d; ++b) {
      if (a == b) continue;
      const int nf = orders[static_cast<std::size_t>(a - 1)], nt = orders[static_cast<std::size_t>(b - 1)];
      if (nf == nt && rng() % 3 == 0) continue;
      MatrixXd k(nt, nf);
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < nf; ++j) k(i, j) = g(rng) / std::sqrt(static_cast<double>(nf));
      ks[{a, b}] = k;
    }
  return LssModel(std::move(modes), std::move(ks));
}

/// Lightly damped two-mode system: each mode is a chain of 2x2 oscillator
/// blocks with natural frequencies log-spaced over [lo, hi], random B, C and
/// dense random couplings. Its Loewner matrices keep full rank over a
/// frequency grid covering the band.
inline LssModel oscillator_model(std::mt19937_64& rng, int blocks, double lo, double hi) {
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 2 * blocks;
  std::vector<ModeMatrices<double>> modes;
  for (int q = 0; q < 2; ++q) {
    MatrixXd a = MatrixXd::Zero(n, n), b(n, 1), c(1, n);
    for (int k = 0; k < blocks; ++k) {
      const double w = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * (k + 0.5 * q + 0.25) / blocks);
      const double zeta = 0.05 + 0.02 * q;
      a(2 * k, 2 * k) = a(2 * k + 1, 2 * k + 1) = -zeta * w;
      a(2 * k, 2 * k + 1) = w;
      a(2 * k + 1, 2 * k) = -w;
    }
    for (int i = 0; i < n; ++i) {
      b(i, 0) = g(rng);
      c(0, i) = g(rng);
    }
    modes.push_back({MatrixXd::Identity(n, n), a, b, c});
  }
  LssModel::Couplings ks;
  for (const Switch key : {Switch{1, 2}, Switch{2, 1}}) {
    MatrixXd k(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k(i, j) = g(rng) / std::sqrt(static_cast<double>(n));
    ks[key] = k;
  }
  return LssModel(std::move(modes), std::move(ks));
}

/// Two-mode tuples over `distinct` points per side on the imaginary axis,
/// closed under conjugation. Each group of depth two repeats its two base
/// points so both modes are sampled at every point; each group is followed
/// by its mirror image.
inline TupleSets redundant_conjugate_tuples(int distinct, double lo, double hi) {
  const auto grid = generate_points(distinct, lo, hi, Spacing::logarithmic, Axis::imaginary);
  std::vector<Complex> base_r, base_l, r, l;
  for (std::size_t i = 0; i < grid.size(); ++i) (i % 2 ? base_l : base_r).push_back(grid[i]);
  auto expand = [](const std::vector<Complex>& base, std::vector<Complex>& out) {
    for (std::size_t s = 0; s + 1 < base.size(); s += 2)
      for (bool mirror : {false, true}) {
        const Complex a = mirror ? std::conj(base[s]) : base[s];
        const Complex b = mirror ? std::conj(base[s + 1]) : base[s + 1];
        out.insert(out.end(), {a, a, b, b});
      }
  };
  expand(base_r, r);
  expand(base_l, l);
  const std::vector<int> groups(r.size() / 4, 2);
  return build_two_mode(r, l, groups, groups);
}

/// Distinct points with positive real part (away from any stable spectrum).
inline std::vector<Complex> random_points(std::mt19937_64& rng, int count, double min_re = 0.5) {
  std::uniform_real_distribution<double> re(min_re, min_re + 3.0), im(-3.0, 3.0);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) out.emplace_back(re(rng), im(rng));
  return out;
}

/// Oracle: transfer value via explicit inverses multiplied left to right.
template <typename Scalar>
Complex oracle_transfer(const BasicLssModel<Scalar>& model, const Word& w) {
  MatrixXcd acc = model.mode(w.modes[0]).C.template cast<Complex>();
  for (std::size_t i = 0; i < w.length(); ++i) {
    const auto& md = model.mode(w.modes[i]);
    const MatrixXcd pencil = w.points[i] * md.E.template cast<Complex>() - md.A.template cast<Complex>();
    acc = acc * pencil.inverse();
    if (i + 1 < w.length()) acc = acc * model.coupling(w.modes[i + 1], w.modes[i]).template cast<Complex>();
  }
  acc = acc * model.mode(w.modes.back()).B.template cast<Complex>();
  return acc(0, 0);
}

/// All words over `num_modes` modes of length 1..max_len without repeated
/// consecutive modes, each position at a random point.
inline std::vector<Word> random_words(std::mt19937_64& rng, int num_modes, int max_len, bool allow_repeat = false) {
  std::vector<std::vector<Mode>> seqs{{}};
  std::vector<Word> out;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<Mode>> next;
    for (const auto& s : seqs)
      for (Mode q = 1; q <= num_modes; ++q) {
        if (!allow_repeat && !s.empty() && s.back() == q) continue;
        auto t = s;
        t.push_back(q);
        next.push_back(t);
      }
    for (const auto& s : next) {
      const auto pts = random_points(rng, static_cast<int>(s.size()));
      out.push_back(Word{s, pts});
    }
    seqs = std::move(next);
  }
  return out;
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_rel_entry_diff(const MatrixXcd& a, const MatrixXcd& b) { return linalg::rel_diff(a, b); }

/// Largest relative deviation between every matrix of two Loewner data sets.
inline double data_distance(const LoewnerData& a, const LoewnerData& b) {
  double m = 0.0;
  for (Mode q = 1; q <= a.num_modes(); ++q) {
    m = std::max(m, linalg::rel_diff(a.L(q), b.L(q)));
    m = std::max(m, linalg::rel_diff(a.Ls(q), b.Ls(q)));
    m = std::max(m, linalg::rel_diff(a.V(q), b.V(q)));
    m = std::max(m, linalg::rel_diff(a.W(q), b.W(q)));
  }
  for (const auto& [key, x] : a.coupling_data) m = std::max(m, linalg::rel_diff(x, b.coupling_data.at(key)));
  return m;
}

/// Example configuration with three modes and depth three.
inline TupleSets three_mode_tuples(const std::vector<Complex>& right, const std::vector<Complex>& left) {
  return build_cyclic(3, right, left, 3);
}

}  // namespace testing_support
