#pragma once

#include "lssmor/linalg.hpp"

#include <map>
#include <utility>

namespace lssmor {

template <typename Scalar>
struct ModeMatrices {
  Mat<Scalar> E, A, B, C;
  int order() const { return static_cast<int>(A.rows()); }
};

/// Key of a coupling matrix: switching `from` -> `to`.
struct Switch {
  Mode from;
  Mode to;
  auto operator<=>(const Switch&) const = default;
};

/// A linear switched system. Mode q carries (E_q, A_q, B_q, C_q); the
/// coupling for the switch q1 -> q2 is an n_{q2} x n_{q1} matrix. Switches
/// without a stored coupling use the identity, which requires equal orders.
/// Instances are immutable once constructed; `validate` reports problems.
template <typename Scalar>
class BasicLssModel {
 public:
  using scalar_type = Scalar;
  using Couplings = std::map<Switch, Mat<Scalar>>;

  BasicLssModel() = default;
  BasicLssModel(std::vector<ModeMatrices<Scalar>> modes, Couplings couplings, int inputs, int outputs)
      : modes_(std::move(modes)), couplings_(std::move(couplings)), m_(inputs), p_(outputs) {}
  explicit BasicLssModel(std::vector<ModeMatrices<Scalar>> modes, Couplings couplings = {})
      : modes_(std::move(modes)), couplings_(std::move(couplings)) {
    if (!modes_.empty()) {
      m_ = static_cast<int>(modes_.front().B.cols());
      p_ = static_cast<int>(modes_.front().C.rows());
    }
  }

  int num_modes() const { return static_cast<int>(modes_.size()); }
  int inputs() const { return m_; }
  int outputs() const { return p_; }
  int order(Mode q) const { return mode(q).order(); }
  int total_order() const {
    int n = 0;
    for (const auto& md : modes_) n += md.order();
    return n;
  }

  const ModeMatrices<Scalar>& mode(Mode q) const {
    if (q < 1 || q > num_modes()) throw std::out_of_range("mode index " + std::to_string(q) + " out of range");
    return modes_[static_cast<std::size_t>(q - 1)];
  }
  const std::vector<ModeMatrices<Scalar>>& modes() const { return modes_; }
  const Couplings& stored_couplings() const { return couplings_; }

  bool has_stored_coupling(Mode from, Mode to) const { return couplings_.count({from, to}) != 0; }

  /// Coupling for the switch `from` -> `to`, resolving the implicit identity.
  Mat<Scalar> coupling(Mode from, Mode to) const {
    if (auto it = couplings_.find({from, to}); it != couplings_.end() && from != to) return it->second;
    const int nf = order(from), nt = order(to);
    if (nf != nt)
      throw DimensionMismatch("default identity coupling needs equal dims (switch " + std::to_string(from) + "->" +
                              std::to_string(to) + ")");
    return Mat<Scalar>::Identity(nt, nt);
  }

 private:
  std::vector<ModeMatrices<Scalar>> modes_;
  Couplings couplings_;
  int m_ = 0;
  int p_ = 0;
};

using LssModel = BasicLssModel<double>;
using ComplexLssModel = BasicLssModel<Complex>;

struct Violation {
  std::string location;  // e.g. "mode 1", "coupling 1->2", "model"
  std::string message;
};

template <typename Scalar>
std::vector<Violation> validate(const BasicLssModel<Scalar>& model) {
  std::vector<Violation> out;
  const int d = model.num_modes();
  if (d < 1) {
    out.push_back({"model", "at least one mode required"});
    return out;
  }
  if (model.inputs() < 1) out.push_back({"model", "input dimension must be positive"});
  if (model.outputs() < 1) out.push_back({"model", "output dimension must be positive"});

  for (Mode q = 1; q <= d; ++q) {
    const auto& md = model.mode(q);
    const std::string where = "mode " + std::to_string(q);
    const auto n = md.A.rows();
    bool shapes_ok = true;
    auto need = [&](bool ok, const std::string& msg) {
      if (!ok) {
        out.push_back({where, msg});
        shapes_ok = false;
      }
    };
    need(n >= 1, "order must be positive");
    need(md.A.cols() == n, "A_" + std::to_string(q) + " must be square");
    need(md.E.rows() == n && md.E.cols() == n, "E_" + std::to_string(q) + " must match A_" + std::to_string(q));
    need(md.B.rows() == n && md.B.cols() == model.inputs(), "B_" + std::to_string(q) + " must be n_q x m");
    need(md.C.cols() == n && md.C.rows() == model.outputs(), "C_" + std::to_string(q) + " must be p x n_q");
    if (!shapes_ok) continue;
    if (!md.E.allFinite() || !md.A.allFinite() || !md.B.allFinite() || !md.C.allFinite())
      out.push_back({where, "non-finite entries"});
    else if (!linalg::try_factor<Scalar>(md.E))
      out.push_back({where, "E_" + std::to_string(q) + " singular"});
  }

  for (const auto& [key, k] : model.stored_couplings()) {
    const std::string where = "coupling " + std::to_string(key.from) + "->" + std::to_string(key.to);
    if (key.from < 1 || key.from > d || key.to < 1 || key.to > d) {
      out.push_back({where, "mode index out of range"});
      continue;
    }
    if (key.from == key.to) {
      out.push_back({where, "self-coupling is implicitly identity and must not be stored"});
      continue;
    }
    if (k.rows() != model.mode(key.to).A.rows() || k.cols() != model.mode(key.from).A.rows())
      out.push_back({where, "coupling must be n_to x n_from"});
    else if (!k.allFinite())
      out.push_back({where, "non-finite entries"});
  }

  for (Mode a = 1; a <= d; ++a)
    for (Mode b = 1; b <= d; ++b) {
      if (a == b || model.has_stored_coupling(a, b)) continue;
      if (model.mode(a).A.rows() != model.mode(b).A.rows())
        out.push_back({"coupling " + std::to_string(a) + "->" + std::to_string(b),
                       "default identity coupling needs equal dims"});
    }
  return out;
}

template <typename Scalar>
void require_valid(const BasicLssModel<Scalar>& model) {
  const auto v = validate(model);
  if (v.empty()) return;
  std::string msg;
  for (const auto& x : v) msg += (msg.empty() ? "" : "; ") + x.location + ": " + x.message;
  throw InvalidModel(msg);
}

/// Factorization of s E_q - A_q, reusable for several right-hand sides.
template <typename Scalar>
class Resolvent {
 public:
  Resolvent(const BasicLssModel<Scalar>& model, Mode q, Complex s) : mode_(q), point_(s) {
    const auto& md = model.mode(q);
    MatrixXcd pencil = s * md.E.template cast<Complex>() - md.A.template cast<Complex>();
    auto lu = linalg::try_factor<Complex>(pencil);
    if (!lu) throw SingularResolvent(q, s);
    lu_ = std::move(*lu);
  }
  MatrixXcd solve(const MatrixXcd& rhs) const { return lu_.solve(rhs); }
  /// Returns z with z (sE - A) = rhs.
  MatrixXcd solve_left(const MatrixXcd& rhs) const {
    const MatrixXcd z = lu_.transpose().solve(MatrixXcd(rhs.transpose()));
    return z.transpose();
  }

 private:
  Mode mode_;
  Complex point_;
  Eigen::PartialPivLU<MatrixXcd> lu_;
};

/// (s E_q - A_q)^{-1} rhs via a factorized solve.
template <typename Scalar>
MatrixXcd resolvent_solve(const BasicLssModel<Scalar>& model, Mode q, Complex s, const MatrixXcd& rhs) {
  return Resolvent<Scalar>(model, q, s).solve(rhs);
}

/// Restricted system equivalence: every mode becomes (ZL E ZR, ZL A ZR, ZL B, C ZR)
/// and K_{q1->q2} becomes ZL_{q2} K ZR_{q1}. All off-diagonal couplings are
/// stored in the result since transformed identities are no longer identities.
template <typename Scalar>
BasicLssModel<Scalar> equivalence_transform(const BasicLssModel<Scalar>& model, const std::vector<Mat<Scalar>>& zl,
                                            const std::vector<Mat<Scalar>>& zr) {
  const int d = model.num_modes();
  if (static_cast<int>(zl.size()) != d || static_cast<int>(zr.size()) != d)
    throw DimensionMismatch("one left and one right transform per mode required");
  std::vector<ModeMatrices<Scalar>> modes;
  for (Mode q = 1; q <= d; ++q) {
    const auto& md = model.mode(q);
    const auto& l = zl[q - 1];
    const auto& r = zr[q - 1];
    if (l.rows() != md.order() || l.cols() != md.order() || r.rows() != md.order() || r.cols() != md.order())
      throw DimensionMismatch("transform of mode " + std::to_string(q) + " has wrong size");
    if (!linalg::try_factor<Scalar>(l) || !linalg::try_factor<Scalar>(r))
      throw SingularTransform("transform of mode " + std::to_string(q) + " is singular");
    modes.push_back({l * md.E * r, l * md.A * r, l * md.B, md.C * r});
  }
  typename BasicLssModel<Scalar>::Couplings ks;
  for (Mode a = 1; a <= d; ++a)
    for (Mode b = 1; b <= d; ++b)
      if (a != b) ks[{a, b}] = zl[b - 1] * model.coupling(a, b) * zr[a - 1];
  return BasicLssModel<Scalar>(std::move(modes), std::move(ks), model.inputs(), model.outputs());
}

inline ComplexLssModel to_complex(const LssModel& model) {
  std::vector<ModeMatrices<Complex>> modes;
  for (const auto& md : model.modes())
    modes.push_back({md.E.cast<Complex>(), md.A.cast<Complex>(), md.B.cast<Complex>(), md.C.cast<Complex>()});
  ComplexLssModel::Couplings ks;
  for (const auto& [key, k] : model.stored_couplings()) ks[key] = k.cast<Complex>();
  return ComplexLssModel(std::move(modes), std::move(ks), model.inputs(), model.outputs());
}

/// Largest absolute imaginary part over all model matrices.
inline double max_abs_imag(const ComplexLssModel& model) {
  double m = 0.0;
  for (const auto& md : model.modes())
    for (const MatrixXcd* x : {&md.E, &md.A, &md.B, &md.C}) m = std::max(m, detail::max_abs_imag(*x));
  for (const auto& [key, k] : model.stored_couplings()) m = std::max(m, detail::max_abs_imag(k));
  return m;
}

/// Drops imaginary parts, refusing when any exceeds `tol`.
inline LssModel to_real(const ComplexLssModel& model, double tol = 1e-12) {
  if (const double im = max_abs_imag(model); im > tol)
    throw DegenerateData("model has imaginary parts up to " + std::to_string(im));
  std::vector<ModeMatrices<double>> modes;
  for (const auto& md : model.modes()) modes.push_back({md.E.real(), md.A.real(), md.B.real(), md.C.real()});
  LssModel::Couplings ks;
  for (const auto& [key, k] : model.stored_couplings()) ks[key] = k.real();
  return LssModel(std::move(modes), std::move(ks), model.inputs(), model.outputs());
}

}  // namespace lssmor
