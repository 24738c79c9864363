#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lssmor {

using Complex = std::complex<double>;
using Mode = int;  // 1-based everywhere in the public API

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;

inline constexpr double kSingularRcond = 1e-14;

inline std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// Root of every error raised by the library. `code()` is a stable
/// machine-readable identifier used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class SingularResolvent : public Error {
 public:
  SingularResolvent(Mode mode, Complex point, int level = -1)
      : Error("SingularResolvent", describe(mode, point, level)),
        mode_(mode), point_(point), level_(level) {}
  Mode mode() const { return mode_; }
  Complex point() const { return point_; }
  int level() const { return level_; }  // position in a word, -1 if not applicable

 private:
  static std::string describe(Mode q, Complex s, int level) {
    std::string msg = "resolvent of mode " + std::to_string(q) + " singular at s=" + format_complex(s);
    if (level >= 0) msg += " (word position " + std::to_string(level + 1) + ")";
    return msg;
  }
  Mode mode_;
  Complex point_;
  int level_;
};

class SingularTransform : public Error {
 public:
  explicit SingularTransform(const std::string& m) : Error("SingularTransform", m) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch", m) {}
};

class InvalidModel : public Error {
 public:
  explicit InvalidModel(const std::string& m) : Error("InvalidModel", m) {}
};

class CountMismatch : public Error {
 public:
  explicit CountMismatch(const std::string& m) : Error("CountMismatch", m) {}
};

class InvalidTuples : public Error {
 public:
  explicit InvalidTuples(const std::string& m) : Error("InvalidTuples", m) {}
};

class CoincidentPoints : public Error {
 public:
  CoincidentPoints(Complex left, Complex right)
      : Error("CoincidentPoints",
              "left point " + format_complex(left) + " coincides with right point " + format_complex(right)) {}
};

class MissingSample : public Error {
 public:
  explicit MissingSample(const std::string& word) : Error("MissingSample", "no sample for word " + word) {}
};

class SingularLoewner : public Error {
 public:
  explicit SingularLoewner(Mode q)
      : Error("SingularLoewner", "Loewner matrix of mode " + std::to_string(q) + " is singular"), mode_(q) {}
  Mode mode() const { return mode_; }

 private:
  Mode mode_;
};

class EigenpointCollision : public Error {
 public:
  EigenpointCollision(Mode q, Complex s)
      : Error("EigenpointCollision", "interpolation point " + format_complex(s) +
                                         " is an eigenvalue of the reduced pencil of mode " + std::to_string(q)) {}
};

class RankTooLarge : public Error {
 public:
  explicit RankTooLarge(const std::string& m) : Error("RankTooLarge", m) {}
};

class DegenerateData : public Error {
 public:
  explicit DegenerateData(const std::string& m) : Error("DegenerateData", m) {}
};

class NotConjugateClosed : public Error {
 public:
  explicit NotConjugateClosed(const std::string& m) : Error("NotConjugateClosed", m) {}
};

class UnstableMode : public Error {
 public:
  explicit UnstableMode(Mode q)
      : Error("UnstableMode", "mode " + std::to_string(q) + " is not asymptotically stable"), mode_(q) {}
  Mode mode() const { return mode_; }

 private:
  Mode mode_;
};

class NonFiniteState : public Error {
 public:
  explicit NonFiniteState(double t)
      : Error("NonFiniteState", "state became non-finite at t=" + std::to_string(t)) {}
};

class InvalidSignal : public Error {
 public:
  explicit InvalidSignal(const std::string& m) : Error("InvalidSignal", m) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& m, int line = 0)
      : Error("ParseError", line > 0 ? "line " + std::to_string(line) + ": " + m : m), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("ConfigError", m) {}
};

namespace detail {

inline double max_abs_imag(const MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.imag().cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail
}  // namespace lssmor
