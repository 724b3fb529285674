#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opineq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
  NotHermitian,
  NonFinite,
  NotPsd,
  NotNormal,
  ShapeMismatch,
  Singular,
  BudgetZero,
  UnknownInequality,
  UnknownTheorem,
  UnknownClaim,
  NonPositiveInput,
  ZeroInput,
  ParseError,
  DimensionMismatch,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the toolkit's error kinds.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, what);
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, std::string(what) + " must be square");
}

}  // namespace opineq
