#include "opineq/random.hpp"

#include <cmath>
#include <numbers>

namespace opineq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::BudgetZero: return "BudgetZero";
    case ErrorCode::UnknownInequality: return "UnknownInequality";
    case ErrorCode::UnknownTheorem: return "UnknownTheorem";
    case ErrorCode::UnknownClaim: return "UnknownClaim";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double Rng::normal() {
  // Box-Muller; u1 kept away from 0.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double s = std::numbers::sqrt2 / 2.0;
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

ComplexMatrix Rng::gaussian_matrix(Index rows, Index cols) {
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
  return m;
}

ComplexVector Rng::unit_vector(Index n) {
  ComplexVector v(n);
  for (;;) {
    for (Index i = 0; i < n; ++i) v(i) = complex_normal();
    const double nv = v.norm();
    if (nv > 1e-12) return v / nv;
  }
}

ComplexMatrix Rng::unitary(Index n) {
  const ComplexMatrix g = gaussian_matrix(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

}  // namespace opineq
