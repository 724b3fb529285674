#include "opineq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace opineq {
namespace {

Eigen::JacobiSVD<ComplexMatrix> full_svd(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

bool spectral_less(const Complex& a, const Complex& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma < mb;
  return std::arg(a) < std::arg(b);
}

}  // namespace

double PenroseResiduals::max() const {
  return std::max({sgs_minus_s, gsg_minus_g, sg_hermitian, gs_hermitian});
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const ComplexMatrix& m) {
  require_square(m, "matrix");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double condition_number(const ComplexMatrix& m) {
  require_square(m, "matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

TopSingular top_singular(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

Spectrum hermitian_eigendecomposition(const ComplexMatrix& m, double tol) {
  require_square(m, "hermitian_eigendecomposition input");
  require_finite(m, "hermitian_eigendecomposition input");
  const double scale = operator_norm(m);
  if (operator_norm(m - m.adjoint()) > tol * scale)
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  Spectrum out;
  out.eigenvalues.reserve(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) out.eigenvalues.emplace_back(es.eigenvalues()(i), 0.0);
  out.basis = es.eigenvectors();
  out.is_orthonormal_basis = true;
  return out;
}

Spectrum schur_spectrum(const ComplexMatrix& m) {
  require_square(m, "schur_spectrum input");
  require_finite(m, "schur_spectrum input");
  Spectrum out;
  if (m.rows() == 0) return out;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
  for (Index i = 0; i < m.rows(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), spectral_less);
  return out;
}

EigenPairs eigen_pairs(const ComplexMatrix& m) {
  require_square(m, "eigen_pairs input");
  require_finite(m, "eigen_pairs input");
  EigenPairs out;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, true);
  for (Index i = 0; i < m.rows(); ++i) out.values.push_back(es.eigenvalues()(i));
  out.right = es.eigenvectors();
  for (Index k = 0; k < out.right.cols(); ++k) {
    const double nk = out.right.col(k).norm();
    if (nk > 0) out.right.col(k) /= nk;
  }
  const double cond = condition_number(out.right);
  out.diagonalizable = std::isfinite(cond) && cond < 1e10;
  if (out.diagonalizable) {
    // rows of V^-1 are the left eigenvectors (as row vectors)
    out.left = out.right.inverse().adjoint();
    for (Index k = 0; k < out.left.cols(); ++k) {
      const double nk = out.left.col(k).norm();
      if (nk > 0) out.left.col(k) /= nk;
    }
  } else {
    out.left = out.right;
  }
  return out;
}

SvdFactors singular_value_decomposition(const ComplexMatrix& m) {
  require_finite(m, "singular_value_decomposition input");
  auto svd = full_svd(m);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

ComplexMatrix absolute_value(const ComplexMatrix& s) {
  require_square(s, "absolute_value input");
  require_finite(s, "absolute_value input");
  auto svd = full_svd(s);
  const ComplexMatrix& v = svd.matrixV();
  ComplexMatrix r = v * svd.singularValues().cast<Complex>().asDiagonal() * v.adjoint();
  return hermitian_part(r);
}

ComplexMatrix psd_power(const ComplexMatrix& p, double alpha, double tol) {
  require_square(p, "psd_power input");
  require_finite(p, "psd_power input");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  const Index n = p.rows();
  const double scale = operator_norm(p);
  if (operator_norm(p - p.adjoint()) > tol * scale)
    throw Error(ErrorCode::NotHermitian, "psd_power input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(p));
  if (n > 0 && es.eigenvalues()(0) < -tol * scale)
    throw Error(ErrorCode::NotPsd, "psd_power input has a negative eigenvalue");
  if (alpha == 1.0) return p;
  if (alpha == 0.0) return identity(n);
  // eigenvalues at rounding level are treated as exact zeros
  const double zero_cut = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<Index>(n, 1)) * scale;
  RealVector powered(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()(i);
    powered(i) = lam <= zero_cut ? 0.0 : std::pow(lam, alpha);
  }
  const ComplexMatrix& b = es.eigenvectors();
  return hermitian_part(b * powered.cast<Complex>().asDiagonal() * b.adjoint());
}

PolarFactors polar_decompose(const ComplexMatrix& s) {
  require_square(s, "polar_decompose input");
  require_finite(s, "polar_decompose input");
  auto svd = full_svd(s);
  const ComplexMatrix& w = svd.matrixU();
  const ComplexMatrix& v = svd.matrixV();
  PolarFactors out;
  out.unitary_part = w * v.adjoint();
  out.positive_part = hermitian_part(v * svd.singularValues().cast<Complex>().asDiagonal() * v.adjoint());
  return out;
}

double default_rank_rtol(const ComplexMatrix& s) {
  return static_cast<double>(std::max<Index>(std::max(s.rows(), s.cols()), 1)) * 1e-12;
}

Index numerical_rank(const ComplexMatrix& s, std::optional<double> rank_rtol) {
  require_finite(s, "numerical_rank input");
  if (s.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(s);
  const auto& sv = svd.singularValues();
  const double cut = rank_rtol.value_or(default_rank_rtol(s)) * sv(0);
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& s, std::optional<double> rank_rtol) {
  require_finite(s, "pseudo_inverse input");
  ComplexMatrix g = ComplexMatrix::Zero(s.cols(), s.rows());
  if (s.size() == 0) return g;
  Eigen::JacobiSVD<ComplexMatrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = rank_rtol.value_or(default_rank_rtol(s)) * sv(0);
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cut || sv(i) == 0.0) break;
    g += (svd.matrixV().col(i) / sv(i)) * svd.matrixU().col(i).adjoint();
  }
  return g;
}

PenroseResiduals verify_penrose(const ComplexMatrix& s, const ComplexMatrix& g) {
  if (g.rows() != s.cols() || g.cols() != s.rows())
    throw Error(ErrorCode::ShapeMismatch, "pseudo-inverse candidate must have the transposed shape");
  const double scale = std::max({1.0, operator_norm(s), operator_norm(g)});
  const ComplexMatrix sg = s * g;
  const ComplexMatrix gs = g * s;
  PenroseResiduals r;
  r.sgs_minus_s = operator_norm(sg * s - s) / scale;
  r.gsg_minus_g = operator_norm(gs * g - g) / scale;
  r.sg_hermitian = operator_norm(sg.adjoint() - sg) / scale;
  r.gs_hermitian = operator_norm(gs.adjoint() - gs) / scale;
  return r;
}

EpResult is_ep(const ComplexMatrix& s, double tol) {
  require_square(s, "is_ep input");
  require_finite(s, "is_ep input");
  const ComplexMatrix g = pseudo_inverse(s);
  EpResult out;
  out.projector_gap = operator_norm(s * g - g * s);
  out.is_ep = out.projector_gap <= tol;
  return out;
}

ComplexMatrix checked_inverse(const ComplexMatrix& s, double max_condition) {
  require_square(s, "inverse input");
  require_finite(s, "inverse input");
  auto svd = full_svd(s);
  const auto& sv = svd.singularValues();
  const double lo = sv(sv.size() - 1);
  if (lo == 0.0 || sv(0) / lo > max_condition)
    throw Error(ErrorCode::Singular, "matrix is not invertible at the rank tolerance");
  RealVector inv = sv.cwiseInverse();
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

double self_commutator_norm(const ComplexMatrix& s) {
  return operator_norm(s.adjoint() * s - s * s.adjoint());
}

ComplexMatrix nearest_unitary(const ComplexMatrix& m) {
  auto svd = full_svd(m);
  return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix unitary_with_first_column(const ComplexVector& v) {
  const Index n = v.size();
  ComplexMatrix seed = ComplexMatrix::Identity(n, n);
  seed.col(0) = v;
  // keep the remaining identity columns independent of v
  Index pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  if (pivot != 0) seed.col(pivot) = ComplexVector::Unit(n, 0);
  Eigen::HouseholderQR<ComplexMatrix> qr(seed);
  ComplexMatrix q = qr.householderQ();
  const Complex c = q.col(0).dot(v);  // q0^* v
  const double ac = std::abs(c);
  if (ac > 0) q.col(0) *= c / ac;
  return q;
}

}  // namespace opineq
