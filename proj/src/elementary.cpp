#include "opineq/elementary.hpp"

#include "opineq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace opineq {

ElementaryOperator::ElementaryOperator(std::vector<CoefficientPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw Error(ErrorCode::InvalidArgument, "elementary operator needs at least one pair");
  dim_ = pairs_.front().left.rows();
  for (const auto& p : pairs_) {
    if (p.left.rows() != dim_ || p.left.cols() != dim_ || p.right.rows() != dim_ || p.right.cols() != dim_)
      throw Error(ErrorCode::ShapeMismatch, "coefficients must be square of one common dimension");
    require_finite(p.left, "elementary coefficient");
    require_finite(p.right, "elementary coefficient");
  }
}

ElementaryOperator ElementaryOperator::single(ComplexMatrix left, ComplexMatrix right) {
  return ElementaryOperator({{std::move(left), std::move(right)}});
}

ComplexMatrix ElementaryOperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw Error(ErrorCode::ShapeMismatch, "operand has the wrong dimension");
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& p : pairs_) out.noalias() += p.left * x * p.right;
  return out;
}

ComplexMatrix ElementaryOperator::apply_adjoint(const ComplexMatrix& y) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& p : pairs_) out.noalias() += p.left.adjoint() * y * p.right.adjoint();
  return out;
}

ComplexMatrix ElementaryOperator::apply_rank_one(const ComplexVector& x, const ComplexVector& h) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& p : pairs_) out.noalias() += (p.left * x) * (p.right.adjoint() * h).adjoint();
  return out;
}

double ElementaryOperator::norm_bound() const {
  double b = 0.0;
  for (const auto& p : pairs_) b += operator_norm(p.left) * operator_norm(p.right);
  return b;
}

ElementaryOperator ElementaryOperator::scaled(Complex c) const {
  auto pairs = pairs_;
  for (auto& p : pairs) p.left *= c;
  return ElementaryOperator(std::move(pairs));
}

ElementaryOperator ElementaryOperator::plus(const ElementaryOperator& other) const {
  if (other.dim() != dim_) throw Error(ErrorCode::ShapeMismatch, "operators act on different dimensions");
  auto pairs = pairs_;
  pairs.insert(pairs.end(), other.pairs_.begin(), other.pairs_.end());
  return ElementaryOperator(std::move(pairs));
}

ElementaryOperator build_map(const ComplexMatrix& s, MapKind kind) {
  require_square(s, "map generator");
  const ComplexMatrix inv = checked_inverse(s);
  if (kind == MapKind::Phi) return ElementaryOperator({{s, inv}, {inv, s}});
  const ComplexMatrix sa = s.adjoint();
  return ElementaryOperator({{sa, inv}, {inv, sa}});
}

ComplexMatrix apply_elementary(const ElementaryOperator& r, const ComplexMatrix& x) { return r.apply(x); }

ComplexMatrix matricize(const ElementaryOperator& r) {
  const Index n = r.dim();
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& p : r.pairs()) {
    const ComplexMatrix bt = p.right.transpose();
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m.block(i * n, j * n, n, n) += bt(i, j) * p.left;
  }
  return m;
}

ComplexVector vectorize(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

double joint_ratio_functional(const ComplexMatrix& s, double tol) {
  require_square(s, "joint_ratio_functional input");
  require_finite(s, "joint_ratio_functional input");
  const double scale = operator_norm(s);
  if (self_commutator_norm(s) > tol * scale * scale) throw Error(ErrorCode::NotNormal, "operator is not normal");
  const double lo = min_singular_value(s);
  if (lo == 0.0 || scale / lo > 1e12) throw Error(ErrorCode::Singular, "operator is not invertible");
  const auto spec = schur_spectrum(s).eigenvalues;
  double best = 0.0;
  for (const auto& l : spec)
    for (const auto& m : spec) best = std::max(best, std::abs(l / m + m / l));
  return best;
}

double psi_injective_closed_form(const ComplexMatrix& s) {
  require_square(s, "psi_injective_closed_form input");
  const double kappa = condition_number(s);
  if (!std::isfinite(kappa) || kappa > 1e12) throw Error(ErrorCode::Singular, "operator is not invertible");
  return kappa + 1.0 / kappa;
}

namespace {

/// Distance between two angles modulo pi.
double angle_gap_mod_pi(double a, double b) {
  double d = std::fmod(a - b, std::numbers::pi);
  if (d < 0) d += std::numbers::pi;
  return std::min(d, std::numbers::pi - d);
}

double reduce_mod_pi(double a) {
  double t = std::fmod(a, std::numbers::pi);
  if (t < 0) t += std::numbers::pi;
  if (t >= std::numbers::pi) t = 0.0;
  return t;
}

}  // namespace

EClassReport e_class_membership(const ComplexMatrix& s, double tol) {
  require_square(s, "e_class_membership input");
  require_finite(s, "e_class_membership input");
  EClassReport out;
  const double scale = operator_norm(s);
  const double kappa = condition_number(s);
  if (!std::isfinite(kappa) || kappa > 1e12) throw Error(ErrorCode::Singular, "operator is not invertible");
  out.kappa = kappa;
  out.normal = self_commutator_norm(s) <= tol * scale * scale;
  const auto spec = schur_spectrum(s).eigenvalues;
  double lo = std::abs(spec.front());
  double hi = lo;
  for (const auto& l : spec) {
    lo = std::min(lo, std::abs(l));
    hi = std::max(hi, std::abs(l));
  }
  for (const auto& l : spec) {
    if (std::abs(l) <= lo * (1.0 + kModulusGroupTol)) out.sigma_min_set.push_back(l);
    if (std::abs(l) >= hi * (1.0 - kModulusGroupTol)) out.sigma_max_set.push_back(l);
  }
  if (!out.normal) return out;
  for (const auto& a : out.sigma_min_set) {
    for (const auto& b : out.sigma_max_set) {
      if (angle_gap_mod_pi(std::arg(a), std::arg(b)) <= kAngleTol) {
        out.is_member = true;
        out.theta = reduce_mod_pi(std::arg(a));
        return out;
      }
    }
  }
  return out;
}

}  // namespace opineq
