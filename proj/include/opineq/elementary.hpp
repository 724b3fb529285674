#pragma once

// Elementary operators X -> sum_i A_i X B_i on n x n matrices, the two maps
// phi_S(X) = S X S^-1 + S^-1 X S and psi_S(X) = S* X S^-1 + S^-1 X S*, and
// spectral closed forms for their injective norms.

#include "opineq/core.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace opineq {

struct CoefficientPair {
  ComplexMatrix left;
  ComplexMatrix right;
};

class ElementaryOperator {
 public:
  explicit ElementaryOperator(std::vector<CoefficientPair> pairs);

  static ElementaryOperator single(ComplexMatrix left, ComplexMatrix right);

  Index dim() const { return dim_; }
  const std::vector<CoefficientPair>& pairs() const { return pairs_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;
  /// Adjoint for the trace inner product: Y -> sum_i A_i* Y B_i*.
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const;
  /// Image of the rank-one matrix x h*.
  ComplexMatrix apply_rank_one(const ComplexVector& x, const ComplexVector& h) const;

  /// sum_i |A_i| |B_i|, an upper bound for the operator norm of the map.
  double norm_bound() const;

  ElementaryOperator scaled(Complex c) const;
  /// R + T as the concatenation of coefficient pairs.
  ElementaryOperator plus(const ElementaryOperator& other) const;

 private:
  Index dim_;
  std::vector<CoefficientPair> pairs_;
};

enum class MapKind { Phi, Psi };

ElementaryOperator build_map(const ComplexMatrix& s, MapKind kind);
ComplexMatrix apply_elementary(const ElementaryOperator& r, const ComplexMatrix& x);
/// n^2 x n^2 matrix acting on column-stacked X: vec(AXB) = (B^T kron A) vec(X).
ComplexMatrix matricize(const ElementaryOperator& r);
ComplexVector vectorize(const ComplexMatrix& x);

/// sup over eigenvalue pairs of |l/m + m/l| for an invertible normal S.
double joint_ratio_functional(const ComplexMatrix& s, double tol = 1e-8);

/// kappa + 1/kappa with kappa = |S| |S^-1|.
double psi_injective_closed_form(const ComplexMatrix& s);

struct EClassReport {
  bool is_member = false;
  std::optional<double> theta;
  std::vector<Complex> sigma_min_set;
  std::vector<Complex> sigma_max_set;
  double kappa = 0;
  bool normal = false;
};

/// Membership in the class of invertible normal S whose phi-injective norm
/// reaches kappa + 1/kappa: some extreme-modulus eigenvalues share a line
/// through the origin.
EClassReport e_class_membership(const ComplexMatrix& s, double tol = 1e-8);

inline constexpr double kAngleTol = 1e-8;
inline constexpr double kModulusGroupTol = 1e-9;

}  // namespace opineq
