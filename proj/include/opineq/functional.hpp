#pragma once

// Norm functionals of the form  sum_k c_k prod_j |L_kj(X)|  (each L an
// elementary operator) and a multistart minimizer of (lhs - rhs) over the
// unit sphere of the operator norm. Every inequality in the catalog and the
// inf-norm estimate reduce to this shape.

#include "opineq/elementary.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace opineq {

struct Budget {
  int restarts = 32;
  int iterations = 500;
  double stagnation_tol = 1e-10;
  /// Stop as soon as a minimization reaches a value below this.
  std::optional<double> stop_below;
};

void require_budget(const Budget& b);

struct NormMonomial {
  double coeff = 1.0;
  std::vector<ElementaryOperator> factors;
};

class NormExpression {
 public:
  NormExpression() = default;
  explicit NormExpression(std::vector<NormMonomial> terms);

  /// c |L(X)|
  static NormExpression norm(ElementaryOperator op, double coeff = 1.0);
  /// c |X|
  static NormExpression identity_norm(Index n, double coeff = 1.0);

  NormExpression operator+(const NormExpression& other) const;

  double evaluate(const ComplexMatrix& x) const;
  /// Real gradient: d value = Re <G, dX> for the trace inner product.
  ComplexMatrix gradient(const ComplexMatrix& x) const;
  /// Upper bound of the value on the unit sphere.
  double bound() const;
  int degree() const;
  bool empty() const { return terms_.empty(); }
  const std::vector<NormMonomial>& terms() const { return terms_; }

 private:
  std::vector<NormMonomial> terms_;
};

struct GapValue {
  double lhs = 0;
  double rhs = 0;
  double gap = 0;
};

struct GapFunctional {
  NormExpression lhs;
  NormExpression rhs;
  Index dim = 0;

  GapValue evaluate(const ComplexMatrix& x) const;
  ComplexMatrix gradient(const ComplexMatrix& x) const;
  int degree() const;
  /// Homogeneity-matched scale: the larger side bound on the unit sphere.
  double scale() const;
};

/// Structured starting points for the minimizer.
struct SeedSet {
  std::vector<ComplexMatrix> matrices;
  std::vector<std::pair<ComplexVector, ComplexVector>> rank_ones;  // X = x y*
};

/// Identity, matrix units E_ij and eigen/singular rank-ones built from S.
SeedSet structured_seeds(const ComplexMatrix& s);

struct GapMinimum {
  double value = 0;
  ComplexMatrix certificate;  // unit operator norm
  int restarts_used = 0;
  long iterations = 0;
  bool converged = false;
};

/// Multistart descent of (lhs - rhs) over unit-norm X. Seeds are screened,
/// the best ones refined first; remaining restarts start from random draws
/// derived from (seed, restart index). With `rank_one_only` the search stays
/// on rank-one X = x y*.
GapMinimum minimize_gap(const GapFunctional& f, const Budget& budget, std::uint64_t seed, const SeedSet& seeds,
                        bool rank_one_only = false);

}  // namespace opineq
