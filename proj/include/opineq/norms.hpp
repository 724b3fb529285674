#pragma once

// Norm functionals of an elementary operator R: the sup and inf of |R(X)|
// over the unit sphere and the injective norm d(R) (sup over unit rank-one X).
// All estimates are one-sided and carry a certificate that reproduces them.

#include "opineq/elementary.hpp"
#include "opineq/functional.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace opineq {

enum class BoundDirection { LowerBoundOfSup, UpperBoundOfInf };

std::string_view to_string(BoundDirection d);

struct OptimizationResult {
  double value = 0;
  BoundDirection direction = BoundDirection::LowerBoundOfSup;
  ComplexMatrix certificate;  // unit operator norm
  /// Rank-one factors (x, h) with certificate = x h*, for injective norms.
  std::optional<std::pair<ComplexVector, ComplexVector>> factors;
  int restarts_used = 0;
  long iterations = 0;
  bool converged = false;
  double stagnation_tol = 0;
  std::string method;
  /// Value of the second method when both injective methods ran.
  std::optional<double> secondary_value;
  std::optional<bool> methods_agree;
};

OptimizationResult sup_norm_estimate(const ElementaryOperator& r, const Budget& budget, std::uint64_t seed);
OptimizationResult inf_norm_estimate(const ElementaryOperator& r, const Budget& budget, std::uint64_t seed);

enum class InjectiveMethod { RankOneAscent, FourVectorPower, Both };

/// Relative agreement required between the two injective-norm methods.
inline constexpr double kMethodAgreementTol = 2e-4;

OptimizationResult injective_norm_estimate(const ElementaryOperator& r, const Budget& budget, std::uint64_t seed,
                                           InjectiveMethod method = InjectiveMethod::Both);

}  // namespace opineq
