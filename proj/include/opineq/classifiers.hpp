#pragma once

// Membership tests for the operator classes: direct algebraic tests and the
// inequality characterizations, each with a witness.

#include "opineq/functional.hpp"
#include "opineq/inequalities.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace opineq {

enum class Verdict { Yes, No, Inconclusive };

std::string_view to_string(Verdict v);

inline constexpr double kDefaultClassTol = 1e-8;

struct SelfadjointMultipleResult {
  bool verdict = false;
  std::optional<Complex> omega;  // S* = omega S
  double residual = 0;           // |S* - omega S| / |S|
};

struct UnitaryMultipleResult {
  bool verdict = false;
  std::optional<double> modulus;
  double residual = 0;  // |S*S - |S|^2 I| / |S|^2
};

struct ClassAResult {
  bool verdict = false;
  double margin = 0;  // lambda_min(|S^2| - |S|^2)
};

struct ParanormalResult {
  Verdict verdict = Verdict::Inconclusive;
  double worst_gap = 0;  // min over unit x of |S^2 x| - |Sx|^2
  ComplexVector witness;
  double pencil_min = 0;  // min over the t grid of lambda_min(S*^2 S^2 - 2t S*S + t^2)
  double pencil_t = 0;
  bool descent_says = true;
  bool pencil_says = true;
};

struct ClassificationReport {
  bool normal = false;
  double commutator_norm = 0;
  SelfadjointMultipleResult selfadjoint_multiple;
  UnitaryMultipleResult unitary_multiple;
  bool unitary_reflection_multiple = false;
  bool positive_semidefinite = false;
  double min_eigenvalue_hermitian_part = 0;
  bool ep = false;
  double ep_gap = 0;
  ClassAResult class_a;
  ParanormalResult paranormal;
  double tol = kDefaultClassTol;
};

SelfadjointMultipleResult is_selfadjoint_multiple(const ComplexMatrix& s, double tol = kDefaultClassTol);
UnitaryMultipleResult is_unitary_multiple(const ComplexMatrix& s, double tol = kDefaultClassTol);
ClassAResult is_class_a(const ComplexMatrix& s, double tol = kDefaultClassTol);
ParanormalResult is_paranormal(const ComplexMatrix& s, double tol = kDefaultClassTol, const Budget& budget = {},
                               std::uint64_t seed = 0);

ClassificationReport classify(const ComplexMatrix& s, double tol = kDefaultClassTol, const Budget& budget = {},
                              std::uint64_t seed = 0);

struct ModuliNormality {
  bool moduli_equal = false;       // |S^2| = |S|^2 and the adjoint twin
  bool fourth_power_order = false;  // |S^2|^2 >= |S|^4 and the adjoint twin
  bool class_a_both = false;       // S and S* in class A
  Verdict paranormal_both = Verdict::Inconclusive;
  bool conjunction = false;
  bool direct_normal = false;
  bool agrees = false;
};

ModuliNormality normality_by_moduli(const ComplexMatrix& s, double tol = kDefaultClassTol, const Budget& budget = {},
                                    std::uint64_t seed = 0);

struct GapResult {
  std::string inequality_id;
  double min_gap = 0;
  ComplexMatrix certificate_x;
  double scale = 0;
  /// |S|^d for the homogeneity degree d of the inequality in S.
  double operand_scale = 1;
  Budget search_budget;
  int restarts_used = 0;
  long iterations = 0;
  bool converged = false;
};

/// Minimum of lhs - rhs over unit X for a single-operator characterization.
GapResult characterization_gap(const ComplexMatrix& s, const std::string& inequality_id, const Budget& budget = {},
                               std::uint64_t seed = 0);

}  // namespace opineq
