#pragma once

// Catalog of the N-AGMI / S-AGMI / Heinz families and related equalities,
// randomized verification, counterexample search and two scalar lemmas.
//
// Identifier scheme:
//   N1 N2 N3 / S1 S2 S3          single-operator headline forms
//   N1p..N6p / S1p..S6p          single-operator numbered forms (primed)
//   N2r..N6r / S2r..S6r          pair forms in operators (S, R)
//   N_AGMI S_AGMI HI             pair forms in (A, B) and (P, Q)
//   COR2_PRODUCT PROP15_UPPER PROP16_SUM COR9_SUM LEMMA5_PAIR

#include "opineq/functional.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace opineq {

struct InequalityId {
  std::string name;
  std::optional<double> alpha;  // HI only
};

/// Accepts "N3", "HI(0.25)" and "HI" (alpha defaults to 1/2).
InequalityId parse_inequality_id(const std::string& text);
std::string format_inequality_id(const InequalityId& id);

enum class Hypothesis {
  Any,
  Normal,
  NormalInvertible,
  Hermitian,
  HermitianInvertible,
  Invertible,
  Psd,
  PsdInvertible,
  UnitaryMultiple,
  UnitaryReflectionMultiple,
  MinimalInjectiveNorm,
};

enum class Relation { AtLeast, Equal };

struct InequalityInfo {
  std::string name;
  int operand_count = 1;
  Hypothesis hypothesis = Hypothesis::Any;
  Relation relation = Relation::AtLeast;
  bool needs_inverse = false;
  bool needs_pseudo_inverse = false;
  bool rank_one_only = false;
  /// Homogeneity degree in the operands of each side (for scale reporting).
  int operand_degree = 0;
  std::string display;
};

const std::vector<InequalityInfo>& inequality_catalog();
const InequalityInfo& inequality_info(const std::string& name);

/// lhs - rhs as a functional of X for fixed operands.
GapFunctional build_gap_functional(const InequalityId& id, const std::vector<ComplexMatrix>& operands);

GapValue evaluate(const InequalityId& id, const std::vector<ComplexMatrix>& operands, const ComplexMatrix& x);

// ---------------------------------------------------------------------------
// Random ensembles

enum class EnsembleKind {
  General,
  Unitary,
  Normal,
  NormalSingular,
  Hermitian,
  HermitianSingular,
  Psd,
  Singular,
  SelfadjointMultiple,
  UnitaryMultiple,
  UnitaryReflection,
  NonnormalFloor,
  Prop15,
};

EnsembleKind parse_ensemble_kind(const std::string& text);
std::string_view to_string(EnsembleKind k);

ComplexMatrix random_ensemble(EnsembleKind kind, Index dim, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Theorem verification

struct OperandSnapshot {
  std::vector<ComplexMatrix> operands;
  ComplexMatrix x;
  std::optional<double> alpha;
};

struct VerificationReport {
  std::string theorem_id;
  std::string ensemble;
  Index dim = 0;
  int trials = 0;
  int violations = 0;
  double tol = 0;
  /// Gap of the worst trial (most negative relative gap, or largest
  /// relative deviation for equalities) and that gap over its scale.
  double worst_gap = 0;
  double worst_relative_gap = 0;
  OperandSnapshot worst_case;
  std::uint64_t seed = 0;
  int resamples = 0;
  double elapsed_seconds = 0;
};

std::vector<std::string> theorem_ids();

/// Rewrites each trial's functional before evaluation (mutation testing).
using FunctionalTransform = std::function<GapFunctional(GapFunctional)>;

VerificationReport verify_theorem(const std::string& theorem_id, Index dim, int trials, std::uint64_t seed,
                                  double tol = 1e-9, const FunctionalTransform& transform = {});

// ---------------------------------------------------------------------------
// Counterexample search

enum class SearchStatus { Found, Exhausted };

struct SearchResult {
  std::string claim_id;
  SearchStatus status = SearchStatus::Exhausted;
  std::vector<ComplexMatrix> operands;
  ComplexMatrix x;
  double gap = 0;
  double relative_gap = 0;
  std::string inequality;
  std::string note;
  int candidates_tried = 0;
};

std::vector<std::string> claim_ids();

/// Optional `operands` replace the sampled ones for the first candidate.
SearchResult search_counterexample(const std::string& claim_id, Index dim, const Budget& budget, std::uint64_t seed,
                                   const std::vector<ComplexMatrix>& operands = {});

// ---------------------------------------------------------------------------
// Constructions and scalar lemmas

struct BerberianLift {
  ComplexMatrix c;  // diag(A, B)
  ComplexMatrix y;  // [[0, X], [0, 0]]
};

BerberianLift berberian_lift(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x);

enum class SequenceLemmaStatus { HypothesisViolated, ConclusionHolds, ConclusionFails };

struct SequenceLemmaOutcome {
  SequenceLemmaStatus status = SequenceLemmaStatus::HypothesisViolated;
  std::optional<std::size_t> index;  // first failing index
  std::string reason;
};

SequenceLemmaOutcome sequence_lemma_check(const std::vector<double>& alphas, const std::vector<double>& betas,
                                          double eps);

/// Common line angle in [0, pi) when l/m + m/l is real with modulus >= 2.
std::optional<double> collinear_through_origin(Complex lambda, Complex mu, double tol = 1e-10);

double heinz_gap(const ComplexMatrix& p, const ComplexMatrix& q, const ComplexMatrix& x, double alpha);

}  // namespace opineq
