#include "oracles.hpp"

#include "opineq/elementary.hpp"
#include "opineq/inequalities.hpp"
#include "opineq/linalg.hpp"

#include <doctest.h>

#include <numbers>
#include <set>

using namespace opineq;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (Complex z : d) {
    m(i, i) = z;
    ++i;
  }
  return m;
}

ComplexMatrix unit(Index n, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("inequality id parsing") {
  InequalityId id = parse_inequality_id("HI(0.25)");
  CHECK(id.name == "HI");
  REQUIRE(id.alpha);
  CHECK(*id.alpha == 0.25);
  CHECK(format_inequality_id(id) == "HI(0.25)");
  id = parse_inequality_id("HI");
  REQUIRE(id.alpha);
  CHECK(*id.alpha == 0.5);
  CHECK(parse_inequality_id("N3").name == "N3");
  CHECK(code_of([] { parse_inequality_id("N9"); }) == ErrorCode::UnknownInequality);
  CHECK(code_of([] { parse_inequality_id("N3(0.5)"); }) == ErrorCode::UnknownInequality);
  CHECK(code_of([] { parse_inequality_id("HI(1.5)"); }) != ErrorCode::UnknownTheorem);
}

TEST_CASE("catalog ids are unique and each maps to one evaluator") {
  std::set<std::string> names;
  oracle::Gen g(1);
  for (const auto& info : inequality_catalog()) {
    CHECK(names.insert(info.name).second);
    CHECK(&inequality_info(info.name) == &inequality_info(info.name));
  }
  for (const char* required : {"HI", "S_AGMI", "N_AGMI", "N1", "N2", "N3", "N1p", "N2p", "N3p", "N4p", "N5p", "N6p",
                               "S1", "S2", "S3", "S1p", "S2p", "S3p", "S4p", "S5p", "S6p", "COR2_PRODUCT",
                               "PROP15_UPPER", "PROP16_SUM"})
    CHECK(names.count(required) == 1);
}

TEST_CASE("evaluate examples") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  GapValue v = evaluate({"S_AGMI", std::nullopt}, {i2, i2}, i2);
  CHECK(v.lhs == doctest::Approx(2.0));
  CHECK(v.rhs == doctest::Approx(2.0));
  CHECK(std::abs(v.gap) < 1e-14);

  oracle::Gen g(2);
  const ComplexMatrix p = g.psd(3);
  const ComplexMatrix x = g.gaussian(3, 3);
  const ComplexMatrix root = psd_power(p, 0.5);
  const GapValue hi = evaluate({"HI", 0.5}, {p, p}, x);
  const GapValue ag = evaluate({"S_AGMI", std::nullopt}, {root, root}, x);
  CHECK(hi.lhs == doctest::Approx(ag.lhs).epsilon(1e-10));
  CHECK(hi.rhs == doctest::Approx(ag.rhs).epsilon(1e-10));

  ComplexMatrix nil(2, 2);
  nil << 0, 1, 0, 0;
  v = evaluate({"N3", std::nullopt}, {nil}, unit(2, 1, 0));
  CHECK(v.lhs == doctest::Approx(0.0));
  CHECK(v.rhs == doctest::Approx(2.0));
  CHECK(v.gap == doctest::Approx(-2.0));

  CHECK(code_of([&] { evaluate({"N3", std::nullopt}, {nil, nil}, i2); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { evaluate({"N1", std::nullopt}, {diag({1, 0})}, i2); }) == ErrorCode::Singular);
  CHECK(code_of([&] { evaluate({"NOPE", std::nullopt}, {i2}, i2); }) == ErrorCode::UnknownInequality);
}

TEST_CASE("direct evaluation of a numbered form") {
  oracle::Gen g(3);
  const ComplexMatrix s = g.invertible(3);
  const ComplexMatrix x = g.gaussian(3, 3);
  const ComplexMatrix si = s.inverse();
  const GapValue v = evaluate({"N6p", std::nullopt}, {s}, x);
  const double lhs = oracle::spectral_norm(s.adjoint() * x * si) + oracle::spectral_norm(si * x * s.adjoint());
  CHECK(v.lhs == doctest::Approx(lhs).epsilon(1e-9));
  CHECK(v.rhs == doctest::Approx(2 * oracle::spectral_norm(x)).epsilon(1e-9));
  CHECK(v.gap == doctest::Approx(v.lhs - v.rhs));
}

TEST_CASE("heinz gap examples") {
  oracle::Gen g(4);
  const ComplexMatrix p = g.psd(3);
  const ComplexMatrix q = g.psd(3);
  const ComplexMatrix x = g.gaussian(3, 3);
  CHECK(std::abs(heinz_gap(p, q, x, 0.0)) < 1e-12 * (p.norm() + q.norm()) * x.norm());
  CHECK(std::abs(heinz_gap(p, q, x, 1.0)) < 1e-12 * (p.norm() + q.norm()) * x.norm());
  const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
  CHECK(std::abs(heinz_gap(i3, i3, x, 0.3)) < 1e-12 * x.norm());
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix a = g.psd(3), b = g.psd(3), y = g.gaussian(3, 3);
    const double scale = oracle::spectral_norm(a * y + y * b) + 1.0;
    CHECK(heinz_gap(a, b, y, 0.3) >= -1e-9 * scale);
  }
  CHECK(code_of([&] { heinz_gap(diag({1, -1}), diag({1, 1}), unit(2, 0, 1), 0.5); }) == ErrorCode::NotPsd);
}

TEST_CASE("random ensemble examples") {
  const ComplexMatrix u = random_ensemble(EnsembleKind::Unitary, 4, 3);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
  const ComplexMatrix n = random_ensemble(EnsembleKind::Normal, 4, 3);
  const double nn = operator_norm(n);
  CHECK(self_commutator_norm(n) <= 1e-12 * nn * nn);
  CHECK(numerical_rank(random_ensemble(EnsembleKind::Singular, 6, 3)) == 4);
  const ComplexMatrix f = random_ensemble(EnsembleKind::NonnormalFloor, 3, 3);
  CHECK(self_commutator_norm(f) >= 0.1 * std::pow(operator_norm(f), 2));
  CHECK(random_ensemble(EnsembleKind::General, 3, 8) == random_ensemble(EnsembleKind::General, 3, 8));
  CHECK(random_ensemble(EnsembleKind::General, 3, 8) != random_ensemble(EnsembleKind::General, 3, 9));
  CHECK(parse_ensemble_kind("selfadjoint_multiple") == EnsembleKind::SelfadjointMultiple);
  CHECK(to_string(EnsembleKind::NonnormalFloor) == "nonnormal_floor");
}

TEST_CASE("verify_theorem examples") {
  VerificationReport r = verify_theorem("N_AGMI", 4, 1000, 7);
  CHECK(r.violations == 0);
  CHECK(r.trials == 1000);
  CHECK(r.seed == 7);

  r = verify_theorem("HI", 3, 500, 1);
  CHECK(r.violations == 0);

  r = verify_theorem("PROP16_SUM", 3, 200, 1);
  CHECK(r.violations == 0);
  CHECK(std::abs(r.worst_relative_gap) <= 1e-9);

  CHECK(code_of([] { verify_theorem("NOT_A_THEOREM", 3, 10, 1); }) == ErrorCode::UnknownTheorem);
  CHECK(code_of([] { verify_theorem("LEMMA5_PAIR", 3, 10, 1); }) == ErrorCode::UnknownTheorem);
}

TEST_CASE("verification worst case re-evaluates to the reported gap") {
  for (const char* id : {"N3", "S_AGMI", "HI", "N5p"}) {
    const VerificationReport r = verify_theorem(id, 3, 100, 4);
    InequalityId iid{id, r.worst_case.alpha};
    const GapValue v = evaluate(iid, r.worst_case.operands, r.worst_case.x);
    CHECK(std::abs(v.gap - r.worst_gap) <= 1e-12 * std::max(1.0, std::abs(r.worst_gap)));
  }
}

TEST_CASE("verification is deterministic per seed") {
  const VerificationReport a = verify_theorem("S3", 3, 50, 21);
  const VerificationReport b = verify_theorem("S3", 3, 50, 21);
  CHECK(a.worst_gap == b.worst_gap);
  CHECK(a.worst_case.x == b.worst_case.x);
}

TEST_CASE("harness catches injected violations") {
  const auto swap_sides = [](GapFunctional f) {
    std::swap(f.lhs, f.rhs);
    return f;
  };
  VerificationReport r = verify_theorem("N_AGMI", 3, 200, 5, 1e-9, swap_sides);
  CHECK(r.violations > 0);
  r = verify_theorem("S6p", 3, 200, 5, 1e-9, swap_sides);
  CHECK(r.violations > 0);

  const auto nudge = [](GapFunctional f) {
    f.rhs = f.rhs + NormExpression::identity_norm(f.dim, 1e-6);
    return f;
  };
  r = verify_theorem("PROP16_SUM", 3, 100, 5, 1e-9, nudge);
  CHECK(r.violations == 100);
}

TEST_CASE("counterexample search examples") {
  const Budget b;
  ComplexMatrix j(2, 2);
  j << 1, 1, 0, 1;
  SearchResult r = search_counterexample("CLAIM_N3_CONVERSE", 2, b, 1, {j});
  CHECK(r.status == SearchStatus::Found);
  CHECK(r.gap < 0);
  CHECK(evaluate({"N3", std::nullopt}, r.operands, r.x).gap == doctest::Approx(r.gap));

  r = search_counterexample("CLAIM_STRICT_INCLUSION", 4, b, 1);
  REQUIRE(r.status == SearchStatus::Found);
  REQUIRE(r.operands.size() == 1);
  CHECK((r.operands[0] - diag({1, 1, Complex(0, 0.5), Complex(0, 0.5)})).norm() < 1e-15);

  r = search_counterexample("CLAIM_LEMMA5", 2, b, 1, {diag({1, 2}), diag({2, 1})});
  CHECK(r.status == SearchStatus::Found);
  const ComplexMatrix& p = r.operands[0];
  const ComplexMatrix& q = r.operands[1];
  const double lhs = oracle::spectral_norm(p * r.x * p.inverse()) + oracle::spectral_norm(q.inverse() * r.x * q);
  CHECK(lhs < 2 * oracle::spectral_norm(r.x) - 1e-6);

  CHECK(code_of([&] { search_counterexample("CLAIM_NONE", 2, b, 1); }) == ErrorCode::UnknownClaim);
  const ComplexMatrix p2 = diag({1, 2});
  CHECK(code_of([&] { search_counterexample("CLAIM_LEMMA5", 2, b, 1, {p2, p2}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("every converse claim finds a counterexample") {
  const Budget b;
  for (const auto& claim : claim_ids()) {
    if (claim == "CLAIM_CLASS_A_ALONE") continue;
    const SearchResult r = search_counterexample(claim, 3, b, 2);
    INFO(claim);
    CHECK(r.status == SearchStatus::Found);
  }
}

TEST_CASE("berberian lift examples") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  BerberianLift l = berberian_lift(i2, i2, i2);
  CHECK(oracle::spectral_norm(l.c * l.y * l.c) == doctest::Approx(1.0));
  CHECK(l.c.rows() == 4);

  oracle::Gen g(6);
  const ComplexMatrix a = g.gaussian(3, 3), b = g.gaussian(3, 3), x = g.gaussian(3, 3);
  l = berberian_lift(a, b, x);
  const auto close = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max(1.0, v); };
  CHECK(close(oracle::spectral_norm(l.c.adjoint() * l.c * l.y), oracle::spectral_norm(a.adjoint() * a * x)));
  CHECK(close(oracle::spectral_norm(l.y * l.c * l.c.adjoint()), oracle::spectral_norm(x * b * b.adjoint())));
  CHECK(close(oracle::spectral_norm(l.c * l.y * l.c), oracle::spectral_norm(a * x * b)));

  l = berberian_lift(a, a, x);
  const GapValue lifted = evaluate({"N1p", std::nullopt}, {l.c}, l.y);
  const GapValue pair = evaluate({"N_AGMI", std::nullopt}, {a, a}, x);
  CHECK(lifted.gap == doctest::Approx(pair.gap).epsilon(1e-10));

  CHECK(code_of([&] { berberian_lift(a, i2, x); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("sequence lemma examples") {
  SequenceLemmaOutcome o = sequence_lemma_check({0.5, 1.0}, {0.5, 1.0}, 0.1);
  CHECK(o.status == SequenceLemmaStatus::ConclusionHolds);
  o = sequence_lemma_check({0.9, 1.0}, {1.0, 0.9}, 0.2);
  CHECK(o.status == SequenceLemmaStatus::ConclusionHolds);
  o = sequence_lemma_check({0.5, 1.0}, {1.0, 0.5}, 0.1);
  CHECK(o.status == SequenceLemmaStatus::HypothesisViolated);
  CHECK(o.reason.find("ratio") != std::string::npos);

  CHECK(sequence_lemma_check({0.5, 0.4}, {0.5, 0.4}, 0.1).status == SequenceLemmaStatus::HypothesisViolated);
  CHECK(sequence_lemma_check({0.5, 0.6}, {0.5, 0.7}, 0.5).status == SequenceLemmaStatus::HypothesisViolated);

  CHECK(code_of([] { sequence_lemma_check({0.0, 1.0}, {1.0, 1.0}, 0.1); }) == ErrorCode::NonPositiveInput);
  CHECK(code_of([] { sequence_lemma_check({1.0}, {1.0}, 0.0); }) == ErrorCode::NonPositiveInput);
  CHECK(code_of([] { sequence_lemma_check({1.0}, {1.0, 1.0}, 0.1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sequence lemma literal statement fails with repeated alphas inside the unit interval") {
  // Every ratio sum is at least 1.6, all values lie in (0, 1], yet |0.15 - 1| = 0.85 > 0.45.
  const SequenceLemmaOutcome o = sequence_lemma_check({0.05, 0.1, 0.1, 0.15}, {0.05, 0.1, 0.15, 1.0}, 0.45);
  CHECK(o.status == SequenceLemmaStatus::ConclusionFails);
  REQUIRE(o.index);
  CHECK(*o.index == 3);
  CHECK(sequence_lemma_check({0.05, 0.1, 0.1, 0.15}, {0.05, 0.1, 0.1, 0.15}, 0.45).status ==
        SequenceLemmaStatus::ConclusionHolds);
}

TEST_CASE("sequence lemma literal statement admits betas above one") {
  // {1} is contained in {1, 2}; both ratio sums are at least 1.5; yet |1 - 2| = 1 > 0.5.
  const SequenceLemmaOutcome o = sequence_lemma_check({1.0, 1.0}, {1.0, 2.0}, 0.5);
  CHECK(o.status == SequenceLemmaStatus::ConclusionFails);
  REQUIRE(o.index);
  CHECK(*o.index == 1);
}

TEST_CASE("collinear through origin examples") {
  auto t = collinear_through_origin(1.0, -2.0);
  REQUIRE(t);
  CHECK(std::abs(*t) < 1e-15);
  t = collinear_through_origin(Complex(1, 1), Complex(2, 2));
  REQUIRE(t);
  CHECK(*t == doctest::Approx(std::numbers::pi / 4));
  CHECK_FALSE(collinear_through_origin(1.0, Complex(0, 1)));
  t = collinear_through_origin(Complex(0, -1), Complex(0, 3));
  REQUIRE(t);
  CHECK(*t == doctest::Approx(std::numbers::pi / 2));
  t = collinear_through_origin(-1.0, -3.0);
  REQUIRE(t);
  CHECK(*t < std::numbers::pi);
  CHECK(code_of([] { collinear_through_origin(0.0, 1.0); }) == ErrorCode::ZeroInput);
}
