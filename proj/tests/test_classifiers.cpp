#include "oracles.hpp"

#include "opineq/classifiers.hpp"
#include "opineq/linalg.hpp"

#include <doctest.h>

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

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

const Complex kI(0.0, 1.0);

}  // namespace

TEST_CASE("classify examples") {
  ClassificationReport r = classify(mat2(0, 1, 1, 0));
  CHECK(r.normal);
  CHECK(r.selfadjoint_multiple.verdict);
  REQUIRE(r.selfadjoint_multiple.omega);
  CHECK(std::abs(*r.selfadjoint_multiple.omega - 1.0) < 1e-14);
  CHECK(r.unitary_multiple.verdict);
  CHECK(r.unitary_reflection_multiple);
  CHECK(r.ep);

  r = classify(mat2(1, 1, 0, 1));
  CHECK_FALSE(r.normal);
  CHECK_FALSE(r.selfadjoint_multiple.verdict);
  CHECK_FALSE(r.unitary_multiple.verdict);
  CHECK_FALSE(r.unitary_reflection_multiple);
  CHECK_FALSE(r.positive_semidefinite);
  CHECK_FALSE(r.class_a.verdict);
  CHECK(r.paranormal.verdict == Verdict::No);
  CHECK(r.ep);

  r = classify(diag({1, Complex(0.5, 0.5)}));
  CHECK(r.normal);
  CHECK_FALSE(r.selfadjoint_multiple.verdict);
  CHECK_FALSE(r.unitary_multiple.verdict);

  r = classify(diag({2, 1}));
  CHECK(r.positive_semidefinite);
  CHECK(r.min_eigenvalue_hermitian_part == doctest::Approx(1.0));

  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(1, 0) = std::numeric_limits<double>::infinity();
  try {
    classify(bad);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("selfadjoint multiple examples") {
  SelfadjointMultipleResult r = is_selfadjoint_multiple(kI * diag({1, 2}));
  CHECK(r.verdict);
  REQUIRE(r.omega);
  CHECK(std::abs(*r.omega + 1.0) < 1e-14);

  oracle::Gen g(1);
  r = is_selfadjoint_multiple(g.hermitian(4));
  CHECK(r.verdict);
  CHECK(std::abs(*r.omega - 1.0) < 1e-12);

  const Complex phase = std::polar(1.0, 0.7);
  r = is_selfadjoint_multiple(phase * g.hermitian(3));
  CHECK(r.verdict);
  CHECK(std::abs(*r.omega - std::conj(phase) / phase) < 1e-12);

  CHECK_FALSE(is_selfadjoint_multiple(mat2(1, 1, 0, 1)).verdict);
  r = is_selfadjoint_multiple(ComplexMatrix::Zero(2, 2));
  CHECK(r.verdict);
  CHECK(*r.omega == Complex(1.0, 0.0));
}

TEST_CASE("unitary multiple examples") {
  oracle::Gen g(2);
  UnitaryMultipleResult r = is_unitary_multiple(3.0 * g.unitary(3));
  CHECK(r.verdict);
  REQUIRE(r.modulus);
  CHECK(*r.modulus == doctest::Approx(3.0));
  CHECK_FALSE(is_unitary_multiple(diag({1, 2})).verdict);
  r = is_unitary_multiple(diag({1, kI}));
  CHECK(r.verdict);
  CHECK(*r.modulus == doctest::Approx(1.0));
  CHECK_FALSE(is_unitary_multiple(ComplexMatrix::Zero(2, 2)).verdict);
}

TEST_CASE("class A examples") {
  oracle::Gen g(3);
  const ComplexMatrix n = g.normal_invertible(4);
  ClassAResult r = is_class_a(n);
  CHECK(r.verdict);
  CHECK(r.margin >= -1e-9 * std::pow(operator_norm(n), 2));
  r = is_class_a(mat2(0, 1, 0, 0));
  CHECK_FALSE(r.verdict);
  CHECK(r.margin == doctest::Approx(-1.0));
  r = is_class_a(ComplexMatrix::Zero(3, 3));
  CHECK(r.verdict);
  CHECK(r.margin == 0.0);
}

TEST_CASE("paranormal examples") {
  oracle::Gen g(4);
  CHECK(is_paranormal(g.normal_invertible(4)).verdict == Verdict::Yes);
  const ComplexMatrix nil = mat2(0, 1, 0, 0);
  ParanormalResult r = is_paranormal(nil);
  CHECK(r.verdict == Verdict::No);
  CHECK(r.worst_gap == doctest::Approx(-1.0));
  CHECK(std::abs(r.witness(0)) < 1e-6);
  r = is_paranormal(ComplexMatrix::Zero(2, 2));
  CHECK(r.verdict == Verdict::Yes);
  CHECK(r.worst_gap == 0.0);
  Budget zero;
  zero.restarts = 0;
  try {
    is_paranormal(nil, kDefaultClassTol, zero);
    FAIL("expected BudgetZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetZero);
  }
}

TEST_CASE("paranormal witness reproduces the worst gap") {
  oracle::Gen g(5);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix s = g.gaussian(3, 3);
    const ParanormalResult r = is_paranormal(s, kDefaultClassTol, {}, t);
    const double direct = (s * s * r.witness).norm() - (s * r.witness).squaredNorm();
    CHECK(std::abs(r.witness.norm() - 1.0) < 1e-12);
    CHECK(std::abs(direct - r.worst_gap) < 1e-12 * std::max(1.0, s.squaredNorm()));
  }
}

TEST_CASE("normality by moduli examples") {
  oracle::Gen g(6);
  ModuliNormality m = normality_by_moduli(g.normal_invertible(4));
  CHECK(m.moduli_equal);
  CHECK(m.fourth_power_order);
  CHECK(m.class_a_both);
  CHECK(m.paranormal_both == Verdict::Yes);
  CHECK(m.conjunction);
  CHECK(m.agrees);

  m = normality_by_moduli(mat2(1, 1, 0, 1));
  CHECK_FALSE(m.moduli_equal);
  CHECK(m.agrees);

  m = normality_by_moduli(mat2(0, 1, 0, 0));
  CHECK_FALSE(m.class_a_both);
  CHECK_FALSE(m.conjunction);
  CHECK(m.agrees);
}

TEST_CASE("characterization gap examples") {
  const Budget b;
  oracle::Gen g(7);
  const ComplexMatrix n = g.normal_invertible(3);
  GapResult r = characterization_gap(n, "N3", b, 1);
  CHECK(std::abs(r.min_gap) <= 1e-7 * std::pow(operator_norm(n), 2));
  CHECK(r.operand_scale == doctest::Approx(std::pow(operator_norm(n), 2)));

  const ComplexMatrix nil = mat2(0, 1, 0, 0);
  r = characterization_gap(nil, "N3", b, 1);
  CHECK(r.min_gap == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(std::abs(oracle::spectral_norm(r.certificate_x) - 1.0) < 1e-10);
  const GapValue v = evaluate({"N3", std::nullopt}, {nil}, r.certificate_x);
  CHECK(std::abs(v.gap - r.min_gap) <= 1e-10 * r.scale);

  r = characterization_gap(diag({1, kI}), "S3p", b, 1);
  CHECK(r.min_gap < -1.0);

  try {
    characterization_gap(nil, "BOGUS", b, 1);
    FAIL("expected UnknownInequality");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownInequality);
  }
  try {
    characterization_gap(nil, "N1", b, 1);
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}
