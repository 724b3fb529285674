#include "opineq/inequalities.hpp"

#include "opineq/elementary.hpp"
#include "opineq/linalg.hpp"
#include "opineq/norms.hpp"
#include "opineq/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace opineq {
namespace {

using Op = ElementaryOperator;

Op lr(const ComplexMatrix& left, const ComplexMatrix& right) { return Op::single(left, right); }

NormExpression nrm(const Op& op, double c = 1.0) { return NormExpression::norm(op, c); }

/// Two-term left side: separate norms (N family) or the norm of the sum (S family).
NormExpression two_terms(const Op& first, const Op& second, bool summed) {
  if (summed) return nrm(first.plus(second));
  return nrm(first) + nrm(second);
}

std::vector<InequalityInfo> make_catalog() {
  std::vector<InequalityInfo> c;
  auto add = [&](std::string name, int count, Hypothesis h, Relation rel, bool inv, bool pinv, int degree,
                 std::string display, bool rank_one = false) {
    InequalityInfo i;
    i.name = std::move(name);
    i.operand_count = count;
    i.hypothesis = h;
    i.relation = rel;
    i.needs_inverse = inv;
    i.needs_pseudo_inverse = pinv;
    i.operand_degree = degree;
    i.display = std::move(display);
    i.rank_one_only = rank_one;
    c.push_back(std::move(i));
  };
  using H = Hypothesis;
  using R = Relation;
  add("N_AGMI", 2, H::Any, R::AtLeast, false, false, 2, "|A*AX| + |XBB*| >= 2|AXB|");
  add("S_AGMI", 2, H::Any, R::AtLeast, false, false, 2, "|A*AX + XBB*| >= 2|AXB|");
  add("HI", 2, H::Psd, R::AtLeast, false, false, 1, "|PX + XQ| >= |P^a X Q^(1-a) + P^(1-a) X Q^a|");

  add("N1", 1, H::NormalInvertible, R::AtLeast, true, false, 0, "|SXS^-1| + |S^-1XS| >= 2|X|");
  add("N2", 1, H::Normal, R::AtLeast, false, true, 0, "|SXS+| + |S+XS| >= 2|SS+XS+S|");
  add("N3", 1, H::Normal, R::AtLeast, false, false, 2, "|S^2X| + |XS^2| >= 2|SXS|");
  add("S1", 1, H::HermitianInvertible, R::AtLeast, true, false, 0, "|SXS^-1 + S^-1XS| >= 2|X|");
  add("S2", 1, H::Hermitian, R::AtLeast, false, true, 0, "|SXS+ + S+XS| >= 2|SS+XS+S|");
  add("S3", 1, H::Hermitian, R::AtLeast, false, false, 2, "|S^2X + XS^2| >= 2|SXS|");

  add("N1p", 1, H::Any, R::AtLeast, false, false, 2, "|A*AX| + |XAA*| >= 2|AXA|");
  add("N2p", 1, H::Normal, R::AtLeast, false, true, 0, "|SXS+| + |S+XS| >= 2|SS+XS+S|");
  add("N3p", 1, H::NormalInvertible, R::AtLeast, true, false, 0, "|SXS^-1| + |S^-1XS| >= 2|X|");
  add("N4p", 1, H::Normal, R::AtLeast, false, false, 2, "|S^2X| + |XS^2| >= 2|SXS|");
  add("N5p", 1, H::Any, R::AtLeast, false, true, 0, "|S*XS+| + |S+XS*| >= 2|SS+XS+S|");
  add("N6p", 1, H::Invertible, R::AtLeast, true, false, 0, "|S*XS^-1| + |S^-1XS*| >= 2|X|");
  add("S1p", 1, H::Any, R::AtLeast, false, false, 2, "|A*AX + XAA*| >= 2|AXA|");
  add("S2p", 1, H::Hermitian, R::AtLeast, false, true, 0, "|SXS+ + S+XS| >= 2|SS+XS+S|");
  add("S3p", 1, H::HermitianInvertible, R::AtLeast, true, false, 0, "|SXS^-1 + S^-1XS| >= 2|X|");
  add("S4p", 1, H::Hermitian, R::AtLeast, false, false, 2, "|S^2X + XS^2| >= 2|SXS|");
  add("S5p", 1, H::Any, R::AtLeast, false, true, 0, "|S*XS+ + S+XS*| >= 2|SS+XS+S|");
  add("S6p", 1, H::Invertible, R::AtLeast, true, false, 0, "|S*XS^-1 + S^-1XS*| >= 2|X|");

  add("N2r", 2, H::Normal, R::AtLeast, false, true, 0, "|SXR+| + |S+XR| >= 2|SS+XR+R|");
  add("N3r", 2, H::NormalInvertible, R::AtLeast, true, false, 0, "|SXR^-1| + |S^-1XR| >= 2|X|");
  add("N4r", 2, H::Normal, R::AtLeast, false, false, 2, "|S^2X| + |XR^2| >= 2|SXR|");
  add("N5r", 2, H::Any, R::AtLeast, false, true, 0, "|S*XR+| + |S+XR*| >= 2|SS+XR+R|");
  add("N6r", 2, H::Invertible, R::AtLeast, true, false, 0, "|S*XR^-1| + |S^-1XR*| >= 2|X|");
  add("S2r", 2, H::Hermitian, R::AtLeast, false, true, 0, "|SXR+ + S+XR| >= 2|SS+XR+R|");
  add("S3r", 2, H::HermitianInvertible, R::AtLeast, true, false, 0, "|SXR^-1 + S^-1XR| >= 2|X|");
  add("S4r", 2, H::Hermitian, R::AtLeast, false, false, 2, "|S^2X + XR^2| >= 2|SXR|");
  add("S5r", 2, H::Any, R::AtLeast, false, true, 0, "|S*XR+ + S+XR*| >= 2|SS+XR+R|");
  add("S6r", 2, H::Invertible, R::AtLeast, true, false, 0, "|S*XR^-1 + S^-1XR*| >= 2|X|");

  add("COR2_PRODUCT", 1, H::Normal, R::AtLeast, false, false, 4, "|S^2X| |XS^2| >= |SXS|^2");
  add("PROP15_UPPER", 1, H::MinimalInjectiveNorm, R::AtLeast, true, false, 0, "2|X| >= |SXS^-1 + S^-1XS|, X rank one",
      true);
  add("PROP16_SUM", 1, H::UnitaryMultiple, R::Equal, true, false, 0, "|SXS^-1| + |S^-1XS| = 2|X|");
  add("COR9_SUM", 1, H::UnitaryReflectionMultiple, R::Equal, true, false, 0, "|SXS^-1 + S^-1XS| = 2|X|");
  add("LEMMA5_PAIR", 2, H::PsdInvertible, R::AtLeast, true, false, 0, "|PXP^-1| + |Q^-1XQ| >= 2|X|");
  return c;
}

void require_operands(const InequalityInfo& info, const std::vector<ComplexMatrix>& ops) {
  if (static_cast<int>(ops.size()) != info.operand_count)
    throw Error(ErrorCode::ShapeMismatch, info.name + " expects " + std::to_string(info.operand_count) + " operand(s)");
  const Index n = ops.front().rows();
  for (const auto& m : ops) {
    if (m.rows() != n || m.cols() != n) throw Error(ErrorCode::ShapeMismatch, "operands must be square of one dimension");
    require_finite(m, "operand");
  }
}

/// Numbered forms (2)..(6) in operators S, R.
GapFunctional numbered_form(int k, const ComplexMatrix& s, const ComplexMatrix& r, bool summed) {
  const Index n = s.rows();
  const ComplexMatrix id = identity(n);
  GapFunctional f;
  f.dim = n;
  switch (k) {
    case 2: {
      const ComplexMatrix sp = pseudo_inverse(s);
      const ComplexMatrix rp = pseudo_inverse(r);
      f.lhs = two_terms(lr(s, rp), lr(sp, r), summed);
      f.rhs = nrm(lr(s * sp, rp * r), 2.0);
      break;
    }
    case 3: {
      const ComplexMatrix si = checked_inverse(s);
      const ComplexMatrix ri = checked_inverse(r);
      f.lhs = two_terms(lr(s, ri), lr(si, r), summed);
      f.rhs = NormExpression::identity_norm(n, 2.0);
      break;
    }
    case 4:
      f.lhs = two_terms(lr(s * s, id), lr(id, r * r), summed);
      f.rhs = nrm(lr(s, r), 2.0);
      break;
    case 5: {
      const ComplexMatrix sp = pseudo_inverse(s);
      const ComplexMatrix rp = pseudo_inverse(r);
      f.lhs = two_terms(lr(s.adjoint(), rp), lr(sp, r.adjoint()), summed);
      f.rhs = nrm(lr(s * sp, rp * r), 2.0);
      break;
    }
    case 6: {
      const ComplexMatrix si = checked_inverse(s);
      const ComplexMatrix ri = checked_inverse(r);
      f.lhs = two_terms(lr(s.adjoint(), ri), lr(si, r.adjoint()), summed);
      f.rhs = NormExpression::identity_norm(n, 2.0);
      break;
    }
    default:
      throw Error(ErrorCode::UnknownInequality, "no numbered form " + std::to_string(k));
  }
  return f;
}

GapFunctional agmi(const ComplexMatrix& a, const ComplexMatrix& b, bool summed) {
  const Index n = a.rows();
  const ComplexMatrix id = identity(n);
  GapFunctional f;
  f.dim = n;
  f.lhs = two_terms(lr(a.adjoint() * a, id), lr(id, b * b.adjoint()), summed);
  f.rhs = nrm(lr(a, b), 2.0);
  return f;
}

}  // namespace

InequalityId parse_inequality_id(const std::string& text) {
  InequalityId id;
  const auto open = text.find('(');
  if (open == std::string::npos) {
    id.name = text;
  } else {
    if (text.back() != ')') throw Error(ErrorCode::UnknownInequality, "malformed identifier " + text);
    id.name = text.substr(0, open);
    const std::string arg = text.substr(open + 1, text.size() - open - 2);
    try {
      std::size_t used = 0;
      id.alpha = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw Error(ErrorCode::UnknownInequality, "malformed parameter in " + text);
    }
  }
  inequality_info(id.name);
  if (id.alpha && id.name != "HI") throw Error(ErrorCode::UnknownInequality, id.name + " takes no parameter");
  if (id.name == "HI" && !id.alpha) id.alpha = 0.5;
  if (id.alpha && (*id.alpha < 0.0 || *id.alpha > 1.0 || !std::isfinite(*id.alpha)))
    throw Error(ErrorCode::InvalidArgument, "HI parameter must lie in [0, 1]");
  return id;
}

std::string format_inequality_id(const InequalityId& id) {
  if (!id.alpha) return id.name;
  std::ostringstream os;
  os << id.name << '(' << *id.alpha << ')';
  return os.str();
}

const std::vector<InequalityInfo>& inequality_catalog() {
  static const std::vector<InequalityInfo> catalog = make_catalog();
  return catalog;
}

const InequalityInfo& inequality_info(const std::string& name) {
  for (const auto& i : inequality_catalog())
    if (i.name == name) return i;
  throw Error(ErrorCode::UnknownInequality, "unknown inequality " + name);
}

GapFunctional build_gap_functional(const InequalityId& id, const std::vector<ComplexMatrix>& ops) {
  const InequalityInfo& info = inequality_info(id.name);
  require_operands(info, ops);
  const std::string& nm = info.name;
  const ComplexMatrix& s = ops[0];
  const ComplexMatrix& r = ops.size() > 1 ? ops[1] : ops[0];
  const Index n = s.rows();
  const ComplexMatrix eye = identity(n);

  if (nm == "N_AGMI" || nm == "N1p") return agmi(s, r, false);
  if (nm == "S_AGMI" || nm == "S1p") return agmi(s, r, true);
  if (nm == "HI") {
    const double a = id.alpha.value_or(0.5);
    GapFunctional f;
    f.dim = n;
    f.lhs = nrm(lr(s, eye).plus(lr(eye, r)));
    f.rhs = nrm(lr(psd_power(s, a), psd_power(r, 1.0 - a)).plus(lr(psd_power(s, 1.0 - a), psd_power(r, a))));
    return f;
  }
  if (nm == "N1") return numbered_form(3, s, s, false);
  if (nm == "N2") return numbered_form(2, s, s, false);
  if (nm == "N3") return numbered_form(4, s, s, false);
  if (nm == "S1") return numbered_form(3, s, s, true);
  if (nm == "S2") return numbered_form(2, s, s, true);
  if (nm == "S3") return numbered_form(4, s, s, true);
  if (nm.size() == 3 && (nm[0] == 'N' || nm[0] == 'S') && (nm[2] == 'p' || nm[2] == 'r')) {
    const int k = nm[1] - '0';
    return numbered_form(k, s, r, nm[0] == 'S');
  }
  if (nm == "COR2_PRODUCT") {
    GapFunctional f;
    f.dim = n;
    f.lhs = NormExpression({NormMonomial{1.0, {lr(s * s, eye), lr(eye, s * s)}}});
    f.rhs = NormExpression({NormMonomial{1.0, {lr(s, s), lr(s, s)}}});
    return f;
  }
  if (nm == "PROP15_UPPER") {
    GapFunctional f;
    f.dim = n;
    f.lhs = NormExpression::identity_norm(n, 2.0);
    f.rhs = nrm(build_map(s, MapKind::Phi));
    return f;
  }
  if (nm == "PROP16_SUM") return numbered_form(3, s, s, false);
  if (nm == "COR9_SUM") return numbered_form(3, s, s, true);
  if (nm == "LEMMA5_PAIR") {
    GapFunctional f;
    f.dim = n;
    f.lhs = nrm(lr(s, checked_inverse(s))) + nrm(lr(checked_inverse(r), r));
    f.rhs = NormExpression::identity_norm(n, 2.0);
    return f;
  }
  throw Error(ErrorCode::UnknownInequality, "unknown inequality " + nm);
}

GapValue evaluate(const InequalityId& id, const std::vector<ComplexMatrix>& operands, const ComplexMatrix& x) {
  const GapFunctional f = build_gap_functional(id, operands);
  if (x.rows() != f.dim || x.cols() != f.dim) throw Error(ErrorCode::ShapeMismatch, "X has the wrong dimension");
  require_finite(x, "X");
  return f.evaluate(x);
}

// ---------------------------------------------------------------------------
// Ensembles

namespace {

const std::map<std::string, EnsembleKind>& ensemble_names() {
  static const std::map<std::string, EnsembleKind> names = {
      {"general", EnsembleKind::General},
      {"unitary", EnsembleKind::Unitary},
      {"normal", EnsembleKind::Normal},
      {"normal_singular", EnsembleKind::NormalSingular},
      {"hermitian", EnsembleKind::Hermitian},
      {"hermitian_singular", EnsembleKind::HermitianSingular},
      {"psd", EnsembleKind::Psd},
      {"singular", EnsembleKind::Singular},
      {"selfadjoint_multiple", EnsembleKind::SelfadjointMultiple},
      {"unitary_multiple", EnsembleKind::UnitaryMultiple},
      {"unitary_reflection", EnsembleKind::UnitaryReflection},
      {"nonnormal_floor", EnsembleKind::NonnormalFloor},
      {"prop15", EnsembleKind::Prop15},
  };
  return names;
}

Index singular_count(Index n) { return (n + 2) / 3; }

ComplexMatrix general(Rng& rng, Index n) { return rng.gaussian_matrix(n, n) / std::sqrt(static_cast<double>(n)); }

ComplexMatrix hermitian(Rng& rng, Index n) {
  const ComplexMatrix g = general(rng, n);
  return (g + g.adjoint()) * 0.5;
}

ComplexMatrix with_diagonal(Rng& rng, const ComplexVector& d) {
  const ComplexMatrix u = rng.unitary(d.size());
  return u * d.asDiagonal() * u.adjoint();
}

Complex annulus_point(Rng& rng) { return std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi)); }

double signed_modulus(Rng& rng) { return (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0); }

}  // namespace

EnsembleKind parse_ensemble_kind(const std::string& text) {
  const auto it = ensemble_names().find(text);
  if (it == ensemble_names().end()) throw Error(ErrorCode::InvalidArgument, "unknown ensemble " + text);
  return it->second;
}

std::string_view to_string(EnsembleKind k) {
  for (const auto& [name, kind] : ensemble_names())
    if (kind == k) return name;
  return "unknown";
}

ComplexMatrix random_ensemble(EnsembleKind kind, Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(kind));
  switch (kind) {
    case EnsembleKind::General:
      return general(rng, n);
    case EnsembleKind::Unitary:
      return rng.unitary(n);
    case EnsembleKind::Normal:
    case EnsembleKind::NormalSingular: {
      ComplexVector d(n);
      for (Index i = 0; i < n; ++i) d(i) = annulus_point(rng);
      if (kind == EnsembleKind::NormalSingular)
        for (Index i = 0; i < singular_count(n); ++i) d(i) = 0.0;
      return with_diagonal(rng, d);
    }
    case EnsembleKind::Hermitian:
      return hermitian(rng, n);
    case EnsembleKind::HermitianSingular: {
      ComplexVector d(n);
      for (Index i = 0; i < n; ++i) d(i) = signed_modulus(rng);
      for (Index i = 0; i < singular_count(n); ++i) d(i) = 0.0;
      return with_diagonal(rng, d);
    }
    case EnsembleKind::Psd: {
      const ComplexMatrix g = general(rng, n);
      return g.adjoint() * g;
    }
    case EnsembleKind::Singular: {
      const SvdFactors f = singular_value_decomposition(general(rng, n));
      RealVector sv = f.singulars;
      for (Index i = 0; i < singular_count(n); ++i) sv(n - 1 - i) = 0.0;
      return f.left * sv.cast<Complex>().asDiagonal() * f.right.adjoint();
    }
    case EnsembleKind::SelfadjointMultiple: {
      const Complex phase = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
      return phase * hermitian(rng, n);
    }
    case EnsembleKind::UnitaryMultiple:
      return annulus_point(rng) * rng.unitary(n);
    case EnsembleKind::UnitaryReflection: {
      ComplexVector d(n);
      for (Index i = 0; i < n; ++i) d(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return annulus_point(rng) * with_diagonal(rng, d);
    }
    case EnsembleKind::NonnormalFloor: {
      if (n < 2) throw Error(ErrorCode::InvalidArgument, "every 1x1 matrix is normal");
      for (;;) {
        ComplexMatrix s = general(rng, n);
        const double ns = operator_norm(s);
        if (self_commutator_norm(s) >= 0.1 * ns * ns) return s;
      }
    }
    case EnsembleKind::Prop15: {
      const Complex c = annulus_point(rng);
      const double ratio = rng.uniform(0.5, 2.0);
      const Index k = n < 2 ? n : 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
      ComplexVector d(n);
      for (Index i = 0; i < n; ++i) d(i) = i < k ? c : c * Complex(0.0, ratio);
      return with_diagonal(rng, d);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown ensemble");
}

// ---------------------------------------------------------------------------
// Verification

namespace {

constexpr double kResampleCondition = 1e8;
constexpr double kHeinzAlphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};

EnsembleKind operand_kind(const InequalityInfo& info, int trial) {
  const bool alt = trial % 2 == 1;
  switch (info.hypothesis) {
    case Hypothesis::Any:
      return info.needs_pseudo_inverse && alt ? EnsembleKind::Singular : EnsembleKind::General;
    case Hypothesis::Invertible:
      return EnsembleKind::General;
    case Hypothesis::Normal:
      return alt ? EnsembleKind::NormalSingular : EnsembleKind::Normal;
    case Hypothesis::NormalInvertible:
      return EnsembleKind::Normal;
    case Hypothesis::Hermitian:
      return alt ? EnsembleKind::HermitianSingular : EnsembleKind::Hermitian;
    case Hypothesis::HermitianInvertible:
      return EnsembleKind::Hermitian;
    case Hypothesis::Psd:
    case Hypothesis::PsdInvertible:
      return EnsembleKind::Psd;
    case Hypothesis::UnitaryMultiple:
      return EnsembleKind::UnitaryMultiple;
    case Hypothesis::UnitaryReflectionMultiple:
      return EnsembleKind::UnitaryReflection;
    case Hypothesis::MinimalInjectiveNorm:
      return EnsembleKind::Prop15;
  }
  return EnsembleKind::General;
}

std::string ensemble_label(const InequalityInfo& info) {
  const std::string a(to_string(operand_kind(info, 0)));
  const std::string b(to_string(operand_kind(info, 1)));
  return a == b ? a : a + "/" + b;
}

/// Ratio of the largest to the smallest nonzero singular value.
double effective_condition(const ComplexMatrix& m) {
  const RealVector sv = singular_value_decomposition(m).singulars;
  if (sv.size() == 0 || sv(0) == 0.0) return 1.0;
  const double cut = default_rank_rtol(m) * sv(0);
  double lo = sv(0);
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) lo = sv(i);
  return sv(0) / lo;
}

bool well_conditioned(const InequalityInfo& info, const ComplexMatrix& m) {
  if (info.needs_inverse) return condition_number(m) <= kResampleCondition;
  if (info.needs_pseudo_inverse) return effective_condition(m) <= kResampleCondition;
  return true;
}

ComplexMatrix draw_x(Rng& rng, Index n, int trial, bool rank_one_only) {
  int kind = trial % 4;
  if (rank_one_only && kind < 2) kind = 2;
  ComplexMatrix x;
  switch (kind) {
    case 0:
      x = rng.gaussian_matrix(n, n);
      break;
    case 1:
      x = rng.unitary(n);
      break;
    case 2:
      x = rng.unit_vector(n) * rng.unit_vector(n).adjoint();
      break;
    default: {
      const Index cell = static_cast<Index>((trial / 4) % (n * n));
      x = ComplexMatrix::Zero(n, n);
      x(cell / n, cell % n) = 1.0;
    }
  }
  return x / operator_norm(x);
}

/// Signed badness: lower is worse for inequalities; equalities use -|rel|.
double badness(Relation rel, double relative_gap) {
  return rel == Relation::Equal ? -std::abs(relative_gap) : relative_gap;
}

}  // namespace

std::vector<std::string> theorem_ids() {
  std::vector<std::string> ids;
  for (const auto& i : inequality_catalog())
    if (i.name != "LEMMA5_PAIR") ids.push_back(i.name);
  return ids;
}

VerificationReport verify_theorem(const std::string& theorem_id, Index dim, int trials, std::uint64_t seed, double tol,
                                  const FunctionalTransform& transform) {
  const auto ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), theorem_id) == ids.end())
    throw Error(ErrorCode::UnknownTheorem, "unknown theorem " + theorem_id);
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  if (trials < 0) throw Error(ErrorCode::InvalidArgument, "trial count must be nonnegative");
  const InequalityInfo& info = inequality_info(theorem_id);
  const auto start = std::chrono::steady_clock::now();

  VerificationReport rep;
  rep.theorem_id = theorem_id;
  rep.ensemble = ensemble_label(info);
  rep.dim = dim;
  rep.trials = trials;
  rep.tol = tol;
  rep.seed = seed;
  double worst = std::numeric_limits<double>::infinity();

  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    const EnsembleKind kind = operand_kind(info, t);
    std::vector<ComplexMatrix> ops;
    for (int k = 0; k < info.operand_count; ++k) {
      for (;;) {
        ComplexMatrix m = random_ensemble(kind, dim, rng.next_u64());
        if (well_conditioned(info, m)) {
          ops.push_back(std::move(m));
          break;
        }
        ++rep.resamples;
      }
    }
    InequalityId id{theorem_id, std::nullopt};
    if (theorem_id == "HI") id.alpha = kHeinzAlphas[t % 5];
    const ComplexMatrix x = draw_x(rng, dim, t, info.rank_one_only);
    GapFunctional f = build_gap_functional(id, ops);
    if (transform) f = transform(std::move(f));
    const GapValue v = f.evaluate(x);
    const double rel = v.gap / f.scale();
    const bool violated = info.relation == Relation::Equal ? std::abs(rel) > tol : rel < -tol;
    if (violated) ++rep.violations;
    const double b = badness(info.relation, rel);
    if (b < worst) {
      worst = b;
      rep.worst_gap = v.gap;
      rep.worst_relative_gap = rel;
      rep.worst_case = {ops, x, id.alpha};
    }
  }
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Counterexample search

namespace {

constexpr double kFoundThreshold = 1e-8;

SeedSet merged_seeds(const std::vector<ComplexMatrix>& ops) {
  SeedSet seeds;
  for (const auto& m : ops) {
    for (const ComplexMatrix& base : {m, ComplexMatrix(m * m)}) {
      SeedSet s = structured_seeds(base);
      seeds.matrices.insert(seeds.matrices.end(), s.matrices.begin(), s.matrices.end());
      seeds.rank_ones.insert(seeds.rank_ones.end(), s.rank_ones.begin(), s.rank_ones.end());
    }
  }
  return seeds;
}

using Sampler = std::function<std::vector<ComplexMatrix>(Rng&)>;

SearchResult converse_search(const std::string& claim, const std::string& ineq, const Budget& budget,
                             std::uint64_t seed, const std::vector<ComplexMatrix>& supplied, const Sampler& sample,
                             int candidates) {
  SearchResult res;
  res.claim_id = claim;
  res.inequality = ineq;
  res.gap = std::numeric_limits<double>::infinity();
  res.relative_gap = std::numeric_limits<double>::infinity();
  const InequalityId id{ineq, std::nullopt};
  for (int c = 0; c < candidates; ++c) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c));
    std::vector<ComplexMatrix> ops = (c == 0 && !supplied.empty()) ? supplied : sample(rng);
    GapFunctional f;
    try {
      f = build_gap_functional(id, ops);
    } catch (const Error& e) {
      if (c == 0 && !supplied.empty()) throw;
      continue;
    }
    ++res.candidates_tried;
    Budget b = budget;
    b.stop_below = -2.0 * kFoundThreshold * f.scale();
    const GapMinimum m = minimize_gap(f, b, rng.next_u64(), merged_seeds(ops));
    const double rel = m.value / f.scale();
    if (rel < res.relative_gap) {
      res.relative_gap = rel;
      res.gap = m.value;
      res.operands = ops;
      res.x = m.certificate;
    }
    if (rel < -kFoundThreshold) {
      res.status = SearchStatus::Found;
      res.note = "X violates " + ineq + " for operands outside the characterized class";
      return res;
    }
  }
  res.note = "no violating X found within budget";
  return res;
}

ComplexMatrix invertible_draw(Rng& rng, EnsembleKind kind, Index n) {
  for (;;) {
    ComplexMatrix m = random_ensemble(kind, n, rng.next_u64());
    if (condition_number(m) <= kResampleCondition) return m;
  }
}

std::vector<ComplexMatrix> lemma5_operands(Rng& rng, Index n, bool q_inside_p) {
  RealVector spec(n);
  for (Index i = 0; i < n; ++i) spec(i) = rng.uniform(0.5, 2.0);
  ComplexVector big = spec.cast<Complex>();
  ComplexVector small(n);
  // the smaller spectrum reuses values of the larger one, at least one repeated when possible
  for (Index i = 0; i < n; ++i) small(i) = big(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  const ComplexMatrix u = rng.unitary(n);
  const ComplexMatrix v = rng.unitary(n);
  const ComplexMatrix p = u * big.asDiagonal() * u.adjoint();
  const ComplexMatrix q = v * small.asDiagonal() * v.adjoint();
  if (q_inside_p) return {(p + p.adjoint()) * 0.5, (q + q.adjoint()) * 0.5};
  return {(q + q.adjoint()) * 0.5, (p + p.adjoint()) * 0.5};
}

SearchResult strict_inclusion_search(Index dim, const Budget& budget, std::uint64_t seed,
                                     const std::vector<ComplexMatrix>& supplied) {
  SearchResult res;
  res.claim_id = "CLAIM_STRICT_INCLUSION";
  res.inequality = "PROP15_UPPER";
  std::vector<ComplexMatrix> candidates;
  if (!supplied.empty()) candidates.push_back(supplied.front());
  if (dim >= 2) {
    std::vector<Index> splits{dim / 2};
    for (Index k = 1; k < dim; ++k)
      if (k != dim / 2) splits.push_back(k);
    for (double r : {0.5, 0.75, 1.5}) {
      for (Index k : splits) {
        ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
        for (Index i = 0; i < dim; ++i) s(i, i) = i < k ? Complex(1.0, 0.0) : Complex(0.0, r);
        candidates.push_back(s);
      }
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : candidates) {
    ++res.candidates_tried;
    const double ns = operator_norm(s);
    if (ns == 0.0 || condition_number(s) > 1e12) continue;
    if (self_commutator_norm(s) > 1e-10 * ns * ns) continue;
    if (operator_norm(s.adjoint() * s - ns * ns * identity(dim)) <= 1e-10 * ns * ns) continue;
    const double spectral = joint_ratio_functional(s);
    if (spectral > 2.0 + 1e-12) continue;
    const OptimizationResult d = injective_norm_estimate(build_map(s, MapKind::Phi), budget, seed);
    const double dev = std::abs(d.value - 2.0);
    if (dev < best) {
      best = dev;
      res.operands = {s};
      res.x = d.certificate;
      res.gap = d.value - 2.0;
      res.relative_gap = res.gap / 2.0;
    }
    if (dev <= 1e-6) {
      res.status = SearchStatus::Found;
      res.note = "normal, not a unitary multiple, injective norm of phi equals 2";
      return res;
    }
  }
  res.gap = best;
  res.note = dim < 2 ? "no separating matrix exists in dimension 1" : "no separating matrix among candidates";
  return res;
}

SearchResult class_a_alone_search(Index dim, const Budget& budget, std::uint64_t seed) {
  SearchResult res;
  res.claim_id = "CLAIM_CLASS_A_ALONE";
  res.inequality = "class A margin";
  res.gap = -std::numeric_limits<double>::infinity();
  const int draws = std::max(1, budget.restarts) * 8;
  for (int c = 0; c < draws && dim >= 2; ++c) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c));
    // upper-triangular perturbations of normal matrices sit near the class boundary
    ComplexMatrix s = random_ensemble(EnsembleKind::Normal, dim, rng.next_u64());
    const double eps = std::pow(10.0, -rng.uniform(0.0, 4.0));
    s += eps * ComplexMatrix(general(rng, dim).triangularView<Eigen::StrictlyUpper>());
    ++res.candidates_tried;
    const double ns = operator_norm(s);
    if (self_commutator_norm(s) < 1e-3 * ns * ns) continue;
    const ComplexMatrix diff = absolute_value(s * s) - s.adjoint() * s;
    const double margin = hermitian_eigendecomposition((diff + diff.adjoint()) * 0.5).eigenvalues.front().real();
    const double rel = margin / (ns * ns);
    if (rel > res.gap) {
      res.gap = rel;
      res.relative_gap = rel;
      res.operands = {s};
    }
    if (rel >= -1e-12) {
      res.status = SearchStatus::Found;
      res.note = "non-normal matrix in class A";
      return res;
    }
  }
  res.note = "exploratory: every sampled non-normal matrix failed class A";
  return res;
}

}  // namespace

std::vector<std::string> claim_ids() {
  return {"CLAIM_N3_CONVERSE", "CLAIM_N1_CONVERSE",      "CLAIM_S3_CONVERSE",      "CLAIM_S1_CONVERSE",
          "CLAIM_LEMMA5",      "CLAIM_LEMMA5_REVERSE",   "CLAIM_STRICT_INCLUSION", "CLAIM_CLASS_A_ALONE"};
}

SearchResult search_counterexample(const std::string& claim_id, Index dim, const Budget& budget, std::uint64_t seed,
                                   const std::vector<ComplexMatrix>& operands) {
  require_budget(budget);
  const auto ids = claim_ids();
  if (std::find(ids.begin(), ids.end(), claim_id) == ids.end())
    throw Error(ErrorCode::UnknownClaim, "unknown claim " + claim_id);
  if (!operands.empty()) dim = operands.front().rows();
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  const int candidates = 4;

  if (claim_id == "CLAIM_N3_CONVERSE" || claim_id == "CLAIM_N1_CONVERSE") {
    if (dim < 2 && operands.empty()) return SearchResult{claim_id, SearchStatus::Exhausted, {}, {}, 0, 0, "", "every 1x1 matrix is normal", 0};
    const bool inv = claim_id == "CLAIM_N1_CONVERSE";
    const Sampler sample = [&](Rng& rng) {
      return std::vector<ComplexMatrix>{inv ? invertible_draw(rng, EnsembleKind::NonnormalFloor, dim)
                                            : random_ensemble(EnsembleKind::NonnormalFloor, dim, rng.next_u64())};
    };
    return converse_search(claim_id, inv ? "N1" : "N3", budget, seed, operands, sample, candidates);
  }
  if (claim_id == "CLAIM_S3_CONVERSE" || claim_id == "CLAIM_S1_CONVERSE") {
    if (dim < 2 && operands.empty())
      return SearchResult{claim_id, SearchStatus::Exhausted, {}, {}, 0, 0, "", "every 1x1 matrix is a selfadjoint multiple", 0};
    const bool inv = claim_id == "CLAIM_S1_CONVERSE";
    const Sampler sample = [&](Rng& rng) {
      return std::vector<ComplexMatrix>{inv ? invertible_draw(rng, EnsembleKind::General, dim)
                                            : random_ensemble(EnsembleKind::General, dim, rng.next_u64())};
    };
    return converse_search(claim_id, inv ? "S1" : "S3", budget, seed, operands, sample, candidates);
  }
  if (claim_id == "CLAIM_LEMMA5" || claim_id == "CLAIM_LEMMA5_REVERSE") {
    if (!operands.empty() && operator_norm(operands.front() - operands.back()) == 0.0)
      throw Error(ErrorCode::InvalidArgument, "the claim concerns distinct P and Q");
    const bool q_inside_p = claim_id == "CLAIM_LEMMA5";
    const Sampler sample = [&](Rng& rng) { return lemma5_operands(rng, dim, q_inside_p); };
    return converse_search(claim_id, "LEMMA5_PAIR", budget, seed, operands, sample, candidates);
  }
  if (claim_id == "CLAIM_STRICT_INCLUSION") return strict_inclusion_search(dim, budget, seed, operands);
  return class_a_alone_search(dim, budget, seed);
}

// ---------------------------------------------------------------------------
// Constructions and lemmas

BerberianLift berberian_lift(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x) {
  const Index n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n || x.rows() != n || x.cols() != n)
    throw Error(ErrorCode::ShapeMismatch, "berberian_lift needs three n x n matrices");
  BerberianLift out;
  out.c = ComplexMatrix::Zero(2 * n, 2 * n);
  out.c.topLeftCorner(n, n) = a;
  out.c.bottomRightCorner(n, n) = b;
  out.y = ComplexMatrix::Zero(2 * n, 2 * n);
  out.y.topRightCorner(n, n) = x;
  return out;
}

SequenceLemmaOutcome sequence_lemma_check(const std::vector<double>& alphas, const std::vector<double>& betas,
                                          double eps) {
  if (alphas.size() != betas.size() || alphas.empty())
    throw Error(ErrorCode::InvalidArgument, "sequences must be nonempty and of equal length");
  for (double v : alphas)
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveInput, "alphas must be positive");
  for (double v : betas)
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveInput, "betas must be positive");
  if (!(eps > 0.0)) throw Error(ErrorCode::NonPositiveInput, "eps must be positive");

  const std::size_t n = alphas.size();
  SequenceLemmaOutcome out;
  for (std::size_t i = 0; i < n; ++i) {
    if (alphas[i] > 1.0 || (i > 0 && alphas[i] < alphas[i - 1])) {
      out.index = i;
      out.reason = "alphas must be nondecreasing in (0, 1]";
      return out;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool present = std::any_of(betas.begin(), betas.end(), [&](double b) { return std::abs(b - alphas[i]) <= 1e-12; });
    if (!present) {
      out.index = i;
      out.reason = "alpha value missing from betas";
      return out;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (alphas[i] / alphas[j] + betas[j] / betas[i] < 2.0 - eps) {
        out.index = i;
        out.reason = "ratio condition fails at (" + std::to_string(i) + ", " + std::to_string(j) + ")";
        return out;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(alphas[i] - betas[i]) > eps + 1e-12) {
      out.status = SequenceLemmaStatus::ConclusionFails;
      out.index = i;
      out.reason = "|alpha_i - beta_i| exceeds eps";
      return out;
    }
  }
  out.status = SequenceLemmaStatus::ConclusionHolds;
  return out;
}

std::optional<double> collinear_through_origin(Complex lambda, Complex mu, double tol) {
  if (lambda == 0.0 || mu == 0.0) throw Error(ErrorCode::ZeroInput, "both numbers must be nonzero");
  const Complex s = lambda / mu + mu / lambda;
  if (std::abs(s.imag()) > tol * std::max(1.0, std::abs(s)) || std::abs(s) < 2.0 - tol) return std::nullopt;
  double theta = std::fmod(std::arg(lambda), std::numbers::pi);
  if (theta < 0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta = 0.0;
  return theta;
}

double heinz_gap(const ComplexMatrix& p, const ComplexMatrix& q, const ComplexMatrix& x, double alpha) {
  const GapFunctional f = build_gap_functional({"HI", alpha}, {p, q});
  return f.evaluate(x).gap;
}

}  // namespace opineq
