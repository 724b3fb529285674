#include "opineq/classifiers.hpp"

#include "opineq/linalg.hpp"
#include "opineq/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opineq {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double min_eigenvalue(const ComplexMatrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ComplexVector min_eigenvector(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((h + h.adjoint()) * 0.5);
  return es.eigenvectors().col(0);
}

/// |S^2 x| - |Sx|^2 at unit x.
double paranormal_gap(const ComplexMatrix& s, const ComplexMatrix& s2, const ComplexVector& x) {
  return (s2 * x).norm() - (s * x).squaredNorm();
}

struct SphereRun {
  double value;
  ComplexVector x;
};

SphereRun descend_paranormal(const ComplexMatrix& s, const ComplexMatrix& s2, ComplexVector x, const Budget& budget,
                             double scale) {
  const ComplexMatrix b = s.adjoint() * s;
  const ComplexMatrix a = s2.adjoint() * s2;
  SphereRun run{paranormal_gap(s, s2, x), x};
  double step = 0.5;
  int stalls = 0;
  for (int it = 0; it < budget.iterations; ++it) {
    const double n2 = (s2 * run.x).norm();
    ComplexVector g = -2.0 * (b * run.x);
    if (n2 > 0) g += (a * run.x) / n2;
    g -= run.x * std::real(run.x.dot(g));
    const double gn2 = g.squaredNorm();
    if (gn2 < 1e-30) break;
    bool accepted = false;
    while (step > 1e-12) {
      const ComplexVector cand_x = (run.x - step * g).normalized();
      const double cand = paranormal_gap(s, s2, cand_x);
      if (cand < run.value - 1e-4 * step * gn2) {
        stalls = run.value - cand < budget.stagnation_tol * scale ? stalls + 1 : 0;
        run.x = cand_x;
        run.value = cand;
        accepted = true;
        step = std::min(step * 2.0, 4.0);
        break;
      }
      step *= 0.5;
    }
    if (!accepted || stalls >= 3) break;
  }
  return run;
}

}  // namespace

SelfadjointMultipleResult is_selfadjoint_multiple(const ComplexMatrix& s, double tol) {
  require_square(s, "is_selfadjoint_multiple input");
  require_finite(s, "is_selfadjoint_multiple input");
  SelfadjointMultipleResult out;
  const double ns = operator_norm(s);
  if (ns == 0.0) {
    out.verdict = true;
    out.omega = Complex(1.0, 0.0);
    return out;
  }
  Index bi = 0;
  Index bj = 0;
  s.cwiseAbs().maxCoeff(&bi, &bj);
  Complex omega = std::conj(s(bj, bi)) / s(bi, bj);
  const double mod = std::abs(omega);
  omega = mod > 0 ? omega / mod : Complex(1.0, 0.0);
  out.residual = operator_norm(s.adjoint() - omega * s) / ns;
  out.verdict = out.residual <= tol;
  if (out.verdict) out.omega = omega;
  return out;
}

UnitaryMultipleResult is_unitary_multiple(const ComplexMatrix& s, double tol) {
  require_square(s, "is_unitary_multiple input");
  require_finite(s, "is_unitary_multiple input");
  UnitaryMultipleResult out;
  const double ns = operator_norm(s);
  if (ns == 0.0) {
    out.residual = 1.0;
    return out;
  }
  out.residual = operator_norm(s.adjoint() * s - ns * ns * identity(s.rows())) / (ns * ns);
  out.verdict = out.residual <= tol;
  if (out.verdict) out.modulus = ns;
  return out;
}

ClassAResult is_class_a(const ComplexMatrix& s, double tol) {
  require_square(s, "is_class_a input");
  require_finite(s, "is_class_a input");
  ClassAResult out;
  const double ns = operator_norm(s);
  if (ns == 0.0) {
    out.verdict = true;
    return out;
  }
  out.margin = min_eigenvalue(absolute_value(s * s) - s.adjoint() * s);
  out.verdict = out.margin >= -tol * ns * ns;
  return out;
}

ParanormalResult is_paranormal(const ComplexMatrix& s, double tol, const Budget& budget, std::uint64_t seed) {
  require_square(s, "is_paranormal input");
  require_finite(s, "is_paranormal input");
  require_budget(budget);
  const Index n = s.rows();
  ParanormalResult out;
  const double ns = operator_norm(s);
  if (ns == 0.0 || n == 0) {
    out.verdict = Verdict::Yes;
    out.witness = n > 0 ? ComplexVector(ComplexVector::Unit(n, 0)) : ComplexVector();
    return out;
  }
  const ComplexMatrix s2 = s * s;
  const ComplexMatrix a = s2.adjoint() * s2;
  const ComplexMatrix b = s.adjoint() * s;

  // quadratic pencil screen on a geometric t grid
  out.pencil_min = std::numeric_limits<double>::infinity();
  ComplexVector pencil_vec;
  const int grid = 64;
  const double t_lo = 1e-4 * ns * ns;
  const double t_hi = ns * ns;
  for (int k = 0; k < grid; ++k) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(k) / (grid - 1));
    const ComplexMatrix pencil = a - 2.0 * t * b + t * t * identity(n);
    const double lam = min_eigenvalue(pencil);
    if (lam < out.pencil_min) {
      out.pencil_min = lam;
      out.pencil_t = t;
      pencil_vec = min_eigenvector(pencil);
    }
  }
  out.pencil_says = out.pencil_min >= -tol * std::pow(ns, 4);

  // sphere descent from structured and random starts
  std::vector<ComplexVector> seeds{pencil_vec};
  const EigenPairs eig = eigen_pairs(s);
  for (Index k = 0; k < n; ++k) seeds.push_back(eig.right.col(k));
  const EigenPairs eig_adj = eigen_pairs(s.adjoint());
  for (Index k = 0; k < n; ++k) seeds.push_back(eig_adj.right.col(k));
  for (const ComplexMatrix* m : {&s, &s2}) {
    const SvdFactors f = singular_value_decomposition(*m);
    for (Index k = 0; k < n; ++k) {
      seeds.push_back(f.left.col(k));
      seeds.push_back(f.right.col(k));
    }
  }
  for (Index k = 0; k < n; ++k) seeds.push_back(ComplexVector::Unit(n, k));
  for (auto& v : seeds) v.normalize();
  std::stable_sort(seeds.begin(), seeds.end(), [&](const ComplexVector& l, const ComplexVector& r) {
    return paranormal_gap(s, s2, l) < paranormal_gap(s, s2, r);
  });

  const double scale = ns * ns;
  out.worst_gap = paranormal_gap(s, s2, seeds.front());
  out.witness = seeds.front();
  const int structured = std::min<int>(static_cast<int>(seeds.size()), std::max(1, budget.restarts / 2));
  for (int k = 0; k < budget.restarts; ++k) {
    ComplexVector x;
    if (k < structured) {
      x = seeds[static_cast<std::size_t>(k)];
    } else {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k));
      x = rng.unit_vector(n);
    }
    const SphereRun run = descend_paranormal(s, s2, x, budget, scale);
    if (run.value < out.worst_gap) {
      out.worst_gap = run.value;
      out.witness = run.x;
    }
  }
  out.descent_says = out.worst_gap >= -tol * scale;
  if (out.descent_says && out.pencil_says)
    out.verdict = Verdict::Yes;
  else if (!out.descent_says && !out.pencil_says)
    out.verdict = Verdict::No;
  else
    out.verdict = Verdict::Inconclusive;
  return out;
}

ClassificationReport classify(const ComplexMatrix& s, double tol, const Budget& budget, std::uint64_t seed) {
  require_square(s, "classify input");
  require_finite(s, "classify input");
  ClassificationReport rep;
  rep.tol = tol;
  const double ns = operator_norm(s);
  rep.commutator_norm = self_commutator_norm(s);
  rep.normal = rep.commutator_norm <= tol * ns * ns;
  rep.selfadjoint_multiple = is_selfadjoint_multiple(s, tol);
  rep.unitary_multiple = is_unitary_multiple(s, tol);
  rep.unitary_reflection_multiple = rep.selfadjoint_multiple.verdict && rep.unitary_multiple.verdict;
  const bool hermitian = operator_norm(s - s.adjoint()) <= tol * ns;
  rep.min_eigenvalue_hermitian_part = min_eigenvalue(s);
  rep.positive_semidefinite = hermitian && rep.min_eigenvalue_hermitian_part >= -tol * ns;
  const EpResult ep = is_ep(s, tol);
  rep.ep_gap = ep.projector_gap;
  rep.ep = ep.is_ep || rep.normal;
  rep.class_a = is_class_a(s, tol);
  rep.paranormal = is_paranormal(s, tol, budget, seed);
  return rep;
}

ModuliNormality normality_by_moduli(const ComplexMatrix& s, double tol, const Budget& budget, std::uint64_t seed) {
  require_square(s, "normality_by_moduli input");
  require_finite(s, "normality_by_moduli input");
  ModuliNormality out;
  const double ns = operator_norm(s);
  const double ns2 = ns * ns;
  const ComplexMatrix sa = s.adjoint();
  const ComplexMatrix s2 = s * s;
  const ComplexMatrix sa2 = sa * sa;
  const ComplexMatrix ss = sa * s;   // |S|^2
  const ComplexMatrix ssa = s * sa;  // |S*|^2

  out.moduli_equal = operator_norm(absolute_value(s2) - ss) <= tol * ns2 &&
                     operator_norm(absolute_value(sa2) - ssa) <= tol * ns2;
  const double ns4 = ns2 * ns2;
  out.fourth_power_order = min_eigenvalue(sa2 * s2 - ss * ss) >= -tol * ns4 &&
                           min_eigenvalue(s2 * sa2 - ssa * ssa) >= -tol * ns4;
  out.class_a_both = is_class_a(s, tol).verdict && is_class_a(sa, tol).verdict;
  const Verdict p = is_paranormal(s, tol, budget, seed).verdict;
  const Verdict q = is_paranormal(sa, tol, budget, seed).verdict;
  if (p == Verdict::No || q == Verdict::No)
    out.paranormal_both = Verdict::No;
  else if (p == Verdict::Yes && q == Verdict::Yes)
    out.paranormal_both = Verdict::Yes;
  else
    out.paranormal_both = Verdict::Inconclusive;
  out.conjunction =
      out.moduli_equal && out.fourth_power_order && out.class_a_both && out.paranormal_both == Verdict::Yes;
  out.direct_normal = self_commutator_norm(s) <= tol * ns2;
  out.agrees = out.conjunction == out.direct_normal;
  return out;
}

GapResult characterization_gap(const ComplexMatrix& s, const std::string& inequality_id, const Budget& budget,
                               std::uint64_t seed) {
  require_square(s, "characterization_gap input");
  require_finite(s, "characterization_gap input");
  const InequalityId id = parse_inequality_id(inequality_id);
  const InequalityInfo& info = inequality_info(id.name);
  const std::vector<ComplexMatrix> operands(static_cast<std::size_t>(info.operand_count), s);
  const GapFunctional f = build_gap_functional(id, operands);

  SeedSet seeds;
  for (const ComplexMatrix& base : {s, ComplexMatrix(s * s)}) {
    SeedSet part = structured_seeds(base);
    seeds.matrices.insert(seeds.matrices.end(), part.matrices.begin(), part.matrices.end());
    seeds.rank_ones.insert(seeds.rank_ones.end(), part.rank_ones.begin(), part.rank_ones.end());
  }
  const GapMinimum m = minimize_gap(f, budget, seed, seeds, info.rank_one_only);

  GapResult out;
  out.inequality_id = format_inequality_id(id);
  out.min_gap = m.value;
  out.certificate_x = m.certificate;
  out.scale = f.scale();
  out.operand_scale = std::pow(operator_norm(s), info.operand_degree);
  out.search_budget = budget;
  out.restarts_used = m.restarts_used;
  out.iterations = m.iterations;
  out.converged = m.converged;
  return out;
}

}  // namespace opineq
