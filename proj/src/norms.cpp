#include "opineq/norms.hpp"

#include "opineq/linalg.hpp"
#include "opineq/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opineq {

std::string_view to_string(BoundDirection d) {
  return d == BoundDirection::LowerBoundOfSup ? "lower_bound_of_sup" : "upper_bound_of_inf";
}

namespace {

ComplexMatrix skew(const ComplexMatrix& m) { return (m - m.adjoint()) * 0.5; }

/// Unit vectors built from the spectral data of every coefficient.
std::vector<ComplexVector> candidate_vectors(const ElementaryOperator& r) {
  const Index n = r.dim();
  std::vector<ComplexVector> out;
  auto add_from = [&](const ComplexMatrix& m) {
    const EigenPairs eig = eigen_pairs(m);
    for (Index k = 0; k < n; ++k) out.push_back(eig.right.col(k));
    if (eig.diagonalizable)
      for (Index k = 0; k < n; ++k) out.push_back(eig.left.col(k));
    const SvdFactors svd = singular_value_decomposition(m);
    for (Index k = 0; k < n; ++k) {
      out.push_back(svd.left.col(k));
      out.push_back(svd.right.col(k));
    }
  };
  for (const auto& p : r.pairs()) {
    add_from(p.left);
    add_from(p.right);
  }
  for (Index k = 0; k < n; ++k) out.push_back(ComplexVector::Unit(n, k));

  // drop near-duplicates up to phase
  std::vector<ComplexVector> unique;
  for (auto& v : out) {
    const double nv = v.norm();
    if (nv <= 0) continue;
    v /= nv;
    bool seen = false;
    for (const auto& u : unique)
      if (std::abs(u.dot(v)) > 1.0 - 1e-12) {
        seen = true;
        break;
      }
    if (!seen) unique.push_back(v);
  }
  return unique;
}

double rank_one_value(const ElementaryOperator& r, const ComplexVector& x, const ComplexVector& h) {
  return operator_norm(r.apply_rank_one(x, h));
}

struct RankOneSeed {
  double value;
  ComplexVector x;
  ComplexVector h;
};

std::vector<RankOneSeed> screened_rank_ones(const ElementaryOperator& r) {
  const auto cands = candidate_vectors(r);
  std::vector<RankOneSeed> seeds;
  seeds.reserve(cands.size() * cands.size());
  for (const auto& x : cands)
    for (const auto& h : cands) seeds.push_back({rank_one_value(r, x, h), x, h});
  std::stable_sort(seeds.begin(), seeds.end(), [](const RankOneSeed& a, const RankOneSeed& b) { return a.value > b.value; });
  return seeds;
}

struct LocalRun {
  double value;
  ComplexVector x;
  ComplexVector h;
  long iterations = 0;
  bool converged = false;
};

/// Armijo ascent of |R(x h*)| over pairs of unit vectors.
LocalRun rank_one_ascent(const ElementaryOperator& r, ComplexVector x, ComplexVector h, const Budget& budget,
                         double scale) {
  LocalRun run{rank_one_value(r, x, h), x, h};
  double step = 0.5;
  int stalls = 0;
  for (int it = 0; it < budget.iterations; ++it) {
    ++run.iterations;
    const TopSingular top = top_singular(r.apply_rank_one(run.x, run.h));
    const ComplexMatrix g = r.apply_adjoint(top.left * top.right.adjoint());
    ComplexVector gx = g * run.h;
    ComplexVector gh = g.adjoint() * run.x;
    gx -= run.x * std::real(run.x.dot(gx));
    gh -= run.h * std::real(run.h.dot(gh));
    const double gn2 = gx.squaredNorm() + gh.squaredNorm();
    if (gn2 < 1e-30) {
      run.converged = true;
      break;
    }
    bool accepted = false;
    while (step > 1e-12) {
      ComplexVector nx = (run.x + step * gx).normalized();
      ComplexVector nh = (run.h + step * gh).normalized();
      const double cand = rank_one_value(r, nx, nh);
      if (cand > run.value + 1e-4 * step * gn2) {
        stalls = cand - run.value < budget.stagnation_tol * scale ? stalls + 1 : 0;
        run.x = nx;
        run.h = nh;
        run.value = cand;
        accepted = true;
        step = std::min(step * 2.0, 4.0);
        break;
      }
      step *= 0.5;
    }
    if (!accepted || stalls >= 3) {
      run.converged = true;
      break;
    }
  }
  return run;
}

/// Alternating maximization of |sum_i (u* A_i x)(h* B_i w)|, one vector at a time.
LocalRun four_vector_power(const ElementaryOperator& r, ComplexVector x, ComplexVector h, const Budget& budget,
                           double scale) {
  const TopSingular top = top_singular(r.apply_rank_one(x, h));
  ComplexVector u = top.left;
  ComplexVector w = top.right;
  const auto& pairs = r.pairs();
  const Index n = r.dim();
  auto functional = [&]() {
    Complex s = 0;
    for (const auto& p : pairs) s += u.dot(p.left * x) * h.dot(p.right * w);
    return std::abs(s);
  };
  auto safe_normalize = [](ComplexVector& v, const ComplexVector& fallback) {
    const double nv = v.norm();
    v = nv > 0 ? ComplexVector(v / nv) : fallback;
  };
  LocalRun run{functional(), x, h};
  int stalls = 0;
  for (int it = 0; it < budget.iterations; ++it) {
    ++run.iterations;
    const double before = functional();
    ComplexVector acc = ComplexVector::Zero(n);
    for (const auto& p : pairs) acc += h.dot(p.right * w) * (p.left * x);
    safe_normalize(acc, u);
    u = acc;
    acc.setZero();
    for (const auto& p : pairs) acc += std::conj(h.dot(p.right * w)) * (p.left.adjoint() * u);
    safe_normalize(acc, x);
    x = acc;
    acc.setZero();
    for (const auto& p : pairs) acc += u.dot(p.left * x) * (p.right * w);
    safe_normalize(acc, h);
    h = acc;
    acc.setZero();
    for (const auto& p : pairs) acc += std::conj(u.dot(p.left * x)) * (p.right.adjoint() * h);
    safe_normalize(acc, w);
    w = acc;
    const double after = functional();
    stalls = after - before < budget.stagnation_tol * scale ? stalls + 1 : 0;
    if (stalls >= 3) {
      run.converged = true;
      break;
    }
  }
  run.x = x;
  run.h = h;
  run.value = rank_one_value(r, x, h);
  return run;
}

struct MethodOutcome {
  LocalRun best;
  int restarts = 0;
  long iterations = 0;
};

template <typename Local>
MethodOutcome run_method(const ElementaryOperator& r, const std::vector<RankOneSeed>& seeds, const Budget& budget,
                         std::uint64_t seed, double scale, Local local) {
  MethodOutcome out;
  out.best = {seeds.front().value, seeds.front().x, seeds.front().h};
  const int structured = std::min<int>(static_cast<int>(seeds.size()), std::max(1, budget.restarts / 2));
  for (int k = 0; k < budget.restarts; ++k) {
    ComplexVector x;
    ComplexVector h;
    if (k < structured) {
      x = seeds[static_cast<std::size_t>(k)].x;
      h = seeds[static_cast<std::size_t>(k)].h;
    } else {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k));
      x = rng.unit_vector(r.dim());
      h = rng.unit_vector(r.dim());
    }
    LocalRun run = local(r, x, h, budget, scale);
    ++out.restarts;
    out.iterations += run.iterations;
    if (run.value > out.best.value || (run.value == out.best.value && run.converged && !out.best.converged))
      out.best = run;
  }
  return out;
}

}  // namespace

OptimizationResult injective_norm_estimate(const ElementaryOperator& r, const Budget& budget, std::uint64_t seed,
                                           InjectiveMethod method) {
  require_budget(budget);
  const double scale = std::max(r.norm_bound(), std::numeric_limits<double>::min());
  const auto seeds = screened_rank_ones(r);

  OptimizationResult res;
  res.direction = BoundDirection::LowerBoundOfSup;
  res.stagnation_tol = budget.stagnation_tol;

  std::optional<MethodOutcome> ascent;
  std::optional<MethodOutcome> power;
  if (method != InjectiveMethod::FourVectorPower) ascent = run_method(r, seeds, budget, seed, scale, rank_one_ascent);
  if (method != InjectiveMethod::RankOneAscent) power = run_method(r, seeds, budget, seed, scale, four_vector_power);

  const MethodOutcome* chosen = nullptr;
  if (ascent && power) {
    chosen = ascent->best.value >= power->best.value ? &*ascent : &*power;
    const MethodOutcome& other = chosen == &*ascent ? *power : *ascent;
    res.method = chosen == &*ascent ? "rank_one_ascent" : "four_vector_power";
    res.secondary_value = other.best.value;
    const double hi = std::max(ascent->best.value, power->best.value);
    res.methods_agree = std::abs(ascent->best.value - power->best.value) <= kMethodAgreementTol * std::max(hi, 1e-300);
    res.restarts_used = ascent->restarts + power->restarts;
    res.iterations = ascent->iterations + power->iterations;
    res.converged = ascent->best.converged && power->best.converged;
  } else {
    chosen = ascent ? &*ascent : &*power;
    res.method = ascent ? "rank_one_ascent" : "four_vector_power";
    res.restarts_used = chosen->restarts;
    res.iterations = chosen->iterations;
    res.converged = chosen->best.converged;
  }
  const ComplexVector x = chosen->best.x.normalized();
  const ComplexVector h = chosen->best.h.normalized();
  res.factors = std::make_pair(x, h);
  res.certificate = x * h.adjoint();
  res.value = rank_one_value(r, x, h);
  return res;
}

OptimizationResult inf_norm_estimate(const ElementaryOperator& r, const Budget& budget, std::uint64_t seed) {
  require_budget(budget);
  GapFunctional f{NormExpression::norm(r), NormExpression(), r.dim()};
  SeedSet seeds;
  for (const auto& p : r.pairs()) {
    for (const ComplexMatrix* m : {&p.left, &p.right}) {
      SeedSet s = structured_seeds(*m);
      seeds.matrices.insert(seeds.matrices.end(), s.matrices.begin(), s.matrices.end());
      seeds.rank_ones.insert(seeds.rank_ones.end(), s.rank_ones.begin(), s.rank_ones.end());
    }
  }
  const GapMinimum m = minimize_gap(f, budget, seed, seeds);
  OptimizationResult res;
  res.direction = BoundDirection::UpperBoundOfInf;
  res.value = m.value;
  res.certificate = m.certificate;
  res.restarts_used = m.restarts_used;
  res.iterations = m.iterations;
  res.converged = m.converged;
  res.stagnation_tol = budget.stagnation_tol;
  res.method = "sphere_descent";
  return res;
}

OptimizationResult sup_norm_estimate(const ElementaryOperator& r, const Budget& budget, std::uint64_t seed) {
  require_budget(budget);
  const Index n = r.dim();
  const double scale = std::max(r.norm_bound(), std::numeric_limits<double>::min());

  std::vector<ComplexMatrix> starts;
  starts.push_back(identity(n));
  // unitaries mapping h to x for the best rank-one directions
  const auto rank_ones = screened_rank_ones(r);
  const int structured = std::max(1, budget.restarts / 2);
  for (std::size_t k = 0; k < rank_ones.size() && static_cast<int>(starts.size()) < structured; ++k) {
    const ComplexMatrix w1 = unitary_with_first_column(rank_ones[k].h);
    const ComplexMatrix w2 = unitary_with_first_column(rank_ones[k].x);
    starts.push_back(w2 * w1.adjoint());
  }

  auto value_of = [&](const ComplexMatrix& w) { return operator_norm(r.apply(w)); };

  OptimizationResult res;
  res.direction = BoundDirection::LowerBoundOfSup;
  res.stagnation_tol = budget.stagnation_tol;
  res.method = "unitary_ascent";
  res.value = -1.0;

  for (int k = 0; k < budget.restarts; ++k) {
    ComplexMatrix w;
    if (k < static_cast<int>(starts.size())) {
      w = starts[static_cast<std::size_t>(k)];
    } else {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(k));
      w = rng.unitary(n);
    }
    ++res.restarts_used;
    double val = value_of(w);
    double step = 0.5;
    int stalls = 0;
    bool conv = false;
    for (int it = 0; it < budget.iterations; ++it) {
      ++res.iterations;
      const TopSingular top = top_singular(r.apply(w));
      const ComplexMatrix g = r.apply_adjoint(top.left * top.right.adjoint());
      const ComplexMatrix dir = w * skew(w.adjoint() * g);
      const double gn2 = dir.squaredNorm();
      if (gn2 < 1e-30) {
        conv = true;
        break;
      }
      bool accepted = false;
      while (step > 1e-12) {
        const ComplexMatrix cand_w = nearest_unitary(w + step * dir);
        const double cand = value_of(cand_w);
        if (cand > val + 1e-4 * step * gn2) {
          stalls = cand - val < budget.stagnation_tol * scale ? stalls + 1 : 0;
          w = cand_w;
          val = cand;
          accepted = true;
          step = std::min(step * 2.0, 4.0);
          break;
        }
        step *= 0.5;
      }
      if (!accepted || stalls >= 3) {
        conv = true;
        break;
      }
    }
    if (val > res.value) {
      res.value = val;
      res.certificate = w;
      res.converged = conv;
    }
  }
  res.value = value_of(res.certificate);
  return res;
}

}  // namespace opineq
