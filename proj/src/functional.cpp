#include "opineq/functional.hpp"

#include "opineq/linalg.hpp"
#include "opineq/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace opineq {

void require_budget(const Budget& b) {
  if (b.restarts < 1 || b.iterations < 1) throw Error(ErrorCode::BudgetZero, "budget needs at least one restart and one iteration");
}

NormExpression::NormExpression(std::vector<NormMonomial> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.factors.empty()) throw Error(ErrorCode::InvalidArgument, "norm monomial without factors");
    if (t.factors.size() != terms_.front().factors.size())
      throw Error(ErrorCode::InvalidArgument, "norm expression mixes homogeneity degrees");
  }
}

NormExpression NormExpression::norm(ElementaryOperator op, double coeff) {
  return NormExpression({NormMonomial{coeff, {std::move(op)}}});
}

NormExpression NormExpression::identity_norm(Index n, double coeff) {
  return norm(ElementaryOperator::single(identity(n), identity(n)), coeff);
}

NormExpression NormExpression::operator+(const NormExpression& other) const {
  auto terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return NormExpression(std::move(terms));
}

double NormExpression::evaluate(const ComplexMatrix& x) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    double prod = t.coeff;
    for (const auto& f : t.factors) prod *= operator_norm(f.apply(x));
    total += prod;
  }
  return total;
}

ComplexMatrix NormExpression::gradient(const ComplexMatrix& x) const {
  ComplexMatrix g = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& t : terms_) {
    const std::size_t k = t.factors.size();
    std::vector<double> values(k);
    std::vector<ComplexMatrix> grads(k);
    for (std::size_t j = 0; j < k; ++j) {
      const ComplexMatrix image = t.factors[j].apply(x);
      const TopSingular top = top_singular(image);
      values[j] = top.value;
      if (top.value > 0.0)
        grads[j] = t.factors[j].apply_adjoint(top.left * top.right.adjoint());
      else
        grads[j] = ComplexMatrix::Zero(x.rows(), x.cols());
    }
    for (std::size_t j = 0; j < k; ++j) {
      double others = t.coeff;
      for (std::size_t i = 0; i < k; ++i)
        if (i != j) others *= values[i];
      g += others * grads[j];
    }
  }
  return g;
}

double NormExpression::bound() const {
  double b = 0.0;
  for (const auto& t : terms_) {
    double prod = std::abs(t.coeff);
    for (const auto& f : t.factors) prod *= f.norm_bound();
    b += prod;
  }
  return b;
}

int NormExpression::degree() const { return terms_.empty() ? 0 : static_cast<int>(terms_.front().factors.size()); }

GapValue GapFunctional::evaluate(const ComplexMatrix& x) const {
  GapValue v;
  v.lhs = lhs.evaluate(x);
  v.rhs = rhs.evaluate(x);
  v.gap = v.lhs - v.rhs;
  return v;
}

ComplexMatrix GapFunctional::gradient(const ComplexMatrix& x) const {
  ComplexMatrix g = lhs.gradient(x);
  if (!rhs.empty()) g -= rhs.gradient(x);
  return g;
}

int GapFunctional::degree() const { return std::max(lhs.degree(), rhs.degree()); }

double GapFunctional::scale() const { return std::max({lhs.bound(), rhs.bound(), std::numeric_limits<double>::min()}); }

SeedSet structured_seeds(const ComplexMatrix& s) {
  const Index n = s.rows();
  SeedSet seeds;
  seeds.matrices.push_back(identity(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) seeds.rank_ones.emplace_back(ComplexVector::Unit(n, i), ComplexVector::Unit(n, j));
  const EigenPairs eig = eigen_pairs(s);
  if (eig.diagonalizable) {
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) seeds.rank_ones.emplace_back(eig.right.col(j), eig.left.col(k));
  }
  const SvdFactors svd = singular_value_decomposition(s);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) seeds.rank_ones.emplace_back(svd.left.col(j), svd.right.col(k));
  return seeds;
}

namespace {

struct Candidate {
  double value;
  bool rank_one;
  ComplexMatrix x;
  ComplexVector u;
  ComplexVector v;
};

class GapDescent {
 public:
  GapDescent(const GapFunctional& f, const Budget& b) : f_(f), budget_(b), degree_(f.degree()), scale_(f.scale()) {}

  double value_at(const ComplexMatrix& x) const { return f_.evaluate(x).gap; }

  /// Local descent over rank-one X = u v* with unit u, v.
  double descend_rank_one(ComplexVector& u, ComplexVector& v, long& iterations, bool& converged) const {
    double val = value_at(u * v.adjoint());
    double step = 0.5;
    int stalls = 0;
    converged = false;
    for (int it = 0; it < budget_.iterations; ++it) {
      ++iterations;
      const ComplexMatrix g = f_.gradient(u * v.adjoint());
      ComplexVector gu = g * v;
      ComplexVector gv = g.adjoint() * u;
      gu -= u * std::real(u.dot(gu));
      gv -= v * std::real(v.dot(gv));
      const double gn2 = gu.squaredNorm() + gv.squaredNorm();
      if (gn2 < 1e-30) {
        converged = true;
        break;
      }
      bool accepted = false;
      while (step > 1e-12) {
        ComplexVector nu = (u - step * gu).normalized();
        ComplexVector nv = (v - step * gv).normalized();
        const double cand = value_at(nu * nv.adjoint());
        if (cand < val - 1e-4 * step * gn2) {
          const double improvement = val - cand;
          u = nu;
          v = nv;
          val = cand;
          accepted = true;
          stalls = improvement < budget_.stagnation_tol * scale_ ? stalls + 1 : 0;
          step = std::min(step * 2.0, 4.0);
          break;
        }
        step *= 0.5;
      }
      if (!accepted || stalls >= 3) {
        converged = true;
        break;
      }
      if (budget_.stop_below && val < *budget_.stop_below) break;
    }
    return val;
  }

  /// Local descent over unit-norm X (normalized objective gap(X/|X|)).
  double descend_full(ComplexMatrix& x, long& iterations, bool& converged) const {
    x /= operator_norm(x);
    double val = value_at(x);
    double step = 0.25;
    int stalls = 0;
    converged = false;
    for (int it = 0; it < budget_.iterations; ++it) {
      ++iterations;
      ComplexMatrix g = f_.gradient(x);
      const TopSingular top = top_singular(x);
      g -= static_cast<double>(degree_) * val * (top.left * top.right.adjoint());
      const double gn2 = g.squaredNorm();
      if (gn2 < 1e-30) {
        converged = true;
        break;
      }
      bool accepted = false;
      while (step > 1e-12) {
        ComplexMatrix y = x - step * g;
        const double ny = operator_norm(y);
        if (ny > 0) {
          y /= ny;
          const double cand = value_at(y);
          if (cand < val - 1e-4 * step * gn2) {
            const double improvement = val - cand;
            x = y;
            val = cand;
            accepted = true;
            stalls = improvement < budget_.stagnation_tol * scale_ ? stalls + 1 : 0;
            step = std::min(step * 2.0, 4.0);
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted || stalls >= 3) {
        converged = true;
        break;
      }
      if (budget_.stop_below && val < *budget_.stop_below) break;
    }
    return val;
  }

 private:
  const GapFunctional& f_;
  const Budget& budget_;
  int degree_;
  double scale_;
};

}  // namespace

GapMinimum minimize_gap(const GapFunctional& f, const Budget& budget, std::uint64_t seed, const SeedSet& seeds,
                        bool rank_one_only) {
  require_budget(budget);
  const Index n = f.dim;
  GapDescent descent(f, budget);

  std::vector<Candidate> pool;
  if (!rank_one_only) {
    for (const auto& m : seeds.matrices) {
      const double nm = operator_norm(m);
      if (nm <= 0) continue;
      ComplexMatrix x = m / nm;
      pool.push_back({descent.value_at(x), false, x, {}, {}});
    }
  }
  for (const auto& [a, b] : seeds.rank_ones) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na <= 0 || nb <= 0) continue;
    ComplexVector u = a / na;
    ComplexVector v = b / nb;
    pool.push_back({descent.value_at(u * v.adjoint()), true, {}, u, v});
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Candidate& l, const Candidate& r) { return l.value < r.value; });

  GapMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](double value, const ComplexMatrix& x, bool conv) {
    if (value < best.value) {
      best.value = value;
      best.certificate = x;
      best.converged = conv;
    }
  };
  // screened seeds count as evaluated points even without refinement
  for (const auto& c : pool) consider(c.value, c.rank_one ? ComplexMatrix(c.u * c.v.adjoint()) : c.x, false);

  const int structured = std::min<int>(static_cast<int>(pool.size()), std::max(1, budget.restarts / 2));
  for (int r = 0; r < budget.restarts; ++r) {
    if (budget.stop_below && best.value < *budget.stop_below) break;
    ++best.restarts_used;
    bool conv = false;
    Candidate c;
    if (r < structured) {
      c = pool[static_cast<std::size_t>(r)];
    } else {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
      if (rank_one_only || r % 2 == 0) {
        c = {0, true, {}, rng.unit_vector(n), rng.unit_vector(n)};
      } else {
        c = {0, false, rng.gaussian_matrix(n, n), {}, {}};
      }
    }
    if (c.rank_one) {
      const double v1 = descent.descend_rank_one(c.u, c.v, best.iterations, conv);
      ComplexMatrix x = c.u * c.v.adjoint();
      consider(v1, x, conv);
      if (!rank_one_only && !(budget.stop_below && v1 < *budget.stop_below)) {
        const double v2 = descent.descend_full(x, best.iterations, conv);
        consider(v2, x, conv);
      }
    } else {
      ComplexMatrix x = c.x;
      const double v = descent.descend_full(x, best.iterations, conv);
      consider(v, x, conv);
    }
  }
  // certificate re-evaluated so the reported value is exactly reproducible
  best.certificate /= operator_norm(best.certificate);
  best.value = f.evaluate(best.certificate).gap;
  return best;
}

}  // namespace opineq
