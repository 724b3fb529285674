#pragma once

// Dense complex decompositions and the operator primitives built on them:
// modulus |S|, Moore-Penrose inverse S+, polar factors, PSD powers, spectra.
//
// Tolerances are relative to the operator (spectral) norm of the input so
// verdicts do not drift with dimension or scale.

#include "opineq/core.hpp"

#include <optional>
#include <vector>

namespace opineq {

inline constexpr double kDefaultHermitianTol = 1e-8;

struct Spectrum {
  std::vector<Complex> eigenvalues;
  std::optional<ComplexMatrix> basis;
  bool is_orthonormal_basis = false;
};

struct SvdFactors {
  ComplexMatrix left;
  RealVector singulars;  // nonincreasing
  ComplexMatrix right;
};

struct PolarFactors {
  ComplexMatrix unitary_part;
  ComplexMatrix positive_part;
};

struct PenroseResiduals {
  double sgs_minus_s = 0;  // |SGS - S|
  double gsg_minus_g = 0;  // |GSG - G|
  double sg_hermitian = 0;  // |(SG)* - SG|
  double gs_hermitian = 0;  // |(GS)* - GS|

  double max() const;
};

struct EpResult {
  bool is_ep = false;
  double projector_gap = 0;  // |SS+ - S+S|
};

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix identity(Index n);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);
/// Smallest singular value of a square matrix.
double min_singular_value(const ComplexMatrix& m);
/// |S| |S^-1| from singular values; +inf when singular.
double condition_number(const ComplexMatrix& m);

/// Top singular triple (sigma, u, v) with M v = sigma u.
struct TopSingular {
  double value = 0;
  ComplexVector left;
  ComplexVector right;
};
TopSingular top_singular(const ComplexMatrix& m);

Spectrum hermitian_eigendecomposition(const ComplexMatrix& m, double tol = kDefaultHermitianTol);

/// Eigenvalues with multiplicity, sorted by (modulus, argument).
Spectrum schur_spectrum(const ComplexMatrix& m);

/// Right eigenvectors and matching left eigenvectors (rows of V^-1) of a
/// diagonalizable matrix. Left vectors are conjugated columns so that
/// left[k]^* M = lambda_k left[k]^*.
struct EigenPairs {
  std::vector<Complex> values;
  ComplexMatrix right;
  ComplexMatrix left;
  bool diagonalizable = true;
};
EigenPairs eigen_pairs(const ComplexMatrix& m);

SvdFactors singular_value_decomposition(const ComplexMatrix& m);

ComplexMatrix absolute_value(const ComplexMatrix& s);

/// Functional calculus power of a PSD matrix; 0^0 := 1.
ComplexMatrix psd_power(const ComplexMatrix& p, double alpha, double tol = kDefaultHermitianTol);

PolarFactors polar_decompose(const ComplexMatrix& s);

/// Default relative rank cutoff: n * 1e-12.
double default_rank_rtol(const ComplexMatrix& s);
Index numerical_rank(const ComplexMatrix& s, std::optional<double> rank_rtol = std::nullopt);
ComplexMatrix pseudo_inverse(const ComplexMatrix& s, std::optional<double> rank_rtol = std::nullopt);

/// Each residual normalized by max(1, |S|, |G|).
PenroseResiduals verify_penrose(const ComplexMatrix& s, const ComplexMatrix& g);

EpResult is_ep(const ComplexMatrix& s, double tol = kDefaultHermitianTol);

/// Inverse of a square matrix; throws Singular when the condition number
/// exceeds `max_condition`.
ComplexMatrix checked_inverse(const ComplexMatrix& s, double max_condition = 1e12);

/// |S*S - SS*|.
double self_commutator_norm(const ComplexMatrix& s);

/// Polar projection onto the unitary group (nearest unitary U V*).
ComplexMatrix nearest_unitary(const ComplexMatrix& m);

/// Unitary whose first column is the given unit vector.
ComplexMatrix unitary_with_first_column(const ComplexVector& v);

}  // namespace opineq
