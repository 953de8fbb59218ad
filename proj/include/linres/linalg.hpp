#pragma once

#include <Eigen/Dense>
#include <optional>

#include "linres/errors.hpp"

namespace linres {

// Dense real containers used across the library. Eigen supplies the
// storage and factorizations; every policy decision (rank cutoffs,
// tolerance semantics, coefficient post-processing) is centralized in the
// functions below so the rest of the code never makes them ad hoc.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct SpectrumSummary {
  double spectral_radius = 0.0;
  double max_singular_value = 0.0;
};

bool all_finite(const Matrix& m);

// max |eigenvalue|. Throws std::invalid_argument for non-square input and
// NumericalError if the eigen iteration fails to converge.
double spectral_radius(const Matrix& m);

// Singular values in descending order (full set, zeros included).
Vector singular_values(const Matrix& m);

// Conventional absolute rank cutoff: sigma_max * max(rows, cols) * eps.
double rank_cutoff(const Vector& svals, Index rows, Index cols);

// Number of singular values strictly above the cutoff. `tol`, when given,
// is the absolute cutoff to use instead of the default; it must be >= 0.
int numerical_rank(const Matrix& m, std::optional<double> tol = std::nullopt);

// Orthonormal basis of the numerical nullspace, one column per vector;
// (cols - rank) columns, possibly zero. Same `tol` semantics as
// numerical_rank.
Matrix nullspace_basis(const Matrix& m, std::optional<double> tol = std::nullopt);

// Negated characteristic polynomial coefficients varphi with
//   lambda^n = varphi[n-1] lambda^{n-1} + ... + varphi[1] lambda + varphi[0]
// i.e. varphi[k] = -alpha_k for the monic characteristic polynomial
// lambda^n + alpha_{n-1} lambda^{n-1} + ... + alpha_0. Computed by
// expanding prod (x - lambda_i) over the eigenvalues in complex
// arithmetic; the imaginary residue must cancel to <= 1e-8 (relative to
// the coefficient scale) or a ConditioningError is thrown. Capped at
// n <= 2048.
Vector char_poly_negated_coeffs(const Matrix& m);

// Minimum-norm least squares via SVD. ridge == 0 uses the pseudoinverse
// with the conventional cutoff (rank_cutoff); ridge > 0 applies Tikhonov
// filtering sigma / (sigma^2 + ridge). Deterministic: no randomized
// pivoting, single-threaded factorization.
Vector least_squares(const Matrix& a, const Vector& b, double ridge = 0.0);

// Spectral radius and largest singular value of the same matrix. For any
// matrix rho <= sigma_max (up to solver accuracy); equality holds for the
// symmetric topologies.
SpectrumSummary spectrum_summary(const Matrix& m);

}  // namespace linres
