#pragma once

#include <optional>
#include <utility>

#include "linres/linalg.hpp"
#include "linres/topology.hpp"

namespace linres {

// Share of a nullspace vector's squared norm that must sit in the
// trailing (n - rank) components for the "memory loss lives at the old
// end of the history" reading to hold. Referenced by tests and reports
// rather than hard-coded at use sites.
inline constexpr double kTrailingEnergyFraction = 0.90;

// C = [w, Ww, W^2 w, ..., W^{n-1} w], built with iterated matrix-vector
// products. Column k spans what an input k steps in the past can still
// reach, so rank(C) is the usable linear memory.
Matrix controllability_matrix(const Reservoir& r);

struct ControllabilityReport {
  Matrix C;
  Vector singular_values;  // descending
  int rank = 0;
  Matrix nullspace;       // orthonormal columns, (cols - rank) of them
  Vector column_norms;    // ||C_k||_2
  double rank_tolerance = 0.0;  // absolute cutoff the rank was decided at
};

// Full SVD-based report on a controllability matrix. `tol` overrides the
// conventional absolute cutoff (see linalg::rank_cutoff).
ControllabilityReport analyze(const Matrix& c,
                              std::optional<double> tol = std::nullopt);

// The idealized column-norm profile (1, rho, rho^2, ..., rho^{n-1}): with
// E||w||^2 = 1 and entries of W at their nominal scale, ||W^k w|| tracks
// rho^k until it drowns in the rank cutoff.
Vector expected_column_norms(double rho, int n);

// Cyclic closed form in the unscaled-shift basis:
//   C~ = [w, shift(w), shift^2(w), ..., shift^{n-1}(w)]
// (a circulant of w). Full rank iff w is aperiodic. The rho-scaled
// controllability matrix is C with columns rho^k shift^k(w).
Matrix cyclic_controllability_tilde(const Vector& w);

// Picks a nullspace direction d (basis column d_index) of C and returns
// the pair (C s1, C (s1 + d)): two different encoded histories the
// readout provably cannot tell apart. Throws std::invalid_argument when C
// has full rank (empty nullspace: the reservoir has full memory rank, no
// such pair exists) or d_index is out of range.
std::pair<Vector, Vector> indistinguishability_demo(const Reservoir& r,
                                                    const Vector& s1,
                                                    int d_index);

}  // namespace linres
