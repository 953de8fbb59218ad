#pragma once

#include <optional>
#include <vector>

#include "linres/linalg.hpp"
#include "linres/topology.hpp"

namespace linres {

// Everything in this header is about the factorization x0 = C * s: powers
// of W collapse onto the first n powers through the characteristic
// polynomial, so the whole left input history folds into the n-vector s.

// Negated characteristic coefficients of W:
//   W^n = varphi[n-1] W^{n-1} + ... + varphi[1] W + varphi[0] I.
struct CharCoeffs {
  Vector varphi;
};

CharCoeffs char_coeffs(const Matrix& w);
inline CharCoeffs char_coeffs(const Reservoir& r) { return char_coeffs(r.W); }

// Frobenius companion matrix M of the recursion: ones on the subdiagonal,
// varphi in the last column. Advancing phi^{(k+1)} = M phi^{(k)}; its
// eigenvalues are the eigenvalues of W.
Matrix companion_matrix(const CharCoeffs& c);

// Coefficients of W^k in the basis (I, W, ..., W^{n-1}):
//   W^k = sum_j phi_j^{(k)} W^j.
struct PhiState {
  long k = 0;
  Vector phi;
};

// Streaming generator for phi^{(k)}, k = 0, 1, 2, ... The first n states
// are exact basis vectors e_k (assigned, never computed), phi^{(n)} is
// varphi itself, and later states advance with the O(n) companion
// recursion. Throws DivergenceError once |phi| exceeds 1e100.
class PhiIterator {
 public:
  explicit PhiIterator(const CharCoeffs& c);

  long k() const { return k_; }
  const Vector& value() const { return phi_; }
  void advance();

 private:
  Vector varphi_;
  Vector phi_;
  long k_ = 0;
};

// Materialized phi^{(0)} .. phi^{(horizon-1)}. Guarded against absurd
// allocations (horizon * n is capped); use PhiIterator or encode_input for
// long streams.
std::vector<PhiState> phi_sequence(const CharCoeffs& c, long horizon);

// s_j = sum_{k < K} phi_j^{(k)} u_{-k}, plus bookkeeping on how much of
// the (infinite) series the window covered.
struct EncodedInput {
  Vector s;
  long horizon = 0;          // K: number of history terms consumed
  double tail_estimate = 0;  // heuristic bound on the discarded remainder
};

// General encoder. `window` is newest-first: window[0] = u_0 (current
// step), window[i] = u_{-i}. K defaults to the window length and must
// satisfy n <= K <= window size. The k < n block transcribes the window
// into s verbatim (no arithmetic), so those contributions are exact.
//
// tail_estimate: the l1 mass of phi is followed past K (at least 50
// steps, at least two full recursion periods) and extrapolated
// geometrically, scaled by max|u| over the window. This is a heuristic,
// not a bound; it throws DivergenceError when the observed growth ratio
// is >= 1 (non-contracting regime, e.g. cyclic at rho >= 1).
EncodedInput encode_input(const CharCoeffs& c, const Vector& window,
                          std::optional<long> horizon = std::nullopt);

// Closed form for the cyclic topology, tilde normalization:
//   s~_j = sum_p rho^{j+pn} u_{-(j+pn)}   (pairs with the unscaled-shift
// controllability basis C~). Relates to the general encoding by
// s~_j = rho^j s_j. tail_estimate is the exact geometric remainder bound
// max|u| * rho^K / (1 - rho); rho >= 1 throws DivergenceError.
EncodedInput encode_input_cyclic(double rho, int n, const Vector& window,
                                 std::optional<long> horizon = std::nullopt);

// Closed form for the delay line: s is the first n window entries,
// verbatim; everything older is annihilated (W^n = 0), tail is exactly 0.
EncodedInput encode_input_delay(const Vector& window, int n);

// Smallest K with rho^K below epsilon, computed as
// ceil(ln(epsilon)/ln(rho)) with a 1e-12 fuzz guard so exact integer
// ratios are not bumped by rounding. Clamped to [max(1, min_horizon),
// 1e6]. Requires 0 < rho < 1 and epsilon > 0.
long truncation_horizon(double rho, double epsilon = 1e-12,
                        long min_horizon = 1);

}  // namespace linres
