#pragma once

#include <cstdint>
#include <string>

#include "linres/linalg.hpp"

namespace linres {

// The four reservoir couplings under study. DelayLine and Cyclic are
// deterministic given (n, rho); the Gaussian ensembles draw W from `seed`
// and all random kinds draw the input weights w from `input_seed`.
enum class TopologyKind { DelayLine, Cyclic, RandomGaussian, Wigner };

// AsDistributed keeps W exactly as sampled, so the spectral radius only
// matches rho in expectation. ExactSpectralRadius rescales the sampled W
// by rho / spectral_radius(W); it applies to the Gaussian ensembles and is
// a no-op for the deterministic kinds, whose spectrum is exact by
// construction.
enum class RescaleMode { AsDistributed, ExactSpectralRadius };

struct ReservoirSpec {
  TopologyKind kind = TopologyKind::RandomGaussian;
  int n = 100;
  double rho = 0.9;
  std::uint64_t seed = 0;
  std::uint64_t input_seed = 0;
  RescaleMode rescale_mode = RescaleMode::AsDistributed;
};

// A built reservoir: state update x_k = W x_{k-1} + w u_k. Building the
// same spec twice yields bitwise-identical W and w.
struct Reservoir {
  ReservoirSpec spec;
  Matrix W;
  Vector w;
};

std::string to_string(TopologyKind kind);
TopologyKind topology_kind_from_string(const std::string& name);
std::string to_string(RescaleMode mode);
RescaleMode rescale_mode_from_string(const std::string& name);

// Dispatches on spec.kind. n >= 2 and rho > 0 are required; rho > 1 is
// allowed but warned about on stderr since the encoded-input series only
// converges below 1.
Reservoir build_reservoir(const ReservoirSpec& spec);

// W[i][j] = rho for i == j + 1, zero elsewhere; w = e_0. Nilpotent:
// W^n = 0, spectral radius 0 for every rho (rho is the connection weight,
// not the spectral radius).
Reservoir build_delay_line(int n, double rho);

// Delay line plus the wrap-around entry W[0][n-1] = rho, i.e. rho times
// the cyclic shift; (W)^n = rho^n I and all singular values equal rho.
// w ~ N(0, 1/n), redrawn until it is aperiodic under cyclic shifts
// (a periodic w would collapse the reachable space).
Reservoir build_cyclic(int n, double rho, std::uint64_t input_seed = 0);

// W entries i.i.d. N(0, rho^2/n): spectral radius -> rho and largest
// singular value -> 2*rho as n grows. w ~ N(0, 1/n).
Reservoir build_random(int n, double rho, std::uint64_t seed,
                       std::uint64_t input_seed = 0,
                       RescaleMode mode = RescaleMode::AsDistributed);

// Symmetric ensemble: diagonal i.i.d. N(0, rho^2/n), off-diagonal pairs
// drawn once as N(0, (rho/2)^2/n) and mirrored. The semicircle edge then
// sits at rho, so spectral radius and largest singular value both
// approach rho (they coincide exactly for symmetric W). w ~ N(0, 1/n).
Reservoir build_wigner(int n, double rho, std::uint64_t seed,
                       std::uint64_t input_seed = 0,
                       RescaleMode mode = RescaleMode::AsDistributed);

// True iff no nontrivial cyclic shift of `w` comes within `tol * ||w||`
// of w itself. The zero vector is periodic by convention.
bool check_aperiodic(const Vector& w, double tol = 1e-9);

}  // namespace linres
