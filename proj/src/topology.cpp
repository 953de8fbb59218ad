#include "linres/topology.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "linres/rng.hpp"

namespace linres {

namespace {

// Separate key tags so the matrix and input-weight streams never overlap
// even when seed == input_seed.
constexpr std::uint64_t kTagMatrix = 0x57;   // 'W'
constexpr std::uint64_t kTagInput = 0x77;    // 'w'

void validate_args(int n, double rho, const char* who) {
  std::ostringstream msg;
  if (n < 2) {
    msg << who << ": reservoir size must be >= 2, got " << n;
    throw std::invalid_argument(msg.str());
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    msg << who << ": rho must be positive and finite, got " << rho;
    throw std::invalid_argument(msg.str());
  }
  if (rho > 1.0) {
    std::cerr << "warning: " << who << ": rho = " << rho
              << " > 1; the encoded-input series will not converge\n";
  }
}

Vector gaussian_input_weights(int n, std::uint64_t input_seed) {
  Philox4x64 rng(input_seed, kTagInput);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  Vector w(n);
  for (int i = 0; i < n; ++i) w[i] = sigma * rng.next_gaussian();
  return w;
}

void rescale_to_exact_radius(Reservoir& r, const char* who) {
  const double sr = spectral_radius(r.W);
  if (sr <= 0.0) {
    throw NumericalError(std::string(who) +
                         ": cannot rescale, sampled spectral radius is 0");
  }
  r.W *= r.spec.rho / sr;
}

}  // namespace

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::DelayLine: return "delay";
    case TopologyKind::Cyclic: return "cyclic";
    case TopologyKind::RandomGaussian: return "random";
    case TopologyKind::Wigner: return "wigner";
  }
  throw std::invalid_argument("unknown topology kind");
}

TopologyKind topology_kind_from_string(const std::string& name) {
  if (name == "delay" || name == "delay-line") return TopologyKind::DelayLine;
  if (name == "cyclic") return TopologyKind::Cyclic;
  if (name == "random") return TopologyKind::RandomGaussian;
  if (name == "wigner") return TopologyKind::Wigner;
  throw std::invalid_argument(
      "unknown topology kind '" + name +
      "' (expected delay, cyclic, random or wigner)");
}

std::string to_string(RescaleMode mode) {
  return mode == RescaleMode::AsDistributed ? "as-distributed"
                                            : "exact-spectral-radius";
}

RescaleMode rescale_mode_from_string(const std::string& name) {
  if (name == "as-distributed") return RescaleMode::AsDistributed;
  if (name == "exact-spectral-radius" || name == "exact") {
    return RescaleMode::ExactSpectralRadius;
  }
  throw std::invalid_argument(
      "unknown rescale mode '" + name +
      "' (expected as-distributed or exact-spectral-radius)");
}

Reservoir build_reservoir(const ReservoirSpec& spec) {
  switch (spec.kind) {
    case TopologyKind::DelayLine:
      return build_delay_line(spec.n, spec.rho);
    case TopologyKind::Cyclic:
      return build_cyclic(spec.n, spec.rho, spec.input_seed);
    case TopologyKind::RandomGaussian:
      return build_random(spec.n, spec.rho, spec.seed, spec.input_seed,
                          spec.rescale_mode);
    case TopologyKind::Wigner:
      return build_wigner(spec.n, spec.rho, spec.seed, spec.input_seed,
                          spec.rescale_mode);
  }
  throw std::invalid_argument("unknown topology kind");
}

Reservoir build_delay_line(int n, double rho) {
  validate_args(n, rho, "build_delay_line");
  Reservoir r;
  r.spec = {TopologyKind::DelayLine, n, rho, 0, 0, RescaleMode::AsDistributed};
  r.W = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) r.W(i, i - 1) = rho;
  r.w = Vector::Zero(n);
  r.w[0] = 1.0;
  return r;
}

Reservoir build_cyclic(int n, double rho, std::uint64_t input_seed) {
  validate_args(n, rho, "build_cyclic");
  Reservoir r;
  r.spec = {TopologyKind::Cyclic, n, rho, 0, input_seed,
            RescaleMode::AsDistributed};
  r.W = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) r.W(i, i - 1) = rho;
  r.W(0, n - 1) = rho;

  // A periodic w would make shifted copies of it collide; redraw from the
  // same stream until the aperiodicity check passes (a Gaussian draw
  // virtually always passes on the first try).
  Philox4x64 rng(input_seed, kTagInput);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector w(n);
    for (int i = 0; i < n; ++i) w[i] = sigma * rng.next_gaussian();
    if (check_aperiodic(w)) {
      r.w = std::move(w);
      return r;
    }
  }
  throw NumericalError(
      "build_cyclic: no aperiodic input weights after 1000 draws");
}

Reservoir build_random(int n, double rho, std::uint64_t seed,
                       std::uint64_t input_seed, RescaleMode mode) {
  validate_args(n, rho, "build_random");
  Reservoir r;
  r.spec = {TopologyKind::RandomGaussian, n, rho, seed, input_seed, mode};
  Philox4x64 rng(seed, kTagMatrix);
  const double sigma = rho / std::sqrt(static_cast<double>(n));
  r.W.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r.W(i, j) = sigma * rng.next_gaussian();
  }
  r.w = gaussian_input_weights(n, input_seed);
  if (mode == RescaleMode::ExactSpectralRadius) {
    rescale_to_exact_radius(r, "build_random");
  }
  return r;
}

Reservoir build_wigner(int n, double rho, std::uint64_t seed,
                       std::uint64_t input_seed, RescaleMode mode) {
  validate_args(n, rho, "build_wigner");
  Reservoir r;
  r.spec = {TopologyKind::Wigner, n, rho, seed, input_seed, mode};
  Philox4x64 rng(seed, kTagMatrix);
  // Off-diagonal std rho/(2 sqrt(n)) puts the semicircle edge at rho; the
  // diagonal keeps the plain ensemble scale, which does not move the edge.
  const double sigma_diag = rho / std::sqrt(static_cast<double>(n));
  const double sigma_off = 0.5 * sigma_diag;
  r.W.resize(n, n);
  for (int i = 0; i < n; ++i) r.W(i, i) = sigma_diag * rng.next_gaussian();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = sigma_off * rng.next_gaussian();
      r.W(i, j) = v;
      r.W(j, i) = v;
    }
  }
  r.w = gaussian_input_weights(n, input_seed);
  if (mode == RescaleMode::ExactSpectralRadius) {
    rescale_to_exact_radius(r, "build_wigner");
  }
  return r;
}

bool check_aperiodic(const Vector& w, double tol) {
  const Index n = w.size();
  const double norm = w.norm();
  if (norm == 0.0) return false;
  for (Index shift = 1; shift < n; ++shift) {
    double dist2 = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = w[(i + shift) % n] - w[i];
      dist2 += d * d;
    }
    if (std::sqrt(dist2) <= tol * norm) return false;
  }
  return true;
}

}  // namespace linres
