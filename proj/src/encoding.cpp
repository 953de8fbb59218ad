#include "linres/encoding.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace linres {

namespace {

constexpr double kDivergenceGuard = 1e100;
constexpr long kMaxHorizon = 1000000;
// phi_sequence materializes horizon * n doubles; cap the allocation.
constexpr long kMaxMaterializedDoubles = 50000000;
constexpr long kMinTailProbeSteps = 50;

long resolve_horizon(Index n, Index window, std::optional<long> horizon,
                     const char* who) {
  const long k = horizon.value_or(static_cast<long>(window));
  std::ostringstream msg;
  if (k < n) {
    msg << who << ": horizon " << k << " must cover at least n = " << n
        << " history terms";
    throw std::invalid_argument(msg.str());
  }
  if (k > static_cast<long>(window)) {
    msg << who << ": horizon " << k << " exceeds the window length "
        << window;
    throw std::invalid_argument(msg.str());
  }
  return k;
}

// Geometric extrapolation of the l1 mass of phi past the horizon. Probes
// at least 50 further states, stretched to two full recursion periods so
// profiles that are constant within each n-block (the cyclic topology)
// still reveal their per-period contraction. The growth ratio comes from
// comparing the two probe halves; a ratio >= 1 means the series is not
// contracting at this horizon, and no finite tail estimate would be
// honest.
double extrapolate_tail(PhiIterator& it, Index n, double input_scale) {
  const long steps = std::max(kMinTailProbeSteps, 2 * static_cast<long>(n));
  double first_half = 0.0;
  double second_half = 0.0;
  double total = 0.0;
  double last = 0.0;
  for (long i = 0; i < steps; ++i) {
    last = it.value().lpNorm<1>();
    total += last;
    (i < steps / 2 ? first_half : second_half) += last;
    it.advance();
  }
  if (total == 0.0) return 0.0;
  if (first_half == 0.0 || second_half >= first_half) {
    throw DivergenceError(
        "encode_input: phi mass is not contracting past the horizon; "
        "increase the horizon or use rho < 1");
  }
  const double ratio = std::pow(second_half / first_half,
                                2.0 / static_cast<double>(steps));
  return input_scale * (total + last * ratio / (1.0 - ratio));
}

}  // namespace

CharCoeffs char_coeffs(const Matrix& w) {
  return CharCoeffs{char_poly_negated_coeffs(w)};
}

Matrix companion_matrix(const CharCoeffs& c) {
  const Index n = c.varphi.size();
  if (n == 0) throw std::invalid_argument("companion_matrix: empty varphi");
  Matrix m = Matrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  m.col(n - 1) = c.varphi;
  return m;
}

PhiIterator::PhiIterator(const CharCoeffs& c) : varphi_(c.varphi) {
  if (varphi_.size() == 0) {
    throw std::invalid_argument("PhiIterator: empty varphi");
  }
  phi_ = Vector::Zero(varphi_.size());
  phi_[0] = 1.0;  // phi^{(0)} = e_0
}

void PhiIterator::advance() {
  const Index n = varphi_.size();
  ++k_;
  if (k_ < n) {
    // Still inside the delta block: assign e_k outright so the states are
    // exact, with no arithmetic to round.
    phi_.setZero();
    phi_[k_] = 1.0;
    return;
  }
  if (k_ == n) {
    // M e_{n-1} is the last companion column itself.
    phi_ = varphi_;
    return;
  }
  // One companion product, in place: new[j] = varphi[j]*top + old[j-1].
  const double top = phi_[n - 1];
  for (Index j = n - 1; j >= 1; --j) {
    phi_[j] = varphi_[j] * top + phi_[j - 1];
  }
  phi_[0] = varphi_[0] * top;
  if (phi_.cwiseAbs().maxCoeff() > kDivergenceGuard) {
    std::ostringstream msg;
    msg << "phi recursion diverged at k = " << k_
        << " (|phi| > 1e100); spectral radius >= 1?";
    throw DivergenceError(msg.str());
  }
}

std::vector<PhiState> phi_sequence(const CharCoeffs& c, long horizon) {
  const Index n = c.varphi.size();
  if (horizon < 1 || horizon > kMaxHorizon) {
    throw std::invalid_argument("phi_sequence: horizon out of range");
  }
  if (horizon * static_cast<long>(n) > kMaxMaterializedDoubles) {
    throw std::invalid_argument(
        "phi_sequence: horizon * n too large to materialize; "
        "use encode_input's streaming path");
  }
  std::vector<PhiState> seq;
  seq.reserve(static_cast<size_t>(horizon));
  PhiIterator it(c);
  for (long k = 0; k < horizon; ++k, it.advance()) {
    seq.push_back(PhiState{k, it.value()});
  }
  return seq;
}

EncodedInput encode_input(const CharCoeffs& c, const Vector& window,
                          std::optional<long> horizon) {
  const Index n = c.varphi.size();
  const long k_max = resolve_horizon(n, window.size(), horizon, "encode_input");

  EncodedInput out;
  out.horizon = k_max;
  out.s = Vector::Zero(n);
  // k < n: phi^{(k)} = e_k, so the window transcribes verbatim.
  for (Index k = 0; k < n && k < k_max; ++k) out.s[k] = window[k];

  PhiIterator it(c);
  for (long k = 0; k < n; ++k) it.advance();  // skip the delta block
  for (long k = n; k < k_max; ++k, it.advance()) {
    const double u = window[k];
    if (u != 0.0) out.s += u * it.value();
  }

  const double input_scale =
      k_max > 0 ? window.head(k_max).cwiseAbs().maxCoeff() : 0.0;
  out.tail_estimate = extrapolate_tail(it, n, input_scale);
  return out;
}

EncodedInput encode_input_cyclic(double rho, int n, const Vector& window,
                                 std::optional<long> horizon) {
  if (n < 1) throw std::invalid_argument("encode_input_cyclic: n must be >= 1");
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("encode_input_cyclic: rho must be finite and >= 0");
  }
  const long k_max =
      resolve_horizon(n, window.size(), horizon, "encode_input_cyclic");
  if (rho >= 1.0) {
    throw DivergenceError(
        "encode_input_cyclic: the series does not converge for rho >= 1");
  }

  EncodedInput out;
  out.horizon = k_max;
  out.s = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (long k = j; k < k_max; k += n) {
      acc += std::pow(rho, static_cast<double>(k)) * window[k];
    }
    out.s[j] = acc;
  }
  const double input_scale = window.head(k_max).cwiseAbs().maxCoeff();
  // Exact geometric remainder: every omitted term is |u| rho^k, k >= K.
  out.tail_estimate =
      input_scale * std::pow(rho, static_cast<double>(k_max)) / (1.0 - rho);
  return out;
}

EncodedInput encode_input_delay(const Vector& window, int n) {
  if (n < 1) throw std::invalid_argument("encode_input_delay: n must be >= 1");
  if (window.size() < n) {
    std::ostringstream msg;
    msg << "encode_input_delay: window of " << window.size()
        << " entries is shorter than n = " << n;
    throw std::invalid_argument(msg.str());
  }
  EncodedInput out;
  out.horizon = n;  // W^n = 0: nothing older than n steps survives
  out.s = window.head(n);
  out.tail_estimate = 0.0;
  return out;
}

long truncation_horizon(double rho, double epsilon, long min_horizon) {
  if (!(rho > 0.0) || rho >= 1.0) {
    throw std::invalid_argument(
        "truncation_horizon: rho must be in (0, 1)");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("truncation_horizon: epsilon must be > 0");
  }
  const double ratio = std::log(epsilon) / std::log(rho);
  // The fuzz keeps exact integer ratios (e.g. 0.1^3 vs 1e-3) from being
  // pushed up a step by the rounding of the logs.
  long k = static_cast<long>(std::ceil(ratio - 1e-12));
  k = std::max(k, std::max(min_horizon, 1L));
  return std::min(k, kMaxHorizon);
}

}  // namespace linres
