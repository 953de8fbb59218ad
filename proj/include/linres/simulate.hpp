#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linres/linalg.hpp"
#include "linres/topology.hpp"

namespace linres {

// Defaults for the delayed-recall experiments: 1500 steps, first 1000
// for training, standard normal inputs, 10 realizations per grid cell.
struct ExperimentConfig {
  long total_length = 1500;  // T, total driven steps
  long train_split = 1000;   // t0, rows [.., t0) train, [t0, T) test
  std::vector<int> taus;     // recall delays to evaluate
  std::vector<double> rhos;  // spectral radii (sweep grids)
  int reservoir_size = 100;  // n
  int realizations = 10;
  std::uint64_t master_seed = 0;
  long washout = 100;  // rows below washout + tau never train
  double ridge = 0.0;  // Tikhonov strength for the readout fit
  RescaleMode rescale_mode = RescaleMode::AsDistributed;
  int threads = 0;  // worker cap; 0 = hardware concurrency
};

// Collects every violated constraint (empty = valid).
std::vector<std::string> validate(const ExperimentConfig& cfg);
// Throws std::invalid_argument listing all violations at once.
void validate_or_throw(const ExperimentConfig& cfg);

// Seed roles for derive_seed(master, role, cell): one substream per
// concern so a grid cell can be recomputed in isolation.
namespace seed_role {
inline constexpr std::uint64_t kReservoir = 1;
inline constexpr std::uint64_t kInputWeights = 2;
inline constexpr std::uint64_t kSignal = 3;
}  // namespace seed_role

// Standard normal input signal of `length` samples (chronological order).
Vector gaussian_signal(long length, std::uint64_t seed);

// Drives the reservoir from x = 0 over the input (chronological);
// row k of the result is the state after consuming input[k]. Throws
// DivergenceError if the state runs past 1e100 (rho >= 1 regime).
Matrix run_reservoir(const Reservoir& r, const Vector& input);

// targets[k] = input[k - tau] for k >= tau; leading entries are zero and
// must never be selected by a training/test slice (the slices below start
// at washout + tau).
Vector delayed_targets(const Vector& input, int tau);

struct TrainedReadout {
  Vector r;
  double train_nrmse = 0.0;
};

// Least-squares readout on rows [washout + tau, t0). Degenerate
// (all-zero) training features are rejected.
TrainedReadout train_readout(const Matrix& states, const Vector& targets,
                             int tau, const ExperimentConfig& cfg);

// sqrt(sum (y - yhat)^2 / sum (y - mean(y))^2), both sums over the same
// slice. Requires equal lengths >= 2 and non-constant y.
double nrmse(const Vector& y, const Vector& yhat);

// gamma = max(1 - nrmse, 0), clamped to [0, 1].
double accuracy(double nrmse_value);

// Test-set accuracy of a trained readout: rows [t0, T).
double test_gamma(const Matrix& states, const Vector& targets,
                  const TrainedReadout& readout, const ExperimentConfig& cfg);

// One realization's accuracy at one grid point.
struct GammaRecord {
  TopologyKind kind;
  int n = 0;
  double rho = 0.0;
  int tau = 0;
  int realization = 0;
  double gamma = 0.0;
};

struct CurvePoint {
  int tau = 0;
  double mean_gamma = 0.0;
  double std_gamma = 0.0;  // population std over realizations
};

struct MemoryCurve {
  TopologyKind kind;
  double rho = 0.0;
  std::vector<CurvePoint> points;
};

struct MemoryCurveResult {
  std::vector<GammaRecord> raw;
  MemoryCurve curve;
};

// gamma(tau) for one topology at one rho: per realization, one reservoir
// and one input signal are drawn and a separate readout is trained per
// tau on the shared trajectory. Realizations run in parallel; outputs are
// ordered by index and do not depend on the worker count.
MemoryCurveResult memory_curve(TopologyKind kind, double rho,
                               const ExperimentConfig& cfg);

struct SweepPoint {
  double rho = 0.0;
  int tau = 0;
  double mean_gamma = 0.0;
  double std_gamma = 0.0;
};

struct SweepResult {
  std::vector<GammaRecord> raw;
  std::vector<SweepPoint> points;
};

// gamma over the (rho, tau) grid. Each (rho, realization) cell gets its
// own reservoir and signal; all taus share that trajectory.
SweepResult sr_sweep(TopologyKind kind, const std::vector<int>& taus,
                     const std::vector<double>& rhos,
                     const ExperimentConfig& cfg);

// Which spectral quantity the rank scan pins to rho for the Gaussian
// ensembles (the deterministic kinds have both equal to rho already,
// delay line aside, whose spectral radius is identically 0).
enum class FixedQuantity { SpectralRadius, MaxSingularValue };

std::string to_string(FixedQuantity q);
FixedQuantity fixed_quantity_from_string(const std::string& name);

struct RankRecord {
  TopologyKind kind;
  int n = 0;
  double rho = 0.0;
  int realization = 0;
  int rank = 0;
};

struct RankScanRow {
  TopologyKind kind;
  int n = 0;
  double mean_rank = 0.0;
  double std_rank = 0.0;
};

struct RankScanResult {
  std::vector<RankRecord> raw;
  std::vector<RankScanRow> rows;
};

// Controllability rank across kinds and sizes at a fixed rho,
// `realizations` seeds per cell.
RankScanResult rank_scan(const std::vector<TopologyKind>& kinds,
                         const std::vector<int>& ns, double rho,
                         FixedQuantity fixed, const ExperimentConfig& cfg);

}  // namespace linres
