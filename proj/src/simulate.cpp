#include "linres/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "linres/controllability.hpp"
#include "linres/parallel.hpp"
#include "linres/rng.hpp"

namespace linres {

namespace {

constexpr double kStateGuard = 1e100;
constexpr std::uint64_t kTagSignal = 0x75;  // 'u'

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Population statistics: the aggregated CSVs report the spread of the
// realizations actually run, not an estimate for hypothetical ones.
MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd ms;
  if (xs.empty()) return ms;
  double sum = 0.0;
  for (double x : xs) sum += x;
  ms.mean = sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - ms.mean) * (x - ms.mean);
  ms.std = std::sqrt(var / static_cast<double>(xs.size()));
  return ms;
}

Reservoir build_cell_reservoir(TopologyKind kind, int n, double rho,
                               RescaleMode mode, std::uint64_t master,
                               long cell) {
  ReservoirSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.rho = rho;
  spec.seed = derive_seed(master, seed_role::kReservoir,
                          static_cast<std::uint64_t>(cell));
  spec.input_seed = derive_seed(master, seed_role::kInputWeights,
                                static_cast<std::uint64_t>(cell));
  spec.rescale_mode = mode;
  return build_reservoir(spec);
}

// gamma for every tau on one realization's shared trajectory.
std::vector<double> gammas_for_cell(TopologyKind kind, int n, double rho,
                                    const ExperimentConfig& cfg, long cell) {
  const Reservoir res = build_cell_reservoir(kind, n, rho, cfg.rescale_mode,
                                             cfg.master_seed, cell);
  const Vector u = gaussian_signal(
      cfg.total_length, derive_seed(cfg.master_seed, seed_role::kSignal,
                                    static_cast<std::uint64_t>(cell)));
  const Matrix states = run_reservoir(res, u);
  std::vector<double> out;
  out.reserve(cfg.taus.size());
  for (int tau : cfg.taus) {
    const Vector targets = delayed_targets(u, tau);
    const TrainedReadout readout = train_readout(states, targets, tau, cfg);
    out.push_back(test_gamma(states, targets, readout, cfg));
  }
  return out;
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.total_length < 2) {
    errors.push_back("total_length (T) must be >= 2");
  }
  if (cfg.train_split < 1 || cfg.train_split >= cfg.total_length) {
    errors.push_back("train_split (t0) must satisfy 1 <= t0 < T");
  }
  if (cfg.total_length - cfg.train_split < 2) {
    errors.push_back("test slice [t0, T) needs at least 2 rows");
  }
  if (cfg.reservoir_size < 2) {
    errors.push_back("reservoir_size (n) must be >= 2");
  }
  if (cfg.realizations < 1) {
    errors.push_back("realizations must be >= 1");
  }
  if (cfg.washout < 0) {
    errors.push_back("washout must be >= 0");
  }
  if (cfg.ridge < 0.0) {
    errors.push_back("ridge must be >= 0");
  }
  if (cfg.taus.empty()) {
    errors.push_back("taus must not be empty");
  }
  for (int tau : cfg.taus) {
    if (tau < 0) {
      errors.push_back("taus must be non-negative");
      break;
    }
  }
  if (!cfg.taus.empty()) {
    const int max_tau = *std::max_element(cfg.taus.begin(), cfg.taus.end());
    if (cfg.washout + max_tau >= cfg.train_split) {
      std::ostringstream msg;
      msg << "washout + max(taus) = " << (cfg.washout + max_tau)
          << " must be < t0 = " << cfg.train_split
          << " (no training rows left)";
      errors.push_back(msg.str());
    }
  }
  for (double rho : cfg.rhos) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      errors.push_back("rhos must be positive and finite");
      break;
    }
  }
  return errors;
}

void validate_or_throw(const ExperimentConfig& cfg) {
  const std::vector<std::string> errors = validate(cfg);
  if (errors.empty()) return;
  std::ostringstream msg;
  msg << "invalid experiment config (" << errors.size() << " problem"
      << (errors.size() == 1 ? "" : "s") << "):";
  for (const auto& e : errors) msg << "\n  - " << e;
  throw std::invalid_argument(msg.str());
}

Vector gaussian_signal(long length, std::uint64_t seed) {
  if (length < 1) {
    throw std::invalid_argument("gaussian_signal: length must be >= 1");
  }
  Philox4x64 rng(seed, kTagSignal);
  Vector u(length);
  for (long k = 0; k < length; ++k) u[k] = rng.next_gaussian();
  return u;
}

Matrix run_reservoir(const Reservoir& r, const Vector& input) {
  const Index n = r.w.size();
  const Index steps = input.size();
  if (steps < 1) {
    throw std::invalid_argument("run_reservoir: empty input");
  }
  Matrix states(steps, n);
  Vector x = Vector::Zero(n);
  for (Index k = 0; k < steps; ++k) {
    x = r.W * x + r.w * input[k];
    if (x.cwiseAbs().maxCoeff() > kStateGuard) {
      std::ostringstream msg;
      msg << "run_reservoir: state diverged at step " << k
          << " (|x| > 1e100); spectral radius >= 1?";
      throw DivergenceError(msg.str());
    }
    states.row(k) = x;
  }
  return states;
}

Vector delayed_targets(const Vector& input, int tau) {
  if (tau < 0) throw std::invalid_argument("delayed_targets: tau must be >= 0");
  const Index steps = input.size();
  Vector targets = Vector::Zero(steps);
  for (Index k = tau; k < steps; ++k) targets[k] = input[k - tau];
  return targets;
}

TrainedReadout train_readout(const Matrix& states, const Vector& targets,
                             int tau, const ExperimentConfig& cfg) {
  if (states.rows() != targets.size()) {
    throw std::invalid_argument(
        "train_readout: states and targets lengths disagree");
  }
  const long first = cfg.washout + tau;
  const long rows = cfg.train_split - first;
  if (rows < 1) {
    throw std::invalid_argument(
        "train_readout: no training rows between washout + tau and t0");
  }
  const Matrix a = states.middleRows(first, rows);
  const Vector y = targets.segment(first, rows);
  if (a.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument(
        "train_readout: training states are identically zero");
  }
  TrainedReadout out;
  out.r = least_squares(a, y, cfg.ridge);
  out.train_nrmse = nrmse(y, a * out.r);
  return out;
}

double nrmse(const Vector& y, const Vector& yhat) {
  if (y.size() != yhat.size()) {
    throw std::invalid_argument("nrmse: length mismatch");
  }
  if (y.size() < 2) {
    throw std::invalid_argument("nrmse: need at least 2 samples");
  }
  const double mean = y.mean();
  const double denom = (y.array() - mean).square().sum();
  if (denom == 0.0) {
    throw std::invalid_argument("nrmse: y is constant over the slice");
  }
  const double num = (y - yhat).squaredNorm();
  return std::sqrt(num / denom);
}

double accuracy(double nrmse_value) {
  return std::clamp(1.0 - nrmse_value, 0.0, 1.0);
}

double test_gamma(const Matrix& states, const Vector& targets,
                  const TrainedReadout& readout, const ExperimentConfig& cfg) {
  const long rows = cfg.total_length - cfg.train_split;
  const Matrix a = states.middleRows(cfg.train_split, rows);
  const Vector y = targets.segment(cfg.train_split, rows);
  return accuracy(nrmse(y, a * readout.r));
}

MemoryCurveResult memory_curve(TopologyKind kind, double rho,
                               const ExperimentConfig& cfg) {
  validate_or_throw(cfg);
  const int runs = cfg.realizations;
  std::vector<std::vector<double>> per_cell(static_cast<size_t>(runs));
  parallel_for(cfg.threads, runs, [&](long cell) {
    per_cell[static_cast<size_t>(cell)] =
        gammas_for_cell(kind, cfg.reservoir_size, rho, cfg, cell);
  });

  MemoryCurveResult out;
  out.curve.kind = kind;
  out.curve.rho = rho;
  for (size_t ti = 0; ti < cfg.taus.size(); ++ti) {
    std::vector<double> gammas;
    gammas.reserve(static_cast<size_t>(runs));
    for (int r = 0; r < runs; ++r) {
      const double g = per_cell[static_cast<size_t>(r)][ti];
      out.raw.push_back(GammaRecord{kind, cfg.reservoir_size, rho,
                                    cfg.taus[ti], r, g});
      gammas.push_back(g);
    }
    const MeanStd ms = mean_std(gammas);
    out.curve.points.push_back(CurvePoint{cfg.taus[ti], ms.mean, ms.std});
  }
  return out;
}

SweepResult sr_sweep(TopologyKind kind, const std::vector<int>& taus,
                     const std::vector<double>& rhos,
                     const ExperimentConfig& cfg) {
  ExperimentConfig local = cfg;
  local.taus = taus;
  local.rhos = rhos;
  validate_or_throw(local);
  if (rhos.empty()) {
    throw std::invalid_argument("sr_sweep: rhos must not be empty");
  }

  const int runs = local.realizations;
  const long cells = static_cast<long>(rhos.size()) * runs;
  std::vector<std::vector<double>> per_cell(static_cast<size_t>(cells));
  parallel_for(local.threads, cells, [&](long cell) {
    const double rho = rhos[static_cast<size_t>(cell / runs)];
    per_cell[static_cast<size_t>(cell)] =
        gammas_for_cell(kind, local.reservoir_size, rho, local, cell);
  });

  SweepResult out;
  for (size_t ri = 0; ri < rhos.size(); ++ri) {
    for (size_t ti = 0; ti < taus.size(); ++ti) {
      std::vector<double> gammas;
      gammas.reserve(static_cast<size_t>(runs));
      for (int r = 0; r < runs; ++r) {
        const long cell = static_cast<long>(ri) * runs + r;
        const double g = per_cell[static_cast<size_t>(cell)][ti];
        out.raw.push_back(GammaRecord{kind, local.reservoir_size, rhos[ri],
                                      taus[ti], r, g});
        gammas.push_back(g);
      }
      const MeanStd ms = mean_std(gammas);
      out.points.push_back(SweepPoint{rhos[ri], taus[ti], ms.mean, ms.std});
    }
  }
  return out;
}

std::string to_string(FixedQuantity q) {
  return q == FixedQuantity::SpectralRadius ? "spectral-radius"
                                            : "max-singular-value";
}

FixedQuantity fixed_quantity_from_string(const std::string& name) {
  if (name == "spectral-radius") return FixedQuantity::SpectralRadius;
  if (name == "max-singular-value") return FixedQuantity::MaxSingularValue;
  throw std::invalid_argument(
      "unknown normalization '" + name +
      "' (expected spectral-radius or max-singular-value)");
}

RankScanResult rank_scan(const std::vector<TopologyKind>& kinds,
                         const std::vector<int>& ns, double rho,
                         FixedQuantity fixed, const ExperimentConfig& cfg) {
  if (kinds.empty() || ns.empty()) {
    throw std::invalid_argument("rank_scan: kinds and ns must not be empty");
  }
  for (int n : ns) {
    if (n < 2) throw std::invalid_argument("rank_scan: every n must be >= 2");
  }
  for (size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) {
      throw std::invalid_argument("rank_scan: ns must be ascending");
    }
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("rank_scan: rho must be positive and finite");
  }
  if (cfg.realizations < 1) {
    throw std::invalid_argument("rank_scan: realizations must be >= 1");
  }

  const int runs = cfg.realizations;
  const long cells = static_cast<long>(kinds.size()) * ns.size() * runs;
  std::vector<int> ranks(static_cast<size_t>(cells));
  parallel_for(cfg.threads, cells, [&](long cell) {
    const long per_kind = static_cast<long>(ns.size()) * runs;
    const TopologyKind kind = kinds[static_cast<size_t>(cell / per_kind)];
    const int n = ns[static_cast<size_t>((cell % per_kind) / runs)];

    Reservoir res = build_cell_reservoir(kind, n, rho,
                                         RescaleMode::AsDistributed,
                                         cfg.master_seed, cell);
    // Pin the requested spectral quantity for the Gaussian ensembles; the
    // deterministic kinds carry it exactly by construction.
    if (kind == TopologyKind::RandomGaussian || kind == TopologyKind::Wigner) {
      const double scale = fixed == FixedQuantity::SpectralRadius
                               ? spectral_radius(res.W)
                               : singular_values(res.W)[0];
      if (scale <= 0.0) {
        throw NumericalError("rank_scan: degenerate sampled reservoir");
      }
      res.W *= rho / scale;
    }
    ranks[static_cast<size_t>(cell)] =
        analyze(controllability_matrix(res)).rank;
  });

  RankScanResult out;
  long cell = 0;
  for (TopologyKind kind : kinds) {
    for (int n : ns) {
      std::vector<double> cell_ranks;
      cell_ranks.reserve(static_cast<size_t>(runs));
      for (int r = 0; r < runs; ++r, ++cell) {
        const int rank = ranks[static_cast<size_t>(cell)];
        out.raw.push_back(RankRecord{kind, n, rho, r, rank});
        cell_ranks.push_back(static_cast<double>(rank));
      }
      const MeanStd ms = mean_std(cell_ranks);
      out.rows.push_back(RankScanRow{kind, n, ms.mean, ms.std});
    }
  }
  return out;
}

}  // namespace linres
