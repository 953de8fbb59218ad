#include "linres/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "linres/errors.hpp"
#include "linres/topology.hpp"

using linres::ExperimentConfig;
using linres::Matrix;
using linres::Reservoir;
using linres::TopologyKind;
using linres::Vector;

namespace {

// Small-but-honest defaults for the experiment tests: enough test rows
// for stable gamma estimates, short enough to keep the suite quick.
ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.total_length = 700;
  cfg.train_split = 500;
  cfg.washout = 50;
  cfg.reservoir_size = 30;
  cfg.realizations = 3;
  cfg.master_seed = 42;
  cfg.taus = {0};
  cfg.threads = 1;
  return cfg;
}

double mean_gamma_at(const linres::MemoryCurveResult& res, int tau) {
  for (const auto& p : res.curve.points) {
    if (p.tau == tau) return p.mean_gamma;
  }
  ADD_FAILURE() << "tau " << tau << " not in curve";
  return -1.0;
}

}  // namespace

TEST(Validate, AcceptsTheDefaults) {
  ExperimentConfig cfg;
  cfg.taus = {0, 10};
  EXPECT_TRUE(linres::validate(cfg).empty());
}

TEST(Validate, CollectsEveryViolationAtOnce) {
  ExperimentConfig cfg;
  cfg.total_length = 1;    // T too small
  cfg.train_split = 5;     // t0 >= T
  cfg.reservoir_size = 1;  // n too small
  cfg.realizations = 0;
  cfg.washout = -1;
  cfg.ridge = -0.5;
  cfg.taus = {};  // empty
  auto errors = linres::validate(cfg);
  EXPECT_GE(errors.size(), 6u);
  EXPECT_THROW(linres::validate_or_throw(cfg), std::invalid_argument);
}

TEST(Validate, WashoutPlusTauMustLeaveTrainingRows) {
  ExperimentConfig cfg = small_config();
  cfg.taus = {0, 460};  // washout 50 + 460 >= t0 500
  auto errors = linres::validate(cfg);
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_NE(errors[0].find("washout"), std::string::npos);
}

TEST(Validate, NegativeTauAndBadRhoAreReported) {
  ExperimentConfig cfg = small_config();
  cfg.taus = {-1};
  cfg.rhos = {0.0};
  auto errors = linres::validate(cfg);
  EXPECT_EQ(errors.size(), 2u);
}

TEST(GaussianSignal, DeterministicWithStandardMoments) {
  Vector a = linres::gaussian_signal(200000, 7);
  Vector b = linres::gaussian_signal(200000, 7);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, linres::gaussian_signal(200000, 8));
  double mean = a.mean();
  double var = (a.array() - mean).square().mean();
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
  EXPECT_THROW(linres::gaussian_signal(0, 1), std::invalid_argument);
}

TEST(RunReservoir, ZeroInputStaysAtZero) {
  Reservoir r = linres::build_random(10, 0.9, 1, 2);
  Matrix states = linres::run_reservoir(r, Vector::Zero(50));
  EXPECT_EQ(states, Matrix::Zero(50, 10));
}

TEST(RunReservoir, DelayLineShiftsTheInputStream) {
  // For the delay line the state is literally the recent input window:
  // x_k = (u_k, rho u_{k-1}, rho^2 u_{k-2}, ...).
  Reservoir r = linres::build_delay_line(4, 0.5);
  Vector u(6);
  u << 1, -2, 3, 0.5, -1, 2;
  Matrix states = linres::run_reservoir(r, u);
  ASSERT_EQ(states.rows(), 6);
  for (int k = 0; k < 6; ++k) {
    for (int j = 0; j < 4; ++j) {
      double expected = k - j >= 0 ? std::pow(0.5, j) * u(k - j) : 0.0;
      EXPECT_DOUBLE_EQ(states(k, j), expected) << "k=" << k << " j=" << j;
    }
  }
}

TEST(RunReservoir, DivergenceGuardTrips) {
  Reservoir r = linres::build_cyclic(4, 2.0, 1);
  EXPECT_THROW(linres::run_reservoir(r, Vector::Ones(2000)),
               linres::DivergenceError);
  EXPECT_THROW(linres::run_reservoir(r, Vector(0)), std::invalid_argument);
}

TEST(DelayedTargets, ShiftsAndZeroPads) {
  Vector u(5);
  u << 10, 20, 30, 40, 50;
  Vector t = linres::delayed_targets(u, 2);
  Vector expected(5);
  expected << 0, 0, 10, 20, 30;
  EXPECT_EQ(t, expected);
  EXPECT_EQ(linres::delayed_targets(u, 0), u);
  EXPECT_THROW(linres::delayed_targets(u, -1), std::invalid_argument);
}

TEST(TrainReadout, DelayLineRecallIsExact) {
  // Recalling u_{k-5} from a delay line is solving a diagonal system;
  // the fit should be numerically perfect.
  ExperimentConfig cfg = small_config();
  cfg.taus = {5};
  Reservoir r = linres::build_delay_line(30, 0.9);
  Vector u = linres::gaussian_signal(cfg.total_length, 3);
  Matrix states = linres::run_reservoir(r, u);
  Vector targets = linres::delayed_targets(u, 5);
  linres::TrainedReadout ro = linres::train_readout(states, targets, 5, cfg);
  EXPECT_LE(ro.train_nrmse, 1e-6);
  EXPECT_GE(linres::test_gamma(states, targets, ro, cfg), 1.0 - 1e-6);
}

TEST(TrainReadout, RecallPastTheLineLengthFails) {
  // tau >= n: the delay line has physically forgotten the target.
  ExperimentConfig cfg = small_config();
  cfg.taus = {40};
  Reservoir r = linres::build_delay_line(30, 0.9);
  Vector u = linres::gaussian_signal(cfg.total_length, 3);
  Matrix states = linres::run_reservoir(r, u);
  Vector targets = linres::delayed_targets(u, 40);
  linres::TrainedReadout ro = linres::train_readout(states, targets, 40, cfg);
  EXPECT_LE(linres::test_gamma(states, targets, ro, cfg), 0.05);
}

TEST(TrainReadout, RejectsDegenerateInput) {
  ExperimentConfig cfg = small_config();
  Matrix zero_states = Matrix::Zero(cfg.total_length, 4);
  Vector targets = Vector::Ones(cfg.total_length);
  EXPECT_THROW(linres::train_readout(zero_states, targets, 0, cfg),
               std::invalid_argument);
  EXPECT_THROW(
      linres::train_readout(Matrix::Zero(10, 4), Vector::Zero(11), 0, cfg),
      std::invalid_argument);
  // washout + tau beyond t0 leaves no training rows.
  EXPECT_THROW(linres::train_readout(Matrix::Ones(700, 4), Vector::Ones(700),
                                     460, cfg),
               std::invalid_argument);
}

TEST(Nrmse, HandValues) {
  Vector y(3), zero(3), twice(3);
  y << 1, 2, 3;
  zero << 0, 0, 0;
  twice << 2, 4, 6;
  // Perfect prediction.
  EXPECT_DOUBLE_EQ(linres::nrmse(y, y), 0.0);
  // Predicting zero: error energy equals 14, centered energy 2.
  EXPECT_NEAR(linres::nrmse(y, zero), std::sqrt(14.0 / 2.0), 1e-12);
  // Doubling: error is y itself.
  EXPECT_NEAR(linres::nrmse(y, twice), std::sqrt(14.0 / 2.0), 1e-12);

  EXPECT_THROW(linres::nrmse(y, Vector::Zero(2)), std::invalid_argument);
  EXPECT_THROW(linres::nrmse(Vector::Ones(3), Vector::Ones(3)),
               std::invalid_argument);  // constant y
  EXPECT_THROW(linres::nrmse(Vector::Ones(1), Vector::Ones(1)),
               std::invalid_argument);
}

TEST(Accuracy, ClampsToUnitInterval) {
  EXPECT_DOUBLE_EQ(linres::accuracy(0.0), 1.0);
  EXPECT_DOUBLE_EQ(linres::accuracy(0.25), 0.75);
  EXPECT_DOUBLE_EQ(linres::accuracy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(linres::accuracy(7.0), 0.0);   // worse than mean
  EXPECT_DOUBLE_EQ(linres::accuracy(-0.5), 1.0);  // cannot exceed 1
}

TEST(MemoryCurve, ImmediateRecallIsNearPerfect) {
  // At tau = 0 every topology reconstructs the current input from the
  // state. The cyclic curve is capped slightly below 1 even here: each
  // state coordinate carries the n-step-older alias of its input at
  // relative weight rho^n (0.9^30 ~ 0.042), so its ceiling is ~0.958.
  ExperimentConfig cfg = small_config();
  cfg.taus = {0};
  cfg.rescale_mode = linres::RescaleMode::ExactSpectralRadius;
  for (TopologyKind kind : {TopologyKind::DelayLine, TopologyKind::Cyclic,
                            TopologyKind::RandomGaussian, TopologyKind::Wigner}) {
    auto res = linres::memory_curve(kind, 0.9, cfg);
    double floor = kind == TopologyKind::Cyclic ? 0.90 : 0.99;
    EXPECT_GE(mean_gamma_at(res, 0), floor) << linres::to_string(kind);
  }
}

TEST(MemoryCurve, CyclicPlateauThenWraparoundLoss) {
  // Within the cycle length recall stays high; past it, u_{k-tau} aliases
  // with u_{k-tau+n} in the same state coordinate and accuracy collapses.
  ExperimentConfig cfg = small_config();
  cfg.taus = {15, 45};
  auto res = linres::memory_curve(TopologyKind::Cyclic, 0.9, cfg);
  EXPECT_GE(mean_gamma_at(res, 15), 0.85);
  EXPECT_LE(mean_gamma_at(res, 45), 0.10);
}

TEST(MemoryCurve, DelayLineIsAStepFunction) {
  ExperimentConfig cfg = small_config();
  cfg.taus = {10, 29, 30, 35};
  auto res = linres::memory_curve(TopologyKind::DelayLine, 0.9, cfg);
  EXPECT_GE(mean_gamma_at(res, 10), 0.99);
  EXPECT_GE(mean_gamma_at(res, 29), 0.95);
  EXPECT_LE(mean_gamma_at(res, 30), 0.05);  // one step past the line
  EXPECT_LE(mean_gamma_at(res, 35), 0.05);
}

TEST(MemoryCurve, RecordsAreCompleteAndBounded) {
  ExperimentConfig cfg = small_config();
  cfg.taus = {0, 5, 10};
  cfg.realizations = 4;
  auto res = linres::memory_curve(TopologyKind::RandomGaussian, 0.9, cfg);
  EXPECT_EQ(res.raw.size(), 12u);  // 3 taus x 4 realizations
  EXPECT_EQ(res.curve.points.size(), 3u);
  for (const auto& rec : res.raw) {
    EXPECT_GE(rec.gamma, 0.0);
    EXPECT_LE(rec.gamma, 1.0);
    EXPECT_EQ(rec.kind, TopologyKind::RandomGaussian);
    EXPECT_EQ(rec.n, 30);
    EXPECT_DOUBLE_EQ(rec.rho, 0.9);
  }
  for (const auto& p : res.curve.points) {
    EXPECT_GE(p.std_gamma, 0.0);
    EXPECT_GE(p.mean_gamma, 0.0);
    EXPECT_LE(p.mean_gamma, 1.0);
  }
  ExperimentConfig bad = cfg;
  bad.taus.clear();
  EXPECT_THROW(linres::memory_curve(TopologyKind::Cyclic, 0.9, bad),
               std::invalid_argument);
}

TEST(MemoryCurve, StrongRidgeSuppressesFaintCoordinates) {
  // Recalling u_{k-25} from a delay line leans on the rho^25-scaled
  // coordinate; a heavy ridge refuses to amplify it, so accuracy drops
  // from near-perfect to near-zero. Readout regularization, not state
  // decay, is the limiter here.
  ExperimentConfig cfg = small_config();
  cfg.taus = {25};
  auto plain = linres::memory_curve(TopologyKind::DelayLine, 0.9, cfg);
  cfg.ridge = 100.0;
  auto ridged = linres::memory_curve(TopologyKind::DelayLine, 0.9, cfg);
  EXPECT_GE(mean_gamma_at(plain, 25), 0.99);
  EXPECT_LE(mean_gamma_at(ridged, 25), 0.30);
}

TEST(MemoryCurve, WorkerCountDoesNotChangeResults) {
  ExperimentConfig cfg = small_config();
  cfg.taus = {0, 10, 20};
  cfg.realizations = 6;
  cfg.threads = 1;
  auto serial = linres::memory_curve(TopologyKind::Wigner, 0.9, cfg);
  cfg.threads = 4;
  auto parallel = linres::memory_curve(TopologyKind::Wigner, 0.9, cfg);
  ASSERT_EQ(serial.raw.size(), parallel.raw.size());
  for (size_t i = 0; i < serial.raw.size(); ++i) {
    EXPECT_EQ(serial.raw[i].gamma, parallel.raw[i].gamma) << "record " << i;
    EXPECT_EQ(serial.raw[i].tau, parallel.raw[i].tau);
    EXPECT_EQ(serial.raw[i].realization, parallel.raw[i].realization);
  }
}

TEST(SrSweep, GridIsCompleteAndOrdered) {
  ExperimentConfig cfg = small_config();
  std::vector<int> taus = {5, 10};
  std::vector<double> rhos = {0.5, 0.9};
  cfg.realizations = 2;
  auto res = linres::sr_sweep(TopologyKind::Cyclic, taus, rhos, cfg);
  EXPECT_EQ(res.points.size(), 4u);
  EXPECT_EQ(res.raw.size(), 8u);
  // Points iterate rho-major, tau-minor.
  EXPECT_DOUBLE_EQ(res.points[0].rho, 0.5);
  EXPECT_EQ(res.points[0].tau, 5);
  EXPECT_DOUBLE_EQ(res.points[3].rho, 0.9);
  EXPECT_EQ(res.points[3].tau, 10);
}

TEST(SrSweep, TinyRadiusErasesMemory) {
  // At rho = 0.05 the coefficient on u_{k-10} is 0.05^10 ~ 1e-13: the
  // target is numerically invisible, while rho = 0.9 keeps it well above
  // the noise floor.
  ExperimentConfig cfg = small_config();
  cfg.realizations = 3;
  auto res =
      linres::sr_sweep(TopologyKind::Cyclic, {10}, {0.05, 0.9}, cfg);
  ASSERT_EQ(res.points.size(), 2u);
  EXPECT_LE(res.points[0].mean_gamma, 0.10);
  EXPECT_GE(res.points[1].mean_gamma, 0.90);
}

TEST(SrSweep, ValidatesItsGrid) {
  ExperimentConfig cfg = small_config();
  EXPECT_THROW(linres::sr_sweep(TopologyKind::Cyclic, {}, {0.9}, cfg),
               std::invalid_argument);
  EXPECT_THROW(linres::sr_sweep(TopologyKind::Cyclic, {5}, {}, cfg),
               std::invalid_argument);
  EXPECT_THROW(linres::sr_sweep(TopologyKind::Cyclic, {5}, {-0.1}, cfg),
               std::invalid_argument);
}

TEST(RankScan, TinyReservoirsHaveFullRank) {
  ExperimentConfig cfg;
  cfg.realizations = 2;
  cfg.master_seed = 5;
  cfg.threads = 1;
  auto res = linres::rank_scan(
      {TopologyKind::DelayLine, TopologyKind::Cyclic,
       TopologyKind::RandomGaussian, TopologyKind::Wigner},
      {2}, 0.995, linres::FixedQuantity::SpectralRadius, cfg);
  ASSERT_EQ(res.rows.size(), 4u);
  for (const auto& row : res.rows) {
    EXPECT_DOUBLE_EQ(row.mean_rank, 2.0) << linres::to_string(row.kind);
    EXPECT_DOUBLE_EQ(row.std_rank, 0.0);
  }
}

TEST(RankScan, TopologyOrderingAtLargeSize) {
  // The structured cycle keeps every direction alive; the Gaussian
  // ensembles lose rank, the symmetric one fastest.
  ExperimentConfig cfg;
  cfg.realizations = 3;
  cfg.master_seed = 11;
  cfg.threads = 0;
  auto res = linres::rank_scan(
      {TopologyKind::Cyclic, TopologyKind::RandomGaussian, TopologyKind::Wigner},
      {60}, 0.995, linres::FixedQuantity::SpectralRadius, cfg);
  ASSERT_EQ(res.rows.size(), 3u);
  double cyclic = -1.0, random = -1.0, wigner = -1.0;
  for (const auto& row : res.rows) {
    if (row.kind == TopologyKind::Cyclic) cyclic = row.mean_rank;
    if (row.kind == TopologyKind::RandomGaussian) random = row.mean_rank;
    if (row.kind == TopologyKind::Wigner) wigner = row.mean_rank;
  }
  EXPECT_DOUBLE_EQ(cyclic, 60.0);
  EXPECT_GE(cyclic, random);
  EXPECT_GT(random, wigner);
}

TEST(RankScan, ValidatesArguments) {
  ExperimentConfig cfg;
  cfg.realizations = 1;
  EXPECT_THROW(linres::rank_scan({}, {10}, 0.9,
                                 linres::FixedQuantity::SpectralRadius, cfg),
               std::invalid_argument);
  EXPECT_THROW(linres::rank_scan({TopologyKind::Cyclic}, {}, 0.9,
                                 linres::FixedQuantity::SpectralRadius, cfg),
               std::invalid_argument);
  EXPECT_THROW(linres::rank_scan({TopologyKind::Cyclic}, {10, 5}, 0.9,
                                 linres::FixedQuantity::SpectralRadius, cfg),
               std::invalid_argument);  // not ascending
  EXPECT_THROW(linres::rank_scan({TopologyKind::Cyclic}, {10, 10}, 0.9,
                                 linres::FixedQuantity::SpectralRadius, cfg),
               std::invalid_argument);
  EXPECT_THROW(linres::rank_scan({TopologyKind::Cyclic}, {1, 10}, 0.9,
                                 linres::FixedQuantity::SpectralRadius, cfg),
               std::invalid_argument);
  EXPECT_THROW(linres::rank_scan({TopologyKind::Cyclic}, {10}, 0.0,
                                 linres::FixedQuantity::SpectralRadius, cfg),
               std::invalid_argument);
}

TEST(FixedQuantityStrings, RoundTrip) {
  using linres::FixedQuantity;
  for (FixedQuantity q :
       {FixedQuantity::SpectralRadius, FixedQuantity::MaxSingularValue}) {
    EXPECT_EQ(linres::fixed_quantity_from_string(linres::to_string(q)), q);
  }
  EXPECT_THROW(linres::fixed_quantity_from_string("frobenius"),
               std::invalid_argument);
}
