#include "linres/encoding.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "linres/controllability.hpp"
#include "linres/errors.hpp"
#include "linres/topology.hpp"

using linres::CharCoeffs;
using linres::EncodedInput;
using linres::Matrix;
using linres::PhiIterator;
using linres::Reservoir;
using linres::Vector;

namespace {

// x0 = sum_{k<K} W^k w u_{-k}, the definition the encoding must compress.
Vector direct_state(const Reservoir& r, const Vector& window, long k_max) {
  Vector x0 = Vector::Zero(r.w.size());
  Vector col = r.w;
  for (long k = 0; k < k_max; ++k) {
    x0 += window[k] * col;
    col = r.W * col;
  }
  return x0;
}

}  // namespace

TEST(Companion, StructureIsExact) {
  CharCoeffs c{Vector(3)};
  c.varphi << 0.125, -0.5, 2.0;
  Matrix m = linres::companion_matrix(c);
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 0) = expected(2, 1) = 1.0;
  expected(0, 2) = 0.125;
  expected(1, 2) = -0.5;
  expected(2, 2) = 2.0;
  EXPECT_EQ(m, expected);
  EXPECT_THROW(linres::companion_matrix(CharCoeffs{Vector(0)}),
               std::invalid_argument);
}

TEST(Companion, SharesEigenvaluesWithW) {
  // The companion matrix realizes the same characteristic polynomial, so
  // its spectral radius must match the reservoir's.
  for (auto build : {+[](int n) { return linres::build_cyclic(n, 0.8, 3); },
                     +[](int n) { return linres::build_random(n, 0.8, 3, 4); },
                     +[](int n) { return linres::build_wigner(n, 0.8, 3, 4); }}) {
    Reservoir r = build(12);
    Matrix m = linres::companion_matrix(linres::char_coeffs(r));
    EXPECT_NEAR(linres::spectral_radius(m), linres::spectral_radius(r.W), 1e-6);
  }
}

TEST(PhiSequence, DeltaBlockIsAssignedExactly) {
  Reservoir r = linres::build_random(6, 0.9, 1, 2);
  auto seq = linres::phi_sequence(linres::char_coeffs(r), 6);
  ASSERT_EQ(seq.size(), 6u);
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(seq[k].k, k);
    for (int j = 0; j < 6; ++j) {
      EXPECT_EQ(seq[k].phi(j), j == k ? 1.0 : 0.0) << "k=" << k << " j=" << j;
    }
  }
}

TEST(PhiSequence, StateNIsVarphiItself) {
  Reservoir r = linres::build_wigner(8, 0.9, 5, 6);
  CharCoeffs c = linres::char_coeffs(r);
  auto seq = linres::phi_sequence(c, 9);
  EXPECT_EQ(seq[8].phi, c.varphi);
}

TEST(PhiSequence, DelayLineVanishesPastN) {
  // W^k = 0 for k >= n, and the recursion reproduces that exactly since
  // varphi is exactly zero.
  Reservoir r = linres::build_delay_line(5, 0.9);
  auto seq = linres::phi_sequence(linres::char_coeffs(r), 20);
  for (int k = 5; k < 20; ++k) {
    EXPECT_EQ(seq[k].phi, Vector::Zero(5)) << "k=" << k;
  }
}

TEST(PhiSequence, CyclicHandValue) {
  // n=3, rho=0.5: W^3 = rho^3 I, so W^4 = rho^3 W and phi^{(4)} is
  // (0, 0.125, 0) up to the eigensolver's rounding of the coefficients.
  Reservoir r = linres::build_cyclic(3, 0.5, 1);
  auto seq = linres::phi_sequence(linres::char_coeffs(r), 5);
  Vector expected = Vector::Zero(3);
  expected(1) = 0.125;
  EXPECT_LE((seq[4].phi - expected).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(PhiSequence, MatchesMatrixPowersDirectly) {
  // Oracle: expand W^k in the (I, W, ..., W^{n-1}) basis by brute force
  // and compare against the recursion. n = 8 keeps the condition number
  // of the basis tolerable.
  Reservoir r = linres::build_random(8, 0.9, 17, 18);
  CharCoeffs c = linres::char_coeffs(r);
  auto seq = linres::phi_sequence(c, 31);

  std::vector<Matrix> basis;
  Matrix p = Matrix::Identity(8, 8);
  for (int j = 0; j < 8; ++j) {
    basis.push_back(p);
    p = r.W * p;
  }
  Matrix wk = Matrix::Identity(8, 8);
  for (int k = 0; k <= 30; ++k) {
    Matrix acc = Matrix::Zero(8, 8);
    for (int j = 0; j < 8; ++j) acc += seq[k].phi(j) * basis[j];
    EXPECT_LE((acc - wk).norm(), 1e-8 * std::max(1.0, wk.norm())) << "k=" << k;
    wk = r.W * wk;
  }
}

TEST(PhiSequence, HorizonValidation) {
  CharCoeffs c{Vector::Zero(4)};
  EXPECT_THROW(linres::phi_sequence(c, 0), std::invalid_argument);
  EXPECT_THROW(linres::phi_sequence(c, -5), std::invalid_argument);
  EXPECT_THROW(linres::phi_sequence(c, 2000000), std::invalid_argument);
}

TEST(PhiIterator, DivergentRegimeThrows) {
  // Cyclic at rho = 1.5: |phi| grows by 1.5^n per period and must trip
  // the 1e100 guard rather than overflow silently.
  Reservoir r = linres::build_cyclic(4, 1.5, 1);
  PhiIterator it(linres::char_coeffs(r));
  EXPECT_THROW(
      {
        for (int k = 0; k < 10000; ++k) it.advance();
      },
      linres::DivergenceError);
}

TEST(EncodeInput, ImpulseNowGivesE0) {
  // Pin the spectral radius: at n = 4 an as-distributed draw can land
  // past 1 and the tail extrapolation would (rightly) refuse it.
  Reservoir r = linres::build_random(4, 0.9, 3, 4,
                                     linres::RescaleMode::ExactSpectralRadius);
  Vector window = Vector::Zero(10);
  window(0) = 1.0;  // u_0 = 1, all history zero
  EncodedInput e = linres::encode_input(linres::char_coeffs(r), window);
  Vector e0 = Vector::Zero(4);
  e0(0) = 1.0;
  EXPECT_EQ(e.s, e0);
  EXPECT_EQ(e.horizon, 10);
}

TEST(EncodeInput, ImpulseAtLagNGivesVarphi) {
  // u_{-n} = 1 contributes phi^{(n)} = varphi, exactly (one multiply by
  // u = 1.0 and one add to a zero accumulator).
  Reservoir r = linres::build_wigner(5, 0.9, 7, 8);
  CharCoeffs c = linres::char_coeffs(r);
  Vector window = Vector::Zero(12);
  window(5) = 1.0;
  EncodedInput e = linres::encode_input(c, window);
  EXPECT_EQ(e.s, c.varphi);
}

TEST(EncodeInput, FrozenCyclicExample) {
  // n=2, rho=0.5, window of ones, K=4. The general encoding gives
  // s = (u0 + rho^2 u2, u1 + rho^2 u3) = (1.25, 1.25).
  Reservoir r = linres::build_cyclic(2, 0.5, 1);
  Vector window = Vector::Ones(4);
  EncodedInput e = linres::encode_input(linres::char_coeffs(r), window, 4);
  ASSERT_EQ(e.s.size(), 2);
  EXPECT_NEAR(e.s(0), 1.25, 1e-12);
  EXPECT_NEAR(e.s(1), 1.25, 1e-12);

  // And C s reproduces the directly-simulated state.
  Matrix c_mat = linres::controllability_matrix(r);
  Vector x0 = direct_state(r, window, 4);
  EXPECT_NEAR((c_mat * e.s - x0).norm(), 0.0, 1e-12);
}

TEST(EncodeInput, HorizonMustCoverNAndFitWindow) {
  Reservoir r = linres::build_cyclic(4, 0.5, 1);
  CharCoeffs c = linres::char_coeffs(r);
  Vector window = Vector::Ones(10);
  EXPECT_THROW(linres::encode_input(c, window, 3), std::invalid_argument);
  EXPECT_THROW(linres::encode_input(c, window, 11), std::invalid_argument);
  EXPECT_THROW(linres::encode_input(c, Vector::Ones(2)),
               std::invalid_argument);  // window shorter than n
}

TEST(EncodeInputCyclic, FrozenTildeExample) {
  // Same data as FrozenCyclicExample in the tilde normalization:
  // s~_j = rho^j s_j = (1.25, 0.625), and the tail bound is the exact
  // geometric remainder max|u| * rho^4 / (1 - rho) = 0.125.
  Vector window = Vector::Ones(4);
  EncodedInput e = linres::encode_input_cyclic(0.5, 2, window, 4);
  ASSERT_EQ(e.s.size(), 2);
  EXPECT_NEAR(e.s(0), 1.25, 1e-12);
  EXPECT_NEAR(e.s(1), 0.625, 1e-12);
  EXPECT_NEAR(e.tail_estimate, 0.125, 1e-15);
}

TEST(EncodeInputCyclic, MatchesGeneralEncodingViaScaling) {
  // s~_j = rho^j s_j connects the two normalizations.
  const int n = 6;
  const double rho = 0.8;
  Reservoir r = linres::build_cyclic(n, rho, 9);
  Vector window(30);
  for (int i = 0; i < 30; ++i) window(i) = std::sin(0.7 * i) + 0.3;
  EncodedInput general =
      linres::encode_input(linres::char_coeffs(r), window, 30);
  EncodedInput tilde = linres::encode_input_cyclic(rho, n, window, 30);
  for (int j = 0; j < n; ++j) {
    EXPECT_NEAR(tilde.s(j), std::pow(rho, j) * general.s(j), 1e-12)
        << "j=" << j;
  }
}

TEST(EncodeInputCyclic, TildeFactorizationMatchesDirectState) {
  // C~ s~ = C s = x0: the scaled and unscaled factorizations meet at the
  // same reservoir state.
  const int n = 5;
  const double rho = 0.7;
  Reservoir r = linres::build_cyclic(n, rho, 21);
  Vector window(40);
  for (int i = 0; i < 40; ++i) window(i) = std::cos(1.1 * i);
  EncodedInput tilde = linres::encode_input_cyclic(rho, n, window, 40);
  Matrix c_tilde = linres::cyclic_controllability_tilde(r.w);
  Vector x0 = direct_state(r, window, 40);
  EXPECT_NEAR((c_tilde * tilde.s - x0).norm(), 0.0, 1e-10 * (1 + x0.norm()));
}

TEST(EncodeInputCyclic, ZeroRhoKeepsOnlyTheCurrentInput) {
  Vector window(6);
  window << 3, 1, 4, 1, 5, 9;
  EncodedInput e = linres::encode_input_cyclic(0.0, 3, window);
  EXPECT_EQ(e.s(0), 3.0);
  EXPECT_EQ(e.s(1), 0.0);
  EXPECT_EQ(e.s(2), 0.0);
  EXPECT_EQ(e.tail_estimate, 0.0);
}

TEST(EncodeInputCyclic, DivergentRhoThrows) {
  Vector window = Vector::Ones(8);
  EXPECT_THROW(linres::encode_input_cyclic(1.0, 4, window),
               linres::DivergenceError);
  EXPECT_THROW(linres::encode_input_cyclic(1.5, 4, window),
               linres::DivergenceError);
  EXPECT_THROW(linres::encode_input_cyclic(-0.5, 4, window),
               std::invalid_argument);
}

TEST(EncodeInputDelay, TranscribesWindowVerbatim) {
  Vector window(7);
  window << 5, -1, 2, 0.5, 8, 9, 10;
  EncodedInput e = linres::encode_input_delay(window, 4);
  ASSERT_EQ(e.s.size(), 4);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(e.s(j), window(j));
  EXPECT_EQ(e.horizon, 4);
  EXPECT_EQ(e.tail_estimate, 0.0);
  EXPECT_THROW(linres::encode_input_delay(Vector::Ones(3), 4),
               std::invalid_argument);
}

TEST(EncodeInputDelay, AgreesWithGeneralEncoding) {
  // The general path sees exact-zero varphi, so its s must be bitwise
  // equal to the closed form.
  Reservoir r = linres::build_delay_line(6, 0.9);
  Vector window(20);
  for (int i = 0; i < 20; ++i) window(i) = std::sin(2.3 * i);
  EncodedInput general = linres::encode_input(linres::char_coeffs(r), window);
  EncodedInput closed = linres::encode_input_delay(window, 6);
  EXPECT_EQ(general.s, closed.s);
  EXPECT_EQ(general.tail_estimate, 0.0);
}

TEST(TruncationHorizon, FrozenValues) {
  // rho^K <= eps boundaries: 0.5^40 ~ 9.1e-13, 0.99^2750 ~ 9.9e-13,
  // 0.1^3 = 1e-3 exactly (the fuzz guard keeps the exact ratio at 3).
  EXPECT_EQ(linres::truncation_horizon(0.5, 1e-12), 40);
  EXPECT_EQ(linres::truncation_horizon(0.99, 1e-12), 2750);
  EXPECT_EQ(linres::truncation_horizon(0.1, 1e-3), 3);
}

TEST(TruncationHorizon, ClampsAndValidates) {
  EXPECT_EQ(linres::truncation_horizon(0.5, 1e-12, 100), 100);
  EXPECT_EQ(linres::truncation_horizon(0.5, 0.9), 1);  // never below 1
  // Slow decay rails at the 1e6 cap instead of overflowing.
  EXPECT_EQ(linres::truncation_horizon(0.9999999, 1e-300), 1000000);
  EXPECT_THROW(linres::truncation_horizon(1.0), std::invalid_argument);
  EXPECT_THROW(linres::truncation_horizon(0.0), std::invalid_argument);
  EXPECT_THROW(linres::truncation_horizon(-0.5), std::invalid_argument);
  EXPECT_THROW(linres::truncation_horizon(0.5, 0.0), std::invalid_argument);
}

TEST(EncodeInput, TailEstimateTracksCyclicRemainder) {
  // For the cyclic topology the true remainder is geometric; the generic
  // heuristic should land within a small factor of the exact bound.
  const int n = 4;
  const double rho = 0.6;
  Reservoir r = linres::build_cyclic(n, rho, 2);
  Vector window = Vector::Ones(24);
  EncodedInput general = linres::encode_input(linres::char_coeffs(r), window);
  EncodedInput exact = linres::encode_input_cyclic(rho, n, window);
  ASSERT_GT(exact.tail_estimate, 0.0);
  EXPECT_GT(general.tail_estimate, 0.1 * exact.tail_estimate);
  EXPECT_LT(general.tail_estimate, 10.0 * exact.tail_estimate);
}

TEST(EncodeInput, NonContractingTailThrows) {
  // rho = 1: phi mass never decays, so the tail heuristic must refuse.
  Reservoir r = linres::build_cyclic(4, 1.0, 3);
  Vector window = Vector::Ones(12);
  EXPECT_THROW(linres::encode_input(linres::char_coeffs(r), window),
               linres::DivergenceError);
}

TEST(EncodeInput, ReconstructionIdentityAcrossTopologies) {
  // The factorization x0 = C s is the load-bearing identity of the whole
  // library: check it for every topology over a grid of sizes and radii.
  for (int n : {2, 5, 12, 20}) {
    for (double rho : {0.5, 0.9, 0.95}) {
      std::vector<Reservoir> rs;
      rs.push_back(linres::build_delay_line(n, rho));
      rs.push_back(linres::build_cyclic(n, rho, 7));
      rs.push_back(linres::build_random(n, rho, 7, 8,
                                        linres::RescaleMode::ExactSpectralRadius));
      rs.push_back(linres::build_wigner(n, rho, 7, 8,
                                        linres::RescaleMode::ExactSpectralRadius));
      const long k_max = linres::truncation_horizon(rho, 1e-14, n);
      Vector window(k_max);
      for (long i = 0; i < k_max; ++i) window(i) = std::sin(0.9 * i + n);
      for (const Reservoir& r : rs) {
        EncodedInput e = linres::encode_input(linres::char_coeffs(r), window);
        Matrix c_mat = linres::controllability_matrix(r);
        Vector x0 = direct_state(r, window, k_max);
        double err = (c_mat * e.s - x0).norm();
        EXPECT_LE(err, 1e-8 * (1.0 + x0.norm()))
            << linres::to_string(r.spec.kind) << " n=" << n << " rho=" << rho;
      }
    }
  }
}
