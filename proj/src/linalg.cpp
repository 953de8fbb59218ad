#include "linres/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace linres {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << who << ": matrix must be square, got " << m.rows() << "x"
        << m.cols();
    throw std::invalid_argument(msg.str());
  }
  if (m.rows() == 0) {
    throw std::invalid_argument(std::string(who) + ": matrix is empty");
  }
}

double resolve_cutoff(const Vector& svals, Index rows, Index cols,
                      const std::optional<double>& tol) {
  if (tol) {
    if (*tol < 0.0) {
      throw std::invalid_argument("rank tolerance must be non-negative");
    }
    return *tol;
  }
  return rank_cutoff(svals, rows, cols);
}

int rank_from_svals(const Vector& svals, double cutoff) {
  int r = 0;
  for (Index i = 0; i < svals.size(); ++i) {
    if (svals[i] > cutoff) ++r;
  }
  return r;
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }

double spectral_radius(const Matrix& m) {
  require_square(m, "spectral_radius");
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigenvalue iteration did not converge within "
        << (40 * m.rows()) << " iterations (matrix size " << m.rows() << ")";
    throw NumericalError(msg.str());
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) {
    throw std::invalid_argument("singular_values: matrix is empty");
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

double rank_cutoff(const Vector& svals, Index rows, Index cols) {
  const double smax = svals.size() > 0 ? svals[0] : 0.0;
  return smax * static_cast<double>(std::max(rows, cols)) * kEps;
}

int numerical_rank(const Matrix& m, std::optional<double> tol) {
  const Vector svals = singular_values(m);
  return rank_from_svals(svals, resolve_cutoff(svals, m.rows(), m.cols(), tol));
}

Matrix nullspace_basis(const Matrix& m, std::optional<double> tol) {
  if (m.size() == 0) {
    throw std::invalid_argument("nullspace_basis: matrix is empty");
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& svals = svd.singularValues();
  const double cutoff = resolve_cutoff(svals, m.rows(), m.cols(), tol);
  const int rank = rank_from_svals(svals, cutoff);
  // Trailing right singular vectors: directions C maps below the cutoff.
  return svd.matrixV().rightCols(m.cols() - rank);
}

Vector char_poly_negated_coeffs(const Matrix& m) {
  require_square(m, "char_poly_negated_coeffs");
  const Index n = m.rows();
  if (n > 2048) {
    throw std::invalid_argument(
        "char_poly_negated_coeffs: matrix size capped at 2048");
  }

  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(
        "char_poly_negated_coeffs: eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd lambda = solver.eigenvalues();

  // Expand prod_i (x - lambda_i). Two precautions keep the expansion from
  // destroying itself: conjugate pairs (adjacent in the real Schur output)
  // are folded into exact real quadratics, and the factors are multiplied
  // in Leja order. Without the ordering, spectra spread around a circle --
  // the cyclic topology -- blow the intermediate coefficients up by orders
  // of magnitude and the final cancellation loses everything.
  struct FactorUnit {
    std::complex<double> root;
    bool pair = false;  // contributes {root, conj(root)}
  };
  std::vector<FactorUnit> units;
  units.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n;) {
    const std::complex<double> li = lambda[i];
    if (li.imag() == 0.0) {
      units.push_back({li, false});
      ++i;
    } else if (i + 1 < n &&
               std::abs(lambda[i + 1] - std::conj(li)) <=
                   1e-13 * (1.0 + std::abs(li))) {
      // Symmetrize in case the pair differs in the last ulp.
      const std::complex<double> a = 0.5 * (li + std::conj(lambda[i + 1]));
      units.push_back({a, true});
      i += 2;
    } else {
      // Unpaired complex eigenvalue of a real matrix: numerically broken,
      // but expand anyway and let the residue check pass judgement.
      units.push_back({li, false});
      ++i;
    }
  }

  // Leja order: start from the largest root, then greedily pick the unit
  // whose root maximizes the product of distances (sum of log-distances)
  // to everything already chosen. Ties and all-(-inf) rounds (duplicate
  // roots, e.g. a nilpotent spectrum) fall back to input order.
  const size_t nu = units.size();
  std::vector<size_t> order;
  order.reserve(nu);
  std::vector<char> used(nu, 0);
  std::vector<double> score(nu, 0.0);
  {
    size_t first = 0;
    for (size_t u = 1; u < nu; ++u) {
      if (std::abs(units[u].root) > std::abs(units[first].root)) first = u;
    }
    used[first] = 1;
    order.push_back(first);
  }
  for (size_t step = 1; step < nu; ++step) {
    const FactorUnit& last = units[order.back()];
    for (size_t u = 0; u < nu; ++u) {
      if (used[u]) continue;
      score[u] += std::log(std::abs(units[u].root - last.root));
      if (last.pair) {
        score[u] +=
            std::log(std::abs(units[u].root - std::conj(last.root)));
      }
    }
    size_t best = nu;
    for (size_t u = 0; u < nu; ++u) {
      if (used[u]) continue;
      if (best == nu || score[u] > score[best]) best = u;
    }
    used[best] = 1;
    order.push_back(best);
  }

  std::vector<std::complex<double>> coeff(static_cast<size_t>(n) + 1);
  coeff[0] = 1.0;
  size_t degree = 0;
  for (size_t u : order) {
    const FactorUnit& f = units[u];
    if (f.pair) {
      // (x - a)(x - conj a) = x^2 + p x + q with real p, q.
      const double p = -2.0 * f.root.real();
      const double q = std::norm(f.root);
      coeff[degree + 2] = coeff[degree];
      if (degree >= 1) {
        coeff[degree + 1] = coeff[degree - 1] + p * coeff[degree];
      } else {
        coeff[degree + 1] = p * coeff[degree];
      }
      for (size_t j = degree; j >= 2; --j) {
        coeff[j] = coeff[j - 2] + p * coeff[j - 1] + q * coeff[j];
      }
      if (degree >= 1) {
        coeff[1] = p * coeff[0] + q * coeff[1];
      }
      coeff[0] = q * coeff[0];
      degree += 2;
    } else {
      coeff[degree + 1] = coeff[degree];
      for (size_t j = degree; j > 0; --j) {
        coeff[j] = coeff[j - 1] - f.root * coeff[j];
      }
      coeff[0] = -f.root * coeff[0];
      ++degree;
    }
  }

  double scale = 1.0;
  double residue = 0.0;
  for (const auto& c : coeff) {
    scale = std::max(scale, std::abs(c.real()));
    residue = std::max(residue, std::abs(c.imag()));
  }
  if (residue > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "char_poly_negated_coeffs: imaginary residue " << residue
        << " exceeds 1e-8 * " << scale
        << "; eigenvalues too ill-conditioned to expand";
    throw ConditioningError(msg.str());
  }

  // coeff[k] is the x^k coefficient of the monic polynomial, so the
  // negated coefficient varphi_k = -alpha_k = -coeff[k]. The + 0.0 turns
  // any -0.0 into +0.0 so exactly-nilpotent matrices serialize cleanly.
  Vector varphi(n);
  for (Index k = 0; k < n; ++k) {
    varphi[k] = -coeff[static_cast<size_t>(k)].real() + 0.0;
  }
  return varphi;
}

Vector least_squares(const Matrix& a, const Vector& b, double ridge) {
  if (a.rows() != b.size()) {
    std::ostringstream msg;
    msg << "least_squares: " << a.rows() << " rows vs " << b.size()
        << " right-hand entries";
    throw std::invalid_argument(msg.str());
  }
  if (a.size() == 0) {
    throw std::invalid_argument("least_squares: empty system");
  }
  if (ridge < 0.0) {
    throw std::invalid_argument("least_squares: ridge must be >= 0");
  }

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& svals = svd.singularValues();
  const Vector utb = svd.matrixU().transpose() * b;

  Vector z(svals.size());
  if (ridge == 0.0) {
    const double cutoff = rank_cutoff(svals, a.rows(), a.cols());
    for (Index i = 0; i < svals.size(); ++i) {
      z[i] = svals[i] > cutoff ? utb[i] / svals[i] : 0.0;
    }
  } else {
    for (Index i = 0; i < svals.size(); ++i) {
      z[i] = svals[i] * utb[i] / (svals[i] * svals[i] + ridge);
    }
  }
  return svd.matrixV() * z;
}

SpectrumSummary spectrum_summary(const Matrix& m) {
  SpectrumSummary s;
  s.spectral_radius = spectral_radius(m);
  s.max_singular_value = singular_values(m)[0];
  return s;
}

}  // namespace linres
