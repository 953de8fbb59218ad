#include "linres/controllability.hpp"

#include <cmath>
#include <sstream>

namespace linres {

Matrix controllability_matrix(const Reservoir& r) {
  const Index n = r.w.size();
  if (r.W.rows() != n || r.W.cols() != n) {
    throw std::invalid_argument(
        "controllability_matrix: W and w dimensions disagree");
  }
  Matrix c(n, n);
  Vector col = r.w;
  c.col(0) = col;
  for (Index k = 1; k < n; ++k) {
    col = r.W * col;  // iterated products, never explicit matrix powers
    c.col(k) = col;
  }
  return c;
}

ControllabilityReport analyze(const Matrix& c, std::optional<double> tol) {
  ControllabilityReport rep;
  rep.C = c;
  rep.singular_values = singular_values(c);
  if (tol && *tol < 0.0) {
    throw std::invalid_argument("analyze: rank tolerance must be >= 0");
  }
  rep.rank_tolerance =
      tol ? *tol : rank_cutoff(rep.singular_values, c.rows(), c.cols());
  rep.rank = numerical_rank(c, rep.rank_tolerance);
  rep.nullspace = nullspace_basis(c, rep.rank_tolerance);
  rep.column_norms.resize(c.cols());
  for (Index k = 0; k < c.cols(); ++k) {
    rep.column_norms[k] = c.col(k).norm();
  }
  return rep;
}

Vector expected_column_norms(double rho, int n) {
  if (n < 1) throw std::invalid_argument("expected_column_norms: n must be >= 1");
  if (!(rho > 0.0)) {
    throw std::invalid_argument("expected_column_norms: rho must be > 0");
  }
  Vector norms(n);
  for (int k = 0; k < n; ++k) {
    norms[k] = std::pow(rho, static_cast<double>(k));
  }
  return norms;
}

Matrix cyclic_controllability_tilde(const Vector& w) {
  const Index n = w.size();
  if (n < 1) {
    throw std::invalid_argument("cyclic_controllability_tilde: empty w");
  }
  Matrix c(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      // Column k is w shifted down k places (the circulant of w).
      c((i + k) % n, k) = w[i];
    }
  }
  return c;
}

std::pair<Vector, Vector> indistinguishability_demo(const Reservoir& r,
                                                    const Vector& s1,
                                                    int d_index) {
  const Matrix c = controllability_matrix(r);
  if (s1.size() != c.cols()) {
    throw std::invalid_argument(
        "indistinguishability_demo: s1 length must equal n");
  }
  const ControllabilityReport rep = analyze(c);
  if (rep.nullspace.cols() == 0) {
    throw std::invalid_argument(
        "indistinguishability_demo: the reservoir has full memory rank; "
        "every pair of encoded histories stays distinguishable");
  }
  if (d_index < 0 || d_index >= rep.nullspace.cols()) {
    std::ostringstream msg;
    msg << "indistinguishability_demo: d_index " << d_index
        << " out of range [0, " << rep.nullspace.cols() << ")";
    throw std::invalid_argument(msg.str());
  }
  const Vector s2 = s1 + rep.nullspace.col(d_index);
  return {c * s1, c * s2};
}

}  // namespace linres
