#pragma once

// Roots of dense complex polynomials.  Aberth-Ehrlich simultaneous
// iteration does the work; a companion-matrix eigensolve backs it up at
// small degrees when a sweep budget runs out.  Numerically negligible
// leading and trailing coefficients are deflated first and reported as
// roots at infinity and at the origin, so degree accounting stays exact
// even for the near-singular denominators the Pade solver produces.

#include <padelab/types.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>
#include <vector>

namespace padelab {

using Polynomial = VectorXc;  // dense ascending coefficients

struct RootOptions {
  int max_sweeps = 200;
  Real deflation_tol = 1e-13;  // relative to the largest coefficient
  Real cluster_tol = 1e-6;     // relative pairwise distance
  int companion_max_degree = 30;
};

struct RootRecord {
  Complex value;
  Real backward_error = 0.0;
  bool refined = true;    // Newton polish converged with a live derivative
  bool clustered = false; // within cluster_tol of another root
};

struct RootSet {
  std::vector<RootRecord> roots;  // finite roots, origin roots included
  int degree = 0;                 // size of the input minus one
  int roots_at_origin = 0;
  int roots_at_infinity = 0;
};

struct RefineResult {
  Complex value;
  bool converged = false;
};

inline std::pair<Complex, Complex> evaluate_with_derivative(const Polynomial& c,
                                                            Complex z) {
  Complex p = 0.0, dp = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
  return {p, dp};
}

// |p(r)| relative to the evaluation's own rounding envelope sum |c_k||r|^k.
inline Real root_backward_error(const Polynomial& c, Complex r) {
  Complex p = 0.0;
  Real env = 0.0;
  const Real ar = std::abs(r);
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
    p = p * r + c[k];
    env = env * ar + std::abs(c[k]);
  }
  return env > 0.0 ? std::abs(p) / env : 0.0;
}

// Newton polish.  Stops on a step below 1e-15 (1 + |root|); a dead
// derivative returns the input unchanged with converged = false.
inline RefineResult refine_root(const Polynomial& c, Complex root) {
  Complex z = root;
  for (int it = 0; it < 50; ++it) {
    const auto [p, dp] = evaluate_with_derivative(c, z);
    if (std::abs(dp) < 1e-300) return {root, false};
    const Complex step = p / dp;
    z -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) return {z, true};
  }
  return {z, true};
}

namespace detail {

inline std::vector<Complex> aberth_sweeps(const Polynomial& c, const RootOptions& opts,
                                          bool& converged) {
  const int d = static_cast<int>(c.size()) - 1;
  const Real cauchy = 1.0 + c.head(d).cwiseAbs().maxCoeff() / std::abs(c[d]);
  Real r0 = std::pow(std::abs(c[0] / c[d]), 1.0 / d);
  if (!std::isfinite(r0) || r0 <= 0.0 || r0 > cauchy) r0 = cauchy * 0.5;

  std::vector<Complex> z(d);
  for (int j = 0; j < d; ++j) {
    // Irrational angular offset keeps starts off the real axis and off any
    // symmetry the root set might have.
    const Real theta = 2.0 * M_PI * j / d + 0.7071067811865476 / d + 0.25;
    z[j] = std::polar(r0, theta);
  }

  converged = false;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    converged = true;
    for (int j = 0; j < d; ++j) {
      const auto [p, dp] = evaluate_with_derivative(c, z[j]);
      if (root_backward_error(c, z[j]) < 1e-15) continue;
      if (std::abs(dp) < 1e-300) {
        z[j] *= Complex(1.0 + 1e-6, 1e-6);
        converged = false;
        continue;
      }
      const Complex newton = p / dp;
      Complex repel = 0.0;
      for (int k = 0; k < d; ++k)
        if (k != j) repel += 1.0 / (z[j] - z[k]);
      const Complex denom = 1.0 - newton * repel;
      const Complex step = denom == Complex(0.0) ? newton : newton / denom;
      z[j] -= step;
      if (std::abs(step) > 1e-14 * (1.0 + std::abs(z[j]))) converged = false;
    }
  }
  return z;
}

inline std::vector<Complex> companion_roots(const Polynomial& c) {
  const int d = static_cast<int>(c.size()) - 1;
  MatrixXc comp = MatrixXc::Zero(d, d);
  for (int k = 0; k < d; ++k) comp(k, d - 1) = -c[k] / c[d];
  comp.block(1, 0, d - 1, d - 1).diagonal().setOnes();
  Eigen::ComplexEigenSolver<MatrixXc> es(comp, false);
  std::vector<Complex> z(d);
  for (int k = 0; k < d; ++k) z[k] = es.eigenvalues()[k];
  return z;
}

}  // namespace detail

inline RootSet find_roots(const Polynomial& coeffs, const RootOptions& opts = {}) {
  if (coeffs.size() == 0) throw ConfigError("empty polynomial");
  if (!coeffs.allFinite()) throw ConfigError("polynomial has non-finite coefficients");
  const Real cmax = coeffs.cwiseAbs().maxCoeff();
  if (cmax == 0.0) throw ConfigError("zero polynomial has no well-defined roots");

  RootSet out;
  out.degree = static_cast<int>(coeffs.size()) - 1;

  const Real tol = opts.deflation_tol * cmax;
  Eigen::Index lo = 0, hi = coeffs.size() - 1;
  while (hi > 0 && std::abs(coeffs[hi]) <= tol) --hi;
  while (lo < hi && std::abs(coeffs[lo]) <= tol) ++lo;
  out.roots_at_infinity = static_cast<int>(coeffs.size() - 1 - hi);
  out.roots_at_origin = static_cast<int>(lo);
  for (int k = 0; k < out.roots_at_origin; ++k)
    out.roots.push_back({Complex(0.0), 0.0, true, out.roots_at_origin > 1});

  const Polynomial p = coeffs.segment(lo, hi - lo + 1);
  const int d = static_cast<int>(p.size()) - 1;
  if (d >= 1) {
    bool converged = false;
    std::vector<Complex> z = detail::aberth_sweeps(p, opts, converged);
    if (!converged && d <= opts.companion_max_degree) z = detail::companion_roots(p);

    for (Complex zj : z) {
      RootRecord rec;
      const RefineResult polished = refine_root(p, zj);
      rec.value = polished.value;
      rec.refined = polished.converged;
      rec.backward_error = root_backward_error(p, rec.value);
      out.roots.push_back(rec);
    }
  }

  for (std::size_t i = 0; i < out.roots.size(); ++i)
    for (std::size_t j = i + 1; j < out.roots.size(); ++j) {
      const Real dist = std::abs(out.roots[i].value - out.roots[j].value);
      if (dist <= opts.cluster_tol * std::max<Real>(1.0, std::abs(out.roots[i].value)))
        out.roots[i].clustered = out.roots[j].clustered = true;
    }
  return out;
}

// Monic expansion of prod (z - r_i), for reconstruction checks.
inline Polynomial polynomial_from_roots(const std::vector<Complex>& roots) {
  Polynomial p = Polynomial::Zero(roots.size() + 1);
  p[0] = 1.0;
  for (std::size_t n = 0; n < roots.size(); ++n) {
    for (Eigen::Index k = static_cast<Eigen::Index>(n) + 1; k >= 1; --k)
      p[k] = p[k - 1] - roots[n] * p[k];
    p[0] *= -roots[n];
  }
  return p;
}

}  // namespace padelab
