#pragma once

// Pade approximants [L|M] of truncated power series.  The denominator
// solves the Toeplitz system sum_{j=1..M} b_j c_{L+k-j} = -c_{L+k},
// k = 1..M with b_0 = 1 (Baker's normalization); the numerator is the
// truncated Cauchy product of denominator and series.  Degenerate systems
// are the interesting case here, so the solver carries an explicit policy
// instead of a single fallback.
//
// The solve path is templated on the real scalar.  binary64 is the default
// everywhere; the long double instantiation exists because high diagonal
// orders of entire functions (exp around [9|9]) lose more digits to the
// binary64 representation of the series itself than any solver can win
// back.  Results are typically rounded to Real for the analysis layer.

#include <padelab/series.hpp>
#include <padelab/types.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace padelab {

enum class ScalingMode { None, Auto, Explicit };

// What to do when the Toeplitz system is rank deficient.
//   Strict     fail with the estimated rank.
//   Reduce     solve a lower-order system at the estimated rank, pad with
//              zeros, and keep it only if the full order condition still
//              holds; falls back to the minimum-norm solution, then fails.
//   Regularize take the minimum-norm least-squares denominator as is.
// Reduce recovers the Pade-table block representative (the function itself,
// for rational inputs).  Regularize reproduces what an SVD-based solve
// reports near the boundary, spurious pole-zero pairs included, which is
// the behaviour the singularity experiments study.
enum class DegeneracyPolicy { Strict, Reduce, Regularize };

struct SolveOptions {
  DegeneracyPolicy policy = DegeneracyPolicy::Reduce;
  ScalingMode scaling = ScalingMode::None;
  Real scale = 1.0;  // used when scaling == Explicit
  int refinement_iters = 2;
  Real residual_tol = 1e-10;
};

struct ConditionReport {
  Real residual = 0.0;     // relative residual of the denominator solve
  Real pivot_ratio = 0.0;  // min/max equilibrated LU pivot (rank-collapse gate)
  Real rcond = 0.0;        // reciprocal condition estimate, equilibrated system
  int estimated_rank = 0;
  int effective_denominator_degree = 0;
  bool degenerate = false;
  bool least_squares = false;
};

// Numerator and denominator live in the scaled variable w = z / scale;
// callers that want coefficients of z use unscaled_numerator/denominator.
template <class S>
struct RationalApproximantT {
  int L = 0;
  int M = 0;
  VectorX<std::complex<S>> numerator;
  VectorX<std::complex<S>> denominator;
  S scale = S(1);
  ConditionReport condition;

  std::complex<S> evaluate(std::complex<S> z) const;
};

using RationalApproximant = RationalApproximantT<Real>;

template <class S>
VectorX<std::complex<S>> scale_series(const VectorX<std::complex<S>>& c, S rho) {
  VectorX<std::complex<S>> out(c.size());
  S p = S(1);
  for (Eigen::Index k = 0; k < c.size(); ++k, p *= rho) out[k] = c[k] * p;
  return out;
}

template <class S>
VectorX<std::complex<S>> unscale_coefficients(const VectorX<std::complex<S>>& v, S rho) {
  VectorX<std::complex<S>> out(v.size());
  S p = S(1);
  for (Eigen::Index k = 0; k < v.size(); ++k, p /= rho) out[k] = v[k] * p;
  return out;
}

template <class S>
VectorX<std::complex<S>> unscaled_numerator(const RationalApproximantT<S>& r) {
  return unscale_coefficients(r.numerator, r.scale);
}

template <class S>
VectorX<std::complex<S>> unscaled_denominator(const RationalApproximantT<S>& r) {
  return unscale_coefficients(r.denominator, r.scale);
}

// Geometric mean of |c_{k+1}/c_k| over the tail quarter estimates the
// root-growth rate; its inverse maps the scaled series to O(1) entries.
template <class S>
S auto_scale_estimate(const VectorX<std::complex<S>>& c) {
  const Eigen::Index n = c.size();
  S log_sum = S(0);
  int pairs = 0;
  for (Eigen::Index k = std::max<Eigen::Index>(3 * n / 4 - 1, 0); k + 1 < n; ++k) {
    const S lo = std::abs(c[k]), hi = std::abs(c[k + 1]);
    if (lo > S(0) && hi > S(0)) {
      log_sum += std::log(hi / lo);
      ++pairs;
    }
  }
  if (pairs == 0) return S(1);
  const S rho = std::exp(-log_sum / S(pairs));
  return std::isfinite(rho) && rho > S(0) ? rho : S(1);
}

// Toeplitz matrix and right-hand side of the denominator system for the
// (already scaled) series d.
template <class S>
std::pair<MatrixX<std::complex<S>>, VectorX<std::complex<S>>> toeplitz_system(
    const VectorX<std::complex<S>>& d, int L, int M) {
  MatrixX<std::complex<S>> T = MatrixX<std::complex<S>>::Zero(M, M);
  VectorX<std::complex<S>> g(M);
  auto at = [&](int n) { return n >= 0 ? d[n] : std::complex<S>(S(0)); };
  for (int k = 1; k <= M; ++k) {
    for (int j = 1; j <= M; ++j) T(k - 1, j - 1) = at(L + k - j);
    g[k - 1] = -d[L + k];
  }
  return {std::move(T), std::move(g)};
}

namespace detail {

// First `count` power-series coefficients of numerator/denominator by long
// division; denominator[0] is assumed 1.
template <class S>
VectorX<std::complex<S>> rational_series_expansion(const VectorX<std::complex<S>>& num,
                                                   const VectorX<std::complex<S>>& den,
                                                   Eigen::Index count) {
  VectorX<std::complex<S>> t = VectorX<std::complex<S>>::Zero(count);
  for (Eigen::Index n = 0; n < count; ++n) {
    std::complex<S> acc = n < num.size() ? num[n] : std::complex<S>(S(0));
    const Eigen::Index jmax = std::min<Eigen::Index>(n, den.size() - 1);
    for (Eigen::Index j = 1; j <= jmax; ++j) acc -= den[j] * t[n - j];
    t[n] = acc;
  }
  return t;
}

template <class S>
VectorX<std::complex<S>> numerator_from_denominator(const VectorX<std::complex<S>>& d,
                                                    const VectorX<std::complex<S>>& b,
                                                    int L) {
  VectorX<std::complex<S>> a = VectorX<std::complex<S>>::Zero(L + 1);
  for (int i = 0; i <= L; ++i) {
    const int jmax = std::min<int>(i, static_cast<int>(b.size()) - 1);
    for (int j = 0; j <= jmax; ++j) a[i] += b[j] * d[i - j];
  }
  return a;
}

template <class S>
S relative_residual(const MatrixX<std::complex<S>>& T, const VectorX<std::complex<S>>& g,
                    const VectorX<std::complex<S>>& x) {
  const S denom = T.norm() * x.norm() + g.norm();
  if (denom == S(0)) return S(0);
  return (T * x - g).norm() / denom;
}

template <class S>
bool order_condition_holds(const VectorX<std::complex<S>>& d,
                           const VectorX<std::complex<S>>& a,
                           const VectorX<std::complex<S>>& b, int L, int M, Real tol) {
  const VectorX<std::complex<S>> t = rational_series_expansion(a, b, L + M + 1);
  for (int n = 0; n <= L + M; ++n)
    if (std::abs(t[n] - d[n]) > S(tol) * std::max<S>(S(1), std::abs(d[n]))) return false;
  return true;
}

template <class S>
struct DenominatorSolve {
  VectorX<std::complex<S>> b;  // full-length coefficient vector, b[0] = 1
  S residual = S(0);
  S pivot_ratio = S(0);   // min/max |U_ii| after equilibration
  S rcond = S(0);         // Higham estimate on the equilibrated system
  bool healthy = false;   // finite and small relative residual
  bool pivot_ok = false;  // no collapsed LU pivot
};

// Row-equilibrated LU with a couple of refinement passes.  Equilibration
// matters twice over: factorially graded rows (exp at high order) would
// otherwise both collapse the pivot test and lose digits, while after it a
// collapsed pivot really does mean rank collapse.
template <class S>
DenominatorSolve<S> lu_denominator(const MatrixX<std::complex<S>>& T,
                                   const VectorX<std::complex<S>>& g,
                                   const SolveOptions& opts) {
  DenominatorSolve<S> out;
  const int M = static_cast<int>(T.rows());
  MatrixX<std::complex<S>> Ts = T;
  VectorX<std::complex<S>> gs = g;
  for (int i = 0; i < M; ++i) {
    const S rmax = Ts.row(i).cwiseAbs().maxCoeff();
    if (rmax > S(0)) {
      Ts.row(i) /= rmax;
      gs[i] /= rmax;
    }
  }
  Eigen::PartialPivLU<MatrixX<std::complex<S>>> lu(Ts);
  VectorX<std::complex<S>> x = lu.solve(gs);
  // Residuals accumulate in long double: for the binary64 instantiation the
  // extra digits let refinement restore working-precision coefficients even
  // where grading costs the factorization digits.
  VectorX<std::complex<S>> rvec(M);
  for (int it = 0; it < opts.refinement_iters && x.allFinite(); ++it) {
    for (int i = 0; i < M; ++i) {
      std::complex<long double> acc(gs[i].real(), gs[i].imag());
      for (int j = 0; j < M; ++j)
        acc -= std::complex<long double>(Ts(i, j).real(), Ts(i, j).imag()) *
               std::complex<long double>(x[j].real(), x[j].imag());
      rvec[i] = std::complex<S>(static_cast<S>(acc.real()), static_cast<S>(acc.imag()));
    }
    x += lu.solve(rvec);
  }
  out.b = VectorX<std::complex<S>>::Zero(M + 1);
  out.b[0] = std::complex<S>(S(1));
  if (!x.allFinite()) return out;
  out.b.tail(M) = x;
  out.residual = relative_residual(T, g, x);
  out.healthy = out.residual <= S(opts.residual_tol);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const S dmax = diag.maxCoeff();
  out.pivot_ratio = dmax > S(0) ? diag.minCoeff() / dmax : S(0);
  out.pivot_ok = out.pivot_ratio > S(opts.residual_tol);
  // The pivot ratio alone misses triangular ill-conditioning with a
  // balanced diagonal, so surface a proper estimate as well.
  out.rcond = lu.rcond();
  return out;
}

template <class S>
DenominatorSolve<S> min_norm_denominator(const MatrixX<std::complex<S>>& T,
                                         const VectorX<std::complex<S>>& g, int M) {
  Eigen::CompleteOrthogonalDecomposition<MatrixX<std::complex<S>>> cod(T);
  const VectorX<std::complex<S>> x = cod.solve(g);
  DenominatorSolve<S> out;
  out.b = VectorX<std::complex<S>>::Zero(M + 1);
  out.b[0] = std::complex<S>(S(1));
  out.b.tail(M) = x;
  out.residual = relative_residual(T, g, x);
  out.healthy = x.allFinite();
  return out;
}

}  // namespace detail

template <class S>
RationalApproximantT<S> solve_pade(const VectorX<std::complex<S>>& coeffs, int L, int M,
                                   const SolveOptions& opts = {}) {
  if (L < 0 || M < 0) throw ConfigError("pade orders must be nonnegative");
  if (coeffs.size() < L + M + 1)
    throw ConfigError("series too short: [L|M] needs L+M+1 coefficients");
  if (!coeffs.allFinite()) throw ConfigError("series contains non-finite coefficients");

  RationalApproximantT<S> r;
  r.L = L;
  r.M = M;
  r.scale = opts.scaling == ScalingMode::None   ? S(1)
            : opts.scaling == ScalingMode::Auto ? auto_scale_estimate(coeffs)
                                                : S(opts.scale);
  if (!(r.scale > S(0)) || !std::isfinite(r.scale))
    throw ConfigError("scale factor must be positive and finite");
  const VectorX<std::complex<S>> d =
      r.scale == S(1) ? coeffs : scale_series(coeffs, r.scale);

  if (M == 0) {
    r.numerator = d.head(L + 1);
    r.denominator = VectorX<std::complex<S>>::Ones(1);
    r.condition.effective_denominator_degree = 0;
    return r;
  }

  auto [T, g] = toeplitz_system(d, L, M);
  detail::DenominatorSolve<S> solve = detail::lu_denominator(T, g, opts);
  // Recorded even when the gate below trips: they are then the numbers
  // that tripped it.
  r.condition.pivot_ratio = static_cast<Real>(solve.pivot_ratio);
  r.condition.rcond = static_cast<Real>(solve.rcond);

  if (!(solve.healthy && solve.pivot_ok)) {
    const int rank =
        static_cast<int>(Eigen::FullPivLU<MatrixX<std::complex<S>>>(T).rank());
    r.condition.estimated_rank = rank;
    r.condition.degenerate = true;

    switch (opts.policy) {
      case DegeneracyPolicy::Strict:
        throw SolveError(
            "rank-deficient Pade denominator system; reduce M or use the "
            "Reduce/Regularize policy",
            rank, M);

      case DegeneracyPolicy::Reduce: {
        // Try the block representative at the estimated rank first.
        if (rank >= 1 && rank < M) {
          auto [Tr, gr] = toeplitz_system(d, L, rank);
          detail::DenominatorSolve<S> reduced = detail::lu_denominator(Tr, gr, opts);
          if (reduced.healthy) {
            VectorX<std::complex<S>> b = VectorX<std::complex<S>>::Zero(M + 1);
            b.head(rank + 1) = reduced.b;
            const VectorX<std::complex<S>> a =
                detail::numerator_from_denominator(d, b, L);
            if (detail::order_condition_holds(d, a, b, L, M, opts.residual_tol)) {
              r.numerator = a;
              r.denominator = std::move(b);
              r.condition.residual = static_cast<Real>(reduced.residual);
              r.condition.effective_denominator_degree = rank;
              return r;
            }
          }
        }
        solve = detail::min_norm_denominator(T, g, M);
        r.condition.least_squares = true;
        if (solve.healthy) {
          const VectorX<std::complex<S>> a =
              detail::numerator_from_denominator(d, solve.b, L);
          if (!detail::order_condition_holds(d, a, solve.b, L, M, opts.residual_tol))
            solve.healthy = false;
        }
        if (!solve.healthy)
          throw SolveError(
              "degenerate Pade system: no reduced or minimum-norm denominator "
              "satisfies the order condition",
              rank, M);
        break;
      }

      case DegeneracyPolicy::Regularize:
        solve = detail::min_norm_denominator(T, g, M);
        r.condition.least_squares = true;
        if (!solve.healthy)
          throw SolveError("minimum-norm Pade solve produced non-finite denominator",
                           rank, M);
        break;
    }
  } else {
    r.condition.estimated_rank = M;
  }

  r.numerator = detail::numerator_from_denominator(d, solve.b, L);
  r.denominator = std::move(solve.b);
  r.condition.residual = static_cast<Real>(solve.residual);
  int deg = M;
  while (deg > 0 && r.denominator[deg] == std::complex<S>(S(0))) --deg;
  r.condition.effective_denominator_degree = deg;
  return r;
}

template <class S>
std::complex<S> RationalApproximantT<S>::evaluate(std::complex<S> z) const {
  const std::complex<S> w = z / scale;
  auto horner = [&](const VectorX<std::complex<S>>& c) {
    std::complex<S> acc = S(0);
    for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * w + c[k];
    return acc;
  };
  const std::complex<S> q = horner(denominator);
  // Guard actual arithmetic breakdown only; large near-pole values are fine.
  if (std::abs(q) < S(1e-280))
    throw PoleProximityError("evaluation point lands on a pole",
                             static_cast<Real>(std::abs(q)));
  return horner(numerator) / q;
}

// Largest k such that the approximant's expansion matches coeffs through
// degree k-1.  A proper [L|M] solve satisfies k >= L+M+1.
template <class S>
int agreement_order_check(const VectorX<std::complex<S>>& coeffs,
                          const RationalApproximantT<S>& r, Real tol = 1e-10) {
  const VectorX<std::complex<S>> t =
      detail::rational_series_expansion(r.numerator, r.denominator, coeffs.size());
  S p = S(1);  // scale^-n, mapping the expansion back to the z variable
  for (Eigen::Index n = 0; n < coeffs.size(); ++n, p /= r.scale) {
    if (std::abs(t[n] * p - coeffs[n]) > S(tol) * std::max<S>(S(1), std::abs(coeffs[n])))
      return static_cast<int>(n);
  }
  return static_cast<int>(coeffs.size());
}

// Closed-form approximants for families whose Pade table is known exactly.
// Supported: F2Exp (even truncation), FibGenerating (even truncation >= 4),
// JacobiLacunary (truncation a power of two >= 4), FibLacunary (truncation
// a Fibonacci number >= 8).  Everything else throws ConfigError.
inline RationalApproximant exact_pade_oracle(Family family, int truncation) {
  RationalApproximant r;
  auto finish = [&](int L, int M, VectorXc num, VectorXc den) {
    r.L = L;
    r.M = M;
    r.numerator = std::move(num);
    r.denominator = std::move(den);
    r.condition.estimated_rank = M;
    int deg = M;
    while (deg > 0 && r.denominator[deg] == Complex(0.0)) --deg;
    r.condition.effective_denominator_degree = deg;
    return r;
  };

  switch (family) {
    case Family::F2Exp: {
      if (truncation < 2 || truncation % 2)
        throw ConfigError("exp oracle needs an even truncation >= 2");
      const int m = truncation / 2;
      // [M|M] of exp(-z): denominator coefficient k is
      // (2M-k)! M! / ((2M)! k! (M-k)!) = binom(M,k) / prod_{j<k}(2M-j),
      // numerator the same with alternating sign (Baker, "Essentials of
      // Pade Approximants", ch. 1 worked example).  Through M = 10 both
      // integer factors fit in 64 bits, so one division gives the
      // correctly rounded double; beyond that the ratio recurrence is
      // accurate to a few ulp.
      VectorXc num(m + 1), den(m + 1);
      if (m <= 10) {
        for (int k = 0; k <= m; ++k) {
          long long binom = 1, falling = 1;
          for (int j = 1; j <= k; ++j) binom = binom * (m - j + 1) / j;
          for (int j = 0; j < k; ++j) falling *= 2 * m - j;
          const Real v = Real(binom) / Real(falling);
          num[k] = k % 2 ? -v : v;
          den[k] = v;
        }
      } else {
        num[0] = den[0] = 1.0;
        for (int k = 1; k <= m; ++k) {
          const Real ratio = Real(m - k + 1) / (Real(2 * m - k + 1) * k);
          num[k] = -num[k - 1] * ratio;
          den[k] = den[k - 1] * ratio;
        }
      }
      return finish(m, m, std::move(num), std::move(den));
    }

    case Family::FibGenerating: {
      if (truncation < 4 || truncation % 2)
        throw ConfigError("fibonacci generating oracle needs an even truncation >= 4");
      const int m = truncation / 2;
      VectorXc num = VectorXc::Zero(m + 1), den = VectorXc::Zero(m + 1);
      num[1] = 1.0;
      den[0] = 1.0;
      den[1] = -1.0;
      den[2] = -1.0;
      return finish(m, m, std::move(num), std::move(den));
    }

    case Family::JacobiLacunary: {
      int s = 0;
      while ((1 << (s + 1)) <= truncation) ++s;
      if (truncation < 4 || (1 << s) != truncation)
        throw ConfigError("jacobi oracle needs a power-of-two truncation >= 4");
      const int m = truncation / 2;
      VectorXc den = VectorXc::Zero(m + 1);
      den[0] = 1.0;
      for (int k = 0; k <= s - 2; ++k) den[1 << k] += 1.0;
      den[m] -= 1.0;
      VectorXc num = detail::numerator_from_denominator(
          jacobi_lacunary_series(truncation), den, m);
      return finish(m, m, std::move(num), std::move(den));
    }

    case Family::FibLacunary: {
      std::vector<long long> fib{0, 1};
      while (fib.back() < truncation) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
      const std::size_t k = fib.size() - 1;
      if (truncation < 8 || fib[k] != truncation)
        throw ConfigError("fibonacci lacunary oracle needs a Fibonacci truncation >= 8");
      const int m = truncation / 2;
      // Denominator 1 + z^{F_{k-4}} - z^{F_{k-2}} at truncation F_k.
      VectorXc den = VectorXc::Zero(m + 1);
      den[0] = 1.0;
      den[fib[k - 4]] += 1.0;
      den[fib[k - 2]] -= 1.0;
      VectorXc num =
          detail::numerator_from_denominator(fib_lacunary_series(truncation), den, m);
      return finish(m, m, std::move(num), std::move(den));
    }

    default:
      throw ConfigError("no closed-form pade oracle for this family");
  }
}

}  // namespace padelab
