#pragma once

// Taylor coefficient generators for the test-function corpus: simple poles,
// branch cuts, an essential singularity, lacunary series with a natural
// boundary on |z|=1, random series, and a quasianalytic pole-sum family.
// Every generator returns N+1 ascending coefficients; gap coefficients of
// lacunary families are exactly zero, which downstream code relies on when
// it detects structurally degenerate Toeplitz systems.

#include <padelab/rng.hpp>
#include <padelab/types.hpp>

#include <cmath>
#include <cstdint>
#include <optional>

namespace padelab {

enum class Family {
  F1Log,            // log(1+z)/z
  F2Exp,            // exp(-z)
  F3SqrtBranch,     // sqrt((1+2z)/(1+z)), branch cut [-1, -1/2]
  F4Essential,      // exp(-z/(1+z)), essential singularity at z=-1
  F5Tan4,           // tan(z^4), eight-fold symmetric pole rays
  FibGenerating,    // z/(1-z-z^2)
  JacobiLacunary,   // sum z^(2^n)
  WeierstrassLacunary,  // sum z^(n!)
  KroneckerLacunary,    // sum z^(n^2)
  FibLacunary,      // sum z^(F_n), F_0 = 0
  Pole2,            // 2/(2-z), coefficients 2^-n
  Branch1,          // sqrt((3+z)/(1+z)), branch cut [-3, -1]
  Branch2,          // log(6/5 - z), branch point at 6/5
  RandomUniform,    // epsilon * r_n, r_n uniform in [0,1]
  Carleman,         // pole-sum series with residues e^-k on |z|=1
  Recursion,        // three-term recursion, see recursion_series
};

enum class NoiseDistribution {
  Uniform01,   // additive epsilon * r_n, r_n in [0,1]
  UniformSym,  // additive eps_n, i.i.d. in [-epsilon, epsilon]
};

struct NoiseSpec {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  NoiseDistribution distribution = NoiseDistribution::UniformSym;
};

// Constraint rows: c a0 = f, b a0 + c a1 = e, a a0 + b a1 + c a2 = d,
// then a_k = -(b/c) a_{k-1} - (a/c) a_{k-2}.  Generates the Taylor series
// of (f + e z + d z^2) / (c + b z + a z^2).
struct RecursionParams {
  double a = -1.0, b = -1.0, c = 1.0;
  double d = 0.0, e = 1.0, f = 0.0;
};

struct SeriesSpec {
  Family family = Family::F1Log;
  double epsilon = 1.0;       // strength of RandomUniform
  std::uint64_t seed = 0;     // RandomUniform and Carleman draws
  int carleman_poles = 100;
  double carleman_decay = 1.0;
  RecursionParams recursion;
  std::optional<NoiseSpec> noise;
};

namespace detail {

// Binomial series (1 + s z)^alpha up to degree n, by the ratio recurrence.
inline VectorXc binomial_series(double alpha, double s, int n) {
  VectorXc c(n + 1);
  c[0] = 1.0;
  for (int k = 1; k <= n; ++k) c[k] = c[k - 1] * (s * (alpha - k + 1) / k);
  return c;
}

// Cauchy product truncated to the shorter operand's length.
inline VectorXc convolve_truncated(const VectorXc& u, const VectorXc& v) {
  const int n = static_cast<int>(std::min(u.size(), v.size())) - 1;
  VectorXc out = VectorXc::Zero(n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= i; ++j) out[i] += u[j] * v[i - j];
  return out;
}

inline void require_order(int n) {
  if (n < 1) throw ConfigError("series order must be at least 1");
}

}  // namespace detail

inline VectorXc f1_log_series(int n) {
  detail::require_order(n);
  VectorXc c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = (k % 2 ? -1.0 : 1.0) / (k + 1);
  return c;
}

// Templated on the real scalar: the [M|M] solves of exp are the one place
// in the experiments where the binary64 coefficients themselves limit the
// attainable accuracy, so an extended-precision series has to exist.
template <class S = Real>
VectorX<std::complex<S>> f2_exp_series(int n) {
  detail::require_order(n);
  VectorX<std::complex<S>> c(n + 1);
  c[0] = S(1);
  for (int k = 1; k <= n; ++k) c[k] = c[k - 1] * (S(-1) / S(k));
  return c;
}

inline VectorXc f3_sqrt_branch_series(int n) {
  detail::require_order(n);
  return detail::convolve_truncated(detail::binomial_series(0.5, 2.0, n),
                                    detail::binomial_series(-0.5, 1.0, n));
}

inline VectorXc f4_essential_series(int n) {
  detail::require_order(n);
  // w = -z/(1+z) has w_k = (-1)^k for k >= 1; exp(w) follows from the
  // logarithmic-derivative recurrence n g_n = sum k w_k g_{n-k}.
  VectorXc g = VectorXc::Zero(n + 1);
  g[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    Complex acc = 0.0;
    for (int k = 1; k <= m; ++k) acc += Real(k) * (k % 2 ? -1.0 : 1.0) * g[m - k];
    g[m] = acc / Real(m);
  }
  return g;
}

inline VectorXc f5_tan4_series(int n) {
  detail::require_order(n);
  // tan w by series division of sin by cos, then the substitution w = z^4.
  // Zero gaps stay exactly zero: sin/cos parities cancel term by term.
  const int m = n / 4;
  VectorXc s = VectorXc::Zero(m + 1), co = VectorXc::Zero(m + 1);
  Real fact = 1.0;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) fact *= k;
    const Real term = (k / 2 % 2 ? -1.0 : 1.0) / fact;
    (k % 2 ? s[k] : co[k]) = term;
  }
  VectorXc t(m + 1);
  for (int k = 0; k <= m; ++k) {
    Complex acc = s[k];
    for (int j = 1; j <= k; ++j) acc -= co[j] * t[k - j];
    t[k] = acc;
  }
  VectorXc c = VectorXc::Zero(n + 1);
  for (int k = 0; k <= m; ++k) c[4 * k] = t[k];
  return c;
}

inline VectorXc fib_generating_series(int n) {
  detail::require_order(n);
  VectorXc c = VectorXc::Zero(n + 1);
  if (n >= 1) c[1] = 1.0;
  for (int k = 2; k <= n; ++k) c[k] = c[k - 1] + c[k - 2];
  return c;
}

// Lacunary families accumulate additively on exponent collisions (the
// Fibonacci set hits z^1 twice through F_1 = F_2 = 1, n! hits z^1 through
// 0! = 1! = 1); the collision convention is recorded in file sidecars.
inline VectorXc jacobi_lacunary_series(int n) {
  detail::require_order(n);
  VectorXc c = VectorXc::Zero(n + 1);
  for (long long e = 1; e <= n; e *= 2) c[e] += 1.0;
  return c;
}

inline VectorXc weierstrass_lacunary_series(int n) {
  detail::require_order(n);
  VectorXc c = VectorXc::Zero(n + 1);
  long long f = 1;
  for (long long k = 0; f <= n; f *= ++k) c[f] += 1.0;
  return c;
}

inline VectorXc kronecker_lacunary_series(int n) {
  detail::require_order(n);
  VectorXc c = VectorXc::Zero(n + 1);
  for (long long k = 0; k * k <= n; ++k) c[k * k] += 1.0;
  return c;
}

inline VectorXc fib_lacunary_series(int n) {
  detail::require_order(n);
  VectorXc c = VectorXc::Zero(n + 1);
  long long fp = 0, fq = 1;
  c[0] += 1.0;  // F_0 = 0
  while (fq <= n) {
    c[fq] += 1.0;
    const long long next = fp + fq;
    fp = fq;
    fq = next;
  }
  return c;
}

inline VectorXc pole2_series(int n) {
  detail::require_order(n);
  VectorXc c(n + 1);
  Real p = 1.0;
  for (int k = 0; k <= n; ++k, p *= 0.5) c[k] = p;
  return c;
}

inline VectorXc branch1_series(int n) {
  detail::require_order(n);
  VectorXc c = detail::convolve_truncated(detail::binomial_series(0.5, 1.0 / 3.0, n),
                                          detail::binomial_series(-0.5, 1.0, n));
  return std::sqrt(3.0) * c;
}

inline VectorXc branch2_series(int n) {
  detail::require_order(n);
  VectorXc c(n + 1);
  c[0] = std::log(1.2);
  Real p = 1.0;
  for (int k = 1; k <= n; ++k) {
    p *= 5.0 / 6.0;
    c[k] = -p / k;
  }
  return c;
}

inline VectorXc random_uniform_series(double epsilon, std::uint64_t seed, int n) {
  detail::require_order(n);
  SplitMix64 rng(seed);
  VectorXc c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = epsilon * rng.uniform01();
  return c;
}

// c_n = 2 sum_{k=1..K} e^{-decay k} cos(2 pi X_k n), X_k i.i.d. uniform.
// The pole-sum behind it has residues e^{-decay k} on the unit circle, the
// canonical Carleman-class example.
inline VectorXc carleman_series(int poles, double decay, std::uint64_t seed, int n) {
  detail::require_order(n);
  if (poles < 1) throw ConfigError("carleman series needs at least one pole");
  SplitMix64 rng(seed);
  VectorXr x(poles);
  for (int k = 0; k < poles; ++k) x[k] = rng.uniform01();
  VectorXc c = VectorXc::Zero(n + 1);
  for (int k = 1; k <= poles; ++k) {
    const Real w = std::exp(-decay * k);
    for (int m = 0; m <= n; ++m) c[m] += 2.0 * w * std::cos(2.0 * M_PI * x[k - 1] * m);
  }
  return c;
}

inline VectorXc recursion_series(const RecursionParams& p, int n) {
  detail::require_order(n);
  if (p.c == 0.0) throw ConfigError("recursion series requires c != 0");
  VectorXc out(n + 1);
  out[0] = p.f / p.c;
  if (n >= 1) out[1] = (p.e - p.b * out[0]) / p.c;
  if (n >= 2) out[2] = (p.d - p.a * out[0] - p.b * out[1]) / p.c;
  for (int k = 3; k <= n; ++k)
    out[k] = -(p.b / p.c) * out[k - 1] - (p.a / p.c) * out[k - 2];
  return out;
}

// Additive noise; epsilon = 0 returns the input unchanged bit-exactly.
inline VectorXc inject_noise(const VectorXc& base, const NoiseSpec& noise) {
  if (noise.epsilon == 0.0) return base;
  SplitMix64 rng(noise.seed);
  VectorXc out = base;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const Real draw = noise.distribution == NoiseDistribution::Uniform01
                          ? rng.uniform01()
                          : rng.uniform_sym();
    out[k] += noise.epsilon * draw;
  }
  return out;
}

inline VectorXc taylor_coefficients(const SeriesSpec& spec, int n) {
  VectorXc c;
  switch (spec.family) {
    case Family::F1Log: c = f1_log_series(n); break;
    case Family::F2Exp: c = f2_exp_series(n); break;
    case Family::F3SqrtBranch: c = f3_sqrt_branch_series(n); break;
    case Family::F4Essential: c = f4_essential_series(n); break;
    case Family::F5Tan4: c = f5_tan4_series(n); break;
    case Family::FibGenerating: c = fib_generating_series(n); break;
    case Family::JacobiLacunary: c = jacobi_lacunary_series(n); break;
    case Family::WeierstrassLacunary: c = weierstrass_lacunary_series(n); break;
    case Family::KroneckerLacunary: c = kronecker_lacunary_series(n); break;
    case Family::FibLacunary: c = fib_lacunary_series(n); break;
    case Family::Pole2: c = pole2_series(n); break;
    case Family::Branch1: c = branch1_series(n); break;
    case Family::Branch2: c = branch2_series(n); break;
    case Family::RandomUniform:
      c = random_uniform_series(spec.epsilon, spec.seed, n);
      break;
    case Family::Carleman:
      c = carleman_series(spec.carleman_poles, spec.carleman_decay, spec.seed, n);
      break;
    case Family::Recursion: c = recursion_series(spec.recursion, n); break;
    default: throw ConfigError("unknown series family");
  }
  if (spec.noise) c = inject_noise(c, *spec.noise);
  return c;
}

// Horner evaluation at z = r e^{i theta}; r < 1 acts as a convergence
// factor for series whose boundary is the unit circle.
inline Complex evaluate_polar(const VectorXc& coeffs, Real r, Real theta) {
  if (r < 0.0) throw ConfigError("polar radius must be nonnegative");
  const Complex z = std::polar(r, theta);
  Complex acc = 0.0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * z + coeffs[k];
  return acc;
}

}  // namespace padelab
