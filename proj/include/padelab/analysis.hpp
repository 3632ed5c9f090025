#pragma once

// Pole-zero structure of rational approximants: residues, Froissart
// doublet classification, boundary statistics for natural-boundary
// detection, residue-decay fits, and the pole-filtering signal denoiser.

#include <padelab/pade.hpp>
#include <padelab/polyroots.hpp>
#include <padelab/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace padelab {

struct Thresholds {
  Real pair_distance = 1e-3;   // pole-zero distance that marks a doublet
  Real residue_ratio = 1e-6;   // relative to the largest residue magnitude
  Real shell_width = 0.05;     // ||pole| - 1| band for Froissart labeling
};

enum class PoleClass { Stable, GhostPair, Froissart };

inline const char* to_string(PoleClass c) {
  switch (c) {
    case PoleClass::Stable: return "STABLE";
    case PoleClass::GhostPair: return "GHOST_PAIR";
    case PoleClass::Froissart: return "FROISSART";
  }
  return "?";
}

struct PoleZeroSet {
  std::vector<Complex> poles;  // in the original variable, scale applied
  std::vector<Complex> zeros;
  RootSet pole_roots;          // deflation bookkeeping from the solves
  RootSet zero_roots;
};

inline PoleZeroSet locate_poles_zeros(const RationalApproximant& r,
                                      const RootOptions& opts = {}) {
  PoleZeroSet out;
  out.pole_roots = find_roots(r.denominator, opts);
  for (const RootRecord& rec : out.pole_roots.roots)
    out.poles.push_back(rec.value * r.scale);
  if (r.numerator.cwiseAbs().maxCoeff() > 0.0) {
    out.zero_roots = find_roots(r.numerator, opts);
    for (const RootRecord& rec : out.zero_roots.roots)
      out.zeros.push_back(rec.value * r.scale);
  }
  return out;
}

struct ResidueEntry {
  Complex pole;
  Complex residue;
};

struct ResidueSpectrum {
  // Sorted by descending |residue|; ties break by ascending arg(pole),
  // then ascending |pole|, so runs are reproducible across platforms.
  std::vector<ResidueEntry> entries;
  Real beta = 0.0;       // decay rate of log|A_k| against rank k
  Real r_squared = 0.0;  // quality of that linear fit
  int fit_points = 0;
};

namespace detail {

inline void beta_decay_fit(ResidueSpectrum& s) {
  // The top two residues often carry the genuine singularity rather than
  // the exponential tail, and entries at the rounding plateau are noise;
  // both are excluded from the fit.
  if (s.entries.empty()) return;
  const Real top = std::abs(s.entries.front().residue);
  const Real plateau = 1e3 * std::numeric_limits<Real>::epsilon() * top;
  std::vector<Real> xs, ys;
  for (std::size_t k = 2; k < s.entries.size(); ++k) {
    const Real a = std::abs(s.entries[k].residue);
    if (a <= plateau || a == 0.0) break;
    xs.push_back(Real(k + 1));
    ys.push_back(std::log(a));
  }
  s.fit_points = static_cast<int>(xs.size());
  if (s.fit_points < 3) return;
  const Real n = Real(s.fit_points);
  Real sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < s.fit_points; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const Real vxx = sxx - sx * sx / n;
  const Real vxy = sxy - sx * sy / n;
  const Real vyy = syy - sy * sy / n;
  if (vxx <= 0.0) return;
  const Real slope = vxy / vxx;
  s.beta = -slope;
  s.r_squared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
}

}  // namespace detail

inline ResidueSpectrum residue_spectrum(const RationalApproximant& r,
                                        const PoleZeroSet& pz) {
  ResidueSpectrum s;
  for (Complex pole : pz.poles) {
    const Complex w = pole / r.scale;
    const auto [q, dq] = evaluate_with_derivative(r.denominator, w);
    (void)q;
    Complex num = 0.0;
    for (Eigen::Index k = r.numerator.size() - 1; k >= 0; --k)
      num = num * w + r.numerator[k];
    // Residue of P(z/rho)/Q(z/rho) at z = rho w is rho P(w)/Q'(w).  A dead
    // Q' means a multiple pole; infinity is the honest report.
    const Complex res = std::abs(dq) > 0.0
                            ? Complex(r.scale) * num / dq
                            : Complex(std::numeric_limits<Real>::infinity(), 0.0);
    s.entries.push_back({pole, res});
  }
  std::sort(s.entries.begin(), s.entries.end(),
            [](const ResidueEntry& a, const ResidueEntry& b) {
              const Real ra = std::abs(a.residue), rb = std::abs(b.residue);
              if (ra != rb) return ra > rb;
              const Real pa = std::arg(a.pole), pb = std::arg(b.pole);
              if (pa != pb) return pa < pb;
              return std::abs(a.pole) < std::abs(b.pole);
            });
  detail::beta_decay_fit(s);
  return s;
}

struct DoubletReport {
  Complex pole;
  Complex residue;
  Real pairing_distance = std::numeric_limits<Real>::infinity();
  int paired_zero = -1;  // index into the zero list, -1 when none
  Real shell_distance = 0.0;
  PoleClass cls = PoleClass::Stable;
};

// One report per pole, in residue-spectrum order.  A pole is a ghost pair
// when a zero sits within pair_distance and its residue is negligible
// against the largest one; a ghost riding the unit shell is Froissart.
inline std::vector<DoubletReport> classify_doublets(const PoleZeroSet& pz,
                                                    const ResidueSpectrum& spectrum,
                                                    const Thresholds& th = {}) {
  Real top = 0.0;
  for (const ResidueEntry& e : spectrum.entries)
    top = std::max(top, std::abs(e.residue));

  std::vector<DoubletReport> out;
  for (const ResidueEntry& e : spectrum.entries) {
    DoubletReport rep;
    rep.pole = e.pole;
    rep.residue = e.residue;
    rep.shell_distance = std::abs(std::abs(e.pole) - 1.0);
    for (std::size_t j = 0; j < pz.zeros.size(); ++j) {
      const Real d = std::abs(e.pole - pz.zeros[j]);
      if (d < rep.pairing_distance) {
        rep.pairing_distance = d;
        rep.paired_zero = static_cast<int>(j);
      }
    }
    const bool paired = rep.pairing_distance < th.pair_distance;
    const bool tiny = std::abs(e.residue) < th.residue_ratio * top;
    if (paired && tiny)
      rep.cls = rep.shell_distance < th.shell_width ? PoleClass::Froissart
                                                    : PoleClass::GhostPair;
    out.push_back(rep);
  }
  return out;
}

struct BoundaryStats {
  Real shell_fraction = 0.0;       // poles within shell_width of |z| = 1
  Real arc_sup_discrepancy = 0.0;  // sup over arcs of |empirical - uniform|
  Real log_norm_ratio = 0.0;       // log(sum|q_k| / sqrt(|q_0 q_M|))
  int pole_count = 0;
};

// Equidistribution evidence for a natural boundary: the fraction of poles
// hugging the unit circle and the sup-discrepancy of their arguments.
inline BoundaryStats boundary_statistics(const PoleZeroSet& pz,
                                         const RationalApproximant& r,
                                         Real shell_width = 0.05) {
  const std::size_t n = pz.poles.size();
  if (n < 2) throw StatsError("boundary statistics need at least two poles");

  BoundaryStats out;
  out.pole_count = static_cast<int>(n);
  std::vector<Real> u;
  for (Complex p : pz.poles) {
    if (std::abs(std::abs(p) - 1.0) < shell_width) out.shell_fraction += 1.0;
    Real a = std::arg(p) / (2.0 * M_PI);
    if (a < 0.0) a += 1.0;
    u.push_back(a);
  }
  out.shell_fraction /= Real(n);

  // Sup over closed arcs with endpoints at observed angles.
  std::sort(u.begin(), u.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Real len = u[j] - u[i] + (j >= i ? 0.0 : 1.0);
      const Real count = Real((j - i + n) % n + 1);
      out.arc_sup_discrepancy =
          std::max({out.arc_sup_discrepancy, std::abs(count / Real(n) - len),
                    std::abs((count - 1.0) / Real(n) - len)});
    }

  const VectorXc& q = r.denominator;
  const Real q0 = std::abs(q[0]), qm = std::abs(q[q.size() - 1]);
  if (q0 > 0.0 && qm > 0.0)
    out.log_norm_ratio = std::log(q.cwiseAbs().sum() / std::sqrt(q0 * qm));
  return out;
}

struct SignalMode {
  Real frequency = 0.0;  // cycles per unit time
  Real damping = 0.0;    // positive means decaying
  Complex amplitude;
  Complex z_pole;
};

struct DenoiseResult {
  std::vector<SignalMode> modes;  // descending |amplitude|
  Real reconstruction_rms = 0.0;
  RationalApproximant approximant;
};

// Treats the samples as z-transform coefficients, keeps the poles that
// classify as genuine and sit outside the unit circle (decaying modes),
// and converts them back to frequency, damping, and amplitude.  Sampling:
// x_n = x(n T / N) for n = 0..N-1, so a mode A e^{i w t} puts a pole at
// z = e^{-i w T / N} with residue -A z.
inline DenoiseResult denoise_signal(const VectorXc& samples, Real duration, int L, int M,
                                    const SolveOptions& solve_opts = {},
                                    const Thresholds& th = {}) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || duration <= 0.0)
    throw ConfigError("denoising needs at least two samples over a positive duration");

  DenoiseResult out;
  out.approximant = solve_pade(samples, L, M, solve_opts);
  const PoleZeroSet pz = locate_poles_zeros(out.approximant);
  const ResidueSpectrum spec = residue_spectrum(out.approximant, pz);
  const auto reports = classify_doublets(pz, spec, th);

  for (const DoubletReport& rep : reports) {
    if (rep.cls != PoleClass::Stable || std::abs(rep.pole) <= 1.0) continue;
    SignalMode mode;
    mode.z_pole = rep.pole;
    const Complex omega = Complex(0.0, 1.0) * Real(n) / duration * std::log(rep.pole);
    mode.frequency = omega.real() / (2.0 * M_PI);
    mode.damping = omega.imag();
    mode.amplitude = -rep.residue / rep.pole;
    out.modes.push_back(mode);
  }
  if (out.modes.empty())
    throw EmptyModelError("no genuine decaying mode survived pole filtering");

  // Second Prony stage: residues give the amplitudes only through the local
  // geometry at each pole, so refit them against every sample at the fixed
  // frequencies and dampings.  Least squares averages the noise down instead
  // of inheriting it.
  {
    const int K = static_cast<int>(out.modes.size());
    MatrixXc basis(n, K);
    for (int k = 0; k < n; ++k) {
      const Real t = duration * Real(k) / Real(n);
      for (int l = 0; l < K; ++l)
        basis(k, l) = std::exp(Complex(-out.modes[l].damping * t,
                                       2.0 * M_PI * out.modes[l].frequency * t));
    }
    const VectorXc amps = basis.colPivHouseholderQr().solve(samples);
    if (amps.allFinite())
      for (int l = 0; l < K; ++l) out.modes[l].amplitude = amps[l];
  }

  // The pole stage only reads the 2M+1 leading coefficients, so its
  // frequency estimates carry O(noise) bias, and a frequency off by df
  // tilts the fitted amplitude by roughly pi df / damping.  A few Gauss-
  // Newton passes of the whole mode set against every sample finish what
  // the linear stages start; spurious modes just chase noise without
  // disturbing the genuine ones.
  {
    const int K = static_cast<int>(out.modes.size());
    auto model_residual = [&](const std::vector<SignalMode>& ms, VectorXc& res) {
      Real norm2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const Real t = duration * Real(k) / Real(n);
        Complex xhat = 0.0;
        for (const SignalMode& m : ms)
          xhat += m.amplitude *
                  std::exp(Complex(-m.damping * t, 2.0 * M_PI * m.frequency * t));
        res[k] = samples[k] - xhat;
        norm2 += std::norm(res[k]);
      }
      return norm2;
    };

    VectorXc res(n);
    Real norm2 = model_residual(out.modes, res);
    for (int pass = 0; pass < 6; ++pass) {
      // Real-valued normal form: per mode the unknowns are Re A, Im A,
      // damping, and frequency, stacked over the re/im rows of the record.
      MatrixXr J(2 * n, 4 * K);
      VectorXr rhs(2 * n);
      for (int k = 0; k < n; ++k) {
        const Real t = duration * Real(k) / Real(n);
        rhs[k] = res[k].real();
        rhs[n + k] = res[k].imag();
        for (int l = 0; l < K; ++l) {
          const SignalMode& m = out.modes[l];
          const Complex e =
              std::exp(Complex(-m.damping * t, 2.0 * M_PI * m.frequency * t));
          const Complex dA = e;
          const Complex dAi = Complex(0.0, 1.0) * e;
          const Complex dd = -t * m.amplitude * e;
          const Complex df = Complex(0.0, 2.0 * M_PI * t) * m.amplitude * e;
          J(k, 4 * l) = dA.real();
          J(n + k, 4 * l) = dA.imag();
          J(k, 4 * l + 1) = dAi.real();
          J(n + k, 4 * l + 1) = dAi.imag();
          J(k, 4 * l + 2) = dd.real();
          J(n + k, 4 * l + 2) = dd.imag();
          J(k, 4 * l + 3) = df.real();
          J(n + k, 4 * l + 3) = df.imag();
        }
      }
      const VectorXr delta = J.colPivHouseholderQr().solve(rhs);
      if (!delta.allFinite()) break;

      // Backtracking keeps a bad step from undoing the linear fit.
      Real step = 1.0;
      bool improved = false;
      std::vector<SignalMode> trial;
      for (int halvings = 0; halvings < 5 && !improved; ++halvings, step *= 0.5) {
        trial = out.modes;
        for (int l = 0; l < K; ++l) {
          trial[l].amplitude +=
              step * Complex(delta[4 * l], delta[4 * l + 1]);
          trial[l].damping = std::max(0.0, trial[l].damping + step * delta[4 * l + 2]);
          trial[l].frequency += step * delta[4 * l + 3];
        }
        VectorXc trial_res(n);
        const Real trial_norm2 = model_residual(trial, trial_res);
        if (trial_norm2 < norm2) {
          improved = true;
          const bool converged = trial_norm2 > (1.0 - 1e-12) * norm2;
          out.modes = std::move(trial);
          res = std::move(trial_res);
          norm2 = trial_norm2;
          if (converged) pass = 6;
        }
      }
      if (!improved) break;
    }
    // Poles move with their polished parameters.
    for (SignalMode& m : out.modes)
      m.z_pole = std::exp(Complex(m.damping, -2.0 * M_PI * m.frequency) * duration /
                          Real(n));
  }

  std::sort(out.modes.begin(), out.modes.end(),
            [](const SignalMode& a, const SignalMode& b) {
              return std::abs(a.amplitude) > std::abs(b.amplitude);
            });

  Real err2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const Real t = duration * Real(k) / Real(n);
    Complex xhat = 0.0;
    for (const SignalMode& m : out.modes)
      xhat += m.amplitude *
              std::exp(Complex(0.0, 1.0) * (2.0 * M_PI * m.frequency * t) -
                       Complex(m.damping * t, 0.0));
    err2 += std::norm(samples[k] - xhat);
  }
  out.reconstruction_rms = std::sqrt(err2 / Real(n));
  return out;
}

enum class BetaVerdict { Stable, Drifting, Unreliable };

inline const char* to_string(BetaVerdict v) {
  switch (v) {
    case BetaVerdict::Stable: return "STABLE";
    case BetaVerdict::Drifting: return "DRIFTING";
    case BetaVerdict::Unreliable: return "UNRELIABLE";
  }
  return "?";
}

struct BetaTrace {
  int order = 0;
  Real beta = 0.0;
  Real r_squared = 0.0;
  int fit_points = 0;
};

struct BetaStability {
  std::vector<BetaTrace> traces;
  Real spread = 0.0;  // (max - min) / |mean| over the fitted betas
  BetaVerdict verdict = BetaVerdict::Unreliable;
};

// Fits the residue decay rate at several diagonal orders.  A rate that
// stays put marks a quasianalytic pole sum; a drifting or unfittable rate
// marks noise-like series whose boundary poles are artifacts.
inline BetaStability beta_stability_test(const VectorXc& coeffs,
                                         const std::vector<int>& orders,
                                         const SolveOptions& solve_opts = {}) {
  if (orders.size() < 2) throw StatsError("beta stability needs at least two orders");
  BetaStability out;
  bool fits_ok = true;
  Real bmin = std::numeric_limits<Real>::infinity(), bmax = -bmin, bsum = 0.0;
  for (int m : orders) {
    const RationalApproximant r = solve_pade(coeffs, m, m, solve_opts);
    const ResidueSpectrum s = residue_spectrum(r, locate_poles_zeros(r));
    out.traces.push_back({m, s.beta, s.r_squared, s.fit_points});
    if (s.fit_points < 3 || s.r_squared < 0.5) fits_ok = false;
    bmin = std::min(bmin, s.beta);
    bmax = std::max(bmax, s.beta);
    bsum += s.beta;
  }
  const Real mean = bsum / Real(orders.size());
  out.spread = mean != 0.0 ? (bmax - bmin) / std::abs(mean)
                           : std::numeric_limits<Real>::infinity();
  out.verdict = !fits_ok             ? BetaVerdict::Unreliable
                : out.spread <= 0.25 ? BetaVerdict::Stable
                                     : BetaVerdict::Drifting;
  return out;
}

}  // namespace padelab
