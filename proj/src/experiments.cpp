#include <padelab/experiments.hpp>

#include <padelab/io.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <thread>

namespace padelab {

const char* experiment_id(Experiment e) {
  switch (e) {
    case Experiment::Fig1F1Compare: return "FIG1_F1_COMPARE";
    case Experiment::Fig2TestFuncs: return "FIG2_TESTFUNCS";
    case Experiment::Fig3Tan: return "FIG3_TAN";
    case Experiment::Fig4Jacobi: return "FIG4_JACOBI";
    case Experiment::Fig5FibLac: return "FIG5_FIBLAC";
    case Experiment::Fig6Random: return "FIG6_RANDOM";
    case Experiment::Fig7Coeffs: return "FIG7_COEFFS";
    case Experiment::Fig8PoleNoise: return "FIG8_POLE_NOISE";
    case Experiment::Fig910BranchNoise: return "FIG9_10_BRANCH_NOISE";
    case Experiment::Fig11JacNoise: return "FIG11_JAC_NOISE";
    case Experiment::Fig1213Residues: return "FIG12_13_RESIDUES";
    case Experiment::Fig1415Beta: return "FIG14_15_BETA";
    case Experiment::AppECarleman: return "APPE_CARLEMAN";
    case Experiment::DenoiseDemo: return "DENOISE_DEMO";
  }
  return "?";
}

std::vector<Experiment> all_experiments() {
  return {Experiment::Fig1F1Compare,    Experiment::Fig2TestFuncs,
          Experiment::Fig3Tan,          Experiment::Fig4Jacobi,
          Experiment::Fig5FibLac,       Experiment::Fig6Random,
          Experiment::Fig7Coeffs,       Experiment::Fig8PoleNoise,
          Experiment::Fig910BranchNoise, Experiment::Fig11JacNoise,
          Experiment::Fig1213Residues,  Experiment::Fig1415Beta,
          Experiment::AppECarleman,     Experiment::DenoiseDemo};
}

std::optional<Experiment> parse_experiment_id(const std::string& id) {
  for (Experiment e : all_experiments())
    if (id == experiment_id(e)) return e;
  return std::nullopt;
}

int thread_budget() {
  const char* env = std::getenv("PADE_LAB_THREADS");
  if (!env) {
    const unsigned hc = std::thread::hardware_concurrency();
    return std::clamp<int>(static_cast<int>(hc ? hc : 1), 1, 8);
  }
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 64));
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

VectorXc synthetic_signal(const std::vector<SignalMode>& modes, int n, Real duration) {
  VectorXc x = VectorXc::Zero(n);
  for (int k = 0; k < n; ++k) {
    const Real t = duration * Real(k) / Real(n);
    for (const SignalMode& m : modes)
      x[k] += m.amplitude * std::exp(Complex(-m.damping * t, 2.0 * M_PI * m.frequency * t));
  }
  return x;
}

VectorXc add_complex_noise(const VectorXc& signal, Real epsilon, std::uint64_t seed) {
  if (epsilon == 0.0) return signal;
  SplitMix64 rng(seed);
  VectorXc out = signal;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const Real re = rng.uniform_sym(), im = rng.uniform_sym();
    out[k] += epsilon * Complex(re, im);
  }
  return out;
}

namespace {

// Collects output files, writes them immediately, and finishes with a
// manifest whose checksums cover exactly the bytes on disk.
class Emitter {
 public:
  Emitter(const ExperimentConfig& config, ReportBundle& bundle)
      : config_(config), bundle_(bundle) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + config.out_dir);
  }

  void add(const std::string& name, const std::string& content) {
    write_text_file(config_.out_dir + "/" + name, content);
    bundle_.files.push_back({name, content.size(), hex64(fnv1a64(content))});
  }

  void finish() {
    std::string m = "{\n";
    m += "  \"experiment\": \"" + std::string(experiment_id(config_.id)) + "\",\n";
    m += "  \"seed\": " + std::to_string(config_.seed) + ",\n";
    m += "  \"attempted\": " + std::to_string(bundle_.attempted) + ",\n";
    m += "  \"succeeded\": " + std::to_string(bundle_.succeeded) + ",\n";
    m += "  \"files\": [\n";
    for (std::size_t i = 0; i < bundle_.files.size(); ++i) {
      const OutputFile& f = bundle_.files[i];
      m += "    {\"name\": \"" + f.name + "\", \"bytes\": " + std::to_string(f.bytes) +
           ", \"fnv1a64\": \"" + f.checksum + "\"}";
      m += i + 1 < bundle_.files.size() ? ",\n" : "\n";
    }
    m += "  ],\n  \"errors\": [";
    for (std::size_t i = 0; i < bundle_.errors.size(); ++i) {
      m += '"';
      for (char ch : bundle_.errors[i]) {
        if (ch == '"' || ch == '\\') m += '\\';
        m += ch < 0x20 ? ' ' : ch;
      }
      m += '"';
      if (i + 1 < bundle_.errors.size()) m += ", ";
    }
    m += "]\n}\n";
    write_text_file(config_.out_dir + "/manifest.json", m);
  }

 private:
  const ExperimentConfig& config_;
  ReportBundle& bundle_;
};

SeriesSpec family_spec(Family f, std::uint64_t seed = 0) {
  SeriesSpec s;
  s.family = f;
  s.seed = seed;
  return s;
}

std::string pole_zero_map_csv(const PoleZeroSet& pz) {
  std::string s = "kind,re,im,abs\n";
  for (Complex p : pz.poles)
    s += "pole," + format_real(p.real()) + ',' + format_real(p.imag()) + ',' +
         format_real(std::abs(p)) + '\n';
  for (Complex z : pz.zeros)
    s += "zero," + format_real(z.real()) + ',' + format_real(z.imag()) + ',' +
         format_real(std::abs(z)) + '\n';
  return s;
}

std::string residue_rank_csv(const ResidueSpectrum& spec,
                             const std::vector<DoubletReport>& reports) {
  std::string s = "rank,abs_residue,pole_re,pole_im,abs_pole,class\n";
  for (std::size_t k = 0; k < spec.entries.size(); ++k) {
    const ResidueEntry& e = spec.entries[k];
    s += std::to_string(k + 1) + ',' + format_real(std::abs(e.residue)) + ',' +
         format_real(e.pole.real()) + ',' + format_real(e.pole.imag()) + ',' +
         format_real(std::abs(e.pole)) + ',' + to_string(reports[k].cls) + '\n';
  }
  return s;
}

Real median_of(std::vector<Real> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<Complex> stable_poles(const std::vector<DoubletReport>& reports) {
  std::vector<Complex> out;
  for (const DoubletReport& r : reports)
    if (r.cls == PoleClass::Stable) out.push_back(r.pole);
  return out;
}

Real hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return std::nan("");
  Real h = 0.0;
  auto directed = [&](const std::vector<Complex>& u, const std::vector<Complex>& v) {
    for (Complex p : u) {
      Real best = std::numeric_limits<Real>::infinity();
      for (Complex q : v) best = std::min(best, std::abs(p - q));
      h = std::max(h, best);
    }
  };
  directed(a, b);
  directed(b, a);
  return h;
}

struct ClassifiedSolve {
  RationalApproximant approx;
  PoleZeroSet pz;
  ResidueSpectrum spectrum;
  std::vector<DoubletReport> reports;
};

ClassifiedSolve solve_and_classify(const VectorXc& coeffs, int l, int m,
                                   const SolveOptions& sopts, const Thresholds& th) {
  ClassifiedSolve out;
  out.approx = solve_pade(coeffs, l, m, sopts);
  out.pz = locate_poles_zeros(out.approx);
  out.spectrum = residue_spectrum(out.approx, out.pz);
  out.reports = classify_doublets(out.pz, out.spectrum, th);
  return out;
}

// ---- individual experiments ------------------------------------------------

void fig1_f1_compare(const ExperimentConfig&, Emitter& em, ReportBundle& b) {
  b.attempted = 1;
  const VectorXc c = f1_log_series(10);
  const RationalApproximant r = solve_pade(c, 5, 5);
  std::string s = "x,exact,taylor10,pade55,taylor_err,pade_err\n";
  for (int i = 0; i <= 80; ++i) {
    const Real x = 0.05 * i;
    const Real exact = x == 0.0 ? 1.0 : std::log1p(x) / x;
    Real taylor = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= 0; --k) taylor = taylor * x + c[k].real();
    const Real pade = r.evaluate(Complex(x, 0.0)).real();
    s += format_real(x) + ',' + format_real(exact) + ',' + format_real(taylor) + ',' +
         format_real(pade) + ',' + format_real(std::abs(exact - taylor)) + ',' +
         format_real(std::abs(exact - pade)) + '\n';
  }
  em.add("fig1_f1_compare.csv", s);
  b.succeeded = 1;
}

void fig2_testfuncs(const ExperimentConfig& config, Emitter& em, ReportBundle& b) {
  const Family fams[] = {Family::F1Log, Family::F2Exp, Family::F3SqrtBranch,
                         Family::F4Essential, Family::F5Tan4};
  for (Family f : fams) {
    ++b.attempted;
    try {
      SolveOptions sopts;
      if (f == Family::F5Tan4) sopts.policy = DegeneracyPolicy::Regularize;
      const VectorXc c = taylor_coefficients(family_spec(f), 40);
      const RationalApproximant r = solve_pade(c, 20, 20, sopts);
      const PoleZeroSet pz = locate_poles_zeros(r);
      const std::string base = std::string("fig2_") + family_name(f);
      em.add(base + "_poles.csv", pole_zero_map_csv(pz));
      if (config.svg) em.add(base + ".svg", pole_zero_svg(pz.poles, pz.zeros));
      ++b.succeeded;
    } catch (const std::exception& e) {
      b.errors.push_back(std::string(family_name(f)) + ": " + e.what());
    }
  }
}

void fig3_tan(const ExperimentConfig& config, Emitter& em, ReportBundle& b) {
  b.attempted = 1;
  SolveOptions sopts;
  sopts.policy = DegeneracyPolicy::Regularize;
  // The spurious ring sits at the convergence radius (pi/2)^(1/4), not on
  // |z| = 1, so the shell band is widened accordingly.
  const Thresholds th{1e-3, 1e-6, 0.15};
  const ClassifiedSolve cs =
      solve_and_classify(f5_tan4_series(150), 75, 75, sopts, th);
  em.add("fig3_tan_poles.csv", pole_zero_map_csv(cs.pz));
  em.add("fig3_tan_doublets.csv", doublets_csv(cs.reports));
  em.add("fig3_tan_residues.csv", residue_rank_csv(cs.spectrum, cs.reports));
  if (config.svg) em.add("fig3_tan.svg", pole_zero_svg(cs.pz.poles, cs.pz.zeros));
  const BoundaryStats st = boundary_statistics(cs.pz, cs.approx, th.shell_width);
  std::string s = "shell_fraction,arc_sup_discrepancy,log_norm_ratio,pole_count\n";
  s += format_real(st.shell_fraction) + ',' + format_real(st.arc_sup_discrepancy) +
       ',' + format_real(st.log_norm_ratio) + ',' + std::to_string(st.pole_count) +
       '\n';
  em.add("fig3_tan_stats.csv", s);
  b.succeeded = 1;
}

void lacunary_sweep(const ExperimentConfig& config, Emitter& em, ReportBundle& b,
                    Family family, const std::vector<int>& truncations,
                    const std::string& prefix, bool against_oracle) {
  std::string stats = "truncation,order,shell_fraction,arc_sup_discrepancy,"
                      "log_norm_ratio,pole_count,oracle_dev\n";
  for (int t : truncations) {
    ++b.attempted;
    try {
      const VectorXc c = taylor_coefficients(family_spec(family), t);
      const int m = t / 2;
      const RationalApproximant r = solve_pade(c, m, m);
      const PoleZeroSet pz = locate_poles_zeros(r);
      const BoundaryStats st = boundary_statistics(pz, r);
      Real dev = std::nan("");
      if (against_oracle) {
        const RationalApproximant oracle = exact_pade_oracle(family, t);
        dev = (r.denominator - oracle.denominator).cwiseAbs().maxCoeff();
      }
      const std::string base = prefix + "_" + std::to_string(t);
      em.add(base + "_poles.csv", pole_zero_map_csv(pz));
      if (config.svg) em.add(base + ".svg", pole_zero_svg(pz.poles, pz.zeros));
      stats += std::to_string(t) + ',' + std::to_string(m) + ',' +
               format_real(st.shell_fraction) + ',' +
               format_real(st.arc_sup_discrepancy) + ',' +
               format_real(st.log_norm_ratio) + ',' +
               std::to_string(st.pole_count) + ',' + format_real(dev) + '\n';
      ++b.succeeded;
    } catch (const std::exception& e) {
      b.errors.push_back(prefix + " trunc " + std::to_string(t) + ": " + e.what());
    }
  }
  em.add(prefix + "_stats.csv", stats);
}

void fig6_random(const ExperimentConfig& config, Emitter& em, ReportBundle& b) {
  b.attempted = 1;
  SeriesSpec spec;
  spec.family = Family::RandomUniform;
  spec.epsilon = 1.0;
  spec.seed = config.seed;
  const VectorXc c = taylor_coefficients(spec, 100);
  const RationalApproximant r = solve_pade(c, 50, 50);
  const PoleZeroSet pz = locate_poles_zeros(r);
  const BoundaryStats st = boundary_statistics(pz, r);
  em.add("fig6_random_poles.csv", pole_zero_map_csv(pz));
  if (config.svg) em.add("fig6_random.svg", pole_zero_svg(pz.poles, pz.zeros));
  std::string s = "shell_fraction,arc_sup_discrepancy,log_norm_ratio,pole_count\n";
  s += format_real(st.shell_fraction) + ',' + format_real(st.arc_sup_discrepancy) +
       ',' + format_real(st.log_norm_ratio) + ',' + std::to_string(st.pole_count) +
       '\n';
  em.add("fig6_random_stats.csv", s);
  b.succeeded = 1;
}

void fig7_coeffs(const ExperimentConfig& config, Emitter& em, ReportBundle& b) {
  b.attempted = 1;
  const int n = 100;
  struct Column {
    const char* name;
    VectorXc c;
  };
  SeriesSpec rnd = family_spec(Family::RandomUniform, config.seed);
  rnd.epsilon = 1.0;
  const SeriesSpec car = family_spec(Family::Carleman, config.seed);
  const Column cols[] = {
      {"jacobi", jacobi_lacunary_series(n)},
      {"weierstrass", weierstrass_lacunary_series(n)},
      {"kronecker", kronecker_lacunary_series(n)},
      {"fib_lacunary", fib_lacunary_series(n)},
      {"random", taylor_coefficients(rnd, n)},
      {"carleman", taylor_coefficients(car, n)},
  };
  std::string s = "n";
  for (const Column& col : cols) s += std::string(",abs_") + col.name;
  s += '\n';
  for (int k = 0; k <= n; ++k) {
    s += std::to_string(k);
    for (const Column& col : cols) s += ',' + format_real(std::abs(col.c[k]));
    s += '\n';
  }
  em.add("fig7_coefficients.csv", s);
  b.succeeded = 1;
}

void fig8_pole_noise(const ExperimentConfig&, Emitter& em, ReportBundle& b) {
  const std::vector<Real> epsilons = {0.0, 1e-6, 1e-4, 1e-2, 1e-1};
  const int seeds = 20;
  struct Run {
    Real epsilon;
    std::uint64_t seed;
    Real nearest = std::nan("");
    int n_stable = -1, n_ghost = -1, n_froissart = -1;
    std::string error;
  };
  std::vector<Run> runs;
  for (Real eps : epsilons)
    for (int s = 1; s <= seeds; ++s) {
      Run run;
      run.epsilon = eps;
      run.seed = std::uint64_t(s);
      runs.push_back(run);
    }

  b.attempted = static_cast<int>(runs.size());
  parallel_for(static_cast<int>(runs.size()), [&](int i) {
    Run& run = runs[i];
    try {
      SeriesSpec spec;
      spec.family = Family::Pole2;
      if (run.epsilon > 0.0)
        spec.noise = NoiseSpec{run.epsilon, run.seed, NoiseDistribution::UniformSym};
      SolveOptions sopts;
      sopts.policy = DegeneracyPolicy::Regularize;
      const ClassifiedSolve cs =
          solve_and_classify(taylor_coefficients(spec, 20), 10, 10, sopts, {});
      run.n_stable = run.n_ghost = run.n_froissart = 0;
      Real best = std::numeric_limits<Real>::infinity();
      for (const DoubletReport& rep : cs.reports) {
        if (rep.cls == PoleClass::Stable) {
          ++run.n_stable;
          best = std::min(best, std::abs(rep.pole - Complex(2.0)));
        } else if (rep.cls == PoleClass::GhostPair) {
          ++run.n_ghost;
        } else {
          ++run.n_froissart;
        }
      }
      if (run.n_stable > 0) run.nearest = best;
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  });

  std::string s = "epsilon,seed,nearest_pole_err,n_stable,n_ghost,n_froissart\n";
  for (const Run& run : runs) {
    if (!run.error.empty()) {
      b.errors.push_back("eps " + format_real(run.epsilon) + " seed " +
                         std::to_string(run.seed) + ": " + run.error);
      continue;
    }
    ++b.succeeded;
    s += format_real(run.epsilon) + ',' + std::to_string(run.seed) + ',' +
         format_real(run.nearest) + ',' + std::to_string(run.n_stable) + ',' +
         std::to_string(run.n_ghost) + ',' + std::to_string(run.n_froissart) + '\n';
  }
  em.add("fig8_runs.csv", s);

  std::string agg = "epsilon,median_nearest_err,frac_within_005\n";
  for (Real eps : epsilons) {
    std::vector<Real> errs;
    int within = 0, total = 0;
    for (const Run& run : runs) {
      if (run.epsilon != eps || !run.error.empty() || std::isnan(run.nearest)) continue;
      errs.push_back(run.nearest);
      ++total;
      if (run.nearest < 0.05) ++within;
    }
    agg += format_real(eps) + ',' + format_real(median_of(errs)) + ',' +
           format_real(total ? Real(within) / total : std::nan("")) + '\n';
  }
  em.add("fig8_summary.csv", agg);
}

void fig9_10_branch_noise(const ExperimentConfig&, Emitter& em, ReportBundle& b) {
  const Family fams[] = {Family::Pole2, Family::Branch1, Family::Branch2};
  const std::vector<Real> epsilons = {1e-8, 1e-4, 1e-2};
  const int seeds = 10;

  // Noise-free baselines first; the noisy sweep measures drift against them.
  std::vector<std::vector<Complex>> baselines;
  for (Family f : fams) {
    ++b.attempted;
    try {
      const ClassifiedSolve cs =
          solve_and_classify(taylor_coefficients(family_spec(f), 40), 20, 20, {}, {});
      baselines.push_back(stable_poles(cs.reports));
      ++b.succeeded;
    } catch (const std::exception& e) {
      baselines.push_back({});
      b.errors.push_back(std::string(family_name(f)) + " baseline: " + e.what());
    }
  }

  struct Run {
    int family;
    Real epsilon;
    std::uint64_t seed;
    Real hausdorff = std::nan("");
    int n_stable = -1;
    std::string error;
  };
  std::vector<Run> runs;
  for (int fi = 0; fi < 3; ++fi)
    for (Real eps : epsilons)
      for (int s = 1; s <= seeds; ++s) {
        Run run;
        run.family = fi;
        run.epsilon = eps;
        run.seed = std::uint64_t(s);
        runs.push_back(run);
      }

  b.attempted += static_cast<int>(runs.size());
  parallel_for(static_cast<int>(runs.size()), [&](int i) {
    Run& run = runs[i];
    try {
      SeriesSpec spec;
      spec.family = fams[run.family];
      spec.noise = NoiseSpec{run.epsilon, run.seed, NoiseDistribution::UniformSym};
      const ClassifiedSolve cs =
          solve_and_classify(taylor_coefficients(spec, 40), 20, 20, {}, {});
      const std::vector<Complex> stable = stable_poles(cs.reports);
      run.n_stable = static_cast<int>(stable.size());
      run.hausdorff = hausdorff_distance(stable, baselines[run.family]);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  });

  std::string s = "family,epsilon,seed,hausdorff,n_stable\n";
  for (const Run& run : runs) {
    if (!run.error.empty()) {
      b.errors.push_back(std::string(family_name(fams[run.family])) + " eps " +
                         format_real(run.epsilon) + " seed " +
                         std::to_string(run.seed) + ": " + run.error);
      continue;
    }
    ++b.succeeded;
    s += std::string(family_name(fams[run.family])) + ',' + format_real(run.epsilon) +
         ',' + std::to_string(run.seed) + ',' + format_real(run.hausdorff) + ',' +
         std::to_string(run.n_stable) + '\n';
  }
  em.add("fig9_10_runs.csv", s);

  std::string agg = "family,epsilon,median_hausdorff\n";
  for (int fi = 0; fi < 3; ++fi)
    for (Real eps : epsilons) {
      std::vector<Real> hs;
      for (const Run& run : runs)
        if (run.family == fi && run.epsilon == eps && run.error.empty() &&
            !std::isnan(run.hausdorff))
          hs.push_back(run.hausdorff);
      agg += std::string(family_name(fams[fi])) + ',' + format_real(eps) + ',' +
             format_real(median_of(hs)) + '\n';
    }
  em.add("fig9_10_summary.csv", agg);
}

void fig11_jac_noise(const ExperimentConfig&, Emitter& em, ReportBundle& b) {
  const std::vector<Real> epsilons = {0.0, 1e-6, 1e-3, 1e-2};
  const int seeds = 10;
  struct Run {
    Real epsilon;
    std::uint64_t seed;
    Real shell_fraction = std::nan("");
    std::string error;
  };
  std::vector<Run> runs;
  for (Real eps : epsilons)
    for (int s = 1; s <= (eps == 0.0 ? 1 : seeds); ++s) {
      Run run;
      run.epsilon = eps;
      run.seed = eps == 0.0 ? 0 : std::uint64_t(s);
      runs.push_back(run);
    }

  b.attempted = static_cast<int>(runs.size());
  parallel_for(static_cast<int>(runs.size()), [&](int i) {
    Run& run = runs[i];
    try {
      SeriesSpec spec;
      spec.family = Family::JacobiLacunary;
      if (run.epsilon > 0.0)
        spec.noise = NoiseSpec{run.epsilon, run.seed, NoiseDistribution::UniformSym};
      const VectorXc c = taylor_coefficients(spec, 64);
      const RationalApproximant r = solve_pade(c, 32, 32);
      run.shell_fraction = boundary_statistics(locate_poles_zeros(r), r).shell_fraction;
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  });

  std::string s = "epsilon,seed,shell_fraction\n";
  for (const Run& run : runs) {
    if (!run.error.empty()) {
      b.errors.push_back("eps " + format_real(run.epsilon) + " seed " +
                         std::to_string(run.seed) + ": " + run.error);
      continue;
    }
    ++b.succeeded;
    s += format_real(run.epsilon) + ',' + std::to_string(run.seed) + ',' +
         format_real(run.shell_fraction) + '\n';
  }
  em.add("fig11_runs.csv", s);

  std::string agg = "epsilon,median_shell_fraction\n";
  for (Real eps : epsilons) {
    std::vector<Real> fr;
    for (const Run& run : runs)
      if (run.epsilon == eps && run.error.empty() && !std::isnan(run.shell_fraction))
        fr.push_back(run.shell_fraction);
    agg += format_real(eps) + ',' + format_real(median_of(fr)) + '\n';
  }
  em.add("fig11_summary.csv", agg);
}

void fig12_13_residues(const ExperimentConfig&, Emitter& em, ReportBundle& b) {
  const Thresholds th{1e-3, 1e-6, 0.15};
  SolveOptions sopts;
  sopts.policy = DegeneracyPolicy::Regularize;
  std::string summary =
      "order,n_stable,n_spurious,min_stable_residue,max_spurious_residue\n";
  for (int m : {50, 75}) {
    ++b.attempted;
    try {
      const ClassifiedSolve cs =
          solve_and_classify(f5_tan4_series(2 * m), m, m, sopts, th);
      em.add("fig12_13_residues_m" + std::to_string(m) + ".csv",
             residue_rank_csv(cs.spectrum, cs.reports));
      int n_stable = 0, n_spurious = 0;
      Real min_stable = std::numeric_limits<Real>::infinity(), max_spurious = 0.0;
      for (const DoubletReport& rep : cs.reports) {
        const Real a = std::abs(rep.residue);
        if (rep.cls == PoleClass::Stable) {
          ++n_stable;
          min_stable = std::min(min_stable, a);
        } else {
          ++n_spurious;
          max_spurious = std::max(max_spurious, a);
        }
      }
      summary += std::to_string(m) + ',' + std::to_string(n_stable) + ',' +
                 std::to_string(n_spurious) + ',' + format_real(min_stable) + ',' +
                 format_real(max_spurious) + '\n';
      ++b.succeeded;
    } catch (const std::exception& e) {
      b.errors.push_back("m=" + std::to_string(m) + ": " + e.what());
    }
  }
  em.add("fig12_13_summary.csv", summary);
}

void fig14_15_beta(const ExperimentConfig& config, Emitter& em, ReportBundle& b) {
  const std::vector<int> orders = {15, 25, 45};
  struct Case {
    const char* name;
    SeriesSpec spec;
  };
  SeriesSpec random_spec = family_spec(Family::RandomUniform, config.seed + 1);
  random_spec.epsilon = 1.0;
  const Case cases[] = {
      {"carleman", family_spec(Family::Carleman, config.seed)},
      {"random", random_spec},
  };
  std::string traces = "family,order,beta,r_squared,fit_points\n";
  std::string verdicts = "family,spread,verdict\n";
  for (const Case& cse : cases) {
    ++b.attempted;
    try {
      const VectorXc c = taylor_coefficients(cse.spec, 100);
      const BetaStability bs = beta_stability_test(c, orders);
      for (const BetaTrace& tr : bs.traces)
        traces += std::string(cse.name) + ',' + std::to_string(tr.order) + ',' +
                  format_real(tr.beta) + ',' + format_real(tr.r_squared) + ',' +
                  std::to_string(tr.fit_points) + '\n';
      verdicts += std::string(cse.name) + ',' + format_real(bs.spread) + ',' +
                  to_string(bs.verdict) + '\n';
      ++b.succeeded;
    } catch (const std::exception& e) {
      b.errors.push_back(std::string(cse.name) + ": " + e.what());
    }
  }
  em.add("fig14_15_traces.csv", traces);
  em.add("fig14_15_verdicts.csv", verdicts);
}

void appe_carleman(const ExperimentConfig& config, Emitter& em, ReportBundle& b) {
  b.attempted = 1;
  const ClassifiedSolve cs = solve_and_classify(
      taylor_coefficients(family_spec(Family::Carleman, config.seed), 60), 30, 30, {},
      {});
  em.add("appe_carleman_poles.csv", pole_zero_map_csv(cs.pz));
  em.add("appe_carleman_residues.csv", residue_rank_csv(cs.spectrum, cs.reports));
  if (config.svg)
    em.add("appe_carleman.svg", pole_zero_svg(cs.pz.poles, cs.pz.zeros));
  const BoundaryStats st = boundary_statistics(cs.pz, cs.approx);
  std::string s =
      "beta,r_squared,fit_points,shell_fraction,arc_sup_discrepancy,pole_count\n";
  s += format_real(cs.spectrum.beta) + ',' + format_real(cs.spectrum.r_squared) + ',' +
       std::to_string(cs.spectrum.fit_points) + ',' + format_real(st.shell_fraction) +
       ',' + format_real(st.arc_sup_discrepancy) + ',' +
       std::to_string(st.pole_count) + '\n';
  em.add("appe_carleman_stats.csv", s);
  b.succeeded = 1;
}

void denoise_demo(const ExperimentConfig& config, Emitter& em, ReportBundle& b) {
  const int n = 128;
  const Real duration = 128.0;
  std::vector<SignalMode> truth(3);
  truth[0] = {0.10, 0.02, Complex(1.0), Complex(0.0)};
  truth[1] = {0.22, 0.04, Complex(0.7), Complex(0.0)};
  truth[2] = {0.37, 0.08, Complex(0.4), Complex(0.0)};
  const VectorXc clean = synthetic_signal(truth, n, duration);

  std::string summary = "leg,epsilon,n_modes,reconstruction_rms\n";
  struct Leg {
    const char* name;
    Real epsilon;
  };
  for (const Leg leg : {Leg{"clean", 0.0}, Leg{"noisy", 0.01}}) {
    ++b.attempted;
    try {
      const VectorXc samples = add_complex_noise(clean, leg.epsilon, config.seed);
      const DenoiseResult res = denoise_signal(samples, duration, 14, 14);
      em.add(std::string("denoise_modes_") + leg.name + ".csv", modes_csv(res.modes));
      summary += std::string(leg.name) + ',' + format_real(leg.epsilon) + ',' +
                 std::to_string(res.modes.size()) + ',' +
                 format_real(res.reconstruction_rms) + '\n';
      ++b.succeeded;
    } catch (const std::exception& e) {
      b.errors.push_back(std::string(leg.name) + ": " + e.what());
    }
  }
  em.add("denoise_signal.csv", series_csv(clean));
  em.add("denoise_summary.csv", summary);
}

}  // namespace

ReportBundle run_experiment(const ExperimentConfig& config) {
  ReportBundle bundle;
  Emitter em(config, bundle);
  switch (config.id) {
    case Experiment::Fig1F1Compare: fig1_f1_compare(config, em, bundle); break;
    case Experiment::Fig2TestFuncs: fig2_testfuncs(config, em, bundle); break;
    case Experiment::Fig3Tan: fig3_tan(config, em, bundle); break;
    case Experiment::Fig4Jacobi:
      lacunary_sweep(config, em, bundle, Family::JacobiLacunary, {32, 64, 128},
                     "fig4_jacobi", false);
      break;
    case Experiment::Fig5FibLac:
      lacunary_sweep(config, em, bundle, Family::FibLacunary, {55, 89, 144},
                     "fig5_fiblac", true);
      break;
    case Experiment::Fig6Random: fig6_random(config, em, bundle); break;
    case Experiment::Fig7Coeffs: fig7_coeffs(config, em, bundle); break;
    case Experiment::Fig8PoleNoise: fig8_pole_noise(config, em, bundle); break;
    case Experiment::Fig910BranchNoise: fig9_10_branch_noise(config, em, bundle); break;
    case Experiment::Fig11JacNoise: fig11_jac_noise(config, em, bundle); break;
    case Experiment::Fig1213Residues: fig12_13_residues(config, em, bundle); break;
    case Experiment::Fig1415Beta: fig14_15_beta(config, em, bundle); break;
    case Experiment::AppECarleman: appe_carleman(config, em, bundle); break;
    case Experiment::DenoiseDemo: denoise_demo(config, em, bundle); break;
  }
  em.finish();
  if (bundle.attempted > 0 && bundle.succeeded == 0)
    throw SolveError("experiment failed at every sweep point: " +
                         (bundle.errors.empty() ? std::string("no detail")
                                                : bundle.errors.front()),
                     0, 0);
  return bundle;
}

}  // namespace padelab
