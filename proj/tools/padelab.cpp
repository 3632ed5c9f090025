// Command-line front end: series generation, Pade solves, root finding,
// residue spectra, doublet classification, signal denoising, and the
// canned experiment pipelines.  Exit codes: 0 success, 2 configuration
// error, 3 numerical failure, 4 I/O failure.

#include <CLI11.hpp>

#include <padelab/experiments.hpp>
#include <padelab/io.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace padelab;

Family parse_family(const std::string& name) {
  for (int f = 0; f <= static_cast<int>(Family::Recursion); ++f)
    if (name == family_name(static_cast<Family>(f))) return static_cast<Family>(f);
  throw ConfigError("unknown family: " + name);
}

VectorXc read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input: " + path);
  std::vector<Complex> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    long n = 0;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%ld,%lf,%lf", &n, &re, &im) < 2 || n < 0)
      throw ConfigError("malformed series row in " + path + ": " + line);
    if (static_cast<std::size_t>(n) >= rows.size()) rows.resize(n + 1, Complex(0.0));
    rows[n] = Complex(re, im);
  }
  if (rows.empty()) throw ConfigError("no coefficient rows in " + path);
  VectorXc c(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) c[k] = rows[k];
  return c;
}

void apply_scale_flag(const std::string& flag, SolveOptions& opts) {
  if (flag == "none") {
    opts.scaling = ScalingMode::None;
  } else if (flag == "auto") {
    opts.scaling = ScalingMode::Auto;
  } else {
    char* end = nullptr;
    const double v = std::strtod(flag.c_str(), &end);
    if (end == flag.c_str() || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
      throw ConfigError("--scale expects none, auto, or a positive number");
    opts.scaling = ScalingMode::Explicit;
    opts.scale = v;
  }
}

DegeneracyPolicy parse_policy(const std::string& name) {
  if (name == "strict") return DegeneracyPolicy::Strict;
  if (name == "reduce") return DegeneracyPolicy::Reduce;
  if (name == "regularize") return DegeneracyPolicy::Regularize;
  throw ConfigError("--policy expects strict, reduce, or regularize");
}

// Options shared by every subcommand that consumes a coefficient series,
// either generated from a named family or read from a CSV file.
struct SeriesSource {
  std::string family = "";
  std::string input = "";
  int truncation = -1;  // family path; -1 means "just enough for [L|M]"
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  int carleman_poles = 100;
  double carleman_decay = 1.0;
  std::vector<double> recursion;
  double noise_epsilon = 0.0;
  std::uint64_t noise_seed = 0;
  std::string noise_dist = "uniform_sym";

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "series family name (see README)");
    cmd->add_option("--input", input, "read coefficients from a CSV file (n,re,im)");
    cmd->add_option("--truncation", truncation, "series truncation order");
    cmd->add_option("--epsilon", epsilon, "strength of the random_uniform family");
    cmd->add_option("--seed", seed, "seed for random_uniform and carleman");
    cmd->add_option("--carleman-poles", carleman_poles, "pole count for carleman");
    cmd->add_option("--carleman-decay", carleman_decay, "residue decay for carleman");
    cmd->add_option("--recursion", recursion,
                    "recursion family parameters a b c d e f")
        ->expected(6);
    cmd->add_option("--noise-epsilon", noise_epsilon, "additive noise amplitude");
    cmd->add_option("--noise-seed", noise_seed, "additive noise seed");
    cmd->add_option("--noise-dist", noise_dist,
                    "noise distribution: uniform01 or uniform_sym");
  }

  SeriesSpec spec() const {
    SeriesSpec s;
    s.family = parse_family(family);
    s.epsilon = epsilon;
    s.seed = seed;
    s.carleman_poles = carleman_poles;
    s.carleman_decay = carleman_decay;
    if (!recursion.empty())
      s.recursion = {recursion[0], recursion[1], recursion[2],
                     recursion[3], recursion[4], recursion[5]};
    if (noise_epsilon != 0.0) {
      NoiseSpec noise;
      noise.epsilon = noise_epsilon;
      noise.seed = noise_seed;
      if (noise_dist == "uniform01")
        noise.distribution = NoiseDistribution::Uniform01;
      else if (noise_dist == "uniform_sym")
        noise.distribution = NoiseDistribution::UniformSym;
      else
        throw ConfigError("--noise-dist expects uniform01 or uniform_sym");
      s.noise = noise;
    }
    return s;
  }

  VectorXc build(int minimum_length) const {
    if (!input.empty()) {
      const VectorXc c = read_series_csv(input);
      if (c.size() < minimum_length)
        throw ConfigError("input series too short for the requested orders");
      return c;
    }
    if (family.empty())
      throw ConfigError("provide either --family or --input");
    const int n = truncation >= 0 ? truncation : minimum_length - 1;
    return taylor_coefficients(spec(), n);
  }
};

bool wants(const std::vector<std::string>& formats, const char* f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pade approximation and singularity analysis toolkit"};
  app.require_subcommand(1);
  // lets --out/--format appear after the subcommand name as well
  app.fallthrough();

  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json", "svg"};
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--format", formats, "output formats: csv json svg")
      ->capture_default_str();

  // series
  auto* series_cmd = app.add_subcommand("series", "generate taylor coefficients");
  SeriesSource series_src;
  series_src.attach(series_cmd);
  int series_order = 32;
  series_cmd->add_option("--order", series_order, "truncation order")
      ->capture_default_str();

  // shared solver flags
  SeriesSource solve_src;
  std::vector<int> order_lm = {8, 8};
  std::string policy = "reduce", scale = "none";
  auto attach_solver = [&](CLI::App* cmd) {
    solve_src.attach(cmd);
    cmd->add_option("--order", order_lm, "numerator and denominator orders L M")
        ->expected(2);
    cmd->add_option("--policy", policy, "strict, reduce, or regularize");
    cmd->add_option("--scale", scale, "series scaling: none, auto, or a value");
  };

  auto* pade_cmd = app.add_subcommand("pade", "solve a pade approximant");
  attach_solver(pade_cmd);

  auto* roots_cmd = app.add_subcommand("roots", "roots of a polynomial or denominator");
  attach_solver(roots_cmd);
  std::string poly_input;
  roots_cmd->add_option("--poly", poly_input, "CSV of polynomial coefficients");

  auto* residues_cmd = app.add_subcommand("residues", "pole residue spectrum");
  attach_solver(residues_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "froissart doublet report");
  attach_solver(classify_cmd);
  Thresholds th;
  classify_cmd->add_option("--pair-dist", th.pair_distance,
                           "pole-zero pairing distance")->capture_default_str();
  classify_cmd->add_option("--residue-ratio", th.residue_ratio,
                           "relative residue cutoff")->capture_default_str();
  classify_cmd->add_option("--shell-width", th.shell_width,
                           "unit-shell band for froissart labels")
      ->capture_default_str();

  auto* denoise_cmd = app.add_subcommand("denoise", "pole-filter a sampled signal");
  std::string denoise_input;
  double duration = 1.0;
  std::vector<int> denoise_lm = {14, 14};
  denoise_cmd->add_option("--input", denoise_input, "samples CSV (n,re,im)")
      ->required();
  denoise_cmd->add_option("--duration", duration, "sampling window length")
      ->required();
  denoise_cmd->add_option("--order", denoise_lm, "solver orders L M")->expected(2);

  auto* exp_cmd = app.add_subcommand("experiment", "run a canned experiment");
  std::string exp_id;
  std::uint64_t exp_seed = 12345;
  exp_cmd->add_option("--id", exp_id, "experiment identifier")->required();
  exp_cmd->add_option("--seed", exp_seed, "base seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (series_cmd->parsed()) {
      const SeriesSpec spec = series_src.spec();
      const VectorXc c = taylor_coefficients(spec, series_order);
      ensure_dir(out_dir);
      if (wants(formats, "csv")) write_text_file(out_dir + "/series.csv", series_csv(c));
      if (wants(formats, "json"))
        write_text_file(out_dir + "/series.json", series_sidecar_json(spec, series_order));
      std::cout << "wrote " << c.size() << " coefficients to " << out_dir << "\n";
      return 0;
    }

    SolveOptions sopts;
    sopts.policy = parse_policy(policy);
    apply_scale_flag(scale, sopts);
    const int L = order_lm[0], M = order_lm[1];

    if (pade_cmd->parsed()) {
      const VectorXc c = solve_src.build(L + M + 1);
      const RationalApproximant r = solve_pade(c, L, M, sopts);
      ensure_dir(out_dir);
      if (wants(formats, "json"))
        write_text_file(out_dir + "/approximant.json", approximant_json(r));
      std::cout << "[" << L << "|" << M << "] solved, scale " << format_real(r.scale)
                << ", agreement order " << agreement_order_check(c, r)
                << ", effective denominator degree "
                << r.condition.effective_denominator_degree << "\n";
      return 0;
    }

    if (roots_cmd->parsed()) {
      RootSet rs;
      if (!poly_input.empty()) {
        rs = find_roots(read_series_csv(poly_input));
      } else {
        const VectorXc c = solve_src.build(L + M + 1);
        const RationalApproximant r = solve_pade(c, L, M, sopts);
        rs = find_roots(unscaled_denominator(r));
      }
      ensure_dir(out_dir);
      if (wants(formats, "csv")) write_text_file(out_dir + "/roots.csv", roots_csv(rs));
      std::cout << rs.roots.size() << " finite roots (" << rs.roots_at_infinity
                << " at infinity)\n";
      return 0;
    }

    if (residues_cmd->parsed() || classify_cmd->parsed()) {
      const VectorXc c = solve_src.build(L + M + 1);
      const RationalApproximant r = solve_pade(c, L, M, sopts);
      const PoleZeroSet pz = locate_poles_zeros(r);
      const ResidueSpectrum spec = residue_spectrum(r, pz);
      ensure_dir(out_dir);

      if (residues_cmd->parsed()) {
        std::string s = "rank,pole_re,pole_im,residue_re,residue_im,abs_residue\n";
        for (std::size_t k = 0; k < spec.entries.size(); ++k) {
          const ResidueEntry& e = spec.entries[k];
          s += std::to_string(k + 1) + ',' + format_real(e.pole.real()) + ',' +
               format_real(e.pole.imag()) + ',' + format_real(e.residue.real()) +
               ',' + format_real(e.residue.imag()) + ',' +
               format_real(std::abs(e.residue)) + '\n';
        }
        if (wants(formats, "csv")) write_text_file(out_dir + "/residues.csv", s);
        std::cout << spec.entries.size() << " residues, beta "
                  << format_real(spec.beta) << " (r2 " << format_real(spec.r_squared)
                  << ", " << spec.fit_points << " points)\n";
      } else {
        const auto reports = classify_doublets(pz, spec, th);
        int stable = 0, ghost = 0, froissart = 0;
        for (const DoubletReport& d : reports) {
          if (d.cls == PoleClass::Stable) ++stable;
          else if (d.cls == PoleClass::GhostPair) ++ghost;
          else ++froissart;
        }
        if (wants(formats, "csv"))
          write_text_file(out_dir + "/doublets.csv", doublets_csv(reports));
        if (wants(formats, "svg"))
          write_text_file(out_dir + "/pole_zero.svg", pole_zero_svg(pz.poles, pz.zeros));
        std::cout << stable << " stable, " << ghost << " ghost pairs, " << froissart
                  << " froissart\n";
      }
      return 0;
    }

    if (denoise_cmd->parsed()) {
      const VectorXc samples = read_series_csv(denoise_input);
      const DenoiseResult res =
          denoise_signal(samples, duration, denoise_lm[0], denoise_lm[1]);
      ensure_dir(out_dir);
      if (wants(formats, "csv"))
        write_text_file(out_dir + "/modes.csv", modes_csv(res.modes));
      std::cout << res.modes.size() << " modes, reconstruction rms "
                << format_real(res.reconstruction_rms) << "\n";
      return 0;
    }

    if (exp_cmd->parsed()) {
      const auto id = parse_experiment_id(exp_id);
      if (!id) throw ConfigError("unknown experiment id: " + exp_id);
      ExperimentConfig config;
      config.id = *id;
      config.out_dir = out_dir;
      config.seed = exp_seed;
      config.svg = wants(formats, "svg");
      const ReportBundle bundle = run_experiment(config);
      std::cout << experiment_id(*id) << ": " << bundle.files.size() << " files, "
                << bundle.succeeded << "/" << bundle.attempted << " runs ok ("
                << out_dir << "/manifest.json)\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
