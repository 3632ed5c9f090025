#pragma once

// Canned experiment pipelines behind the `padelab experiment` subcommand.
// Each one writes CSV/SVG outputs plus a manifest.json with FNV-1a
// checksums; reruns with the same config produce byte-identical files.

#include <padelab/analysis.hpp>
#include <padelab/types.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace padelab {

enum class Experiment {
  Fig1F1Compare,
  Fig2TestFuncs,
  Fig3Tan,
  Fig4Jacobi,
  Fig5FibLac,
  Fig6Random,
  Fig7Coeffs,
  Fig8PoleNoise,
  Fig910BranchNoise,
  Fig11JacNoise,
  Fig1213Residues,
  Fig1415Beta,
  AppECarleman,
  DenoiseDemo,
};

const char* experiment_id(Experiment e);
std::optional<Experiment> parse_experiment_id(const std::string& id);
std::vector<Experiment> all_experiments();

struct ExperimentConfig {
  Experiment id = Experiment::Fig1F1Compare;
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  bool svg = true;
};

struct OutputFile {
  std::string name;
  std::size_t bytes = 0;
  std::string checksum;  // FNV-1a 64 of the content, hex
};

struct ReportBundle {
  std::vector<OutputFile> files;
  std::vector<std::string> errors;  // one entry per failed sweep point
  int attempted = 0;
  int succeeded = 0;
};

// Runs one experiment, writing outputs and manifest.json under out_dir.
// Individual sweep points may fail and are recorded in the manifest; the
// call throws only when every point failed or an output cannot be written.
ReportBundle run_experiment(const ExperimentConfig& config);

// Worker count from PADE_LAB_THREADS (unset: hardware concurrency capped
// at 8, unparsable: 1).
int thread_budget();

// Runs fn(0..n-1) across the thread budget.  Tasks must write disjoint
// slots; completion order is not deterministic, slot contents are.
void parallel_for(int n, const std::function<void(int)>& fn);

// Shared with the denoising experiment and its tests: a sum of damped
// complex exponentials sampled at t = k T / n, plus complex uniform noise.
VectorXc synthetic_signal(const std::vector<SignalMode>& modes, int n, Real duration);
VectorXc add_complex_noise(const VectorXc& signal, Real epsilon, std::uint64_t seed);

}  // namespace padelab
