#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rnls/diagnostics.hpp"
#include "rnls/groundstate.hpp"
#include "rnls/solver.hpp"

namespace rnls::exp {

inline constexpr const char* kVersion = "rnls-0.1.0";

/// One experiment description: everything a run needs, echoed verbatim into
/// the output manifest so results are reproducible from the manifest alone.
struct ExperimentConfig {
  std::string experiment;  // ground-state | gn-constant | simulate |
                           // dichotomy | morawetz-check | resonance-check
  // grid
  double box_length = 32.0;
  int points = 256;
  // component structure
  int n_components = 1;
  int label_offset = 0;
  // initial data
  std::string init = "gaussian";  // gaussian | ground-state | snapshot:PATH
  double mass_scale = 0.5;        // sigma; <= 0 keeps the data unscaled
  // solver
  double t_end = 5.0;
  double dt_max = 1e-2;
  double dt_min = 1e-9;
  double cfl = 0.1;
  bool dealias = false;
  double sample_interval = 0.1;
  double blowup_sup_factor = 1e3;
  int snapshot_every = 1;  // write every k-th sample; 0 disables snapshots
  // experiment lists
  std::vector<double> sigma_list = {0.5, 0.8, 1.2};
  std::vector<int> n_list = {1, 2, 3, 5};
  // ground-state options
  double tol = 1e-10;
  std::string method = "petviashvili";  // petviashvili | shooting | both
  double r_max = 30.0;
  double dr = 2.5e-4;
  // bookkeeping
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict key=value parser; every key must be known, `experiment` required.
ExperimentConfig parse_config(const std::string& path);
void write_config(const ExperimentConfig& cfg, const std::string& path);
void validate_config(const ExperimentConfig& cfg);

/// Deterministic shortest-round-trip float formatting shared by every
/// NDJSON/CSV writer (byte-identical across runs at a fixed seed).
std::string format_number(double v);

std::string diagnostics_to_ndjson(const DiagnosticsRecord<double>& rec);

/// Exit codes: 0 success, 2 dichotomy found only inconclusive verdicts,
/// 1 error (thrown as exceptions by the runners).
int run_ground_state(const ExperimentConfig& cfg);
int run_gn_constant(const ExperimentConfig& cfg);
int run_simulate(const ExperimentConfig& cfg);
int run_dichotomy(const ExperimentConfig& cfg);
int run_morawetz_check(const ExperimentConfig& cfg);
int run_resonance_check(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment.
int run_experiment(const ExperimentConfig& cfg);

// shared helpers (exposed for tests)

/// Townes profile on the configured grid, cached per (L, M) in-process.
const GroundState<double>& townes_profile(double box_length, int points,
                                          double tol = 1e-11);

/// Initial data per cfg.init, scaled so ||u0||^2_{L^2 l^2} equals
/// mass_scale * threshold^2(N) when mass_scale > 0.
VecField<double> build_initial_data(const ExperimentConfig& cfg,
                                    double* threshold2_out = nullptr,
                                    double* q_mass2_out = nullptr);

struct DichotomyRow {
  double sigma = 0;
  int n = 1;
  double mass2 = 0;
  double threshold2 = 0;
  double energy = 0;
  std::string verdict;  // disperses | blowup | inconclusive
  std::string reason;
  double t_final = 0;
  long steps = 0;
  double l4_total = 0;
  double l4_last_decade_fraction = 0;
  double sup_initial = 0;
  double sup_final = 0;
};

DichotomyRow classify_run(const ExperimentConfig& cfg, double sigma);

}  // namespace rnls::exp
