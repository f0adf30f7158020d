#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "experiments.hpp"

using rnls::exp::ExperimentConfig;

namespace {

// Every subcommand reads an optional config file first, then applies explicit
// flags on top, so a manifest-echoed config reproduces a run exactly.
struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> box_length;
  std::optional<int> points;
  std::optional<int> n_components;
  std::optional<int> label_offset;
  std::optional<std::string> init;
  std::optional<double> mass_scale;
  std::optional<double> t_end;
  std::optional<double> dt_max;
  std::optional<double> sample_interval;
  std::optional<bool> dealias;
  std::optional<int> snapshot_every;
  std::optional<double> tol;
  std::optional<std::string> method;
  std::optional<std::vector<int>> n_list;
  std::optional<std::vector<double>> sigma_list;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "key = value configuration file");
  sub->add_option("--out", f.out_dir, "output directory");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--threads", f.threads, "thread budget (runs are sequential)");
  sub->add_option("--L", f.box_length, "box side length");
  sub->add_option("--M", f.points, "grid points per side (even)");
}

ExperimentConfig assemble(const std::string& experiment, const Flags& f) {
  ExperimentConfig cfg;
  if (f.config_path) cfg = rnls::exp::parse_config(*f.config_path);
  cfg.experiment = experiment;
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.box_length) cfg.box_length = *f.box_length;
  if (f.points) cfg.points = *f.points;
  if (f.n_components) cfg.n_components = *f.n_components;
  if (f.label_offset) cfg.label_offset = *f.label_offset;
  if (f.init) cfg.init = *f.init;
  if (f.mass_scale) cfg.mass_scale = *f.mass_scale;
  if (f.t_end) cfg.t_end = *f.t_end;
  if (f.dt_max) cfg.dt_max = *f.dt_max;
  if (f.sample_interval) cfg.sample_interval = *f.sample_interval;
  if (f.dealias) cfg.dealias = *f.dealias;
  if (f.snapshot_every) cfg.snapshot_every = *f.snapshot_every;
  if (f.tol) cfg.tol = *f.tol;
  if (f.method) cfg.method = *f.method;
  if (f.n_list) cfg.n_list = *f.n_list;
  if (f.sigma_list) cfg.sigma_list = *f.sigma_list;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral simulation and verification toolkit for the N-coupled "
      "focusing cubic Schrodinger system on R^2"};
  app.require_subcommand(1);

  Flags f;

  auto* gs = app.add_subcommand(
      "ground-state", "Compute the Townes profile and its certificates");
  add_common(gs, f);
  gs->add_option("--tol", f.tol, "fixed-point tolerance");
  gs->add_option("--method", f.method, "petviashvili | shooting | both");

  auto* gn = app.add_subcommand(
      "gn-constant", "Sharp Gagliardo-Nirenberg constant table");
  add_common(gn, f);
  gn->add_option("--N-list", f.n_list, "component counts, e.g. 1 2 3 5");

  auto* sim = app.add_subcommand("simulate", "Evolve initial data");
  add_common(sim, f);
  sim->add_option("--init", f.init, "gaussian | ground-state | snapshot:PATH");
  sim->add_option("--mass-scale", f.mass_scale,
                  "sigma: mass^2 = sigma * threshold^2 (<= 0 keeps data)");
  sim->add_option("--N", f.n_components, "number of components");
  sim->add_option("--label-offset", f.label_offset, "first component label");
  sim->add_option("--t-end", f.t_end, "final time");
  sim->add_option("--dt-max", f.dt_max, "time step ceiling");
  sim->add_option("--sample-interval", f.sample_interval,
                  "diagnostics cadence");
  sim->add_flag("--dealias,!--no-dealias", f.dealias, "2/3-rule filter");
  sim->add_option("--snapshot-every", f.snapshot_every,
                  "write every k-th sample (0 = none)");

  auto* dich = app.add_subcommand(
      "dichotomy", "Scattering/blowup verdicts over a mass-scale grid");
  add_common(dich, f);
  dich->add_option("--N", f.n_components, "number of components");
  dich->add_option("--sigma-list", f.sigma_list, "mass scales");
  dich->add_option("--t-end", f.t_end, "run horizon (wrap cutoff still applies)");
  dich->add_option("--dt-max", f.dt_max, "time step ceiling");

  auto* mor = app.add_subcommand(
      "morawetz-check", "Interaction Morawetz identity checks");
  add_common(mor, f);

  auto* res = app.add_subcommand(
      "resonance-check", "Resonance tables and oracle equivalence");
  add_common(res, f);
  res->add_option("--N-list", f.n_list, "component counts");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    return rnls::exp::run_experiment(assemble(name, f));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
