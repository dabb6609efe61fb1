// hyperinv: simulate -> invert -> reconstruct -> score, plus validation and diagnostics.

#include "hyperinv/carleman.hpp"
#include "hyperinv/config.hpp"
#include "hyperinv/errors.hpp"
#include "hyperinv/io.hpp"
#include "hyperinv/pipeline.hpp"
#include "hyperinv/reconstruct.hpp"
#include "hyperinv/seed.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hyperinv;

namespace {

// Options shared by every subcommand that needs a configuration.
struct ConfigArgs {
  std::string config;
  std::string preset;
  std::vector<std::string> sets;
  std::optional<std::string> phantom, nonlinearity, backend;
  std::optional<double> noise, epsilon, lambda;
  std::optional<std::uint64_t> seed;
  std::optional<int> nodes, basis_size, iterations;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "INI file or manifest.json to start from");
    app->add_option("--preset", preset, "Name of a preset in presets/ (e.g. paper-two-disks-sqrt)");
    app->add_option("--set", sets, "Override any key: section.key=value (repeatable)");
    app->add_option("--phantom", phantom, "phantom.kinds: two_disks, kite, peanut, custom (comma list)");
    app->add_option("--noise", noise, "data.noise (relative level)");
    app->add_option("--seed", seed, "data.seed (root seed)");
    app->add_option("--nonlinearity", nonlinearity, "data.nonlinearity: sqrt-grad | quadratic");
    app->add_option("--nodes", nodes, "grid.omega_nodes");
    app->add_option("--basis-size", basis_size, "time.basis_size");
    app->add_option("--iterations", iterations, "iteration.max_iterations");
    app->add_option("--epsilon", epsilon, "solver.epsilon");
    app->add_option("--lambda", lambda, "carleman.lambda");
    app->add_option("--backend", backend, "solver.backend: cholesky | cg");
  }

  RunConfig resolve() const {
    if (!config.empty() && !preset.empty()) throw ConfigError("--config and --preset are mutually exclusive");
    RunConfig c;
    if (!preset.empty()) {
      const char* env = std::getenv("HYPERINV_PRESET_DIR");
      const fs::path dir = env ? fs::path(env) : fs::path(HYPERINV_PRESET_DIR);
      c = load_config(dir / (preset + ".ini"));
    } else if (!config.empty()) {
      c = load_config(config);
    }
    auto put = [&](const char* key, const std::string& v) { set_config_value(c, key, v); };
    if (phantom) put("phantom.kinds", *phantom);
    if (noise) put("data.noise", std::to_string(*noise));
    if (seed) put("data.seed", std::to_string(*seed));
    if (nonlinearity) put("data.nonlinearity", *nonlinearity);
    if (nodes) put("grid.omega_nodes", std::to_string(*nodes));
    if (basis_size) put("time.basis_size", std::to_string(*basis_size));
    if (iterations) put("iteration.max_iterations", std::to_string(*iterations));
    if (epsilon) c.epsilon = *epsilon;
    if (lambda) c.weight.lambda = *lambda;
    if (backend) put("solver.backend", *backend);
    apply_overrides(c, sets);
    return c;
  }
};

int report_validation(const RunConfig& c, std::ostream& out) {
  const ValidationReport rep = validate_config(c);
  for (const auto& n : rep.notes) out << "note: " << n << '\n';
  for (const auto& e : rep.errors) out << "error: " << e << '\n';
  out << (rep.ok() ? "configuration is valid\n" : "configuration is invalid\n");
  return rep.ok() ? 0 : 2;
}

fs::path dataset_path(const fs::path& p) { return fs::is_directory(p) ? p / "dataset.bin" : p; }

GridFile read_grid_any(const fs::path& p) {
  return p.extension() == ".csv" ? read_grid_csv(p) : read_grid_binary(p);
}

PhantomKind single_phantom(const RunConfig& c) {
  if (c.phantoms.size() != 1)
    std::cerr << "note: several phantoms configured; simulating " << phantom_kind_name(c.phantoms.front()) << '\n';
  return c.phantoms.front();
}

int cmd_validate(const ConfigArgs& a) { return report_validation(a.resolve(), std::cout); }

int cmd_simulate(const ConfigArgs& a, const fs::path& out) {
  const RunConfig c = a.resolve();
  if (report_validation(c, std::cerr) != 0) return 2;
  Experiment ex(c);
  const PhantomKind kind = single_phantom(c);
  Manifest m(out, "simulate", c);
  m.note("phantom", phantom_kind_name(kind));
  const Simulation sim = simulate(ex, kind);
  write_simulation(sim, out, m);
  m.complete();
  std::cout << "wrote " << (out / "dataset.bin").string() << " (edge deviation " << sim.edge_deviation << ")\n";
  return 0;
}

int cmd_invert(const ConfigArgs& a, const fs::path& data, const fs::path& out) {
  const RunConfig c = a.resolve();
  if (report_validation(c, std::cerr) != 0) return 2;
  const fs::path in = dataset_path(data);
  const Dataset ds = read_dataset(in);
  Experiment ex(c);
  if (!(ds.data.layout.grid == ex.omega()) || ds.projected.f.cols() != c.basis_size)
    throw ConfigError("dataset does not match the configured grid or basis size");
  Manifest m(out, "invert", c);
  m.add_input(in);
  std::cerr << "assembling and factoring the normal matrix\n";
  IterationOptions o = iteration_options(c);
  o.checkpoint_dir = out / "checkpoints";
  o.observer = [](const IterationRecord& r) {
    std::cerr << "k = " << r.k << "  J = " << r.cost << "  |U_k - U_k-1| = " << r.iterate_diff << '\n';
  };
  const Inversion inv = invert_or_record(ex, ds.projected, o, out, m);
  write_inversion(inv, ex, out, m);
  m.complete();
  return 0;
}

int cmd_reconstruct(const ConfigArgs& a, const fs::path& field, const fs::path& out) {
  const RunConfig c = a.resolve();
  const fs::path in = fs::is_directory(field) ? field / "U_comp.bin" : field;
  const FourierField U = read_field_binary(in);
  Experiment ex(c);
  if (!(U.grid() == ex.omega()) || U.count() != c.basis_size)
    throw ConfigError("field does not match the configured grid or basis size");
  Manifest m(out, "reconstruct", c);
  m.add_input(in);
  const GridValues cc = compute_c(U, ex.basis(), ex.initial(), ex.nonlinearity());
  write_grid_csv(out / "c_comp.csv", cc, ex.omega(), "c_comp");
  write_grid_csv(out / "c_comp_clipped.csv", GridValues(cc.cwiseMax(0.0)), ex.omega(), "c_comp");
  write_grid_binary(out / "c_comp.bin", cc, ex.omega());
  for (const char* f : {"c_comp.csv", "c_comp_clipped.csv", "c_comp.bin"}) m.add_output(out / f);
  m.complete();
  return 0;
}

int cmd_score(const ConfigArgs& a, const fs::path& comp, const fs::path& truth, const fs::path& out) {
  const RunConfig c = a.resolve();
  const GridFile cf = read_grid_any(fs::is_directory(comp) ? comp / "c_comp.bin" : comp);
  const GridFile tf = read_grid_any(fs::is_directory(truth) ? truth / "c_true.bin" : truth);
  if (!(cf.grid == tf.grid)) throw ConfigError("reconstruction and truth live on different grids");
  Manifest m(out, "score", c);
  const Metrics metrics = score(cf.values, tf.values, cf.grid, c.score_min_layer);
  write_metrics(metrics, out, m);
  m.complete();
  std::cout << "relative L2 error " << metrics.relative_l2_error << ", support score " << metrics.support_score
            << '\n';
  return 0;
}

int cmd_pipeline(const ConfigArgs& a, const fs::path& out) { return run_pipeline(a.resolve(), out, std::cerr); }

int cmd_diagnose(const ConfigArgs& a, const fs::path& out) {
  const RunConfig c = a.resolve();
  const AdmissibilityReport adm = check_admissible(1.0, c.weight);
  for (const auto& f : adm.failures) std::cerr << "warning: " << f << '\n';
  Manifest m(out, "diagnose-carleman", c);
  const auto rows = carleman_diagnostic(c.weight, c.omega_grid(), c.diagnostic_lambdas, c.diagnostic_trials,
                                        derive_seed(c.seed, "diagnostic"));
  std::ofstream f(out / "carleman_diagnostic.csv");
  write_diagnostic_csv(rows, f);
  f.close();
  m.add_output(out / "carleman_diagnostic.csv");
  m.complete();
  write_diagnostic_csv(rows, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carleman contraction reconstruction of the potential in a nonlinear wave equation"};
  app.require_subcommand(1);

  ConfigArgs cfg;
  std::string out, data, field, comp, truth;

  auto* validate = app.add_subcommand("validate", "Check a configuration without computing");
  cfg.attach(validate);

  auto* simulate = app.add_subcommand("simulate", "Forward solve, extract and project lateral Cauchy data");
  cfg.attach(simulate);
  simulate->add_option("--out", out, "Output directory")->required();

  auto* invert = app.add_subcommand("invert", "Run the fixed-point iteration on a dataset");
  cfg.attach(invert);
  invert->add_option("--data", data, "dataset.bin or a simulate output directory")->required();
  invert->add_option("--out", out, "Output directory")->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "Compute c_comp from a Fourier field");
  cfg.attach(reconstruct);
  reconstruct->add_option("--field", field, "U_comp.bin or an invert output directory")->required();
  reconstruct->add_option("--out", out, "Output directory")->required();

  auto* score_cmd = app.add_subcommand("score", "Compare c_comp with the true potential");
  cfg.attach(score_cmd);
  score_cmd->add_option("--comp", comp, "c_comp grid (.bin or .csv) or directory")->required();
  score_cmd->add_option("--truth", truth, "c_true grid (.bin or .csv) or directory")->required();
  score_cmd->add_option("--out", out, "Output directory")->required();

  auto* pipeline = app.add_subcommand("pipeline", "simulate -> invert -> reconstruct -> score");
  cfg.attach(pipeline);
  pipeline->add_option("--out", out, "Output directory")->required();

  auto* diagnose = app.add_subcommand("diagnose-carleman", "Ratio test of the weighted estimate");
  cfg.attach(diagnose);
  diagnose->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(cfg);
    if (*simulate) return cmd_simulate(cfg, out);
    if (*invert) return cmd_invert(cfg, data, out);
    if (*reconstruct) return cmd_reconstruct(cfg, field, out);
    if (*score_cmd) return cmd_score(cfg, comp, truth, out);
    if (*pipeline) return cmd_pipeline(cfg, out);
    if (*diagnose) return cmd_diagnose(cfg, out);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
