#include "hyperinv/pipeline.hpp"

#include "hyperinv/errors.hpp"
#include "hyperinv/seed.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <ostream>

namespace hyperinv {

Experiment::Experiment(const RunConfig& config)
    : config_(config),
      basis_(build_basis(config.basis_size, config.final_time, config.time_grid())),
      omega_(config.omega_grid()),
      F_(Nonlinearity::from_name(config.nonlinearity)),
      p_(InitialField::constant(config.initial_value)),
      weight_(weight_grid(omega_, config.weight)) {}

Experiment::~Experiment() = default;

const EllipticSolver& Experiment::solver() {
  if (!solver_) {
    EllipticOptions opts;
    opts.epsilon = config_.epsilon;
    opts.backend = config_.backend;
    opts.tolerance = config_.solver_tolerance;
    solver_ = std::make_unique<EllipticSolver>(omega_, basis_.stiffness(), weight_, opts);
  }
  return *solver_;
}

const ForcingEvaluator& Experiment::forcing() {
  if (!forcing_) forcing_ = std::make_unique<ForcingEvaluator>(basis_, F_, p_, omega_);
  return *forcing_;
}

Simulation simulate(const Experiment& ex, PhantomKind kind) {
  return simulate(ex, kind, ex.config().noise);
}

Simulation simulate(const Experiment& ex, PhantomKind kind, double noise_level) {
  const RunConfig& c = ex.config();
  const int os = c.oversample;
  const PhantomSpec spec = c.phantom_spec(kind);
  const SpatialGrid fine_omega(1.0, (c.omega_nodes - 1) * os + 1);
  const SpatialGrid outer = c.outer_grid();
  const TimeGrid fine_time(c.final_time, c.time_intervals * os);

  const GridValues c_outer = extend_by_zero(make_phantom(spec, fine_omega), fine_omega, outer);
  WaveOptions wo;
  wo.start = c.start_rule;
  wo.record = fine_omega;
  WaveField field = solve_wave(c_outer, ex.nonlinearity(), ex.initial(), outer, fine_time, wo);

  if (os > 1) {
    WaveField coarse;
    coarse.grid = ex.omega();
    coarse.time = c.time_grid();
    coarse.edge_deviation = field.edge_deviation;
    coarse.values.resize(coarse.grid.size(), coarse.time.size());
    for (int j = 0; j < coarse.grid.n(); ++j)
      for (int i = 0; i < coarse.grid.n(); ++i)
        for (int t = 0; t < coarse.time.size(); ++t)
          coarse.values(coarse.grid.index(i, j), t) = field.values(fine_omega.index(i * os, j * os), t * os);
    field = std::move(coarse);
  }

  Simulation sim;
  sim.kind = kind;
  sim.c_true = make_phantom(spec, ex.omega());
  sim.edge_deviation = field.edge_deviation;
  const CauchyData clean = extract_cauchy(field, ex.omega());
  sim.dataset.data = add_noise(clean, noise_level, derive_seed(c.seed, "data-noise"));
  sim.dataset.data.seed = c.seed;
  sim.dataset.projected = project_cauchy(sim.dataset.data, ex.basis());
  return sim;
}

IterationOptions iteration_options(const RunConfig& c) {
  IterationOptions o;
  o.max_iterations = c.max_iterations;
  o.stop_on_stabilization = c.stop_on_stabilization;
  o.stabilization_tol = c.stabilization_tol;
  o.stabilization_window = c.stabilization_window;
  o.divergence_factor = c.divergence_factor;
  o.use_cutoff = c.use_cutoff;
  o.cutoff_M = c.cutoff_M;
  o.checkpoint_every = c.checkpoint_every;
  return o;
}

Inversion invert(Experiment& ex, const BoundaryVectors& data) {
  return invert(ex, data, iteration_options(ex.config()));
}

Inversion invert(Experiment& ex, const BoundaryVectors& data, const IterationOptions& options) {
  Inversion inv;
  inv.history = iterate(ex.solver(), ex.forcing(), data, ex.weight(), options);
  inv.c_comp = compute_c(inv.history.u_comp, ex.basis(), ex.initial(), ex.nonlinearity(), false);
  inv.c_comp_clipped = inv.c_comp.cwiseMax(0.0);
  return inv;
}

Inversion invert_or_record(Experiment& ex, const BoundaryVectors& data, IterationOptions options,
                           const std::filesystem::path& dir, Manifest& manifest) {
  RunHistory partial;
  auto observer = options.observer;
  options.observer = [&](const IterationRecord& r) {
    partial.records.push_back(r);
    if (observer) observer(r);
  };
  try {
    return invert(ex, data, options);
  } catch (const DivergenceError& e) {
    write_history_csv(dir / "history.csv", partial);
    manifest.add_output(dir / "history.csv");
    manifest.note("aborted", e.what());
    manifest.write_incomplete();
    throw;
  }
}

// ---------------------------------------------------------------------------

Manifest::Manifest(std::filesystem::path dir, std::string stage, const RunConfig& config)
    : dir_(std::move(dir)), stage_(std::move(stage)), config_(config) {
  std::filesystem::create_directories(dir_);
  std::ofstream ini(dir_ / "resolved_config.ini");
  write_config_ini(config_, ini);
  if (!ini) throw Error("cannot write resolved_config.ini");
  ini.close();
  outputs_.push_back(dir_ / "resolved_config.ini");
  write("incomplete");
}

void Manifest::add_input(const std::filesystem::path& file) { inputs_.push_back(file); }
void Manifest::add_output(const std::filesystem::path& file) { outputs_.push_back(file); }
void Manifest::note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }
void Manifest::complete() { write("complete"); }
void Manifest::write_incomplete() { write("incomplete"); }

void Manifest::write(const std::string& status) const {
  nlohmann::ordered_json doc;
  doc["stage"] = stage_;
  doc["status"] = status;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_entries(config_)) params[k] = v;
  doc["parameters"] = params;
  auto hashes = [](const std::vector<std::filesystem::path>& files) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& f : files)
      out[f.filename().string()] = std::filesystem::exists(f) ? git_blob_hash_file(f) : "missing";
    return out;
  };
  doc["inputs"] = hashes(inputs_);
  doc["outputs"] = hashes(outputs_);
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  for (const auto& [k, v] : notes_) notes[k] = v;
  doc["notes"] = notes;
  std::ofstream out(dir_ / "manifest.json");
  out << doc.dump(2) << '\n';
  if (!out) throw Error("cannot write manifest.json");
}

void write_simulation(const Simulation& sim, const std::filesystem::path& dir, Manifest& m) {
  const SpatialGrid grid = sim.dataset.data.layout.grid;
  write_dataset(dir / "dataset.bin", sim.dataset);
  write_grid_csv(dir / "c_true.csv", sim.c_true, grid, "c_true");
  write_grid_binary(dir / "c_true.bin", sim.c_true, grid);
  for (const char* f : {"dataset.bin", "c_true.csv", "c_true.bin"}) m.add_output(dir / f);
  m.note("edge_deviation", std::to_string(sim.edge_deviation));
}

void write_inversion(const Inversion& inv, const Experiment& ex, const std::filesystem::path& dir,
                     Manifest& m) {
  write_history_csv(dir / "history.csv", inv.history);
  write_field_binary(dir / "U_comp.bin", inv.history.u_comp,
                     inv.history.records.empty() ? 0 : inv.history.records.back().k);
  write_grid_csv(dir / "c_comp.csv", inv.c_comp, ex.omega(), "c_comp");
  write_grid_csv(dir / "c_comp_clipped.csv", inv.c_comp_clipped, ex.omega(), "c_comp");
  write_grid_binary(dir / "c_comp.bin", inv.c_comp, ex.omega());
  for (const char* f : {"history.csv", "U_comp.bin", "c_comp.csv", "c_comp_clipped.csv", "c_comp.bin"})
    m.add_output(dir / f);
  m.note("cutoff_M", std::to_string(inv.history.cutoff_M));
}

void write_metrics(const Metrics& metrics, const std::filesystem::path& dir, Manifest& m) {
  std::ofstream out(dir / "metrics.csv");
  write_metrics_csv(metrics, out);
  if (!out) throw Error("cannot write metrics.csv");
  out.close();
  m.add_output(dir / "metrics.csv");
}

int run_pipeline(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log) {
  const ValidationReport rep = validate_config(config);
  if (!rep.ok()) {
    for (const auto& e : rep.errors) log << "error: " << e << '\n';
    return 2;
  }
  Experiment ex(config);
  for (PhantomKind kind : config.phantoms) {
    const auto sub = config.phantoms.size() > 1 ? dir / phantom_kind_name(kind) : dir;
    Manifest manifest(sub, "pipeline", config);
    manifest.note("phantom", phantom_kind_name(kind));
    log << "[" << phantom_kind_name(kind) << "] simulating\n";
    const Simulation sim = simulate(ex, kind);
    write_simulation(sim, sub, manifest);
    if (!ex.solver_ready()) log << "[" << phantom_kind_name(kind) << "] assembling and factoring normal matrix\n";
    IterationOptions opts = iteration_options(config);
    opts.checkpoint_dir = sub / "checkpoints";
    opts.observer = [&](const IterationRecord& r) {
      log << "[" << phantom_kind_name(kind) << "] k = " << r.k << "  J = " << r.cost
          << "  |U_k - U_k-1| = " << r.iterate_diff << "  (" << r.seconds << " s)\n";
    };
    const Inversion inv = invert_or_record(ex, sim.dataset.projected, opts, sub, manifest);
    write_inversion(inv, ex, sub, manifest);
    const Metrics metrics = score(inv.c_comp, sim.c_true, ex.omega(), config.score_min_layer);
    write_metrics(metrics, sub, manifest);
    log << "[" << phantom_kind_name(kind) << "] relative L2 error " << metrics.relative_l2_error
        << ", support score " << metrics.support_score << '\n';
    manifest.complete();
  }
  return 0;
}

}  // namespace hyperinv
