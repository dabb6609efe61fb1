#pragma once

#include "hyperinv/carleman.hpp"
#include "hyperinv/elliptic_step.hpp"
#include "hyperinv/forward.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hyperinv {

/// Every experimental constant of a run. Defaults reproduce the two-disk experiment.
struct RunConfig {
  // [time]
  double final_time = 2.0;
  int time_intervals = 256;
  int basis_size = 20;
  // [grid]
  int omega_nodes = 65;
  double outer_half_width = 4.0;
  // [carleman]
  CarlemanWeight weight;
  // [solver]
  double epsilon = 7e-5;
  SolverBackend backend = SolverBackend::Cholesky;
  double solver_tolerance = 1e-8;
  // [iteration]
  int max_iterations = 25;
  bool stop_on_stabilization = false;
  double stabilization_tol = 1e-3;
  int stabilization_window = 3;
  double divergence_factor = 1e3;
  bool use_cutoff = true;
  double cutoff_M = 0.0;
  int checkpoint_every = 0;
  // [data]
  double noise = 0.05;
  std::uint64_t seed = 1;
  std::string nonlinearity = "sqrt-grad";
  double initial_value = 0.5;
  StartRule start_rule = StartRule::Paper;
  int oversample = 1;
  // [phantom]
  std::vector<PhantomKind> phantoms = {PhantomKind::TwoDisks};
  PhantomSpec phantom;      // disks for two_disks / custom
  PhantomSpec kite{PhantomKind::Kite, {}, {0.1, 0.0}, 0.35, 2.0};
  PhantomSpec peanut{PhantomKind::Peanut, {}, {0.0, 0.0}, 0.5, 2.0};
  // [reconstruct]
  bool clip_negative = false;
  int score_min_layer = 2;  // metrics ignore the data-pinned layers 0 and 1
  // [diagnostic]
  std::vector<double> diagnostic_lambdas = {2.0, 4.0, 8.0};
  int diagnostic_trials = 50;

  SpatialGrid omega_grid() const;
  /// G's grid: the spacing of Omega's grid divided by `oversample`.
  SpatialGrid outer_grid() const;
  TimeGrid time_grid() const;
  PhantomSpec phantom_spec(PhantomKind kind) const;
};

/// Flat "section.key" -> value view of a config, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

/// Sets one "section.key" entry; throws ConfigError for unknown keys or malformed values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Reads an INI file (sections per module) or a manifest.json's "parameters" object.
RunConfig load_config(const std::filesystem::path& path);
void apply_overrides(RunConfig& config, const std::vector<std::string>& assignments);

void write_config_ini(const RunConfig& config, std::ostream& out);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> notes;
  bool ok() const { return errors.empty(); }
};

/// Parameter ranges, Carleman admissibility, the CFL bound, F(x, p, 0, grad p) != 0,
/// phantom compact support and the basis orthonormality gate, all collected before any
/// compute.
ValidationReport validate_config(const RunConfig& config);

}  // namespace hyperinv
