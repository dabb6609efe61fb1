#pragma once

#include "hyperinv/config.hpp"
#include "hyperinv/contraction.hpp"
#include "hyperinv/io.hpp"
#include "hyperinv/reconstruct.hpp"

#include <filesystem>
#include <iosfwd>
#include <memory>

namespace hyperinv {

/// Objects shared by every stage of a run. The normal-matrix factorisation is built on
/// first use and reused for every inversion with the same configuration.
class Experiment {
 public:
  explicit Experiment(const RunConfig& config);
  ~Experiment();

  const RunConfig& config() const { return config_; }
  const TimeBasis& basis() const { return basis_; }
  const SpatialGrid& omega() const { return omega_; }
  const Nonlinearity& nonlinearity() const { return F_; }
  const InitialField& initial() const { return p_; }
  const GridValues& weight() const { return weight_; }

  const EllipticSolver& solver();
  const ForcingEvaluator& forcing();
  bool solver_ready() const { return solver_ != nullptr; }

 private:
  RunConfig config_;
  TimeBasis basis_;
  SpatialGrid omega_;
  Nonlinearity F_;
  InitialField p_;
  GridValues weight_;
  std::unique_ptr<EllipticSolver> solver_;
  std::unique_ptr<ForcingEvaluator> forcing_;
};

struct Simulation {
  PhantomKind kind = PhantomKind::TwoDisks;
  GridValues c_true;
  Dataset dataset;
  double edge_deviation = 0.0;
};

/// Forward run + trace extraction + noise + projection for one phantom.
Simulation simulate(const Experiment& ex, PhantomKind kind, double noise_level);
Simulation simulate(const Experiment& ex, PhantomKind kind);

IterationOptions iteration_options(const RunConfig& config);

struct Inversion {
  RunHistory history;
  GridValues c_comp;
  GridValues c_comp_clipped;
};

Inversion invert(Experiment& ex, const BoundaryVectors& data, const IterationOptions& options);
Inversion invert(Experiment& ex, const BoundaryVectors& data);

/// Tracks the artifacts of one stage and writes manifest.json (status, every resolved
/// parameter, git-style hashes of inputs and outputs). The manifest is written as
/// "incomplete" on construction and rewritten by complete().
class Manifest {
 public:
  Manifest(std::filesystem::path dir, std::string stage, const RunConfig& config);
  void add_input(const std::filesystem::path& file);
  void add_output(const std::filesystem::path& file);
  void note(const std::string& key, const std::string& value);
  void complete();
  /// Rewrites the manifest, still flagged incomplete, with the artifacts recorded so far.
  void write_incomplete();

 private:
  void write(const std::string& status) const;

  std::filesystem::path dir_;
  std::string stage_;
  RunConfig config_;
  std::vector<std::filesystem::path> inputs_, outputs_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

/// invert(); if the divergence guard trips, writes the partial history.csv, records the
/// reason in the (incomplete) manifest and rethrows.
Inversion invert_or_record(Experiment& ex, const BoundaryVectors& data, IterationOptions options,
                           const std::filesystem::path& dir, Manifest& manifest);

/// Artifact writers shared by the CLI stages.
void write_simulation(const Simulation& sim, const std::filesystem::path& dir, Manifest& manifest);
void write_inversion(const Inversion& inv, const Experiment& ex, const std::filesystem::path& dir,
                     Manifest& manifest);
void write_metrics(const Metrics& metrics, const std::filesystem::path& dir, Manifest& manifest);

/// simulate -> invert -> reconstruct -> score for every configured phantom. With more
/// than one phantom each writes into dir/<phantom>. Returns 0 on success.
int run_pipeline(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log);

}  // namespace hyperinv
