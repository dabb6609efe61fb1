#pragma once

#include "hyperinv/contraction.hpp"
#include "hyperinv/forward.hpp"
#include "hyperinv/fourier_field.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace hyperinv {

namespace fs = std::filesystem;

/// Grid CSV: header "x1 [1],x2 [1],<name> [1]", one row per node in flat order.
void write_grid_csv(const fs::path& path, const GridValues& values, const SpatialGrid& grid,
                    const std::string& name = "value");
void write_grid_csv(std::ostream& out, const GridValues& values, const SpatialGrid& grid,
                    const std::string& name = "value");

struct GridFile {
  SpatialGrid grid;
  GridValues values;
};
/// Reads a grid CSV written by write_grid_csv (square, vertex-centred, flat order).
GridFile read_grid_csv(const fs::path& path);

/// Flat binary grid: magic, n, half width, then n*n doubles.
void write_grid_binary(const fs::path& path, const GridValues& values, const SpatialGrid& grid);
GridFile read_grid_binary(const fs::path& path);

/// History CSV columns: k, J, iterate_diff, seconds.
void write_history_csv(const fs::path& path, const RunHistory& history);
std::vector<IterationRecord> read_history_csv(const fs::path& path);

/// Fourier field checkpoint: magic, iteration, n, half width, N, then node-major values.
void write_field_binary(const fs::path& path, const FourierField& U, int iteration);
FourierField read_field_binary(const fs::path& path, int* iteration = nullptr);

/// Dataset: header (T, M_t, n, N, seed, level, half width), boundary node indices,
/// f and g time series, then the projected f and g (N columns).
struct Dataset {
  CauchyData data;
  BoundaryVectors projected;
};
void write_dataset(const fs::path& path, const Dataset& dataset);
Dataset read_dataset(const fs::path& path);

/// Git blob hash (SHA-1 of "blob <size>\0" + content), lowercase hex.
std::string git_blob_hash(const std::string& content);
std::string git_blob_hash_file(const fs::path& path);

std::string read_file(const fs::path& path);

}  // namespace hyperinv
