#include "hyperinv/io.hpp"

#include "hyperinv/errors.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hyperinv {

namespace {

constexpr char kGridMagic[8] = {'H', 'Y', 'P', 'G', 'R', 'D', '0', '1'};
constexpr char kFieldMagic[8] = {'H', 'Y', 'P', 'F', 'L', 'D', '0', '1'};
constexpr char kDataMagic[8] = {'H', 'Y', 'P', 'D', 'A', 'T', '0', '1'};

std::ofstream open_out(const fs::path& path, bool binary) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("unexpected end of binary file");
  return v;
}

void put_doubles(std::ostream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void get_doubles(std::istream& in, double* p, std::size_t n) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw Error("unexpected end of binary file");
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  const FieldMatrix rm = m;
  put_doubles(out, rm.data(), static_cast<std::size_t>(rm.size()));
}

Eigen::MatrixXd get_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  FieldMatrix rm(rows, cols);
  get_doubles(in, rm.data(), static_cast<std::size_t>(rm.size()));
  return rm;
}

void expect_magic(std::istream& in, const char (&magic)[8], const fs::path& path) {
  char buf[8];
  in.read(buf, 8);
  if (!in || std::memcmp(buf, magic, 8) != 0)
    throw Error("'" + path.string() + "' is not a file of the expected kind");
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_grid_csv(std::ostream& out, const GridValues& values, const SpatialGrid& grid,
                    const std::string& name) {
  if (values.size() != grid.size()) throw InvalidArgument("values do not match the grid");
  out << "x1 [1],x2 [1]," << name << " [1]\n" << std::setprecision(17);
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i)
      out << grid.coord(i) << ',' << grid.coord(j) << ',' << values[grid.index(i, j)] << '\n';
}

void write_grid_csv(const fs::path& path, const GridValues& values, const SpatialGrid& grid,
                    const std::string& name) {
  auto out = open_out(path, false);
  write_grid_csv(out, values, grid, name);
  finish(out, path);
}

GridFile read_grid_csv(const fs::path& path) {
  auto in = open_in(path, false);
  std::string line;
  std::getline(in, line);
  if (split(line).size() != 3) throw Error("grid CSV '" + path.string() + "' must have 3 columns");
  std::vector<double> x1, vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3) throw Error("malformed row in grid CSV '" + path.string() + "'");
    x1.push_back(std::stod(cells[0]));
    vals.push_back(std::stod(cells[2]));
  }
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(vals.size()))));
  if (n < 3 || n * n != static_cast<int>(vals.size()))
    throw Error("grid CSV '" + path.string() + "' is not a square grid");
  GridFile g{SpatialGrid(-x1.front(), n), Eigen::Map<GridValues>(vals.data(), n * n)};
  return g;
}

void write_grid_binary(const fs::path& path, const GridValues& values, const SpatialGrid& grid) {
  if (values.size() != grid.size()) throw InvalidArgument("values do not match the grid");
  auto out = open_out(path, true);
  out.write(kGridMagic, 8);
  put<std::int32_t>(out, grid.n());
  put<double>(out, grid.half_width());
  put_doubles(out, values.data(), static_cast<std::size_t>(values.size()));
  finish(out, path);
}

GridFile read_grid_binary(const fs::path& path) {
  auto in = open_in(path, true);
  expect_magic(in, kGridMagic, path);
  const int n = get<std::int32_t>(in);
  const double R = get<double>(in);
  GridFile g{SpatialGrid(R, n), GridValues(n * n)};
  get_doubles(in, g.values.data(), static_cast<std::size_t>(n) * n);
  return g;
}

void write_history_csv(const fs::path& path, const RunHistory& history) {
  auto out = open_out(path, false);
  out << "k [iteration],J [1],iterate_diff [1],seconds [s]\n" << std::setprecision(17);
  for (const auto& r : history.records)
    out << r.k << ',' << r.cost << ',' << r.iterate_diff << ',' << r.seconds << '\n';
  finish(out, path);
}

std::vector<IterationRecord> read_history_csv(const fs::path& path) {
  auto in = open_in(path, false);
  std::string line;
  std::getline(in, line);
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 4) throw Error("malformed row in history CSV '" + path.string() + "'");
    out.push_back({std::stoi(c[0]), std::stod(c[1]), std::stod(c[2]), std::stod(c[3])});
  }
  return out;
}

void write_field_binary(const fs::path& path, const FourierField& U, int iteration) {
  auto out = open_out(path, true);
  out.write(kFieldMagic, 8);
  put<std::int32_t>(out, iteration);
  put<std::int32_t>(out, U.grid().n());
  put<double>(out, U.grid().half_width());
  put<std::int32_t>(out, U.count());
  put_doubles(out, U.values().data(), static_cast<std::size_t>(U.values().size()));
  finish(out, path);
}

FourierField read_field_binary(const fs::path& path, int* iteration) {
  auto in = open_in(path, true);
  expect_magic(in, kFieldMagic, path);
  const int k = get<std::int32_t>(in);
  const int n = get<std::int32_t>(in);
  const double R = get<double>(in);
  const int N = get<std::int32_t>(in);
  const SpatialGrid grid(R, n);
  FieldMatrix values(grid.size(), N);
  get_doubles(in, values.data(), static_cast<std::size_t>(values.size()));
  if (iteration) *iteration = k;
  return FourierField(grid, std::move(values));
}

void write_dataset(const fs::path& path, const Dataset& ds) {
  const CauchyData& d = ds.data;
  const int rows = d.layout.rows();
  const int N = static_cast<int>(ds.projected.f.cols());
  if (d.f.rows() != rows || d.g.rows() != rows || ds.projected.f.rows() != rows ||
      ds.projected.g.rows() != rows || ds.projected.g.cols() != N)
    throw InvalidArgument("dataset arrays are inconsistent");
  auto out = open_out(path, true);
  out.write(kDataMagic, 8);
  put<double>(out, d.time.final_time());
  put<std::int32_t>(out, d.time.intervals());
  put<std::int32_t>(out, d.layout.grid.n());
  put<std::int32_t>(out, N);
  put<std::uint64_t>(out, d.seed);
  put<double>(out, d.noise_level);
  put<double>(out, d.layout.grid.half_width());
  for (int node : d.layout.nodes) put<std::int32_t>(out, node);
  put_matrix(out, d.f);
  put_matrix(out, d.g);
  put_matrix(out, ds.projected.f);
  put_matrix(out, ds.projected.g);
  finish(out, path);
}

Dataset read_dataset(const fs::path& path) {
  auto in = open_in(path, true);
  expect_magic(in, kDataMagic, path);
  const double T = get<double>(in);
  const int Mt = get<std::int32_t>(in);
  const int n = get<std::int32_t>(in);
  const int N = get<std::int32_t>(in);
  const std::uint64_t seed = get<std::uint64_t>(in);
  const double level = get<double>(in);
  const double R = get<double>(in);
  const SpatialGrid grid(R, n);
  Dataset ds{CauchyData{BoundaryLayout(grid), TimeGrid(T, Mt), {}, {}, level, seed}, {}};
  for (int r = 0; r < ds.data.layout.rows(); ++r)
    if (get<std::int32_t>(in) != ds.data.layout.nodes[r])
      throw Error("dataset boundary layout does not match this build");
  const int rows = ds.data.layout.rows();
  ds.data.f = get_matrix(in, rows, Mt + 1);
  ds.data.g = get_matrix(in, rows, Mt + 1);
  ds.projected.f = get_matrix(in, rows, N);
  ds.projected.g = get_matrix(in, rows, N);
  return ds;
}

std::string read_file(const fs::path& path) {
  auto in = open_in(path, true);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string git_blob_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  std::ostringstream os;
  for (unsigned char b : digest) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(b);
  return os.str();
}

std::string git_blob_hash_file(const fs::path& path) { return git_blob_hash(read_file(path)); }

}  // namespace hyperinv
