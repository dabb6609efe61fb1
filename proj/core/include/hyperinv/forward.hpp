#pragma once

#include "hyperinv/grid.hpp"
#include "hyperinv/nonlinearity.hpp"
#include "hyperinv/time_basis.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hyperinv {

// ---------------------------------------------------------------------------
// Phantoms

enum class PhantomKind { TwoDisks, Kite, Peanut, Custom };

PhantomKind phantom_kind_from_name(const std::string& name);
std::string phantom_kind_name(PhantomKind kind);

struct Disk {
  Point2 center;
  double radius = 0.0;
  double value = 0.0;
};

/// Geometry of a piecewise-constant potential. For TwoDisks and Custom the
/// disks are used as given; Kite and Peanut are closed curves scaled about `center`.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::TwoDisks;
  std::vector<Disk> disks = {{{-0.45, 0.0}, 0.3, 2.0}, {{0.45, 0.0}, 0.3, 1.0}};
  Point2 center{0.0, 0.0};
  double scale = 0.4;
  double value = 2.0;
};

/// Indicator-valued potential on the Omega grid. Throws InvalidArgument if the
/// support reaches the two outermost node layers (compact support in Omega).
GridValues make_phantom(const PhantomSpec& spec, const SpatialGrid& grid);

/// Boundary polygon of a Kite/Peanut phantom (for plotting and tests).
std::vector<Point2> phantom_outline(const PhantomSpec& spec, int samples = 512);

// ---------------------------------------------------------------------------
// Wave solver

/// How u at t_1 is set. `Paper`: u_1 = u_0 = p, which encodes u_t(x, 0) = 0 to first
/// order. `Taylor`: u_1 = p + dt^2/2 u_tt(x, 0), second order.
enum class StartRule { Paper, Taylor };

struct WaveOptions {
  StartRule start = StartRule::Paper;
  /// Optional extra forcing s(x, t) added to the right-hand side (manufactured tests).
  std::function<double(Point2, double)> source;
  /// Subgrid of G on which the solution is recorded; defaults to G itself.
  std::optional<SpatialGrid> record;
};

/// u(x, t_j) recorded on `grid`, one column per time node.
struct WaveField {
  SpatialGrid grid;
  TimeGrid time{1.0, 2};
  Eigen::MatrixXd values;
  /// max |u - p| over nodes within distance h of the outer boundary, over all steps.
  double edge_deviation = 0.0;
};

/// Explicit leapfrog scheme on G with the boundary of G held at p:
/// u_{j+2} = dt^2 [Delta_h u_{j+1} + c F(x, u_{j+1}, (u_{j+1} - u_j)/dt, grad_h u_{j+1})]
///           + 2 u_{j+1} - u_j.
/// Throws CflViolation if dt > h/sqrt(2) and NonFiniteValue on overflow.
WaveField solve_wave(const GridValues& c_on_G, const Nonlinearity& F, const InitialField& p,
                     const SpatialGrid& grid_G, const TimeGrid& time, const WaveOptions& options = {});

// ---------------------------------------------------------------------------
// Lateral Cauchy data

/// Boundary nodes of Omega stored side by side: bottom, right, top, left. Each side
/// holds its n nodes (corners included, so corners appear twice with their own normals).
struct BoundaryLayout {
  SpatialGrid grid;
  std::vector<int> nodes;  // flat node index per row
  std::vector<int> sides;  // 0 bottom, 1 right, 2 top, 3 left
  std::vector<Point2> normals;

  BoundaryLayout() = default;
  explicit BoundaryLayout(const SpatialGrid& g);
  int rows() const { return static_cast<int>(nodes.size()); }
  /// Row of side `side`, position k along the side (k = 0..n-1).
  int row(int side, int k) const { return side * grid.n() + k; }
};

/// f and g as time series (rows: boundary layout, columns: time nodes).
struct CauchyData {
  BoundaryLayout layout;
  TimeGrid time{1.0, 2};
  Eigen::MatrixXd f;
  Eigen::MatrixXd g;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
};

/// Fourier-projected Dirichlet and Neumann data, one N-vector per boundary row.
struct BoundaryVectors {
  Eigen::MatrixXd f;  // rows x N
  Eigen::MatrixXd g;
};

/// Restriction of u to the boundary of Omega and the outward normal derivative
/// g = (3u(x) - 4u(x - h nu) + u(x - 2h nu)) / (2h).
CauchyData extract_cauchy(const WaveField& field, const SpatialGrid& grid_omega);

/// Adds level * ||f||_2 * r / ||r||_2 with r uniform in (-1, 1), independently to f and g.
CauchyData add_noise(const CauchyData& data, double level, std::uint64_t seed);

BoundaryVectors project_cauchy(const CauchyData& data, const TimeBasis& basis);

/// The same one-sided stencil applied to a static node field (used for manufactured data).
Eigen::VectorXd normal_derivative(const GridValues& values, const BoundaryLayout& layout);

}  // namespace hyperinv
