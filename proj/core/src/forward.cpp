#include "hyperinv/forward.hpp"

#include "hyperinv/errors.hpp"
#include "hyperinv/seed.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hyperinv {

namespace {

bool inside_polygon(Point2 x, const std::vector<Point2>& poly) {
  bool in = false;
  for (std::size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++) {
    const Point2 pa = poly[a], pb = poly[b];
    if ((pa.x2 > x.x2) != (pb.x2 > x.x2)) {
      const double cross = (pb.x1 - pa.x1) * (x.x2 - pa.x2) / (pb.x2 - pa.x2) + pa.x1;
      if (x.x1 < cross) in = !in;
    }
  }
  return in;
}

}  // namespace

PhantomKind phantom_kind_from_name(const std::string& name) {
  if (name == "two_disks") return PhantomKind::TwoDisks;
  if (name == "kite") return PhantomKind::Kite;
  if (name == "peanut") return PhantomKind::Peanut;
  if (name == "custom") return PhantomKind::Custom;
  throw ConfigError("unknown phantom '" + name + "' (expected two_disks, kite, peanut or custom)");
}

std::string phantom_kind_name(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::TwoDisks: return "two_disks";
    case PhantomKind::Kite: return "kite";
    case PhantomKind::Peanut: return "peanut";
    case PhantomKind::Custom: return "custom";
  }
  return "custom";
}

std::vector<Point2> phantom_outline(const PhantomSpec& spec, int samples) {
  if (spec.kind != PhantomKind::Kite && spec.kind != PhantomKind::Peanut)
    throw InvalidArgument("only kite and peanut phantoms have a parametric outline");
  std::vector<Point2> out(samples);
  for (int k = 0; k < samples; ++k) {
    const double s = 2.0 * std::numbers::pi * k / samples;
    double x1, x2;
    if (spec.kind == PhantomKind::Kite) {
      x1 = std::cos(s) + 0.65 * std::cos(2.0 * s) - 0.65;
      x2 = 1.5 * std::sin(s);
    } else {
      const double r = std::sqrt(std::cos(s) * std::cos(s) + 0.25 * std::sin(s) * std::sin(s));
      x1 = r * std::cos(s);
      x2 = r * std::sin(s);
    }
    out[k] = {spec.center.x1 + spec.scale * x1, spec.center.x2 + spec.scale * x2};
  }
  return out;
}

GridValues make_phantom(const PhantomSpec& spec, const SpatialGrid& grid) {
  GridValues c = GridValues::Zero(grid.size());
  const bool disks = spec.kind == PhantomKind::TwoDisks || spec.kind == PhantomKind::Custom;
  if (disks) {
    for (const Disk& d : spec.disks) {
      if (!(d.radius > 0.0)) throw InvalidArgument("phantom disk radius must be positive");
      if (std::max(std::abs(d.center.x1), std::abs(d.center.x2)) + d.radius >= grid.half_width())
        throw InvalidArgument("phantom disk touches the boundary of the domain");
    }
  }
  std::vector<Point2> outline;
  if (!disks) outline = phantom_outline(spec);

  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const Point2 x = grid.point(i, j);
      double v = 0.0;
      if (disks) {
        // Later disks do not overwrite earlier ones.
        for (const Disk& d : spec.disks)
          if (norm({x.x1 - d.center.x1, x.x2 - d.center.x2}) <= d.radius) {
            v = d.value;
            break;
          }
      } else if (inside_polygon(x, outline)) {
        v = spec.value;
      }
      if (v != 0.0 && grid.layer(i, j) < 2)
        throw InvalidArgument("phantom support reaches the boundary layers of the domain");
      c[grid.index(i, j)] = v;
    }
  return c;
}

WaveField solve_wave(const GridValues& c_on_G, const Nonlinearity& F, const InitialField& p,
                     const SpatialGrid& grid_G, const TimeGrid& time, const WaveOptions& options) {
  const int n = grid_G.n();
  const double h = grid_G.spacing();
  const double dt = time.step();
  if (c_on_G.size() != grid_G.size()) throw InvalidArgument("potential does not match the wave grid");
  const double bound = h / std::sqrt(2.0);
  if (dt > bound * (1.0 + 1e-12)) throw CflViolation(dt, bound);

  const SpatialGrid rec = options.record.value_or(grid_G);
  const int off = subgrid_offset(rec, grid_G);

  GridValues p0(grid_G.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p0[grid_G.index(i, j)] = p(grid_G.point(i, j));

  std::vector<int> support;
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i)
      if (c_on_G[grid_G.index(i, j)] != 0.0) support.push_back(grid_G.index(i, j));

  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 0.5 / h;
  auto laplacian = [&](const GridValues& u, int k) {
    return (u[k + 1] + u[k - 1] + u[k + n] + u[k - n] - 4.0 * u[k]) * inv_h2;
  };
  auto point_of = [&](int k) { return grid_G.point(k % n, k / n); };

  GridValues prev = p0, cur = p0, next = p0;
  if (options.start == StartRule::Taylor) {
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const int k = grid_G.index(i, j);
        double acc = laplacian(p0, k);
        if (c_on_G[k] != 0.0)
          acc += c_on_G[k] * F(point_of(k), p0[k], 0.0, (p0[k + 1] - p0[k - 1]) * inv_2h,
                               (p0[k + n] - p0[k - n]) * inv_2h);
        if (options.source) acc += options.source(point_of(k), 0.0);
        cur[k] = p0[k] + 0.5 * dt * dt * acc;
      }
  }

  WaveField out;
  out.grid = rec;
  out.time = time;
  out.values.resize(rec.size(), time.size());
  auto record = [&](const GridValues& u, int col) {
    for (int j = 0; j < rec.n(); ++j)
      for (int i = 0; i < rec.n(); ++i)
        out.values(rec.index(i, j), col) = u[grid_G.index(i + off, j + off)];
  };
  std::vector<int> edge;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (grid_G.layer(i, j) == 1) edge.push_back(grid_G.index(i, j));
  auto track_edge = [&](const GridValues& u) {
    for (int k : edge) out.edge_deviation = std::max(out.edge_deviation, std::abs(u[k] - p0[k]));
  };

  record(prev, 0);
  record(cur, 1);
  track_edge(cur);
  const double dt2 = dt * dt;
  const bool has_source = static_cast<bool>(options.source);
  for (int step = 1; step < time.intervals(); ++step) {
    const double t = time.node(step);
    for (int j = 1; j < n - 1; ++j) {
      const int row = j * n;
      for (int i = 1; i < n - 1; ++i) {
        const int k = row + i;
        double acc = laplacian(cur, k);
        if (has_source) acc += options.source(point_of(k), t);
        next[k] = dt2 * acc + 2.0 * cur[k] - prev[k];
      }
    }
    for (int k : support) {
      const double ut = (cur[k] - prev[k]) / dt;
      const double fx = F(point_of(k), cur[k], ut, (cur[k + 1] - cur[k - 1]) * inv_2h,
                          (cur[k + n] - cur[k - n]) * inv_2h);
      next[k] += dt2 * c_on_G[k] * fx;
    }
    if (!std::isfinite(next.sum())) {
      for (int k = 0; k < next.size(); ++k)
        if (!std::isfinite(next[k])) throw NonFiniteValue(step + 1, k);
    }
    track_edge(next);
    record(next, step + 1);
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return out;
}

BoundaryLayout::BoundaryLayout(const SpatialGrid& g) : grid(g) {
  const int n = g.n();
  const Point2 nu[4] = {{0.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  for (int side = 0; side < 4; ++side)
    for (int k = 0; k < n; ++k) {
      int i = 0, j = 0;
      switch (side) {
        case 0: i = k; j = 0; break;
        case 1: i = n - 1; j = k; break;
        case 2: i = k; j = n - 1; break;
        default: i = 0; j = k; break;
      }
      nodes.push_back(g.index(i, j));
      sides.push_back(side);
      normals.push_back(nu[side]);
    }
}

namespace {

// Flat offsets of x - h nu and x - 2h nu for a boundary row.
std::pair<int, int> inward(const BoundaryLayout& layout, int r) {
  const int n = layout.grid.n();
  const int step = layout.sides[r] == 0 ? n : layout.sides[r] == 1 ? -1 : layout.sides[r] == 2 ? -n : 1;
  return {layout.nodes[r] + step, layout.nodes[r] + 2 * step};
}

}  // namespace

Eigen::VectorXd normal_derivative(const GridValues& values, const BoundaryLayout& layout) {
  if (values.size() != layout.grid.size()) throw InvalidArgument("values do not match the boundary grid");
  const double h = layout.grid.spacing();
  Eigen::VectorXd g(layout.rows());
  for (int r = 0; r < layout.rows(); ++r) {
    const auto [a, b] = inward(layout, r);
    g[r] = (3.0 * values[layout.nodes[r]] - 4.0 * values[a] + values[b]) / (2.0 * h);
  }
  return g;
}

CauchyData extract_cauchy(const WaveField& field, const SpatialGrid& grid_omega) {
  const int off = subgrid_offset(grid_omega, field.grid);
  const double h = grid_omega.spacing();
  CauchyData data{BoundaryLayout(grid_omega), field.time, {}, {}, 0.0, 0};
  const BoundaryLayout& layout = data.layout;
  const int nt = field.time.size();
  data.f.resize(layout.rows(), nt);
  data.g.resize(layout.rows(), nt);
  const int n = grid_omega.n();
  auto outer = [&](int k) { return field.grid.index(k % n + off, k / n + off); };
  for (int r = 0; r < layout.rows(); ++r) {
    const auto [a, b] = inward(layout, r);
    const auto u0 = field.values.row(outer(layout.nodes[r]));
    const auto u1 = field.values.row(outer(a));
    const auto u2 = field.values.row(outer(b));
    data.f.row(r) = u0;
    data.g.row(r) = (3.0 * u0 - 4.0 * u1 + u2) / (2.0 * h);
  }
  return data;
}

CauchyData add_noise(const CauchyData& data, double level, std::uint64_t seed) {
  if (!(level >= 0.0)) throw InvalidArgument("noise level must be non-negative");
  CauchyData out = data;
  out.noise_level = level;
  out.seed = seed;
  if (level == 0.0) return out;
  auto perturb = [&](Eigen::MatrixXd& m, std::string_view consumer) {
    const double scale = m.norm();
    if (scale == 0.0) return;
    std::mt19937_64 rng(derive_seed(seed, consumer));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::MatrixXd r(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < r.size(); ++k) r.data()[k] = uni(rng);
    m += (level * scale / r.norm()) * r;
  };
  perturb(out.f, "noise-f");
  perturb(out.g, "noise-g");
  return out;
}

BoundaryVectors project_cauchy(const CauchyData& data, const TimeBasis& basis) {
  if (!(data.time == basis.grid())) throw InvalidArgument("Cauchy data and basis use different time grids");
  return {project_rows(data.f, basis), project_rows(data.g, basis)};
}

}  // namespace hyperinv
