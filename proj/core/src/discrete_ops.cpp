#include "hyperinv/discrete_ops.hpp"

#include "hyperinv/errors.hpp"

#include <map>

namespace hyperinv {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

DiscreteOperators::DiscreteOperators(const SpatialGrid& grid) : grid_(grid) {
  const int n = grid.n();
  const double h = grid.spacing();
  const double h2 = h * h;
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i) interior_.push_back(grid.index(i, j));

  Triplets sel, lap, a11, a22, a12;
  for (int r = 0; r < interior_count(); ++r) {
    const int k = interior_[r];
    sel.emplace_back(r, k, 1.0);
    lap.emplace_back(r, k, -4.0 / h2);
    for (int d : {1, -1, n, -n}) lap.emplace_back(r, k + d, 1.0 / h2);
    a11.emplace_back(r, k - 1, 1.0 / h2);
    a11.emplace_back(r, k, -2.0 / h2);
    a11.emplace_back(r, k + 1, 1.0 / h2);
    a22.emplace_back(r, k - n, 1.0 / h2);
    a22.emplace_back(r, k, -2.0 / h2);
    a22.emplace_back(r, k + n, 1.0 / h2);
    a12.emplace_back(r, k + n + 1, 0.25 / h2);
    a12.emplace_back(r, k - n - 1, 0.25 / h2);
    a12.emplace_back(r, k + n - 1, -0.25 / h2);
    a12.emplace_back(r, k - n + 1, -0.25 / h2);
  }
  const int rows = interior_count();
  select_ = from_triplets(rows, grid.size(), sel);
  laplacian_ = from_triplets(rows, grid.size(), lap);
  d11_ = from_triplets(rows, grid.size(), a11);
  d22_ = from_triplets(rows, grid.size(), a22);
  d12_ = from_triplets(rows, grid.size(), a12);

  // Gradients along one axis: centred inside, one-sided second order at the ends.
  auto gradient = [&](int stride, auto position) {
    Triplets t;
    for (int k = 0; k < grid.size(); ++k) {
      const int p = position(k);
      if (p == 0) {
        t.emplace_back(k, k, -1.5 / h);
        t.emplace_back(k, k + stride, 2.0 / h);
        t.emplace_back(k, k + 2 * stride, -0.5 / h);
      } else if (p == n - 1) {
        t.emplace_back(k, k, 1.5 / h);
        t.emplace_back(k, k - stride, -2.0 / h);
        t.emplace_back(k, k - 2 * stride, 0.5 / h);
      } else {
        t.emplace_back(k, k + stride, 0.5 / h);
        t.emplace_back(k, k - stride, -0.5 / h);
      }
    }
    return from_triplets(grid.size(), grid.size(), t);
  };
  grad1_ = gradient(1, [n](int k) { return k % n; });
  grad2_ = gradient(n, [n](int k) { return k / n; });
}

FieldMatrix apply(const SparseMatrix& op, const FieldMatrix& values) {
  if (op.cols() != values.rows()) throw InvalidArgument("operator does not match the field grid");
  return op * values;
}

SparseMatrix kron(const SparseMatrix& a, const Eigen::MatrixXd& b) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()) * b.size());
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(a, col); it; ++it)
      for (int q = 0; q < b.cols(); ++q)
        for (int p = 0; p < b.rows(); ++p)
          if (b(p, q) != 0.0)
            t.emplace_back(static_cast<int>(it.row()) * b.rows() + p, col * b.cols() + q,
                           it.value() * b(p, q));
  return from_triplets(static_cast<int>(a.rows() * b.rows()), static_cast<int>(a.cols() * b.cols()), t);
}

namespace {

struct Affine {
  std::map<int, double> x, f, g;

  void add(const Affine& o, double s) {
    for (auto [k, v] : o.x) x[k] += s * v;
    for (auto [k, v] : o.f) f[k] += s * v;
    for (auto [k, v] : o.g) g[k] += s * v;
  }
};

}  // namespace

ConstraintMap::ConstraintMap(const SpatialGrid& grid) : grid_(grid), layout_(grid) {
  const int n = grid.n();
  if (n < 5) throw InvalidArgument("constraint map needs at least 5 nodes per side");
  const double h = grid.spacing();

  std::vector<int> free_index(grid.size(), -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (grid.layer(i, j) >= 2) {
        free_index[grid.index(i, j)] = free_count();
        free_.push_back(grid.index(i, j));
      }

  std::vector<Affine> expr(grid.size());
  std::vector<bool> done(grid.size(), false);
  for (int side = 0; side < 4; ++side)
    for (int k = 0; k < n; ++k) {
      const int node = layout_.nodes[layout_.row(side, k)];
      const bool corner = k == 0 || k == n - 1;
      expr[node].f[layout_.row(side, k)] += corner ? 0.5 : 1.0;
      done[node] = true;
    }
  for (int node : free_) {
    expr[node].x[free_index[node]] = 1.0;
    done[node] = true;
  }

  // Boundary rows adjacent to a first-layer node (i, j): (side, position along side).
  auto adjacent_rows = [&](int i, int j) {
    std::vector<std::pair<int, int>> rows;
    if (i == 1) rows.push_back({3, j});
    if (i == n - 2) rows.push_back({1, j});
    if (j == 1) rows.push_back({0, i});
    if (j == n - 2) rows.push_back({2, i});
    return rows;
  };
  auto inward_step = [&](int side) { return side == 0 ? n : side == 1 ? -1 : side == 2 ? -n : 1; };

  // Non-corner first-layer nodes first (their inward neighbours are free), then corners.
  for (int pass = 0; pass < 2; ++pass)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        if (grid.layer(i, j) != 1) continue;
        const auto rows = adjacent_rows(i, j);
        if ((rows.size() == 1) != (pass == 0)) continue;
        const int q = grid.index(i, j);
        Affine e;
        for (auto [side, pos] : rows) {
          const int r = layout_.row(side, pos);
          const int inner = q + inward_step(side);
          Affine one;
          one.f[r] = 0.75;
          one.g[r] = -0.5 * h;
          one.add(expr[inner], 0.25);
          e.add(one, 1.0 / static_cast<double>(rows.size()));
        }
        expr[q] = std::move(e);
        done[q] = true;
      }

  Triplets tx, tf, tg;
  for (int node = 0; node < grid.size(); ++node) {
    if (!done[node]) throw Error("constraint map left a node undetermined");
    for (auto [k, v] : expr[node].x) tx.emplace_back(node, k, v);
    for (auto [k, v] : expr[node].f) tf.emplace_back(node, k, v);
    for (auto [k, v] : expr[node].g) tg.emplace_back(node, k, v);
  }
  node_map_ = from_triplets(grid.size(), free_count(), tx);
  f_map_ = from_triplets(grid.size(), layout_.rows(), tf);
  g_map_ = from_triplets(grid.size(), layout_.rows(), tg);
}

FieldMatrix ConstraintMap::offset(const BoundaryVectors& data) const {
  if (data.f.rows() != layout_.rows() || data.g.rows() != layout_.rows() ||
      data.f.cols() != data.g.cols())
    throw InvalidArgument("boundary vectors do not match the constraint layout");
  return f_map_ * data.f + g_map_ * data.g;
}

FieldMatrix ConstraintMap::expand(const FieldMatrix& free_values, const BoundaryVectors& data) const {
  if (free_values.rows() != free_count()) throw InvalidArgument("free values have the wrong size");
  FieldMatrix out = offset(data);
  out += node_map_ * free_values;
  return out;
}

FieldMatrix ConstraintMap::restrict_free(const FieldMatrix& full) const {
  if (full.rows() != grid_.size()) throw InvalidArgument("field does not match the constraint grid");
  FieldMatrix out(free_count(), full.cols());
  for (int k = 0; k < free_count(); ++k) out.row(k) = full.row(free_[k]);
  return out;
}

}  // namespace hyperinv
