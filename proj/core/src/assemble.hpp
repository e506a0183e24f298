#pragma once

// Internal: Shortley-Weller assembly shared by the Dirichlet solver and the
// linearized-operator eigensolver. Not installed.

#include <Eigen/Sparse>
#include <vector>

#include "morse2d/grid.hpp"

namespace morse2d::detail {

struct Discretization {
  std::vector<std::pair<int, int>> nodes;  // interior nodes, j-major order
  std::vector<int> index;                  // flat node id -> unknown index or -1
  Eigen::SparseMatrix<double> neg_lap;     // -Lap on the unknowns
  Eigen::VectorXd boundary_term;           // Dirichlet data folded into -Lap u
};

inline Discretization discretize(const GridField& g) {
  Discretization d;
  d.nodes = g.interior_nodes();
  d.index.assign(size_t(g.nx()) * g.ny(), -1);
  for (size_t k = 0; k < d.nodes.size(); ++k)
    d.index[size_t(d.nodes[k].second) * g.nx() + d.nodes[k].first] = int(k);

  const int n = int(d.nodes.size());
  d.neg_lap.resize(n, n);
  d.boundary_term = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(n) * 5);
  const double hx = g.hx(), hy = g.hy();

  for (int row = 0; row < n; ++row) {
    const auto [i, j] = d.nodes[size_t(row)];
    const CutArms a = g.cut_arms() ? g.arm(i, j) : CutArms{};
    trip.emplace_back(row, row, 2.0 / (a.w * a.e * hx * hx) + 2.0 / (a.s * a.n * hy * hy));
    struct Arm {
      int ii, jj;
      double frac, pair, h;
    };
    const Arm arms[4] = {{i - 1, j, a.w, a.w + a.e, hx},
                         {i + 1, j, a.e, a.w + a.e, hx},
                         {i, j - 1, a.s, a.s + a.n, hy},
                         {i, j + 1, a.n, a.s + a.n, hy}};
    for (const Arm& arm : arms) {
      const double coeff = -2.0 / (arm.frac * arm.pair * arm.h * arm.h);
      const int col = d.index[size_t(arm.jj) * g.nx() + arm.ii];
      if (arm.frac < 1.0 || col < 0)
        d.boundary_term[row] += coeff * g.value(arm.ii, arm.jj);
      else
        trip.emplace_back(row, col, coeff);
    }
  }
  d.neg_lap.setFromTriplets(trip.begin(), trip.end());
  return d;
}

}  // namespace morse2d::detail
