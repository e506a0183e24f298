#include "morse2d/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "assemble.hpp"
#include "morse2d/errors.hpp"

namespace morse2d {

namespace {

// Deterministic pseudo-random start block (no global RNG state).
Eigen::MatrixXd start_block(int n, int p) {
  Eigen::MatrixXd v(n, p);
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  for (int c = 0; c < p; ++c)
    for (int i = 0; i < n; ++i) {
      s ^= s >> 30;
      s *= 0xbf58476d1ce4e5b9ull;
      s ^= s >> 27;
      s *= 0x94d049bb133111ebull;
      s ^= s >> 31;
      v(i, c) = 0.5 + double(s % 1000003) / 1000003.0;
    }
  return v;
}

}  // namespace

SpectrumResult linearized_spectrum(const GridField& u, const Nonlinearity& f, int k) {
  if (k < 1) fail("parse-error", "need k >= 1 eigenvalues");
  const detail::Discretization d = detail::discretize(u);
  const int n = int(d.nodes.size());
  if (n == 0) fail("domain-empty", "no interior nodes");
  k = std::min(k, n);

  Eigen::SparseMatrix<double> A = d.neg_lap;
  {
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(size_t(n));
    for (int row = 0; row < n; ++row) {
      const auto [i, j] = d.nodes[size_t(row)];
      diag.emplace_back(row, row, -f.derivative(u.value(i, j), 1));
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(diag.begin(), diag.end());
    A += m;
  }

  // Shift below the spectrum, factor once, then block inverse power
  // iteration with Ritz projection; the block form keeps clustered and
  // repeated eigenvalues resolved where single-vector deflation loses them.
  // The discrete -Lap is an M-matrix with positive spectrum, so
  // lambda_1(A) > -max f'(u) and the shift below is strictly admissible.
  double fp_max = 0.0;
  for (const auto& [i, j] : d.nodes)
    fp_max = std::max(fp_max, f.derivative(u.value(i, j), 1));
  const double sigma = -1.0 - std::max(0.0, fp_max);

  Eigen::SparseMatrix<double> shifted = A;
  Eigen::SparseMatrix<double> ident(n, n);
  ident.setIdentity();
  shifted -= sigma * ident;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(shifted);
  if (lu.info() != Eigen::Success) fail("eigen-iteration-stalled", "shifted operator is singular");

  const int p = std::min(n, k + 4);
  Eigen::MatrixXd V = start_block(n, p);
  Eigen::VectorXd ritz = Eigen::VectorXd::Zero(p);

  auto orthonormalize = [](Eigen::MatrixXd& M) {
    // Modified Gram-Schmidt, deterministic column order
    for (int c = 0; c < M.cols(); ++c) {
      for (int b = 0; b < c; ++b) M.col(c) -= M.col(b).dot(M.col(c)) * M.col(b);
      const double nn = M.col(c).norm();
      if (nn < 1e-300) fail("eigen-iteration-stalled", "block collapsed");
      M.col(c) /= nn;
    }
  };

  bool converged = false;
  orthonormalize(V);
  for (int it = 0; it < 500 && !converged; ++it) {
    Eigen::MatrixXd W(n, p);
    for (int c = 0; c < p; ++c) W.col(c) = lu.solve(V.col(c));
    orthonormalize(W);
    // Ritz projection; cut-cell stencils make A nonsymmetric, so the small
    // problem is solved as a general eigenproblem and sorted by real part
    const Eigen::MatrixXd H = W.transpose() * (A * W);
    Eigen::EigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) fail("eigen-iteration-stalled", "projected eigenproblem failed");
    std::vector<int> order(static_cast<size_t>(p), 0);
    for (int c = 0; c < p; ++c) order[size_t(c)] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return es.eigenvalues()[a].real() < es.eigenvalues()[b].real();
    });
    Eigen::MatrixXd rot(p, p);
    bool real_enough = true;
    for (int c = 0; c < p; ++c) {
      const int o = order[size_t(c)];
      if (std::abs(es.eigenvalues()[o].imag()) >
          1e-8 * std::max(1.0, std::abs(es.eigenvalues()[o].real())))
        real_enough = false;
      rot.col(c) = es.eigenvectors().col(o).real();
      ritz[c] = es.eigenvalues()[o].real();
    }
    V = W * rot;
    for (int c = 0; c < p; ++c) {
      const double nn = V.col(c).norm();
      if (nn > 1e-300) V.col(c) /= nn;
    }
    if (!real_enough) continue;
    if (it % 4 == 3 || it > 60) {
      converged = true;
      for (int c = 0; c < k; ++c) {
        const double res = (A * V.col(c) - ritz[c] * V.col(c)).norm();
        if (res > 1e-9 * std::max(1.0, std::abs(ritz[c]))) {
          converged = false;
          break;
        }
      }
    }
  }
  if (!converged) fail("eigen-iteration-stalled", "subspace iteration did not converge");

  SpectrumResult out;
  for (int c = 0; c < k; ++c) out.eigenvalues.push_back(ritz[c]);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.morse_index = int(std::count_if(out.eigenvalues.begin(), out.eigenvalues.end(),
                                      [](double l) { return l < 0.0; }));
  out.semi_stable = out.eigenvalues.front() >= 0.0;
  return out;
}

}  // namespace morse2d
