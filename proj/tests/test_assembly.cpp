#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "smilansky/assembly.hpp"
#include "smilansky/eigensolve.hpp"
#include "smilansky/error.hpp"

using namespace smilansky;

namespace {

ModelParams cosine(double lambda, double omega = 1.0) {
  ModelParams p;
  p.omega = omega;
  p.lambda = lambda;
  p.potential = make_potential(PotentialKind::cosine_bump, 1.0, 1.0);
  return p;
}

Eigen::VectorXd dense_eigenvalues(const SparseSymmetricOperator& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.dim(), a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) m(r, a.col_indices()[k]) = a.values()[k];
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("grids") {
  const Grid1D d(2.0, 7, BoundaryCondition::dirichlet);
  CHECK(d.spacing() == 0.5);
  const Grid1D n(2.0, 9, BoundaryCondition::neumann);
  CHECK(n.spacing() == 0.5);
  for (const auto& g : {d, n}) {
    const auto x = g.nodes();
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(x[i] == -x[x.size() - 1 - i]);
      if (i > 0) CHECK(x[i] > x[i - 1]);
    }
  }
  CHECK_THROWS_AS(Grid1D(1.0, 2, BoundaryCondition::dirichlet), ParameterError);
  CHECK(Grid1D::with_spacing(1.0, 0.1, BoundaryCondition::dirichlet).spacing() == doctest::Approx(0.1));
}

TEST_CASE("free 1D spectra") {
  const Grid1D grid(1.0, 50, BoundaryCondition::dirichlet);
  const auto all = dense_tridiagonal_eigs(tridiagonal_L(cosine(0.0, 1.3), grid));
  const double h = grid.spacing();
  for (std::size_t j = 1; j <= 50; ++j) {
    const double exact = 1.69 + 2.0 / (h * h) * (1 - std::cos(j * std::numbers::pi / 51));
    CHECK(all.eigenvalues[j - 1] == doctest::Approx(exact).epsilon(1e-12));
  }
  const Grid1D nm(5.0, 101, BoundaryCondition::neumann);
  const auto low = tridiagonal_lowest(tridiagonal_L(cosine(0.0, 1.3), nm), 3);
  CHECK(low.eigenvalues[0] == doctest::Approx(1.69).epsilon(1e-13));
  // Next Neumann levels approach omega^2 + (pi j / 2R)^2.
  CHECK(low.eigenvalues[1] == doctest::Approx(1.69 + std::pow(std::numbers::pi / 10, 2)).epsilon(1e-3));
}

TEST_CASE("lowest L eigenvalue with extrapolation") {
  const auto p = cosine(5.0);
  const auto lowest = [&](std::size_t cells) {
    const Grid1D g(12.0, cells - 1, BoundaryCondition::dirichlet);
    return tridiagonal_lowest(tridiagonal_L(p, g), 1).eigenvalues[0];
  };
  const double e1 = lowest(24 * 32);
  const double e2 = lowest(24 * 64);
  const double extrapolated = (4 * e2 - e1) / 3;
  CHECK(std::abs(extrapolated - oracle::shooting_gamma0(p)) <= 1e-6);
}

TEST_CASE("2D assembly") {
  const auto p = cosine(2.0);
  const auto grid = Grid2D::with_spacing(3.0, 2.0, 1.0 / 16, 0.1);
  const auto a = assemble_H(p, grid);
  CHECK(a.max_asymmetry() == 0.0);
  CHECK(a.dim() == grid.size());
  for (double d : a.diagonal()) CHECK(std::isfinite(d));

  std::ostringstream out;
  const auto small = assemble_H(cosine(0.0), Grid2D(1.0, 1.0, 3, 3));
  small.write_coordinate(out);
  std::istringstream in(out.str());
  std::string pct;
  std::size_t dim = 0, nnz = 0;
  in >> pct >> dim >> nnz;
  CHECK(pct == "%");
  CHECK(dim == 9);
  CHECK(nnz == small.nonzeros());
  std::size_t r, c;
  double v;
  std::size_t lines = 0;
  while (in >> r >> c >> v) {
    CHECK(small.at(r, c) == v);
    ++lines;
  }
  CHECK(lines == nnz);

  AssemblyOptions cap;
  cap.memory_cap = 100;
  CHECK_THROWS_AS(assemble_H(p, grid, cap), ResourceError);
  CHECK_THROWS_AS(assemble_H(p, Grid2D::with_spacing(3.0, 4.0, 0.05, 0.1)), ResolutionError);
  CHECK_NOTHROW(assemble_H(cosine(0.0), Grid2D::with_spacing(3.0, 4.0, 0.05, 0.1)));

  AssemblyOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(tridiagonal_L(p, Grid1D(5.0, 20, BoundaryCondition::dirichlet), strict), ResolutionError);
}

TEST_CASE("Kronecker-sum spectrum at lambda = 0") {
  const auto p = cosine(0.0, 1.2);
  const Grid2D grid(2.0, 2.5, 30, 40);
  const auto full = dense_eigenvalues(assemble_H(p, grid));
  const auto ex = dense_tridiagonal_eigs(tridiagonal_L(cosine(0.0, 1e-300), grid.x())).eigenvalues;
  const auto ey = dense_tridiagonal_eigs(tridiagonal_oscillator(1.2, grid.y())).eigenvalues;
  std::vector<double> sums;
  for (double x : ex) {
    for (double y : ey) sums.push_back(x + y);
  }
  std::sort(sums.begin(), sums.end());
  double worst = 0;
  for (std::size_t i = 0; i < sums.size(); ++i) worst = std::max(worst, std::abs(sums[i] - full[i]) / (1 + std::abs(sums[i])));
  CHECK(worst <= 1e-11);
}

TEST_CASE("free 2D threshold plus box energy") {
  // Lowest eigenvalue = lowest oscillator level + lowest x level.
  const auto grid = Grid2D::with_spacing(4.0, 5.0, 0.1, 0.1);
  const auto a = assemble_H(cosine(0.0), grid);
  ExtremalOptions opt;
  const auto r = extremal_sparse_eigs(a, 1, opt);
  const double target = 1.0 + std::pow(std::numbers::pi / 8.0, 2);
  CHECK(std::abs(r.eigenvalues[0] - target) <= 5e-3);
}

TEST_CASE("scaling identity of the fibre operator") {
  const auto p = cosine(2.0);
  const double r = 6.0;
  const std::size_t n = 1199;
  const auto base = tridiagonal_lowest(tridiagonal_L(p, Grid1D(r, n, BoundaryCondition::dirichlet)), 1).eigenvalues[0];
  for (double y0 : {0.5, 2.0, -3.0}) {
    const Grid1D g(r / std::abs(y0), n, BoundaryCondition::dirichlet);
    const double fibre = tridiagonal_lowest(tridiagonal_fibre(p, y0, g), 1).eigenvalues[0];
    CHECK(fibre == doctest::Approx(y0 * y0 * base).epsilon(1e-11));
    // Different spacing: agreement to O(h^2).
    const Grid1D g2(r / std::abs(y0), 2 * n + 1, BoundaryCondition::dirichlet);
    const double fibre2 = tridiagonal_lowest(tridiagonal_fibre(p, y0, g2), 1).eigenvalues[0];
    const double h = 2 * r / (n + 1);
    CHECK(std::abs(fibre2 / (y0 * y0) - base) <= 4 * h * h);
  }
}

TEST_CASE("ordered eigenvalues decrease with the coupling") {
  const auto grid = Grid2D::with_spacing(2.0, 1.5, 1.0 / 12, 0.1);
  Eigen::VectorXd previous;
  for (double lambda : {0.5, 1.5, 2.5}) {
    const auto ev = dense_eigenvalues(assemble_H(cosine(lambda), grid));
    if (previous.size() > 0) {
      CHECK((ev.array() <= previous.array() + 1e-12).all());
    }
    previous = ev;
  }
}
