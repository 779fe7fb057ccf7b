#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace smilansky::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule. Rules are cached per order; the returned
// reference stays valid for the lifetime of the program.
const Rule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double panels(const std::function<double(double)>& f, double a, double b,
              int panel_count, int order = 10);

// Composite Gauss-Legendre over consecutive breakpoints, each gap split
// into `panels_per_gap` panels.
double panels(const std::function<double(double)>& f,
              std::span<const double> breaks, int panels_per_gap,
              int order = 10);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;     // sum of |K15 - G7| over the final partition
  int intervals = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod. Bisects the interval with the
// largest error estimate until the summed estimate drops below
// max(abs_tol, rel_tol * |value|).
AdaptiveResult gauss_kronrod(const std::function<double(double)>& f, double a,
                             double b, double rel_tol, double abs_tol = 0.0,
                             int max_intervals = 4000);

}  // namespace smilansky::quad
