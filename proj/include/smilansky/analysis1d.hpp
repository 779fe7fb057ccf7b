#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "smilansky/assembly.hpp"
#include "smilansky/model.hpp"

namespace smilansky {

struct Gamma0Options {
  double accuracy = 1e-10;        // target for the extrapolation error estimate
  int nodes_per_a = 16;           // coarsest grid: spacing a / nodes_per_a
  int max_nodes_per_a = 4096;
  double max_half_width = 400.0;  // cap for the auto-grown box [-R, R]
  double decay_ratio = 1e-12;     // |h| near the box edge relative to max |h|
};

// Ground state of L = -d^2/dx^2 + omega^2 - lambda V on the line.
//
// gamma0 comes from three nested Dirichlet grids (spacing D, D/2, D/4, all
// with nodes on +-a) and two rounds of Richardson extrapolation. The
// eigenfunction is the extrapolated grid vector on the D/2 nodes, with a
// cubic Hermite interpolant; h'' always comes from the ODE identity.
class GroundState1D {
 public:
  double gamma0 = 0.0;
  double error_estimate = 0.0;
  bool extrapolated = false;
  ModelParams params;
  double half_width = 0.0;       // R; h is taken as zero outside [-R, R]
  double spacing = 0.0;          // spacing of the stored samples
  std::vector<double> raw_levels;  // grid eigenvalues for D, D/2, D/4
  std::vector<double> nodes;     // includes the endpoints -R and R
  std::vector<double> h_values;
  std::vector<double> dh_values;

  // False for lambda = 0, where inf sigma(L) = omega^2 is not an eigenvalue.
  bool has_eigenfunction() const { return !h_values.empty(); }

  double value(double x) const;
  double derivative(double x) const;
  // (omega^2 - lambda V(x) - gamma0) h(x)
  double second_derivative(double x) const;
};

GroundState1D gamma0(const ModelParams& params, const Gamma0Options& options = {});

enum class Regime { subcritical, critical, supercritical };

std::string_view to_string(Regime regime);

struct RegimeClassification {
  Regime regime = Regime::subcritical;
  double gamma0 = 0.0;
  double tolerance = 1e-7;
  double error_estimate = 0.0;
};

RegimeClassification classify(const ModelParams& params, double tolerance = 1e-7,
                              const Gamma0Options& options = {});

struct CriticalLambdaResult {
  double lambda = 0.0;
  double lower = 0.0;   // gamma0 >= 0 here
  double upper = 0.0;   // gamma0 < 0 here
  double gamma0 = 0.0;  // at `lambda`
  int evaluations = 0;
};

// Bisection on the sign of gamma0(lambda). The upper end doubles from 1
// until gamma0 < 0; past lambda_max a BracketingError is thrown.
CriticalLambdaResult critical_lambda(double omega, const PotentialSpec& potential,
                                     double bracket_tol = 1e-10, double lambda_max = 1e4,
                                     const Gamma0Options& options = {});

struct NeumannOptions {
  int nodes_per_a = 32;
  int min_nodes = 33;
};

// inf sigma(l_k) for the Neumann restriction of L to [-k, k], Richardson
// extrapolated over spacings D and D/2.
double neumann_ground_energy(const ModelParams& params, double k, const NeumannOptions& options = {});

struct KappaOptions {
  double step = 0.25;
  double fine_step = 1e-3;
  double k_max = 500.0;
  NeumannOptions neumann;
};

struct KappaResult {
  double kappa = 0.0;
  double step = 0.0;     // quantisation of the reported value
  double gamma0 = 0.0;
  double energy_at_kappa = 0.0;
  std::vector<std::pair<double, double>> trace;  // (k, inf sigma(l_k)), scan order
};

// Smallest scanned k with inf sigma(l_k) >= gamma0 / 2, provided the
// condition also holds one coarse step further on.
KappaResult kappa(const ModelParams& params, double gamma0, const KappaOptions& options = {});

}  // namespace smilansky
