#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smilansky/analysis1d.hpp"
#include "smilansky/assembly.hpp"
#include "smilansky/eigensolve.hpp"

namespace smilansky {

struct Alpha1Result {
  double alpha1 = 0.0;
  int branch = 0;                 // 0: sqrt(kappa), 1: 2 omega/gamma0, 2: sqrt(lambda |V|) a / sqrt(2 omega)
  double branches[3] = {0, 0, 0};
  bool coupling_condition = false;  // lambda |V| a^2 / alpha1^2 <= 2 omega
  bool emptiness_condition = false; // alpha1 >= 2 omega / gamma0
};

Alpha1Result alpha1(const ModelParams& params, double gamma0, double kappa);

struct SeriesOptions {
  double rel_tail = 1e-12;
  std::size_t max_terms = 1'000'000;
};

struct RhsBound {
  double series = 0.0;           // partial sum + tail bound
  double series_partial = 0.0;
  double series_tail = 0.0;      // integral-test bound on the remainder
  std::size_t series_terms = 0;
  double box = 0.0;
  double total = 0.0;
};

// n-th summand of the series term (n >= 1), including the prefactor 2.
double series_summand(const ModelParams& params, double sigma, double alpha1, std::size_t n);
// Integral-test bound on the sum of summands n > terms.
double series_tail_bound(const ModelParams& params, double sigma, double alpha1, std::size_t terms);

RhsBound rhs_bound(const ModelParams& params, double sigma, double alpha1, const SeriesOptions& options = {});

struct BoxRung {
  double x_half_width = 10.0;
  double y_half_width = 4.5;
  double dx = 0.025;
  double dy = 0.05;
};

struct LhsOptions {
  double tol_disc = 1e-2;        // eigenvalues in [omega - tol_disc, omega) are left out
  double cauchy_tol = 1e-4;
  double negative_tol = 1e-3;
  std::size_t max_count = 10;
  ExtremalOptions eigen;
  AssemblyOptions assembly;
};

struct LadderRung {
  BoxRung box;
  std::size_t unknowns = 0;
  std::size_t inertia_count = 0;   // eigenvalues below omega - tol_disc
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  bool converged = true;
  std::string diagnostics;
  double seconds = 0.0;
};

struct LhsTrace {
  std::vector<double> eigenvalues;   // from the last rung, all below omega - tol_disc
  std::vector<double> residuals;
  std::vector<double> cauchy_differences;  // |E(last) - E(previous)| per eigenvalue
  std::vector<LadderRung> rungs;
  bool consistency_flag = false;     // some eigenvalue below -negative_tol
  std::string source;

  double lhs(double omega, double sigma) const;
};

// Eigenvalues of H below omega on each rung; the last two rungs must agree
// to cauchy_tol (UnconvergedError otherwise).
LhsTrace lhs_trace(const ModelParams& params, const std::vector<BoxRung>& ladder, const LhsOptions& options = {});

struct MomentBoundOptions {
  Gamma0Options gamma0;
  KappaOptions kappa;
  SeriesOptions series;
  LhsOptions lhs;
  std::vector<BoxRung> ladder;
  double regime_tol = 1e-7;
};

struct MomentBoundReport {
  double sigma = 0.0;
  double gamma0 = 0.0;
  double kappa = 0.0;
  double kappa_step = 0.0;
  Alpha1Result alpha;
  RhsBound rhs;
  double lhs = 0.0;
  std::string lhs_source;
  std::vector<double> eigenvalues;
  bool consistency_flag = false;
  bool satisfied = false;
  double margin = 0.0;
};

MomentBoundReport evaluate_bound(const ModelParams& params, double sigma, double gamma0, const KappaResult& kappa,
                                 const LhsTrace& trace, const SeriesOptions& series = {});

// kappa -> alpha1 -> rhs -> lhs for each sigma, sharing one eigenvalue ladder.
std::vector<MomentBoundReport> check_bound(const ModelParams& params, const std::vector<double>& sigmas,
                                           const MomentBoundOptions& options);

}  // namespace smilansky
