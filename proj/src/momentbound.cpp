#include "smilansky/momentbound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "smilansky/error.hpp"
#include "smilansky/format.hpp"

namespace smilansky {
namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.5)) {
    throw ParameterError("sigma = " + format_double(sigma) +
                         " must exceed 1/2: the series sum_n (c + (n-1) pi)^{-2 sigma} diverges otherwise");
  }
}

double coupling(const ModelParams& p) { return p.lambda * p.potential.sup_norm(); }

}  // namespace

Alpha1Result alpha1(const ModelParams& params, double gamma0, double kappa) {
  params.validate();
  if (!(gamma0 > 0.0)) throw RegimeError("alpha1 needs gamma0 > 0, got " + format_double(gamma0));
  if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
  const double a = params.potential.a();
  Alpha1Result out;
  out.branches[0] = std::sqrt(kappa);
  out.branches[1] = 2.0 * params.omega / gamma0;
  out.branches[2] = std::sqrt(coupling(params)) * a / std::sqrt(2.0 * params.omega);
  out.branch = static_cast<int>(std::max_element(out.branches, out.branches + 3) - out.branches);
  out.alpha1 = out.branches[out.branch];
  out.coupling_condition = coupling(params) * a * a / (out.alpha1 * out.alpha1) <= 2.0 * params.omega * (1 + 1e-15);
  out.emptiness_condition = out.alpha1 >= out.branches[1];
  return out;
}

double series_summand(const ModelParams& params, double sigma, double alpha, std::size_t n) {
  const double lv = coupling(params);
  if (lv == 0.0) return 0.0;
  const double a = params.potential.a();
  const double c = std::sqrt(lv) * a;
  const double base = lv * a * a / (alpha * (c + static_cast<double>(n - 1) * std::numbers::pi));
  return 2.0 * std::pow(base, 2.0 * sigma);
}

double series_tail_bound(const ModelParams& params, double sigma, double alpha, std::size_t terms) {
  const double lv = coupling(params);
  if (lv == 0.0) return 0.0;
  const double a = params.potential.a();
  const double c = std::sqrt(lv) * a;
  // The summand is decreasing in n, so sum_{n > N} f(n) <= int_N^inf f.
  const double prefactor = 2.0 * std::pow(lv * a * a / alpha, 2.0 * sigma);
  const double at = c + (static_cast<double>(terms) - 1.0) * std::numbers::pi;
  return prefactor * std::pow(at, 1.0 - 2.0 * sigma) / (std::numbers::pi * (2.0 * sigma - 1.0));
}

RhsBound rhs_bound(const ModelParams& params, double sigma, double alpha, const SeriesOptions& options) {
  params.validate();
  check_sigma(sigma);
  if (!(alpha > 0.0)) throw ParameterError("alpha1 must be positive");
  RhsBound out;
  if (coupling(params) > 0.0) {
    long double partial = 0.0L;
    std::size_t n = 0;
    double tail = 0.0;
    // Check the tail every so often; the summand is cheap.
    while (n < options.max_terms) {
      ++n;
      partial += series_summand(params, sigma, alpha, n);
      if (n % 64 == 0 || n == options.max_terms) {
        tail = series_tail_bound(params, sigma, alpha, n);
        if (tail < options.rel_tail * static_cast<double>(partial)) break;
      }
    }
    out.series_terms = n;
    out.series_partial = static_cast<double>(partial);
    out.series_tail = series_tail_bound(params, sigma, alpha, n);
    out.series = out.series_partial + out.series_tail;
  }
  const double w = params.omega + coupling(params) * alpha * alpha;
  out.box = std::pow(2.0 * alpha * std::sqrt(w) / std::numbers::pi + 1.0, 2) * std::pow(w, sigma);
  out.total = out.series + out.box;
  return out;
}

double LhsTrace::lhs(double omega, double sigma) const {
  double s = 0.0;
  for (double e : eigenvalues) s += std::pow(std::max(omega - e, 0.0), sigma);
  return s;
}

LhsTrace lhs_trace(const ModelParams& params, const std::vector<BoxRung>& ladder, const LhsOptions& options) {
  params.validate();
  if (ladder.empty()) throw ParameterError("box ladder is empty");
  const double cut = params.omega - options.tol_disc;
  LhsTrace out;
  for (const auto& box : ladder) {
    const auto start = std::chrono::steady_clock::now();
    const auto grid = Grid2D::with_spacing(box.x_half_width, box.y_half_width, box.dx, box.dy);
    const auto a = assemble_H(params, grid, options.assembly);
    LadderRung rung;
    rung.box = box;
    rung.unknowns = a.dim();
    rung.inertia_count = count_eigenvalues_below(a, cut);
    if (rung.inertia_count > options.max_count) {
      throw UnconvergedError(std::to_string(rung.inertia_count) + " eigenvalues below omega - tol_disc on box " +
                             format_double(box.x_half_width) + " x " + format_double(box.y_half_width) +
                             ", above max_count = " + std::to_string(options.max_count));
    }
    if (rung.inertia_count > 0) {
      const auto result = extremal_sparse_eigs(a, rung.inertia_count, options.eigen);
      rung.converged = result.converged;
      rung.diagnostics = result.diagnostics;
      rung.eigenvalues = result.eigenvalues;
      rung.residuals = result.residuals;
      if (!result.converged) {
        throw UnconvergedError("eigensolver did not converge on box " + format_double(box.x_half_width) + " x " +
                               format_double(box.y_half_width) + ": " + result.diagnostics);
      }
      for (double e : rung.eigenvalues) {
        if (!(e < cut)) {
          throw SolverError("inertia reported " + std::to_string(rung.inertia_count) +
                            " eigenvalues below " + format_double(cut) + " but the solver returned " +
                            format_double(e));
        }
      }
    }
    rung.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.rungs.push_back(std::move(rung));
  }

  const auto& last = out.rungs.back();
  if (out.rungs.size() >= 2) {
    const auto& prev = out.rungs[out.rungs.size() - 2];
    std::ostringstream trend;
    for (const auto& r : out.rungs) trend << " [" << r.eigenvalues.size() << " below cut]";
    if (prev.eigenvalues.size() != last.eigenvalues.size()) {
      throw UnconvergedError("eigenvalue count below omega - tol_disc changes between the last two rungs:" +
                             trend.str());
    }
    for (std::size_t i = 0; i < last.eigenvalues.size(); ++i) {
      const double d = std::abs(last.eigenvalues[i] - prev.eigenvalues[i]);
      out.cauchy_differences.push_back(d);
      if (d >= options.cauchy_tol) {
        throw UnconvergedError("eigenvalue " + std::to_string(i) + " moved by " + format_double(d) +
                               " between the last two rungs (" + format_double(prev.eigenvalues[i]) + " -> " +
                               format_double(last.eigenvalues[i]) + ")");
      }
    }
  }
  out.eigenvalues = last.eigenvalues;
  out.residuals = last.residuals;
  for (double e : out.eigenvalues) {
    if (e < -options.negative_tol) out.consistency_flag = true;
  }
  std::ostringstream src;
  src << out.eigenvalues.size() << " eigenvalue(s) below omega - " << format_double(options.tol_disc)
      << " from boxes";
  for (const auto& r : out.rungs) {
    src << " " << format_double(r.box.x_half_width) << "x" << format_double(r.box.y_half_width) << "/"
        << r.unknowns;
  }
  if (!out.cauchy_differences.empty()) {
    src << "; max Cauchy difference "
        << format_double(*std::max_element(out.cauchy_differences.begin(), out.cauchy_differences.end()));
  }
  out.source = src.str();
  return out;
}

MomentBoundReport evaluate_bound(const ModelParams& params, double sigma, double gamma0_value,
                                 const KappaResult& k, const LhsTrace& trace, const SeriesOptions& series) {
  check_sigma(sigma);
  MomentBoundReport out;
  out.sigma = sigma;
  out.gamma0 = gamma0_value;
  out.kappa = k.kappa;
  out.kappa_step = k.step;
  out.alpha = alpha1(params, gamma0_value, k.kappa);
  out.rhs = rhs_bound(params, sigma, out.alpha.alpha1, series);
  out.lhs = trace.lhs(params.omega, sigma);
  out.lhs_source = trace.source;
  out.eigenvalues = trace.eigenvalues;
  out.consistency_flag = trace.consistency_flag;
  out.margin = out.rhs.total - out.lhs;
  out.satisfied = out.lhs <= out.rhs.total;
  return out;
}

std::vector<MomentBoundReport> check_bound(const ModelParams& params, const std::vector<double>& sigmas,
                                           const MomentBoundOptions& options) {
  params.validate();
  for (double s : sigmas) check_sigma(s);
  Gamma0Options gopt = options.gamma0;
  gopt.accuracy = std::min(gopt.accuracy, 0.1 * options.regime_tol);
  const auto ground = gamma0(params, gopt);
  if (!(ground.gamma0 > options.regime_tol)) {
    throw RegimeError("the moment bound needs the subcritical regime; gamma0 = " + format_double(ground.gamma0));
  }
  const auto k = kappa(params, ground.gamma0, options.kappa);
  const auto trace = lhs_trace(params, options.ladder, options.lhs);
  std::vector<MomentBoundReport> out;
  for (double s : sigmas) out.push_back(evaluate_bound(params, s, ground.gamma0, k, trace, options.series));
  return out;
}

}  // namespace smilansky
