#include "smilansky/analysis1d.hpp"

#include <algorithm>
#include <cmath>

#include "smilansky/eigensolve.hpp"
#include "smilansky/error.hpp"
#include "smilansky/format.hpp"
#include "smilansky/quadrature.hpp"

namespace smilansky {
namespace {

struct Level {
  double eigenvalue = 0.0;
  std::vector<double> vector;  // interior nodes, unit discrete L2 norm, positive sum
};

Level dirichlet_level(const ModelParams& params, double half_width, double spacing, bool want_vector) {
  const auto cells = static_cast<std::size_t>(std::llround(2.0 * half_width / spacing));
  const Grid1D grid(half_width, cells - 1, BoundaryCondition::dirichlet);
  const auto t = tridiagonal_L(params, grid);
  auto result = tridiagonal_lowest(t, 1, want_vector);
  Level level;
  level.eigenvalue = result.eigenvalues.front();
  if (want_vector) {
    level.vector = std::move(result.eigenvectors.front());
    double sum = 0.0;
    double sq = 0.0;
    for (double v : level.vector) {
      sum += v;
      sq += v * v;
    }
    const double scale = (sum < 0.0 ? -1.0 : 1.0) / std::sqrt(sq * spacing);
    for (double& v : level.vector) v *= scale;
  }
  return level;
}

double edge_ratio(const std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  const std::size_t n = v.size();
  double edge = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, n); ++i) {
    edge = std::max({edge, std::abs(v[i]), std::abs(v[n - 1 - i])});
  }
  return edge / peak;
}

// Cubic Hermite on [x0, x0 + d] evaluated at local coordinate s in [0, 1].
double hermite(double s, double d, double h0, double h1, double m0, double m1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * h0 + (s3 - 2 * s2 + s) * d * m0 + (-2 * s3 + 3 * s2) * h1 +
         (s3 - s2) * d * m1;
}

double hermite_slope(double s, double d, double h0, double h1, double m0, double m1) {
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * h0 + (-6 * s2 + 6 * s) * h1) / d + (3 * s2 - 4 * s + 1) * m0 +
         (3 * s2 - 2 * s) * m1;
}

}  // namespace

double GroundState1D::value(double x) const {
  if (!has_eigenfunction()) throw DomainError("no ground state: inf sigma(L) is not an eigenvalue");
  if (!(std::abs(x) < half_width)) return 0.0;
  const double u = (x + half_width) / spacing;
  const auto i = std::min(static_cast<std::size_t>(u), nodes.size() - 2);
  return hermite(u - static_cast<double>(i), spacing, h_values[i], h_values[i + 1], dh_values[i],
                 dh_values[i + 1]);
}

double GroundState1D::derivative(double x) const {
  if (!has_eigenfunction()) throw DomainError("no ground state: inf sigma(L) is not an eigenvalue");
  if (!(std::abs(x) < half_width)) return 0.0;
  const double u = (x + half_width) / spacing;
  const auto i = std::min(static_cast<std::size_t>(u), nodes.size() - 2);
  return hermite_slope(u - static_cast<double>(i), spacing, h_values[i], h_values[i + 1], dh_values[i],
                       dh_values[i + 1]);
}

double GroundState1D::second_derivative(double x) const {
  const double w2 = params.omega * params.omega;
  return (w2 - params.lambda * params.potential(x) - gamma0) * value(x);
}

GroundState1D gamma0(const ModelParams& params, const Gamma0Options& options) {
  params.validate();
  if (!(options.accuracy > 0.0)) throw ParameterError("gamma0 accuracy must be positive");
  GroundState1D out;
  out.params = params;
  const double w2 = params.omega * params.omega;
  if (params.lambda == 0.0) {
    out.gamma0 = w2;
    return out;
  }

  const double a = params.potential.a();
  int per_a = options.nodes_per_a;
  const auto snap = [&](double r) { return std::ceil(r / a * options.nodes_per_a) * a / options.nodes_per_a; };
  double half_width = snap(a + 32.0 / params.omega);

  // Grow the box until the coarse eigenvector has decayed at the edges.
  while (true) {
    const auto coarse = dirichlet_level(params, half_width, a / per_a, true);
    if (edge_ratio(coarse.vector) <= options.decay_ratio) break;
    if (half_width >= options.max_half_width) {
      throw DomainError("ground state has not decayed to " + format_double(options.decay_ratio) +
                        " of its peak at R = " + format_double(half_width) +
                        "; gamma0 is too close to omega^2 (lambda = " + format_double(params.lambda) + ")");
    }
    half_width = std::min(snap(1.5 * half_width), options.max_half_width);
  }

  Level l0, l1, l2;
  while (true) {
    const double d = a / per_a;
    l0 = dirichlet_level(params, half_width, d, false);
    l1 = dirichlet_level(params, half_width, d / 2, true);
    l2 = dirichlet_level(params, half_width, d / 4, false);
    const double r1 = (4.0 * l1.eigenvalue - l0.eigenvalue) / 3.0;
    const double r2 = (4.0 * l2.eigenvalue - l1.eigenvalue) / 3.0;
    out.gamma0 = (16.0 * r2 - r1) / 15.0;
    out.error_estimate = std::abs(r2 - r1) / 15.0;
    out.raw_levels = {l0.eigenvalue, l1.eigenvalue, l2.eigenvalue};
    if (out.error_estimate <= options.accuracy) break;
    if (2 * per_a > options.max_nodes_per_a) {
      throw AccuracyError("gamma0 error estimate " + format_double(out.error_estimate) +
                          " above target " + format_double(options.accuracy) + " at spacing a/" +
                          std::to_string(4 * per_a));
    }
    per_a *= 2;
  }
  out.extrapolated = true;
  if (out.gamma0 > w2 + 10.0 * out.error_estimate + 1e-12) {
    throw AccuracyError("computed gamma0 = " + format_double(out.gamma0) + " exceeds omega^2");
  }

  // Eigenfunction: extrapolate the D/4 vector onto the D/2 nodes.
  const auto fine = dirichlet_level(params, half_width, a / per_a / 4, true);
  const std::size_t n = l1.vector.size();
  out.half_width = half_width;
  out.spacing = a / per_a / 2;
  out.nodes.resize(n + 2);
  out.h_values.assign(n + 2, 0.0);
  for (std::size_t i = 0; i < n + 2; ++i) out.nodes[i] = -half_width + static_cast<double>(i) * out.spacing;
  out.nodes.back() = half_width;
  for (std::size_t i = 0; i < n; ++i) {
    out.h_values[i + 1] = (4.0 * fine.vector[2 * i + 1] - l1.vector[i]) / 3.0;
  }
  const auto& h = out.h_values;
  const double d = out.spacing;
  out.dh_values.assign(n + 2, 0.0);
  out.dh_values[0] = h[1] / d;
  out.dh_values[n + 1] = -h[n] / d;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i >= 2 && i + 2 <= n + 1) {
      out.dh_values[i] = (h[i - 2] - 8.0 * h[i - 1] + 8.0 * h[i + 1] - h[i + 2]) / (12.0 * d);
    } else {
      out.dh_values[i] = (h[i + 1] - h[i - 1]) / (2.0 * d);
    }
  }

  // Renormalise the interpolant: 4-point Gauss is exact on cubic squares.
  const auto& rule = quad::gauss_legendre(4);
  double norm2 = 0.0;
  for (std::size_t i = 0; i + 1 < out.nodes.size(); ++i) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = 0.5 * (rule.nodes[q] + 1.0);
      const double v = hermite(s, d, h[i], h[i + 1], out.dh_values[i], out.dh_values[i + 1]);
      norm2 += 0.5 * d * rule.weights[q] * v * v;
    }
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& v : out.h_values) v *= scale;
  for (double& v : out.dh_values) v *= scale;
  return out;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "unknown";
}

RegimeClassification classify(const ModelParams& params, double tolerance, const Gamma0Options& options) {
  if (!(tolerance > 0.0)) throw ParameterError("regime tolerance must be positive");
  Gamma0Options opt = options;
  opt.accuracy = std::min(opt.accuracy, 0.1 * tolerance);
  const auto ground = gamma0(params, opt);
  RegimeClassification out;
  out.gamma0 = ground.gamma0;
  out.tolerance = tolerance;
  out.error_estimate = ground.error_estimate;
  if (ground.gamma0 > tolerance) out.regime = Regime::subcritical;
  else if (ground.gamma0 < -tolerance) out.regime = Regime::supercritical;
  else out.regime = Regime::critical;
  return out;
}

CriticalLambdaResult critical_lambda(double omega, const PotentialSpec& potential, double bracket_tol,
                                     double lambda_max, const Gamma0Options& options) {
  if (!(bracket_tol > 0.0)) throw ParameterError("bracket tolerance must be positive");
  ModelParams params;
  params.omega = omega;
  params.potential = potential;
  CriticalLambdaResult out;
  const auto g = [&](double lambda) {
    params.lambda = lambda;
    ++out.evaluations;
    return gamma0(params, options).gamma0;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > lambda_max) {
      throw BracketingError("gamma0 stays non-negative for lambda up to " + format_double(lambda_max));
    }
  }
  while (hi - lo > bracket_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) >= 0.0) lo = mid;
    else hi = mid;
  }
  out.lower = lo;
  out.upper = hi;
  out.lambda = 0.5 * (lo + hi);
  out.gamma0 = g(out.lambda);
  return out;
}

double neumann_ground_energy(const ModelParams& params, double k, const NeumannOptions& options) {
  params.validate();
  if (!(k > 0.0)) throw ParameterError("Neumann half-width must be positive");
  const double target = params.potential.a() / options.nodes_per_a;
  const auto cells = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(2.0 * k / target)),
                                           static_cast<std::size_t>(options.min_nodes - 1));
  const Grid1D coarse(k, cells + 1, BoundaryCondition::neumann);
  const Grid1D fine(k, 2 * cells + 1, BoundaryCondition::neumann);
  AssemblyOptions quiet;
  const double e0 = tridiagonal_lowest(tridiagonal_L(params, coarse, quiet), 1).eigenvalues.front();
  const double e1 = tridiagonal_lowest(tridiagonal_L(params, fine, quiet), 1).eigenvalues.front();
  return (4.0 * e1 - e0) / 3.0;
}

KappaResult kappa(const ModelParams& params, double gamma0_value, const KappaOptions& options) {
  params.validate();
  if (!(gamma0_value > 0.0)) {
    throw RegimeError("kappa needs gamma0 > 0, got " + format_double(gamma0_value));
  }
  if (!(options.step > 0.0) || !(options.fine_step > 0.0) || options.fine_step > options.step) {
    throw ParameterError("kappa scan steps must satisfy 0 < fine_step <= step");
  }
  KappaResult out;
  out.gamma0 = gamma0_value;
  const double threshold = 0.5 * gamma0_value;
  const auto energy = [&](double k) {
    const double e = neumann_ground_energy(params, k, options.neumann);
    out.trace.emplace_back(k, e);
    return e;
  };

  const auto coarse_count = static_cast<long>(std::floor(options.k_max / options.step + 1e-9));
  long found = -1;
  bool previous_ok = false;
  for (long i = 1; i <= coarse_count + 1; ++i) {
    const bool ok = energy(static_cast<double>(i) * options.step) >= threshold;
    if (ok && previous_ok) {
      found = i - 1;
      break;
    }
    previous_ok = ok && i <= coarse_count;
  }
  if (found < 0) {
    throw SearchError("no k <= " + format_double(options.k_max) + " with inf sigma(l_k) >= gamma0/2 = " +
                      format_double(threshold) + "; last trace entry k = " +
                      format_double(out.trace.back().first) + ", energy " +
                      format_double(out.trace.back().second));
  }

  const double k_coarse = static_cast<double>(found) * options.step;
  out.kappa = k_coarse;
  out.step = options.step;
  if (found > 1) {
    const double start = k_coarse - options.step;
    const auto fine_count = static_cast<long>(std::llround(options.step / options.fine_step));
    for (long j = 1; j <= fine_count; ++j) {
      const double k = start + static_cast<double>(j) * options.fine_step;
      if (energy(k) >= threshold) {
        out.kappa = k;
        break;
      }
    }
    out.step = options.fine_step;
  }
  out.energy_at_kappa = neumann_ground_energy(params, out.kappa, options.neumann);
  return out;
}

}  // namespace smilansky
