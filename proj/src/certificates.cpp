#include "smilansky/certificates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "smilansky/error.hpp"
#include "smilansky/format.hpp"
#include "smilansky/parallel.hpp"
#include "smilansky/quadrature.hpp"

namespace smilansky {
namespace {

// Gram matrix of {h, t h', t^2 h''} over the line.
std::array<double, 9> gram(const GroundState1D& ground) {
  const auto& rule = quad::gauss_legendre(8);
  std::array<double, 9> m{};
  const auto& nodes = ground.nodes;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = mid + half * rule.nodes[q];
      const std::array<double, 3> f{ground.value(t), t * ground.derivative(t),
                                    t * t * ground.second_derivative(t)};
      const double w = half * rule.weights[q];
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m[3 * r + c] += w * f[r] * f[c];
      }
    }
  }
  return m;
}

double quadratic(const std::array<double, 9>& m, const std::array<double, 3>& v) {
  double s = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) s += v[r] * m[3 * r + c] * v[c];
  }
  return s;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& options,
                 const char* what) {
  const auto r = quad::gauss_kronrod(f, a, b, options.rel_tol, 1e-300, options.max_intervals);
  if (!r.converged) {
    throw AccuracyError(std::string("quadrature for ") + what + " did not reach relative tolerance " +
                        format_double(options.rel_tol) + " (estimate " + format_double(r.error) + ")");
  }
  return r.value;
}

void check_indices(const std::vector<double>& list, const char* name) {
  if (list.empty()) throw ParameterError(std::string(name) + " list is empty");
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!(list[i] >= 1.0)) throw ParameterError(std::string(name) + " values must be >= 1");
    if (i > 0 && !(list[i] > list[i - 1])) throw ParameterError(std::string(name) + " list must ascend");
  }
}

// Inner integral over the potential support in t = x y, with panels broken
// at the potential's kinks.
double potential_panels(const PotentialSpec& v, const std::function<double(double)>& f) {
  const auto breaks = v.breakpoints();
  return quad::panels(f, breaks, 4, 16);
}

}  // namespace

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

QuasiModeReport critical_quasimode_residual(const GroundState1D& ground, double mu,
                                            const std::vector<double>& n_list, double regime_tol,
                                            const QuadratureOptions& options) {
  if (!ground.has_eigenfunction() || !(std::abs(ground.gamma0) <= regime_tol)) {
    throw RegimeError("critical quasimodes need |gamma0| <= " + format_double(regime_tol) + ", got gamma0 = " +
                      format_double(ground.gamma0));
  }
  if (!(mu >= 0.0)) throw DomainError("critical quasimodes cover mu >= 0 only");
  check_indices(n_list, "n");
  const auto chi = make_window(WindowRole::weyl_y);
  const auto m = gram(ground);
  const double g0 = ground.gamma0;
  const double root_mu = std::sqrt(mu);
  const double uncertainty = std::max(std::abs(g0), ground.error_estimate);

  QuasiModeReport out;
  out.regime = Regime::critical;
  out.mu = mu;
  const double norm2 = integrate([&](double z) { return chi(z) * chi(z) / z; }, 1.0, 2.0, options, "||psi||^2");
  for (double n : n_list) {
    // Coefficients of h, t h', t^2 h'' in the real (a) and imaginary (b) parts.
    const auto coefficients = [&, n](double z, double gamma) {
      const double y = n * z;
      const double c = chi(z);
      const double dc = chi.derivative(z);
      const double ddc = chi.second_derivative(z);
      const std::array<double, 3> a{y * y * gamma * c - ddc / (n * n), -2.0 * dc / (n * y), -c / (y * y)};
      const std::array<double, 3> b{-2.0 * root_mu * dc / n, -2.0 * root_mu * c / y, 0.0};
      return std::pair{a, b};
    };
    const auto residual2 = [&](double gamma) {
      return integrate(
          [&](double z) {
            const auto [a, b] = coefficients(z, gamma);
            return (quadratic(m, a) + quadratic(m, b)) / z;
          },
          1.0, 2.0, options, "||(H - mu) psi||^2");
    };
    const double total2 = residual2(g0);
    const double structural2 = residual2(0.0);
    const auto term = [&](auto coefficient, int slot) {
      return integrate(
          [&](double z) {
            const double c = coefficient(z);
            return c * c * m[4 * slot] / z;
          },
          1.0, 2.0, options, "cross term");
    };
    std::vector<double> terms{
        term([&](double z) { return chi(z) / (n * n * z * z); }, 2),
        term([&](double z) { return 2.0 * root_mu * chi(z) / (n * z); }, 1),
        term([&](double z) { return 2.0 * chi.derivative(z) / (n * n * z); }, 1),
        term([&](double z) { return 2.0 * root_mu * chi.derivative(z) / n; }, 0),
        term([&](double z) { return chi.second_derivative(z) / (n * n); }, 0),
    };
    const double structural = std::sqrt(structural2 / norm2);
    const double contamination = 4.0 * n * n * uncertainty / std::sqrt(norm2);
    if (contamination > 0.1 * structural) {
      throw AccuracyError("at n = " + format_double(n) + " the gamma0 uncertainty " + format_double(uncertainty) +
                          " amplified by (2n)^2 exceeds 10% of the structural residual " +
                          format_double(structural) + "; lower n or tighten the gamma0 accuracy");
    }
    out.indices.push_back(n);
    out.norms.push_back(std::sqrt(norm2));
    out.residuals.push_back(std::sqrt(total2 / norm2));
    out.structural_residuals.push_back(structural);
    out.term_norms2.push_back(std::move(terms));
    out.contamination.push_back(contamination);
  }
  out.fitted_slope = fitted_slope(out.indices, out.structural_residuals);
  return out;
}

QuasiModeReport subcritical_quasimode_residual(const ModelParams& params, double mu,
                                               const std::vector<double>& k_list,
                                               const QuadratureOptions& options) {
  params.validate();
  if (!(mu >= params.omega)) {
    throw DomainError("mu = " + format_double(mu) + " is below omega = " + format_double(params.omega) +
                      "; these quasimodes only cover [omega, infinity)");
  }
  check_indices(k_list, "k");
  const auto eta = make_window(WindowRole::weyl_x);
  const auto g = oscillator_ground_state(params.omega);
  const auto& v = params.potential;
  const double nu = mu - params.omega;
  const double lambda = params.lambda;

  const double eta1 = integrate([&](double z) { return std::pow(eta.derivative(z), 2); }, 1.0, 2.0, options, "eta'");
  const double eta2 =
      integrate([&](double z) { return std::pow(eta.second_derivative(z), 2); }, 1.0, 2.0, options, "eta''");
  const double norm2 = integrate([&](double z) { return eta(z) * eta(z); }, 1.0, 2.0, options, "eta");

  QuasiModeReport out;
  out.regime = Regime::subcritical;
  out.mu = mu;
  for (double k : k_list) {
    const double t1 = 4.0 * nu * eta1 / (k * k);
    const double t2 = eta2 / (k * k * k * k);
    double t3 = 0.0;
    double t4 = 0.0;
    if (lambda > 0.0) {
      // y = t/x on the channel |xy| <= a, x = k z.
      const auto inner = [&](double x, int power) {
        return potential_panels(v, [&](double t) {
          const double y = t / x;
          const double gy = g(y);
          const double vt = v(t);
          return power == 2 ? y * y * vt * gy * gy / x : y * y * y * y * vt * vt * gy * gy / x;
        });
      };
      t3 = 2.0 * lambda / (k * k * k) *
           integrate([&](double z) { return k * eta(z) * eta.second_derivative(z) * inner(k * z, 2); }, 1.0, 2.0,
                     options, "potential cross term");
      t4 = lambda * lambda / k *
           integrate([&](double z) { return k * eta(z) * eta(z) * inner(k * z, 4); }, 1.0, 2.0, options,
                     "potential term");
    }
    out.indices.push_back(k);
    out.norms.push_back(std::sqrt(norm2));
    out.structural_residuals.push_back(std::sqrt((t1 + t2) / norm2));
    out.residuals.push_back(std::sqrt(std::max(t1 + t2 + t3 + t4, 0.0) / norm2));
    out.term_norms2.push_back({t1, t2, t3, t4});
    out.contamination.push_back(0.0);
  }
  out.fitted_slope = fitted_slope(out.indices, out.residuals);
  return out;
}

TrialFormReport trial_form_value(const ModelParams& params, const std::vector<double>& k_list,
                                 const QuadratureOptions& options) {
  params.validate();
  check_indices(k_list, "k");
  const auto chi = make_window(WindowRole::trial);
  const auto g = oscillator_ground_state(params.omega);
  const auto& v = params.potential;
  const double a = v.a();
  const double dchi2 = integrate([&](double z) { return std::pow(chi.derivative(z), 2); }, -1.0, 1.0, options, "chi'");
  // g^2 is below e^{-64} beyond this height.
  const double y_cap = 8.0 / std::sqrt(params.omega);
  std::vector<double> v_breaks;
  for (double b : v.breakpoints()) {
    if (b > 0.0 && b < a) v_breaks.push_back(b);
  }

  TrialFormReport out;
  out.k_list = k_list;
  for (double k : k_list) {
    const double kinetic = dchi2 / (k * k);
    double potential = 0.0;
    if (params.lambda > 0.0) {
      // Both factors are even in x and y; integrate the first quadrant in
      // (x, y), breaking the y range where V(xy) has kinks.
      const auto column = [&](double x) {
        const double top = x > 0.0 ? std::min(a / x, y_cap) : y_cap;
        std::vector<double> breaks{0.0};
        for (double b : v_breaks) {
          if (x > 0.0 && b / x < top) breaks.push_back(b / x);
        }
        breaks.push_back(top);
        return quad::panels(
            [&](double y) {
              const double gy = g(y);
              return y * y * v(x * y) * gy * gy;
            },
            breaks, 4, 20);
      };
      const double x_switch = a / y_cap;
      const auto outer = [&](double x) { return std::pow(chi(x / k), 2) * column(x); };
      double sum = 0.0;
      if (x_switch < k) {
        sum = integrate(outer, 0.0, x_switch, options, "trial potential") +
              integrate(outer, x_switch, k, options, "trial potential");
      } else {
        sum = integrate(outer, 0.0, k, options, "trial potential");
      }
      potential = params.lambda / k * 4.0 * sum;
    }
    const double form = params.omega + kinetic - potential;
    out.kinetic_terms.push_back(kinetic);
    out.potential_terms.push_back(potential);
    out.form_values.push_back(form);
    if (!out.k_star && form < params.omega) out.k_star = k;
  }
  out.margin = params.omega - *std::min_element(out.form_values.begin(), out.form_values.end());
  return out;
}

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::spectral_inclusion: return "spectral-inclusion";
    case CertificateKind::below_threshold: return "below-threshold";
    case CertificateKind::moment_bound: return "moment-bound";
  }
  return "unknown";
}

CertificateReport spectral_inclusion(double mu, double radius, double index) {
  CertificateReport r;
  r.kind = CertificateKind::spectral_inclusion;
  r.certified = true;
  r.mu = mu;
  r.radius = radius;
  r.index = index;
  r.statement = "sigma(H) intersects [" + format_double(mu - radius) + ", " + format_double(mu + radius) + "]";
  return r;
}

std::vector<CertificateReport> spectrum_certificate(const ModelParams& params, const std::vector<double>& mu_grid,
                                                    const CertificateOptions& options) {
  params.validate();
  Gamma0Options gopt = options.gamma0;
  gopt.accuracy = std::min(gopt.accuracy, 0.1 * options.regime_tol);
  const auto ground = gamma0(params, gopt);
  Regime regime = Regime::critical;
  if (ground.gamma0 > options.regime_tol) regime = Regime::subcritical;
  else if (ground.gamma0 < -options.regime_tol) regime = Regime::supercritical;

  std::vector<CertificateReport> out(mu_grid.size());
  parallel_for(mu_grid.size(), [&](std::size_t i) {
    const double mu = mu_grid[i];
    CertificateReport skipped;
    skipped.mu = mu;
    if (regime == Regime::supercritical) {
      skipped.statement = "skipped: supercritical regime has no quasimode construction here";
      out[i] = skipped;
    } else if (regime == Regime::critical) {
      if (mu < 0.0) {
        skipped.statement = "skipped: below certified range mu >= 0";
        out[i] = skipped;
        return;
      }
      const auto r = critical_quasimode_residual(ground, mu, {options.critical_index}, options.regime_tol,
                                                 options.quadrature);
      out[i] = spectral_inclusion(mu, r.residuals.front(), options.critical_index);
    } else {
      if (mu < params.omega) {
        skipped.statement = "skipped: below certified range mu >= omega";
        out[i] = skipped;
        return;
      }
      const auto r = subcritical_quasimode_residual(params, mu, {options.subcritical_index}, options.quadrature);
      out[i] = spectral_inclusion(mu, r.residuals.front(), options.subcritical_index);
    }
  });
  return out;
}

CertificateReport below_threshold(double omega, double margin, double index) {
  CertificateReport r;
  r.kind = CertificateKind::below_threshold;
  r.certified = margin > 0.0;
  r.margin = margin;
  r.index = index;
  r.statement = r.certified ? "inf sigma(H) < " + format_double(omega) + " - " + format_double(margin)
                            : "inconclusive: no trial form value below " + format_double(omega);
  return r;
}

}  // namespace smilansky
