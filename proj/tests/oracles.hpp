#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <algorithm>
#include <functional>

#include "smilansky/model.hpp"
#include "smilansky/quadrature.hpp"

namespace oracle {

// Lowest eigenvalue of -u'' + (omega^2 - lambda V) u by shooting. Outside
// [-a, a] the decaying solution is a pure exponential, so integration starts
// at x = -a and the even ground state is found from u'(0) = 0 by bisection
// on E: the energy is too high when u has a node or u'(0) < 0.
inline bool too_high(const smilansky::ModelParams& p, double e, double step = 1e-3) {
  const double a = p.potential.a();
  const double w2 = p.omega * p.omega;
  double u = 1.0;
  double du = std::sqrt(std::max(w2 - e, 0.0));
  const auto q = [&](double x) { return w2 - p.lambda * p.potential(x) - e; };
  const int steps = static_cast<int>(std::ceil(a / step));
  const double h = a / steps;
  double x = -a;
  for (int i = 0; i < steps; ++i) {
    const double k1u = du, k1v = q(x) * u;
    const double k2u = du + 0.5 * h * k1v, k2v = q(x + 0.5 * h) * (u + 0.5 * h * k1u);
    const double k3u = du + 0.5 * h * k2v, k3v = q(x + 0.5 * h) * (u + 0.5 * h * k2u);
    const double k4u = du + h * k3v, k4v = q(x + h) * (u + h * k3u);
    const double un = u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (un <= 0.0) return true;
    u = un;
    x += h;
  }
  return du < 0.0;
}

inline double shooting_gamma0(const smilansky::ModelParams& p, double step = 1e-3) {
  double lo = p.omega * p.omega - p.lambda * p.potential.sup_norm();
  double hi = p.omega * p.omega;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (too_high(p, mid, step)) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Coupling at which the shooting ground energy crosses zero.
inline double shooting_critical_lambda(double omega, const smilansky::PotentialSpec& v) {
  smilansky::ModelParams p;
  p.omega = omega;
  p.potential = v;
  double lo = 0.0;
  double hi = 1.0;
  p.lambda = hi;
  while (!too_high(p, 0.0)) {
    lo = hi;
    hi *= 2;
    p.lambda = hi;
  }
  for (int i = 0; i < 80; ++i) {
    p.lambda = 0.5 * (lo + hi);
    if (too_high(p, 0.0)) hi = p.lambda;
    else lo = p.lambda;
  }
  return 0.5 * (lo + hi);
}

// Potential part of the trial form in (t, y) coordinates, t = x y:
// (lambda/k) int g^2 |y| int V(t) chi(t/(k y))^2 dt dy, y > 0 doubled.
inline double trial_potential_term(const smilansky::ModelParams& p, double k) {
  const auto chi = smilansky::make_window(smilansky::WindowRole::trial);
  const auto g = smilansky::oscillator_ground_state(p.omega);
  const double a = p.potential.a();
  const auto gk = [](const std::function<double(double)>& f, double lo, double hi) {
    return smilansky::quad::gauss_kronrod(f, lo, hi, 1e-12, 1e-300, 20000).value;
  };
  return 2 * p.lambda / k * gk(
                                [&](double y) {
                                  const double ub = std::min(a, k * y);
                                  return g(y) * g(y) * y *
                                         gk([&](double t) { return p.potential(t) * std::pow(chi(t / (k * y)), 2); },
                                            -ub, ub);
                                },
                                0.0, 9.0 / std::sqrt(p.omega));
}

inline double trial_kinetic_term(double k) {
  const auto chi = smilansky::make_window(smilansky::WindowRole::trial);
  return smilansky::quad::gauss_kronrod([&](double z) { return std::pow(chi.derivative(z), 2); }, chi.z0(), chi.z1(),
                                        1e-13, 1e-300, 20000)
             .value /
         (k * k);
}

}  // namespace oracle
