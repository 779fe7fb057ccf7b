#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smilansky/analysis1d.hpp"
#include "smilansky/error.hpp"
#include "smilansky/quadrature.hpp"

using namespace smilansky;

namespace {

ModelParams cosine(double omega, double lambda) {
  ModelParams p;
  p.omega = omega;
  p.lambda = lambda;
  p.potential = make_potential(PotentialKind::cosine_bump, 1.0, 1.0);
  return p;
}

// Frozen from the shooting oracle (RK4, step 1e-3; unchanged at 5e-4).
constexpr double kGamma0Lambda2 = 0.42955149322737085;
constexpr double kCriticalOmega1 = 2.8663043553858509;

}  // namespace

TEST_CASE("free case: gamma0 is omega squared") {
  CHECK(gamma0(cosine(1.0, 0.0)).gamma0 == 1.0);
  CHECK(gamma0(cosine(2.0, 0.0)).gamma0 == 4.0);
  CHECK_FALSE(gamma0(cosine(1.0, 0.0)).has_eigenfunction());
}

TEST_CASE("gamma0 at lambda = 2 against shooting") {
  const auto p = cosine(1.0, 2.0);
  const auto g = gamma0(p);
  CHECK(std::abs(g.gamma0 - oracle::shooting_gamma0(p)) <= 1e-8);
  CHECK(std::abs(g.gamma0 - kGamma0Lambda2) <= 1e-8);
  CHECK(g.error_estimate <= 1e-10);
  CHECK(g.extrapolated);
}

TEST_CASE("ground state interpolant") {
  const auto p = cosine(1.0, 2.0);
  const auto g = gamma0(p);
  const auto n2 = quad::gauss_kronrod([&](double x) { return g.value(x) * g.value(x); }, -g.half_width,
                                      g.half_width, 1e-13);
  CHECK(std::abs(n2.value - 1.0) <= 1e-10);

  // Monotone decay outside [-a-1, a+1].
  double previous = g.value(2.0);
  for (double x = 2.01; x < 30.0; x += 0.01) {
    const double v = g.value(x);
    CHECK(v <= previous);
    previous = v;
  }
  CHECK(std::abs(g.value(-3.3) - g.value(3.3)) <= 1e-10);

  // h'' from the ODE identity against a five-point stencil of the interpolant.
  const double d = 1e-2;
  for (double x : {-2.5, -0.7, 0.0, 0.3, 1.6}) {
    const double fd = (-g.value(x + 2 * d) + 16 * g.value(x + d) - 30 * g.value(x) + 16 * g.value(x - d) -
                       g.value(x - 2 * d)) / (12 * d * d);
    CHECK(std::abs(fd - g.second_derivative(x)) <= 1e-4);
  }
  // and h' against the analytic exponential tail slope
  const double rate = std::sqrt(1.0 - g.gamma0);
  CHECK(std::abs(g.derivative(4.0) + rate * g.value(4.0)) <= 1e-7 * g.value(0.0));
}

TEST_CASE("gamma0 strictly decreasing in lambda and below omega^2") {
  double previous = 1.0;
  for (double lambda : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const double g = gamma0(cosine(1.0, lambda)).gamma0;
    CHECK(g < previous);
    CHECK(g <= 1.0);
    previous = g;
  }
}

TEST_CASE("regime classification") {
  CHECK(classify(cosine(1.0, 0.0)).regime == Regime::subcritical);
  CHECK(classify(cosine(1.0, 1.0)).regime == Regime::subcritical);
  CHECK(classify(cosine(1.0, 4.0)).regime == Regime::supercritical);
  CHECK(classify(cosine(1.0, kCriticalOmega1)).regime == Regime::critical);
}

TEST_CASE("critical coupling") {
  const auto v = make_potential(PotentialKind::cosine_bump, 1.0, 1.0);
  const auto c1 = critical_lambda(1.0, v);
  CHECK(std::abs(c1.lambda - kCriticalOmega1) <= 1e-7);
  CHECK(std::abs(c1.gamma0) <= 1e-9);
  CHECK(gamma0(cosine(1.0, 0.99 * c1.lambda)).gamma0 > 0.0);
  CHECK(gamma0(cosine(1.0, 1.01 * c1.lambda)).gamma0 < 0.0);
  const auto c2 = critical_lambda(2.0, v, 1e-6);
  CHECK(c2.lambda > c1.lambda);
  CHECK(std::abs(c2.lambda - oracle::shooting_critical_lambda(2.0, v)) <= 1e-5);
}

TEST_CASE("critical coupling needs a bracket") {
  const auto v = make_potential(PotentialKind::cosine_bump, 1.0, 1.0);
  CHECK_THROWS_AS(critical_lambda(1.0, v, 1e-6, 2.0), BracketingError);
}

TEST_CASE("Neumann ground energy") {
  CHECK(std::abs(neumann_ground_energy(cosine(1.5, 0.0), 3.0) - 2.25) <= 1e-11);
  // Converges to gamma0 from below as the interval grows.
  const auto p = cosine(1.0, 1.4);
  const double g = gamma0(p).gamma0;
  const double e10 = neumann_ground_energy(p, 10.0);
  CHECK(e10 <= g + 1e-9);
  CHECK(std::abs(e10 - g) <= 1e-4);
}

TEST_CASE("kappa") {
  SUBCASE("free case picks the first scanned point") {
    const auto k = kappa(cosine(1.0, 0.0), 1.0);
    CHECK(k.kappa == 0.25);
  }
  SUBCASE("half critical coupling against a brute-force scan") {
    const auto p = cosine(1.0, 0.5 * kCriticalOmega1);
    const double g = gamma0(p).gamma0;
    const auto k = kappa(p, g);
    CHECK(k.step == 1e-3);
    CHECK(k.energy_at_kappa >= 0.5 * g);
    CHECK(neumann_ground_energy(p, k.kappa - 1e-3) < 0.5 * g);
    NeumannOptions fine;
    fine.nodes_per_a = 128;
    double brute = 0.0;
    for (int i = 1; i < 20000; ++i) {
      if (neumann_ground_energy(p, i * 1e-3, fine) >= 0.5 * g) {
        brute = i * 1e-3;
        break;
      }
    }
    CHECK(std::abs(k.kappa - brute) <= 1.5e-3);
    MESSAGE("kappa = " << k.kappa << " gamma0 = " << g);
  }
  CHECK_THROWS_AS(kappa(cosine(1.0, 1.0), -0.1), RegimeError);
}
