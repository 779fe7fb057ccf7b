#include <doctest.h>

#include <cmath>
#include <numbers>

#include "smilansky/analysis1d.hpp"
#include "smilansky/assembly.hpp"
#include "smilansky/certificates.hpp"
#include "smilansky/eigensolve.hpp"
#include "smilansky/error.hpp"
#include "smilansky/quadrature.hpp"
#include "oracles.hpp"

using namespace smilansky;

namespace {

constexpr double kCritical = 2.8663043553858509;

ModelParams cosine(double lambda, double omega = 1.0) {
  ModelParams p;
  p.omega = omega;
  p.lambda = lambda;
  p.potential = make_potential(PotentialKind::cosine_bump, 1.0, 1.0);
  return p;
}

double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-11) {
  return quad::gauss_kronrod(f, a, b, tol, 1e-300, 20000).value;
}

// ||(H - mu) psi_n||^2 straight from the x, y expansion, nested adaptive.
double critical_residual2_direct(const GroundState1D& h, double mu, double n) {
  const auto chi = make_window(WindowRole::weyl_y);
  const double rm = std::sqrt(mu);
  const double g0 = h.gamma0;
  return gk(
      [&](double y) {
        const double z = y / n;
        const double c = chi(z), dc = chi.derivative(z) / n, ddc = chi.second_derivative(z) / (n * n);
        const auto f = [&](double x) {
          const double t = x * y;
          const double re = y * y * g0 * h.value(t) * c - x * x * h.second_derivative(t) * c -
                            2 * x * h.derivative(t) * dc - h.value(t) * ddc;
          const double im = -2 * rm * x * h.derivative(t) * c - 2 * rm * h.value(t) * dc;
          return re * re + im * im;
        };
        const double r = h.half_width / y;
        const double s = 1.0 / y;
        return gk(f, -r, -s, 1e-11) + gk(f, -s, s, 1e-11) + gk(f, s, r, 1e-11);
      },
      n, 2 * n, 1e-10);
}

}  // namespace

TEST_CASE("critical quasimode") {
  const auto ground = gamma0(cosine(kCritical));
  REQUIRE(std::abs(ground.gamma0) <= 1e-7);
  const std::vector<double> ns{4, 8, 16, 32};

  SUBCASE("norms and slope at mu = 1") {
    const auto r = critical_quasimode_residual(ground, 1.0, ns);
    for (double norm : r.norms) {
      CHECK(norm * norm >= 0.5);
      CHECK(norm * norm <= 1.0);
    }
    CHECK(r.fitted_slope >= -1.25);
    CHECK(r.fitted_slope <= -0.75);
    CHECK(r.residuals.back() < r.residuals.front());
    for (std::size_t i = 0; i < ns.size(); ++i) {
      CHECK(std::abs(r.residuals[i] - r.structural_residuals[i]) <= r.contamination[i]);
    }
  }

  SUBCASE("cross-term bounds") {
    const double mu = 2.0;
    const auto r = critical_quasimode_residual(ground, mu, ns);
    const auto chi = make_window(WindowRole::weyl_y);
    const double chi2 = gk([&](double z) { return chi(z) * chi(z); }, 1, 2);
    const auto line = [&](const std::function<double(double)>& f) {
      return gk(f, -ground.half_width, -1) + gk(f, -1, 0) + gk(f, 0, 1) + gk(f, 1, ground.half_width);
    };
    const double t4h2 = line([&](double t) { return std::pow(t * t * ground.second_derivative(t), 2); });
    const double t2h1 = line([&](double t) { return std::pow(t * ground.derivative(t), 2); });
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double n = ns[i];
      CHECK(r.term_norms2[i][0] <= chi2 * t4h2 / std::pow(n, 4) * (1 + 1e-9));
      CHECK(r.term_norms2[i][1] <= 4 * mu * chi2 * t2h1 / (n * n) * (1 + 1e-9));
    }
  }

  SUBCASE("against direct two-dimensional quadrature") {
    for (double mu : {0.0, 1.0}) {
      const auto r = critical_quasimode_residual(ground, mu, {4.0});
      const double direct = critical_residual2_direct(ground, mu, 4.0);
      CHECK(std::abs(r.residuals[0] * r.residuals[0] * r.norms[0] * r.norms[0] - direct) <= 1e-8 * direct);
    }
  }

  SUBCASE("mu = 0 decays faster") {
    const auto r = critical_quasimode_residual(ground, 0.0, ns);
    CHECK(r.fitted_slope < -1.75);
  }

  CHECK_THROWS_AS(critical_quasimode_residual(gamma0(cosine(2.0)), 1.0, ns), RegimeError);
  CHECK_THROWS_AS(critical_quasimode_residual(ground, -1.0, ns), DomainError);
}

TEST_CASE("critical quasimode refuses a contaminated ground state") {
  auto ground = gamma0(cosine(kCritical));
  ground.error_estimate = 1e-6;
  CHECK_THROWS_AS(critical_quasimode_residual(ground, 1.0, {4, 8, 16, 32, 64, 128}), AccuracyError);
}

TEST_CASE("subcritical quasimode") {
  const auto p = cosine(0.5 * kCritical);
  const std::vector<double> ks{4, 8, 16, 32};

  SUBCASE("unit norm and potential-term bound") {
    const auto r = subcritical_quasimode_residual(p, 1.5, ks);
    for (double norm : r.norms) CHECK(std::abs(norm - 1.0) <= 1e-9);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double k = ks[i];
      const double bound = std::pow(p.lambda, 2) / std::pow(k, 4) * std::erf(1.0 / k);
      CHECK(r.term_norms2[i][3] <= bound);
      CHECK(r.term_norms2[i][3] > 0.0);
    }
    CHECK(r.residuals.back() < r.residuals.front());
    // The eta' term takes over at large k.
    const auto far = subcritical_quasimode_residual(p, 1.5, {128, 256, 512, 1024});
    CHECK(far.fitted_slope == doctest::Approx(-1.0).epsilon(0.02));
  }

  SUBCASE("free case at the threshold decays like k^-2") {
    const auto r = subcritical_quasimode_residual(cosine(0.0), 1.0, ks);
    CHECK(r.fitted_slope == doctest::Approx(-2.0).epsilon(1e-6));
    for (std::size_t i = 0; i < ks.size(); ++i) CHECK(r.residuals[i] == r.structural_residuals[i]);
  }

  SUBCASE("against direct two-dimensional quadrature") {
    const double mu = 1.5;
    const double k = 2.0;
    const auto r = subcritical_quasimode_residual(p, mu, {k});
    const auto eta = make_window(WindowRole::weyl_x);
    const auto g = oscillator_ground_state(1.0);
    const double rn = std::sqrt(mu - 1.0);
    const double direct = gk(
        [&](double x) {
          const double e = eta(x / k), de = eta.derivative(x / k) / k, dde = eta.second_derivative(x / k) / (k * k);
          const auto f = [&](double y) {
            const double re = -g(y) * dde - p.lambda * y * y * p.potential(x * y) * g(y) * e;
            const double im = -2 * rn * g(y) * de;
            return (re * re + im * im) / k;
          };
          const double s = 1.0 / x;
          return gk(f, -10, -s) + gk(f, -s, 0) + gk(f, 0, s) + gk(f, s, 10);
        },
        k, 2 * k, 1e-10);
    CHECK(r.residuals[0] * r.residuals[0] == doctest::Approx(direct).epsilon(1e-8));
  }

  CHECK_THROWS_AS(subcritical_quasimode_residual(p, 0.5, ks), DomainError);
}

TEST_CASE("trial form") {
  SUBCASE("free case is the window penalty") {
    const auto chi = make_window(WindowRole::trial);
    const double d2 = gk([&](double z) { return std::pow(chi.derivative(z), 2); }, -1, 1);
    const auto r = trial_form_value(cosine(0.0, 1.5), {2, 4, 8});
    for (std::size_t i = 0; i < 3; ++i) {
      const double k = r.k_list[i];
      CHECK(r.form_values[i] == doctest::Approx(1.5 + d2 / (k * k)).epsilon(1e-12));
      CHECK(r.form_values[i] > 1.5);
    }
    CHECK_FALSE(r.k_star.has_value());
  }

  SUBCASE("reference subcritical coupling against the (t, y) oracle") {
    const auto p = cosine(0.5 * kCritical);
    const std::vector<double> ks{2, 4, 8, 16, 32, 64};
    const auto r = trial_form_value(p, ks);
    REQUIRE(r.k_star.has_value());
    CHECK(r.margin > 0.0);
    const auto chi = make_window(WindowRole::trial);
    const double alpha = chi.alpha();
    const double tail = std::sqrt(1.0 / std::numbers::pi) * std::exp(-1.0) / 2.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double k = ks[i];
      const double oracle = oracle::trial_potential_term(p, k);
      CHECK(std::abs(r.potential_terms[i] - oracle) <= 1e-7);
      if (k >= 2) CHECK(r.potential_terms[i] >= alpha * alpha * p.lambda / k * tail * p.potential.integral());
    }
    const auto it = std::find(ks.begin(), ks.end(), *r.k_star);
    CHECK(r.form_values[it - ks.begin()] < 1.0);
  }
}

TEST_CASE("matrix-level soundness of the inclusion radius") {
  // Sample phi_k on a grid and compare with the discrete spectrum by inertia.
  const auto p = cosine(1.0);
  const auto grid = Grid2D::with_spacing(9.0, 2.0, 1.0 / 16, 0.05);
  const auto a = assemble_H(p, grid);
  const auto eta = make_window(WindowRole::weyl_x);
  const auto g = oscillator_ground_state(1.0);
  const auto xs = grid.x().nodes();
  const auto ys = grid.y().nodes();
  for (double mu : {1.0, 1.5, 3.0}) {
    for (double k : {2.0, 4.0}) {
      std::vector<double> re(a.dim()), im(a.dim()), are(a.dim()), aim(a.dim());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
          const double v = g(ys[j]) * eta(xs[i] / k);
          const double phase = std::sqrt(mu - 1.0) * xs[i];
          re[i * ys.size() + j] = v * std::cos(phase);
          im[i * ys.size() + j] = v * std::sin(phase);
        }
      }
      a.multiply(re, are);
      a.multiply(im, aim);
      double num = 0, den = 0;
      for (std::size_t r = 0; r < a.dim(); ++r) {
        num += std::pow(are[r] - mu * re[r], 2) + std::pow(aim[r] - mu * im[r], 2);
        den += re[r] * re[r] + im[r] * im[r];
      }
      const double radius = std::sqrt(num / den);
      CHECK(count_eigenvalues_below(a, mu + radius) > count_eigenvalues_below(a, mu - radius));
    }
  }
}

TEST_CASE("spectrum certificates") {
  SUBCASE("critical") {
    const auto certs = spectrum_certificate(cosine(kCritical), {0.0, 0.5, 1.0, 2.0, -1.0});
    REQUIRE(certs.size() == 5);
    for (int i = 0; i < 4; ++i) CHECK(certs[i].certified);
    CHECK(certs[0].radius <= 0.1);
    CHECK_FALSE(certs[4].certified);
    // At n = 32 the h chi' sqrt(mu) term alone is about 0.3 sqrt(mu).
    const auto chi = make_window(WindowRole::weyl_y);
    const double floor = 2.0 / 32 *
                         std::sqrt(gk([&](double z) { return std::pow(chi.derivative(z), 2) / z; }, 1, 2) /
                                   gk([&](double z) { return chi(z) * chi(z) / z; }, 1, 2));
    for (int i = 1; i < 4; ++i) CHECK(certs[i].radius >= floor * std::sqrt(certs[i].mu) * 0.99);
    CertificateOptions wide;
    wide.critical_index = 160;
    for (const auto& c : spectrum_certificate(cosine(kCritical), {0.0, 0.5, 1.0, 2.0}, wide)) {
      CHECK(c.radius <= 0.1);
    }
  }
  SUBCASE("subcritical") {
    const auto certs = spectrum_certificate(cosine(0.5 * kCritical), {1.0, 0.5});
    CHECK(certs[0].certified);
    CHECK(certs[0].radius <= 0.1);
    CHECK_FALSE(certs[1].certified);
    CHECK(certs[1].statement.find("below certified range") != std::string::npos);
  }
}
