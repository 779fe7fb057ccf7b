#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smilansky {

enum class PotentialKind { cosine_bump, smooth_bump, tabulated };

std::string_view to_string(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view text);

// A compactly supported, non-negative, C^1 potential V on [-a, a].
//
// cosine-bump: V(x) = v0 cos^2(pi x / (2a))
// smooth-bump: V(x) = v0 exp(1 - 1/(1 - (x/a)^2))
// tabulated:   monotone cubic (Fritsch-Carlson) through the samples, with
//              zero slope imposed at the two end samples.
class PotentialSpec {
 public:
  PotentialKind kind() const { return kind_; }
  double a() const { return a_; }
  double v0() const { return v0_; }
  // Exact for every kind: the built-in shapes peak at x = 0 and the monotone
  // interpolant never overshoots its data.
  double sup_norm() const { return v0_; }
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }

  double operator()(double x) const;
  double derivative(double x) const;
  // Integral of V over the real line (closed form for cosine-bump).
  double integral() const;

  // Points where V or its derivatives may be non-smooth. Quadrature panels
  // should break there.
  std::vector<double> breakpoints() const;

  friend PotentialSpec make_potential(PotentialKind, double, double);
  friend PotentialSpec make_tabulated_potential(std::vector<std::pair<double, double>>,
                                                double, double);

 private:
  PotentialKind kind_ = PotentialKind::cosine_bump;
  double a_ = 1.0;
  double v0_ = 1.0;
  double integral_ = 1.0;
  std::vector<std::pair<double, double>> samples_;
  std::vector<double> slopes_;
};

PotentialSpec make_potential(PotentialKind kind, double a, double v0);

// `a` must enclose the samples; the end samples must be zero so the zero
// extension stays C^1. The interpolant's slope is checked at 10^4 points
// against `slope_bound`.
PotentialSpec make_tabulated_potential(std::vector<std::pair<double, double>> samples,
                                       double a, double slope_bound = 1e3);

struct ModelParams {
  double omega = 1.0;
  double lambda = 0.0;
  PotentialSpec potential = make_potential(PotentialKind::cosine_bump, 1.0, 1.0);

  // Throws ParameterError unless omega > 0 and lambda >= 0.
  void validate() const;
};

// Ground state of -d^2/dy^2 + omega^2 y^2: eigenvalue omega and
// g(y) = (omega/pi)^{1/4} exp(-omega y^2 / 2).
struct OscillatorGroundState {
  double omega = 1.0;
  double eigenvalue = 1.0;

  double operator()(double y) const;
  double derivative(double y) const;
  double second_derivative(double y) const;
};

OscillatorGroundState oscillator_ground_state(double omega);

enum class WindowRole { weyl_y, weyl_x, trial };

// Smooth bump C exp(-1/p(z)) on the support of the quadratic p > 0, with C
// fixed so that the square integrates to one.
class Window {
 public:
  WindowRole role() const { return role_; }
  double z0() const { return z0_; }
  double z1() const { return z1_; }
  double normalization() const { return normalization_; }
  // min of the window over |z| <= 1/2; only meaningful for the trial window.
  double alpha() const { return alpha_; }

  double operator()(double z) const;
  double derivative(double z) const;
  double second_derivative(double z) const;

  friend Window make_window(WindowRole role);

 private:
  double p(double z) const { return (z - z0_) * (z1_ - z); }
  double dp(double z) const { return z0_ + z1_ - 2.0 * z; }

  WindowRole role_ = WindowRole::weyl_y;
  double z0_ = 1.0;
  double z1_ = 2.0;
  double normalization_ = 1.0;
  double alpha_ = 0.0;
};

Window make_window(WindowRole role);

}  // namespace smilansky
