#include "smilansky/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smilansky/error.hpp"
#include "smilansky/quadrature.hpp"

namespace smilansky {

using std::numbers::pi;

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::cosine_bump: return "cosine-bump";
    case PotentialKind::smooth_bump: return "smooth-bump";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "unknown";
}

PotentialKind parse_potential_kind(std::string_view text) {
  if (text == "cosine-bump") return PotentialKind::cosine_bump;
  if (text == "smooth-bump") return PotentialKind::smooth_bump;
  if (text == "tabulated") return PotentialKind::tabulated;
  throw ParameterError("unknown potential kind '" + std::string(text) + "'");
}

namespace {

double smooth_bump_shape(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

}  // namespace

double PotentialSpec::operator()(double x) const {
  if (!(std::abs(x) < a_)) return 0.0;
  switch (kind_) {
    case PotentialKind::cosine_bump: {
      const double c = std::cos(pi * x / (2.0 * a_));
      return v0_ * c * c;
    }
    case PotentialKind::smooth_bump:
      return v0_ * smooth_bump_shape(x / a_);
    case PotentialKind::tabulated: {
      if (x <= samples_.front().first || x >= samples_.back().first) return 0.0;
      auto it = std::upper_bound(samples_.begin(), samples_.end(), x,
                                 [](double v, const auto& s) { return v < s.first; });
      const std::size_t k = static_cast<std::size_t>(it - samples_.begin()) - 1;
      const double h = samples_[k + 1].first - samples_[k].first;
      const double t = (x - samples_[k].first) / h;
      const double t2 = t * t;
      const double t3 = t2 * t;
      const double value = (2 * t3 - 3 * t2 + 1) * samples_[k].second +
                           (t3 - 2 * t2 + t) * h * slopes_[k] +
                           (-2 * t3 + 3 * t2) * samples_[k + 1].second +
                           (t3 - t2) * h * slopes_[k + 1];
      return std::max(value, 0.0);
    }
  }
  return 0.0;
}

double PotentialSpec::derivative(double x) const {
  if (!(std::abs(x) < a_)) return 0.0;
  switch (kind_) {
    case PotentialKind::cosine_bump:
      return -v0_ * (pi / (2.0 * a_)) * std::sin(pi * x / a_);
    case PotentialKind::smooth_bump: {
      const double s = x / a_;
      const double q = 1.0 - s * s;
      return v0_ * smooth_bump_shape(s) * (-2.0 * s / (q * q)) / a_;
    }
    case PotentialKind::tabulated: {
      if (x <= samples_.front().first || x >= samples_.back().first) return 0.0;
      auto it = std::upper_bound(samples_.begin(), samples_.end(), x,
                                 [](double v, const auto& s) { return v < s.first; });
      const std::size_t k = static_cast<std::size_t>(it - samples_.begin()) - 1;
      const double h = samples_[k + 1].first - samples_[k].first;
      const double t = (x - samples_[k].first) / h;
      const double t2 = t * t;
      return ((6 * t2 - 6 * t) * samples_[k].second + (3 * t2 - 4 * t + 1) * h * slopes_[k] +
              (-6 * t2 + 6 * t) * samples_[k + 1].second + (3 * t2 - 2 * t) * h * slopes_[k + 1]) /
             h;
    }
  }
  return 0.0;
}

double PotentialSpec::integral() const { return integral_; }

std::vector<double> PotentialSpec::breakpoints() const {
  if (kind_ != PotentialKind::tabulated) return {-a_, 0.0, a_};
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.first);
  return out;
}

PotentialSpec make_potential(PotentialKind kind, double a, double v0) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("potential half-width a must be positive");
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw ParameterError("potential amplitude v0 must be positive");
  if (kind == PotentialKind::tabulated) {
    throw ParameterError("tabulated potentials are built from samples");
  }
  PotentialSpec spec;
  spec.kind_ = kind;
  spec.a_ = a;
  spec.v0_ = v0;
  if (kind == PotentialKind::cosine_bump) {
    spec.integral_ = a * v0;
  } else {
    const auto r = quad::gauss_kronrod(smooth_bump_shape, -1.0, 1.0, 1e-14, 1e-300);
    spec.integral_ = a * v0 * r.value;
  }
  return spec;
}

PotentialSpec make_tabulated_potential(std::vector<std::pair<double, double>> samples,
                                       double a, double slope_bound) {
  if (!(a > 0.0)) throw ParameterError("potential half-width a must be positive");
  if (samples.size() < 3) throw ValidationError("tabulated potential needs at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [x, v] = samples[i];
    if (!std::isfinite(x) || !std::isfinite(v)) throw ValidationError("non-finite sample");
    if (v < 0.0) throw ValidationError("sample value is negative at x = " + std::to_string(x));
    if (std::abs(x) > a) throw ValidationError("sample outside support [-a, a] at x = " + std::to_string(x));
    if (i > 0 && !(x > samples[i - 1].first)) throw ValidationError("sample abscissae must be strictly increasing");
  }
  if (samples.front().second != 0.0 || samples.back().second != 0.0) {
    throw ValidationError("end samples must be zero so V vanishes outside the support");
  }

  const std::size_t n = samples.size();
  std::vector<double> slopes(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h0 = samples[k].first - samples[k - 1].first;
    const double h1 = samples[k + 1].first - samples[k].first;
    const double d0 = (samples[k].second - samples[k - 1].second) / h0;
    const double d1 = (samples[k + 1].second - samples[k].second) / h1;
    if (d0 * d1 <= 0.0) continue;
    const double w1 = 2.0 * h1 + h0;
    const double w2 = h1 + 2.0 * h0;
    slopes[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
  }

  PotentialSpec spec;
  spec.kind_ = PotentialKind::tabulated;
  spec.a_ = a;
  spec.samples_ = std::move(samples);
  spec.slopes_ = std::move(slopes);
  spec.v0_ = 0.0;
  for (const auto& s : spec.samples_) spec.v0_ = std::max(spec.v0_, s.second);
  if (!(spec.v0_ > 0.0)) throw ValidationError("tabulated potential is identically zero");

  const double lo = spec.samples_.front().first;
  const double hi = spec.samples_.back().first;
  constexpr int kChecks = 10000;
  for (int i = 0; i <= kChecks; ++i) {
    const double x = lo + (hi - lo) * i / kChecks;
    if (std::abs(spec.derivative(x)) > slope_bound) {
      throw ValidationError("interpolated slope exceeds bound " + std::to_string(slope_bound) +
                            " near x = " + std::to_string(x));
    }
  }
  const auto br = spec.breakpoints();
  spec.integral_ = quad::panels([&](double x) { return spec(x); }, br, 4, 8);
  return spec;
}

void ModelParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ParameterError("omega must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be non-negative");
}

double OscillatorGroundState::operator()(double y) const {
  return std::pow(omega / pi, 0.25) * std::exp(-0.5 * omega * y * y);
}

double OscillatorGroundState::derivative(double y) const { return -omega * y * (*this)(y); }

double OscillatorGroundState::second_derivative(double y) const {
  return (omega * omega * y * y - omega) * (*this)(y);
}

OscillatorGroundState oscillator_ground_state(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ParameterError("omega must be positive");
  return {omega, omega};
}

// Below q = 1/700 the bump is under e^{-700}; returning zero there also
// keeps q^2 and q^3 from underflowing in the derivatives.
constexpr double kFlat = 1.0 / 700.0;

double Window::operator()(double z) const {
  const double q = p(z);
  if (q <= kFlat) return 0.0;
  return normalization_ * std::exp(-1.0 / q);
}

double Window::derivative(double z) const {
  const double q = p(z);
  if (q <= kFlat) return 0.0;
  return (*this)(z) * dp(z) / (q * q);
}

double Window::second_derivative(double z) const {
  const double q = p(z);
  if (q <= kFlat) return 0.0;
  const double d = dp(z);
  const double f1 = d / (q * q);
  const double f2 = -2.0 / (q * q) - 2.0 * d * d / (q * q * q);
  return (*this)(z) * (f2 + f1 * f1);
}

Window make_window(WindowRole role) {
  Window w;
  w.role_ = role;
  if (role == WindowRole::trial) {
    w.z0_ = -1.0;
    w.z1_ = 1.0;
  } else {
    w.z0_ = 1.0;
    w.z1_ = 2.0;
  }
  const auto square = [&w](double z) {
    const double q = w.p(z);
    return q > 0.0 ? std::exp(-2.0 / q) : 0.0;
  };
  const auto r = quad::gauss_kronrod(square, w.z0_, w.z1_, 1e-13, 1e-300);
  w.normalization_ = 1.0 / std::sqrt(r.value);
  if (role == WindowRole::trial) {
    // exp(-1/(1 - z^2)) is smallest on |z| <= 1/2 at the edges z = +-1/2.
    w.alpha_ = w.normalization_ * std::exp(-4.0 / 3.0);
  }
  return w;
}

}  // namespace smilansky
