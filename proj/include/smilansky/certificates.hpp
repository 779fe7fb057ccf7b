#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smilansky/analysis1d.hpp"
#include "smilansky/model.hpp"

namespace smilansky {

struct QuasiModeReport {
  Regime regime = Regime::critical;
  double mu = 0.0;
  std::vector<double> indices;               // n (critical) or k (subcritical)
  std::vector<double> norms;                 // ||psi||
  std::vector<double> residuals;             // ||(H - mu) psi|| / ||psi||
  std::vector<double> structural_residuals;
  // Critical: the five cross terms x^2 h'', x h' sqrt(mu), x h' chi', h chi',
  // h chi''. Subcritical: eta', eta'', potential x eta'', potential squared.
  // Squared norms, before division by ||psi||^2.
  std::vector<std::vector<double>> term_norms2;
  std::vector<double> contamination;         // bound on |total - structural|
  double fitted_slope = 0.0;                 // of structural residual vs index
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

// psi_n(x, y) = h(xy) exp(i sqrt(mu) y) chi(y/n) with the critical ground
// state h. Needs |gamma0| <= regime_tol (RegimeError otherwise) and throws
// AccuracyError once the gamma0 error, amplified by (2n)^2, reaches 10% of
// the structural residual.
QuasiModeReport critical_quasimode_residual(const GroundState1D& ground, double mu,
                                            const std::vector<double>& n_list, double regime_tol = 1e-7,
                                            const QuadratureOptions& options = {});

// phi_k(x, y) = k^{-1/2} g(y) exp(i sqrt(mu - omega) x) eta(x/k), g the
// oscillator ground state. mu < omega throws DomainError.
QuasiModeReport subcritical_quasimode_residual(const ModelParams& params, double mu,
                                               const std::vector<double>& k_list,
                                               const QuadratureOptions& options = {});

struct TrialFormReport {
  std::vector<double> k_list;
  std::vector<double> form_values;       // Q_H[phi] / ||phi||^2
  std::vector<double> kinetic_terms;     // (1/k^2) int chi'^2
  std::vector<double> potential_terms;   // (lambda/k) int int y^2 V(xy) g^2 chi(x/k)^2
  std::optional<double> k_star;
  double margin = 0.0;                   // omega - min form value
};

// Q_H on phi(x, y) = k^{-1/2} g(y) chi(x/k) with the trial window chi.
TrialFormReport trial_form_value(const ModelParams& params, const std::vector<double>& k_list,
                                 const QuadratureOptions& options = {});

// log-log least-squares slope.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class CertificateKind { spectral_inclusion, below_threshold, moment_bound };

std::string_view to_string(CertificateKind kind);

struct CertificateReport {
  CertificateKind kind = CertificateKind::spectral_inclusion;
  bool certified = false;
  std::string statement;      // or the skip reason
  double mu = 0.0;
  double radius = 0.0;
  double margin = 0.0;
  double sigma = 0.0;
  double index = 0.0;         // n or k used
  std::string provenance;
};

struct CertificateOptions {
  double critical_index = 32.0;
  double subcritical_index = 32.0;
  double regime_tol = 1e-7;
  Gamma0Options gamma0;
  QuadratureOptions quadrature;
};

CertificateReport spectral_inclusion(double mu, double radius, double index);
// From a trial form value omega - margin at window scale index.
CertificateReport below_threshold(double omega, double margin, double index);

// One inclusion certificate per mu, skipping values outside the range the
// regime's quasimodes cover.
std::vector<CertificateReport> spectrum_certificate(const ModelParams& params,
                                                    const std::vector<double>& mu_grid,
                                                    const CertificateOptions& options = {});

}  // namespace smilansky
