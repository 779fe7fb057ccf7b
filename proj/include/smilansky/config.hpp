#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smilansky/analysis1d.hpp"
#include "smilansky/certificates.hpp"
#include "smilansky/eigensolve.hpp"
#include "smilansky/model.hpp"
#include "smilansky/momentbound.hpp"

namespace smilansky {

inline constexpr std::string_view kConfigSchema = "smilansky-config/1";
inline constexpr std::string_view kEnvPrefix = "SMILANSKY_";

// Flat key=value run configuration. Every key has a default; files only
// need the schema line plus whatever they change.
struct RunConfig {
  std::string name = "unnamed";

  double omega = 1.0;
  double lambda = 0.0;
  PotentialKind potential_kind = PotentialKind::cosine_bump;
  double potential_a = 1.0;
  double potential_v0 = 1.0;
  std::vector<std::pair<double, double>> potential_samples;
  double potential_slope_bound = 1e3;

  int gamma0_nodes_per_a = 16;
  double gamma0_max_half_width = 400.0;

  std::vector<double> ladder_x = {10.0, 15.0, 20.0};
  std::vector<double> ladder_y = {4.5};   // one value for every rung, or one per rung
  double ladder_dx = 0.025;
  double ladder_dy = 0.05;
  std::size_t memory_cap = 4'000'000;

  double tol_gamma0 = 1e-10;
  double tol_eigen = 1e-8;
  double tol_quadrature = 1e-10;
  double tol_regime = 1e-7;
  double tol_disc = 1e-2;
  double tol_cauchy = 1e-4;
  double tol_bracket = 1e-10;

  std::size_t eigen_count = 10;
  int eigen_max_restarts = 400;
  std::uint64_t eigen_seed = 20160601;

  double kappa_step = 0.25;
  double kappa_fine_step = 1e-3;
  double kappa_max = 500.0;

  double critical_lambda_max = 1e4;

  std::vector<double> mu_grid = {0.0, 0.5, 1.0, 2.0};
  double certify_max_radius = 0.1;
  double certify_critical_index = 32.0;
  double certify_subcritical_index = 32.0;
  double quasimode_mu = 1.0;
  std::vector<double> quasimode_n = {4, 8, 16, 32};
  std::vector<double> quasimode_k = {4, 8, 16, 32};
  std::vector<double> trial_k = {1, 2, 4, 8, 16, 32, 64};
  std::vector<double> sigma_list = {0.75, 1.0, 2.0};

  bool strict = false;

  ModelParams model() const;
  Gamma0Options gamma0_options() const;
  ExtremalOptions eigen_options() const;
  KappaOptions kappa_options() const;
  QuadratureOptions quadrature_options() const;
  CertificateOptions certificate_options() const;
  std::vector<BoxRung> ladder() const;
  LhsOptions lhs_options() const;
  MomentBoundOptions moment_options() const;

  // Checks every module precondition; throws ConfigError naming the key.
  void validate() const;

  // Canonical sorted key=value pairs (all keys, formatted values).
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
  std::string to_text() const;
  // FNV-1a 64 over the canonical text.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  void set(std::string_view key, std::string_view value);
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// For every known key, SMILANSKY_<KEY> with '.' and '-' mapped to '_'.
// Returns the keys that were overridden.
std::vector<std::string> apply_environment(RunConfig& config);
std::string environment_name(std::string_view key);

std::vector<std::string> config_keys();

}  // namespace smilansky
