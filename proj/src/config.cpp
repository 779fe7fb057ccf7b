#include "smilansky/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include "smilansky/error.hpp"
#include "smilansky/format.hpp"

namespace smilansky {
namespace {

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

Field real(std::string key, double RunConfig::*member) {
  return {key, [member, key](RunConfig& c, std::string_view v) { c.*member = parse_double(v, key); },
          [member](const RunConfig& c) { return format_double(c.*member); }};
}

Field list(std::string key, std::vector<double> RunConfig::*member) {
  return {key, [member, key](RunConfig& c, std::string_view v) { c.*member = parse_double_list(v, key); },
          [member](const RunConfig& c) { return join(c.*member); }};
}

template <class Int>
Field integer(std::string key, Int RunConfig::*member) {
  return {key,
          [member, key](RunConfig& c, std::string_view v) {
            const long long x = parse_integer(v, key);
            if (x < 0 && !std::is_signed_v<Int>) throw ConfigError("key " + key + " must be non-negative");
            c.*member = static_cast<Int>(x);
          },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f{
        {"name", [](RunConfig& c, std::string_view v) { c.name = std::string(trim(v)); },
         [](const RunConfig& c) { return c.name; }},
        real("model.omega", &RunConfig::omega),
        real("model.lambda", &RunConfig::lambda),
        {"potential.kind",
         [](RunConfig& c, std::string_view v) {
           try {
             c.potential_kind = parse_potential_kind(trim(v));
           } catch (const Error& e) {
             throw ConfigError("key potential.kind: " + error_detail(e));
           }
         },
         [](const RunConfig& c) { return std::string(to_string(c.potential_kind)); }},
        real("potential.a", &RunConfig::potential_a),
        real("potential.v0", &RunConfig::potential_v0),
        {"potential.samples",
         [](RunConfig& c, std::string_view v) {
           const auto flat = parse_double_list(v, "potential.samples");
           if (flat.size() % 2 != 0) throw ConfigError("key potential.samples needs x,V pairs");
           c.potential_samples.clear();
           for (std::size_t i = 0; i < flat.size(); i += 2) c.potential_samples.emplace_back(flat[i], flat[i + 1]);
         },
         [](const RunConfig& c) {
           std::vector<double> flat;
           for (const auto& [x, y] : c.potential_samples) {
             flat.push_back(x);
             flat.push_back(y);
           }
           return join(flat);
         }},
        real("potential.slope_bound", &RunConfig::potential_slope_bound),
        integer("gamma0.nodes_per_a", &RunConfig::gamma0_nodes_per_a),
        real("gamma0.max_half_width", &RunConfig::gamma0_max_half_width),
        list("ladder.x_half_widths", &RunConfig::ladder_x),
        list("ladder.y_half_widths", &RunConfig::ladder_y),
        real("ladder.dx", &RunConfig::ladder_dx),
        real("ladder.dy", &RunConfig::ladder_dy),
        integer("grid.memory_cap", &RunConfig::memory_cap),
        real("tol.gamma0", &RunConfig::tol_gamma0),
        real("tol.eigen", &RunConfig::tol_eigen),
        real("tol.quadrature", &RunConfig::tol_quadrature),
        real("tol.regime", &RunConfig::tol_regime),
        real("tol.disc", &RunConfig::tol_disc),
        real("tol.cauchy", &RunConfig::tol_cauchy),
        real("tol.bracket", &RunConfig::tol_bracket),
        integer("eigen.count", &RunConfig::eigen_count),
        integer("eigen.max_restarts", &RunConfig::eigen_max_restarts),
        integer("eigen.seed", &RunConfig::eigen_seed),
        real("kappa.step", &RunConfig::kappa_step),
        real("kappa.fine_step", &RunConfig::kappa_fine_step),
        real("kappa.k_max", &RunConfig::kappa_max),
        real("critical.lambda_max", &RunConfig::critical_lambda_max),
        list("certify.mu_grid", &RunConfig::mu_grid),
        real("certify.max_radius", &RunConfig::certify_max_radius),
        real("certify.critical_index", &RunConfig::certify_critical_index),
        real("certify.subcritical_index", &RunConfig::certify_subcritical_index),
        real("quasimode.mu", &RunConfig::quasimode_mu),
        list("quasimode.n_list", &RunConfig::quasimode_n),
        list("quasimode.k_list", &RunConfig::quasimode_k),
        list("trial.k_list", &RunConfig::trial_k),
        list("moment.sigma_list", &RunConfig::sigma_list),
        {"run.strict",
         [](RunConfig& c, std::string_view v) {
           const auto t = trim(v);
           if (t == "true" || t == "1") c.strict = true;
           else if (t == "false" || t == "0") c.strict = false;
           else throw ConfigError("key run.strict must be true or false");
         },
         [](const RunConfig& c) { return std::string(c.strict ? "true" : "false"); }},
    };
    std::sort(f.begin(), f.end(), [](const Field& a, const Field& b) { return a.key < b.key; });
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key " + key + ": " + what);
}

void require_ascending(const std::vector<double>& v, const std::string& key, double minimum) {
  require(!v.empty(), key, "list is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i]) && v[i] >= minimum, key, "values must be finite and >= " + format_double(minimum));
    if (i > 0) require(v[i] > v[i - 1], key, "values must ascend strictly");
  }
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto* f = find_field(key);
  if (!f) throw ConfigError("unknown key '" + std::string(key) + "'");
  f->set(*this, value);
}

std::vector<std::pair<std::string, std::string>> RunConfig::to_key_values() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

std::string RunConfig::to_text() const {
  std::string out = "schema = " + std::string(kConfigSchema) + "\n";
  for (const auto& [k, v] : to_key_values()) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& [k, v] : to_key_values()) {
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << hash();
  return s.str();
}

ModelParams RunConfig::model() const {
  ModelParams p;
  p.omega = omega;
  p.lambda = lambda;
  p.potential = potential_kind == PotentialKind::tabulated
                    ? make_tabulated_potential(potential_samples, potential_a, potential_slope_bound)
                    : make_potential(potential_kind, potential_a, potential_v0);
  return p;
}

Gamma0Options RunConfig::gamma0_options() const {
  Gamma0Options o;
  o.accuracy = tol_gamma0;
  o.nodes_per_a = gamma0_nodes_per_a;
  o.max_half_width = gamma0_max_half_width;
  return o;
}

ExtremalOptions RunConfig::eigen_options() const {
  ExtremalOptions o;
  o.tol = tol_eigen;
  o.max_restarts = eigen_max_restarts;
  o.seed = eigen_seed;
  return o;
}

KappaOptions RunConfig::kappa_options() const {
  KappaOptions o;
  o.step = kappa_step;
  o.fine_step = kappa_fine_step;
  o.k_max = kappa_max;
  return o;
}

QuadratureOptions RunConfig::quadrature_options() const {
  QuadratureOptions o;
  o.rel_tol = tol_quadrature;
  return o;
}

CertificateOptions RunConfig::certificate_options() const {
  CertificateOptions o;
  o.critical_index = certify_critical_index;
  o.subcritical_index = certify_subcritical_index;
  o.regime_tol = tol_regime;
  o.gamma0 = gamma0_options();
  o.quadrature = quadrature_options();
  return o;
}

std::vector<BoxRung> RunConfig::ladder() const {
  std::vector<BoxRung> out;
  for (std::size_t i = 0; i < ladder_x.size(); ++i) {
    out.push_back({ladder_x[i], ladder_y.size() == 1 ? ladder_y.front() : ladder_y.at(i), ladder_dx, ladder_dy});
  }
  return out;
}

LhsOptions RunConfig::lhs_options() const {
  LhsOptions o;
  o.tol_disc = tol_disc;
  o.cauchy_tol = tol_cauchy;
  o.max_count = eigen_count;
  o.eigen = eigen_options();
  o.assembly.strict = strict;
  o.assembly.memory_cap = memory_cap;
  return o;
}

MomentBoundOptions RunConfig::moment_options() const {
  MomentBoundOptions o;
  o.gamma0 = gamma0_options();
  o.kappa = kappa_options();
  o.lhs = lhs_options();
  o.ladder = ladder();
  o.regime_tol = tol_regime;
  return o;
}

void RunConfig::validate() const {
  require(omega > 0.0 && std::isfinite(omega), "model.omega", "must be positive");
  require(lambda >= 0.0 && std::isfinite(lambda), "model.lambda", "must be non-negative");
  require(potential_a > 0.0 && std::isfinite(potential_a), "potential.a", "must be positive");
  require(potential_v0 > 0.0 && std::isfinite(potential_v0), "potential.v0", "must be positive");
  if (potential_kind == PotentialKind::tabulated) {
    require(potential_samples.size() >= 3, "potential.samples", "tabulated potential needs at least 3 samples");
    try {
      (void)model();
    } catch (const Error& e) {
      throw ConfigError("key potential.samples: " + error_detail(e));
    }
  }
  require(gamma0_nodes_per_a >= 8, "gamma0.nodes_per_a", "must be >= 8");
  require(gamma0_max_half_width > potential_a, "gamma0.max_half_width", "must exceed potential.a");
  require_ascending(ladder_x, "ladder.x_half_widths", 0.0);
  require(ladder_x.front() > 0.0, "ladder.x_half_widths", "must be positive");
  require(ladder_y.size() == 1 || ladder_y.size() == ladder_x.size(), "ladder.y_half_widths",
          "needs one value or one per entry of ladder.x_half_widths");
  for (double y : ladder_y) require(std::isfinite(y) && y > 0.0, "ladder.y_half_widths", "must be positive");
  for (const auto& rung : ladder()) {
    require(ladder_dx > 0.0 && ladder_dx < rung.x_half_width, "ladder.dx", "must be positive and below the box size");
    require(ladder_dy > 0.0 && ladder_dy < rung.y_half_width, "ladder.dy", "must be positive and below the box size");
    if (lambda > 0.0) {
      const double limit = potential_a / (8.0 * rung.y_half_width);
      require(ladder_dx <= limit, "ladder.dx",
              "exceeds the resolution limit a/(8 Y) = " + format_double(limit) + " for Y = " +
                  format_double(rung.y_half_width));
    }
    const double cells = std::ceil(2 * rung.x_half_width / ladder_dx) * std::ceil(2 * rung.y_half_width / ladder_dy);
    require(cells <= static_cast<double>(memory_cap), "ladder.x_half_widths",
            "box " + format_double(rung.x_half_width) + " x " + format_double(rung.y_half_width) + " needs about " +
                format_double(cells) + " unknowns, above grid.memory_cap");
  }
  for (const auto& [key, value] : {std::pair{"tol.gamma0", tol_gamma0}, {"tol.eigen", tol_eigen},
                                   {"tol.quadrature", tol_quadrature}, {"tol.regime", tol_regime},
                                   {"tol.disc", tol_disc}, {"tol.cauchy", tol_cauchy}, {"tol.bracket", tol_bracket}}) {
    require(value > 0.0 && std::isfinite(value), key, "must be positive");
  }
  require(eigen_count >= 1, "eigen.count", "must be >= 1");
  require(eigen_max_restarts >= 0, "eigen.max_restarts", "must be >= 0");
  require(kappa_step > 0.0, "kappa.step", "must be positive");
  require(kappa_fine_step > 0.0 && kappa_fine_step <= kappa_step, "kappa.fine_step", "must be in (0, kappa.step]");
  require(kappa_max > kappa_step, "kappa.k_max", "must exceed kappa.step");
  require(critical_lambda_max > 0.0, "critical.lambda_max", "must be positive");
  require(!mu_grid.empty(), "certify.mu_grid", "list is empty");
  for (double mu : mu_grid) require(std::isfinite(mu), "certify.mu_grid", "values must be finite");
  require(certify_max_radius > 0.0, "certify.max_radius", "must be positive");
  require(certify_critical_index >= 1.0, "certify.critical_index", "must be >= 1");
  require(certify_subcritical_index >= 1.0, "certify.subcritical_index", "must be >= 1");
  require(quasimode_mu >= 0.0 && std::isfinite(quasimode_mu), "quasimode.mu", "must be non-negative");
  require_ascending(quasimode_n, "quasimode.n_list", 1.0);
  require_ascending(quasimode_k, "quasimode.k_list", 1.0);
  require_ascending(trial_k, "trial.k_list", 1.0);
  require_ascending(sigma_list, "moment.sigma_list", 0.0);
  for (double s : sigma_list) require(s > 0.5, "moment.sigma_list", "every sigma must exceed 1/2");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  bool schema_seen = false;
  std::vector<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    seen.push_back(key);
    if (key == "schema") {
      if (value != kConfigSchema) {
        throw ConfigError("unsupported schema '" + std::string(value) + "', expected " + std::string(kConfigSchema));
      }
      schema_seen = true;
      continue;
    }
    try {
      config.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + error_detail(e));
    }
  }
  if (!schema_seen) throw ConfigError("missing mandatory 'schema = " + std::string(kConfigSchema) + "' line");
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string environment_name(std::string_view key) {
  std::string out(kEnvPrefix);
  for (char ch : key) {
    out += (ch == '.' || ch == '-') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return out;
}

std::vector<std::string> apply_environment(RunConfig& config) {
  std::vector<std::string> applied;
  for (const auto& f : fields()) {
    if (const char* value = std::getenv(environment_name(f.key).c_str())) {
      try {
        f.set(config, value);
      } catch (const ConfigError& e) {
        throw ConfigError("environment " + environment_name(f.key) + ": " + error_detail(e));
      }
      applied.push_back(f.key);
    }
  }
  return applied;
}

}  // namespace smilansky
