#include "smilansky/commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "smilansky/analysis1d.hpp"
#include "smilansky/assembly.hpp"
#include "smilansky/certificates.hpp"
#include "smilansky/eigensolve.hpp"
#include "smilansky/error.hpp"
#include "smilansky/format.hpp"
#include "smilansky/momentbound.hpp"

namespace smilansky {
namespace {

using Command = std::function<ReportBundle(const RunConfig&, const RunOptions&)>;

std::string f(double x) { return format_double(x); }
std::string b(bool x) { return x ? "true" : "false"; }

std::string provenance(const RunConfig& c) {
  return "config " + c.hash_hex() + " (" + c.name + "), " + std::string(kConfigSchema) + ", " +
         std::string(kFixtureVersion);
}

AssemblyOptions assembly_options(const RunConfig& c) {
  AssemblyOptions o;
  o.strict = c.strict;
  o.memory_cap = c.memory_cap;
  return o;
}

Gamma0Options regime_gamma0(const RunConfig& c) {
  auto o = c.gamma0_options();
  o.accuracy = std::min(o.accuracy, 0.1 * c.tol_regime);
  return o;
}

Regime regime_of(double g, double tol) {
  if (g > tol) return Regime::subcritical;
  if (g < -tol) return Regime::supercritical;
  return Regime::critical;
}

void dump_matrix(const RunOptions& o, const std::string& stem, const SparseSymmetricOperator& a) {
  std::filesystem::create_directories(o.out_dir);
  const auto path = o.out_dir / (stem + ".txt");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  a.write_coordinate(out);
  if (!out) throw IoError("failed writing " + path.string());
}

ReportBundle cmd_classify(const RunConfig& c, const RunOptions&) {
  const auto p = c.model();
  const auto r = classify(p, c.tol_regime, c.gamma0_options());
  ReportBundle out;
  Table t{"classify", {"omega", "lambda", "potential", "gamma0", "error_estimate", "tolerance", "regime"}, {}};
  t.add_row({f(c.omega), f(c.lambda), std::string(to_string(c.potential_kind)), f(r.gamma0), f(r.error_estimate),
             f(r.tolerance), std::string(to_string(r.regime))});
  out.tables.push_back(t);
  out.results = {{"regime", to_string(r.regime)}, {"gamma0", r.gamma0}, {"error_estimate", r.error_estimate}};
  out.text = "regime " + std::string(to_string(r.regime)) + ": gamma0 = " + f(r.gamma0) + " +- " +
             f(r.error_estimate) + " (tolerance " + f(r.tolerance) + ")\n";
  return out;
}

ReportBundle cmd_spectrum1d(const RunConfig& c, const RunOptions& o) {
  const auto p = c.model();
  const auto ground = gamma0(p, c.gamma0_options());
  const double half = ground.has_eigenfunction() ? ground.half_width : c.potential_a + 32.0 / c.omega;
  const auto grid = Grid1D::with_spacing(half, c.potential_a / (4.0 * c.gamma0_nodes_per_a), BoundaryCondition::dirichlet);
  const auto t = tridiagonal_L(p, grid, assembly_options(c));
  if (o.dump_matrix) dump_matrix(o, "matrix_L", to_operator(t));
  const auto levels = tridiagonal_lowest(t, std::min(c.eigen_count, grid.size() - 1), true);

  ReportBundle out;
  Table g{"gamma0", {"omega", "lambda", "gamma0", "error_estimate", "half_width", "spacing"}, {}};
  g.add_row({f(c.omega), f(c.lambda), f(ground.gamma0), f(ground.error_estimate), f(ground.half_width),
             f(ground.spacing)});
  Table s{"spectrum1d", {"index", "eigenvalue", "residual", "below_omega2"}, {}};
  const double w2 = c.omega * c.omega;
  std::size_t below = 0;
  for (std::size_t i = 0; i < levels.eigenvalues.size(); ++i) {
    s.add_row({std::to_string(i), f(levels.eigenvalues[i]), f(levels.residuals[i]), b(levels.eigenvalues[i] < w2)});
    if (levels.eigenvalues[i] < w2) ++below;
  }
  out.tables = {g, s};
  out.results = {{"gamma0", ground.gamma0}, {"error_estimate", ground.error_estimate}, {"grid_points", grid.size()},
                 {"levels_below_omega2", below}, {"eigenvalues", levels.eigenvalues}};
  std::ostringstream text;
  text << "gamma0 = " << f(ground.gamma0) << " +- " << f(ground.error_estimate) << "\n"
       << "L on [-" << f(half) << ", " << f(half) << "], " << grid.size() << " points, " << below
       << " level(s) below omega^2 = " << f(w2) << "\n";
  for (std::size_t i = 0; i < levels.eigenvalues.size(); ++i) {
    text << "  " << i << "  " << f(levels.eigenvalues[i]) << "  residual " << f(levels.residuals[i]) << "\n";
  }
  out.text = text.str();
  return out;
}

ReportBundle cmd_critical_lambda(const RunConfig& c, const RunOptions&) {
  const auto p = c.model();
  const auto r = critical_lambda(c.omega, p.potential, c.tol_bracket, c.critical_lambda_max, c.gamma0_options());
  ReportBundle out;
  Table t{"critical_lambda", {"omega", "lambda_crit", "lower", "upper", "gamma0", "evaluations"}, {}};
  t.add_row({f(c.omega), f(r.lambda), f(r.lower), f(r.upper), f(r.gamma0), std::to_string(r.evaluations)});
  PlotData plot{"gamma0_vs_lambda", "lambda", "gamma0", {}};
  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) {
    auto q = p;
    q.lambda = frac * r.lambda;
    plot.points.emplace_back(q.lambda, gamma0(q, c.gamma0_options()).gamma0);
  }
  out.tables.push_back(t);
  out.plots.push_back(plot);
  out.results = {{"lambda_crit", r.lambda}, {"lower", r.lower}, {"upper", r.upper}, {"gamma0", r.gamma0}};
  out.text = "lambda_crit = " + f(r.lambda) + " in [" + f(r.lower) + ", " + f(r.upper) + "], gamma0 there " +
             f(r.gamma0) + "\n";
  return out;
}

ReportBundle cmd_kappa(const RunConfig& c, const RunOptions&) {
  const auto p = c.model();
  const auto ground = gamma0(p, regime_gamma0(c));
  if (!(ground.gamma0 > c.tol_regime)) {
    throw RegimeError("kappa needs the subcritical regime (model.lambda); gamma0 = " + f(ground.gamma0));
  }
  const auto k = kappa(p, ground.gamma0, c.kappa_options());
  ReportBundle out;
  Table t{"kappa", {"gamma0", "kappa", "step", "energy_at_kappa"}, {}};
  t.add_row({f(k.gamma0), f(k.kappa), f(k.step), f(k.energy_at_kappa)});
  Table tr{"kappa_trace", {"k", "neumann_ground_energy"}, {}};
  for (const auto& [kk, e] : k.trace) tr.add_row({f(kk), f(e)});
  out.tables = {t, tr};
  out.results = {{"kappa", k.kappa}, {"step", k.step}, {"gamma0", k.gamma0}, {"energy_at_kappa", k.energy_at_kappa}};
  out.text = "kappa = " + f(k.kappa) + " (scan step " + f(k.step) + "), inf sigma(l_kappa) = " +
             f(k.energy_at_kappa) + " >= gamma0/2 = " + f(0.5 * k.gamma0) + "\n";
  return out;
}

ReportBundle cmd_spectrum2d(const RunConfig& c, const RunOptions& o) {
  const auto p = c.model();
  ReportBundle out;
  Table t{"spectrum2d",
          {"x_half_width", "y_half_width", "dx", "dy", "unknowns", "index", "eigenvalue", "residual"},
          {}};
  PlotData plot{"eigenvalue_vs_box", "x_half_width", "lowest_eigenvalue", {}};
  std::ostringstream text;
  nlohmann::json rungs = nlohmann::json::array();
  for (const auto& rung : c.ladder()) {
    const auto grid = Grid2D::with_spacing(rung.x_half_width, rung.y_half_width, rung.dx, rung.dy);
    const auto a = assemble_H(p, grid, assembly_options(c));
    if (o.dump_matrix) dump_matrix(o, "matrix_H_" + f(rung.x_half_width) + "x" + f(rung.y_half_width), a);
    const auto r = extremal_sparse_eigs(a, std::min(c.eigen_count, a.dim() - 1), c.eigen_options());
    if (!r.converged) {
      throw UnconvergedError("box " + f(rung.x_half_width) + " x " + f(rung.y_half_width) + ": " + r.diagnostics);
    }
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      t.add_row({f(rung.x_half_width), f(rung.y_half_width), f(grid.x().spacing()), f(grid.y().spacing()),
                 std::to_string(a.dim()), std::to_string(i), f(r.eigenvalues[i]), f(r.residuals[i])});
    }
    plot.points.emplace_back(rung.x_half_width, r.eigenvalues.front());
    rungs.push_back({{"x_half_width", rung.x_half_width}, {"y_half_width", rung.y_half_width},
                     {"unknowns", a.dim()}, {"eigenvalues", r.eigenvalues}, {"residuals", r.residuals}});
    text << "box " << f(rung.x_half_width) << " x " << f(rung.y_half_width) << " (" << a.dim()
         << " unknowns): lowest " << f(r.eigenvalues.front()) << ", max residual "
         << f(*std::max_element(r.residuals.begin(), r.residuals.end())) << "\n";
  }
  out.tables.push_back(t);
  out.plots.push_back(plot);
  out.results = {{"rungs", rungs}};
  out.text = text.str();
  return out;
}

Table quasimode_table(const QuasiModeReport& r) {
  Table t{"quasimode", {"regime", "mu", "index", "norm", "structural_residual", "total_residual"}, {}};
  for (std::size_t i = 0; i < r.indices.size(); ++i) {
    t.add_row({std::string(to_string(r.regime)), f(r.mu), f(r.indices[i]), f(r.norms[i]),
               f(r.structural_residuals[i]), f(r.residuals[i])});
  }
  return t;
}

ReportBundle cmd_quasimode(const RunConfig& c, const RunOptions&) {
  const auto p = c.model();
  const auto ground = gamma0(p, regime_gamma0(c));
  const auto regime = regime_of(ground.gamma0, c.tol_regime);
  QuasiModeReport r;
  if (regime == Regime::critical) {
    r = critical_quasimode_residual(ground, c.quasimode_mu, c.quasimode_n, c.tol_regime, c.quadrature_options());
  } else if (regime == Regime::subcritical) {
    r = subcritical_quasimode_residual(p, c.quasimode_mu, c.quasimode_k, c.quadrature_options());
  } else {
    throw RegimeError("no quasimode construction in the supercritical regime (gamma0 = " + f(ground.gamma0) + ")");
  }
  ReportBundle out;
  out.tables.push_back(quasimode_table(r));
  PlotData plot{"residual_vs_index", regime == Regime::critical ? "n" : "k", "residual", {}};
  for (std::size_t i = 0; i < r.indices.size(); ++i) plot.points.emplace_back(r.indices[i], r.residuals[i]);
  out.plots.push_back(plot);
  out.results = {{"regime", to_string(r.regime)}, {"mu", r.mu},          {"indices", r.indices},
                 {"residuals", r.residuals},       {"structural", r.structural_residuals},
                 {"fitted_slope", r.fitted_slope}, {"contamination", r.contamination}};
  std::ostringstream text;
  text << to_string(r.regime) << " quasimodes at mu = " << f(r.mu) << ", fitted slope " << f(r.fitted_slope) << "\n";
  for (std::size_t i = 0; i < r.indices.size(); ++i) {
    text << "  index " << f(r.indices[i]) << ": residual " << f(r.residuals[i]) << " (structural "
         << f(r.structural_residuals[i]) << ")\n";
  }
  out.text = text.str();
  return out;
}

ReportBundle cmd_trial_form(const RunConfig& c, const RunOptions&) {
  const auto p = c.model();
  const auto r = trial_form_value(p, c.trial_k, c.quadrature_options());
  ReportBundle out;
  Table t{"trial_form", {"k", "form_value", "kinetic_term", "potential_term", "below_omega"}, {}};
  for (std::size_t i = 0; i < r.k_list.size(); ++i) {
    t.add_row({f(r.k_list[i]), f(r.form_values[i]), f(r.kinetic_terms[i]), f(r.potential_terms[i]),
               b(r.form_values[i] < c.omega)});
  }
  out.tables.push_back(t);
  out.results = {{"form_values", r.form_values}, {"margin", r.margin}};
  out.results["k_star"] = r.k_star ? nlohmann::json(*r.k_star) : nlohmann::json(nullptr);
  if (r.k_star) {
    out.text = "Q_H[phi] < omega first at k = " + f(*r.k_star) + "; best margin " + f(r.margin) + "\n";
  } else {
    out.text = "inconclusive: no k up to " + f(r.k_list.back()) + " gives Q_H[phi] < omega\n";
  }
  return out;
}

Table certificate_table(const std::vector<CertificateReport>& certs, double max_radius) {
  Table t{"certify",
          {"kind", "mu", "radius", "margin", "sigma", "index", "certified", "within_max_radius", "statement",
           "provenance"},
          {}};
  for (const auto& r : certs) {
    const bool inclusion = r.kind == CertificateKind::spectral_inclusion && r.certified;
    t.add_row({std::string(to_string(r.kind)), f(r.mu), f(r.radius), f(r.margin), f(r.sigma), f(r.index),
               b(r.certified), inclusion ? b(r.radius <= max_radius) : "", r.statement, r.provenance});
  }
  return t;
}

std::string certificate_text(const std::vector<CertificateReport>& certs, double max_radius) {
  std::ostringstream text;
  for (const auto& r : certs) {
    text << "[" << to_string(r.kind) << "] " << r.statement;
    if (r.kind == CertificateKind::spectral_inclusion && r.certified) {
      text << "  (mu " << f(r.mu) << ", radius " << f(r.radius) << " at index " << f(r.index)
           << (r.radius <= max_radius ? "" : ", ABOVE max radius " + f(max_radius)) << ")";
    }
    text << "\n";
  }
  if (!certs.empty()) text << "provenance: " << certs.front().provenance << "\n";
  return text.str();
}

ReportBundle cmd_certify(const RunConfig& c, const RunOptions&) {
  const auto p = c.model();
  auto certs = spectrum_certificate(p, c.mu_grid, c.certificate_options());
  if (regime_of(gamma0(p, regime_gamma0(c)).gamma0, c.tol_regime) == Regime::subcritical && c.lambda > 0.0) {
    const auto trial = trial_form_value(p, c.trial_k, c.quadrature_options());
    const auto best = std::min_element(trial.form_values.begin(), trial.form_values.end()) - trial.form_values.begin();
    certs.push_back(below_threshold(c.omega, trial.margin, trial.k_list[best]));
  }
  ReportBundle out;
  nlohmann::json list = nlohmann::json::array();
  for (auto& r : certs) {
    r.provenance = provenance(c);
    if (r.kind == CertificateKind::spectral_inclusion && r.certified && r.radius > c.certify_max_radius) {
      out.inequality_failed = true;
    }
    list.push_back({{"kind", to_string(r.kind)}, {"certified", r.certified}, {"statement", r.statement},
                    {"mu", r.mu}, {"radius", r.radius}, {"margin", r.margin}, {"index", r.index}});
  }
  out.tables.push_back(certificate_table(certs, c.certify_max_radius));
  out.results = {{"certificates", list}, {"max_radius", c.certify_max_radius}};
  out.text = certificate_text(certs, c.certify_max_radius);
  return out;
}

ReportBundle cmd_moment_bound(const RunConfig& c, const RunOptions&) {
  const auto p = c.model();
  const auto opts = c.moment_options();
  const auto ground = gamma0(p, regime_gamma0(c));
  if (!(ground.gamma0 > c.tol_regime)) {
    throw RegimeError("the moment bound needs the subcritical regime (model.lambda); gamma0 = " + f(ground.gamma0));
  }
  const auto k = kappa(p, ground.gamma0, opts.kappa);
  const auto trace = lhs_trace(p, opts.ladder, opts.lhs);

  ReportBundle out;
  Table t{"moment_bound",
          {"name", "sigma", "gamma0", "kappa", "kappa_step", "alpha1", "alpha1_branch", "rhs_series", "rhs_tail",
           "series_terms", "rhs_box", "rhs_total", "lhs", "margin", "satisfied", "consistency_flag"},
          {}};
  Table ev{"moment_eigenvalues", {"x_half_width", "y_half_width", "unknowns", "index", "eigenvalue", "residual"}, {}};
  PlotData plot{"eigenvalue_vs_box", "x_half_width", "lowest_eigenvalue", {}};
  for (const auto& r : trace.rungs) {
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      ev.add_row({f(r.box.x_half_width), f(r.box.y_half_width), std::to_string(r.unknowns), std::to_string(i),
                  f(r.eigenvalues[i]), f(r.residuals[i])});
    }
    if (!r.eigenvalues.empty()) plot.points.emplace_back(r.box.x_half_width, r.eigenvalues.front());
  }
  std::ostringstream text;
  nlohmann::json list = nlohmann::json::array();
  text << "lhs from " << trace.source << "\n";
  for (double sigma : c.sigma_list) {
    const auto r = evaluate_bound(p, sigma, ground.gamma0, k, trace, opts.series);
    t.add_row({c.name, f(sigma), f(r.gamma0), f(r.kappa), f(r.kappa_step), f(r.alpha.alpha1),
               std::to_string(r.alpha.branch), f(r.rhs.series), f(r.rhs.series_tail),
               std::to_string(r.rhs.series_terms), f(r.rhs.box), f(r.rhs.total), f(r.lhs), f(r.margin),
               b(r.satisfied), b(r.consistency_flag)});
    if (!r.satisfied) out.inequality_failed = true;
    list.push_back({{"sigma", sigma}, {"lhs", r.lhs}, {"rhs", r.rhs.total}, {"margin", r.margin},
                    {"alpha1", r.alpha.alpha1}, {"satisfied", r.satisfied}});
    text << "[moment-bound] sigma " << f(sigma) << ": tr(omega - H)_+^sigma = " << f(r.lhs)
         << (r.satisfied ? " <= " : " > ") << f(r.rhs.total) << " (series " << f(r.rhs.series) << " + box "
         << f(r.rhs.box) << "), margin " << f(r.margin) << "\n";
  }
  text << "alpha1 = " << f(list.front()["alpha1"].get<double>()) << ", kappa = " << f(k.kappa) << " (step "
       << f(k.step) << "), gamma0 = " << f(ground.gamma0) << "\n"
       << "provenance: " << provenance(c) << "\n";
  out.tables = {t, ev};
  out.plots.push_back(plot);
  out.results = {{"bounds", list},
                 {"gamma0", ground.gamma0},
                 {"kappa", k.kappa},
                 {"eigenvalues", trace.eigenvalues},
                 {"cauchy_differences", trace.cauchy_differences},
                 {"consistency_flag", trace.consistency_flag}};
  out.text = text.str();
  return out;
}

std::vector<std::filesystem::path> fixture_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
    if (e.path().extension() == ".cfg") out.push_back(e.path());
  }
  if (ec) throw IoError("cannot list fixture directory " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  if (out.empty()) throw IoError("no .cfg fixtures in " + dir.string());
  return out;
}

ReportBundle cmd_report(const RunConfig&, const RunOptions& o) {
  if (o.fixture_dir.empty()) throw ParameterError("report needs a fixture directory");
  std::vector<std::pair<std::string, RunConfig>> fixtures;
  for (const auto& path : fixture_files(o.fixture_dir)) {
    auto cfg = load_config(path.string());
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(path.filename().string() + ": " + error_detail(e));
    }
    fixtures.emplace_back(path.stem().string(), cfg);
  }

  ReportBundle out;
  Table summary{"summary", {"fixture", "config_hash", "check", "passed", "detail"}, {}};
  std::ostringstream text;
  nlohmann::json results = nlohmann::json::object();
  for (const auto& [stem, cfg] : fixtures) {
    text << "== " << stem << " (" << cfg.hash_hex() << ")\n";
    std::vector<std::pair<std::string, ReportBundle>> parts;
    parts.emplace_back("classify", cmd_classify(cfg, {}));
    const std::string regime = parts.back().second.results["regime"];
    parts.emplace_back("certify", cmd_certify(cfg, {}));
    if (regime == "subcritical") parts.emplace_back("moment-bound", cmd_moment_bound(cfg, {}));
    for (auto& [name, part] : parts) {
      for (auto& t : part.tables) {
        t.name = stem + "_" + t.name;
        out.tables.push_back(t);
      }
      for (auto& p : part.plots) {
        p.name = stem + "_" + p.name;
        out.plots.push_back(p);
      }
      const bool passed = !part.inequality_failed;
      std::string detail = part.text.substr(0, part.text.find('\n'));
      summary.add_row({stem, cfg.hash_hex(), name, b(passed), detail});
      out.inequality_failed = out.inequality_failed || part.inequality_failed;
      results[stem][name] = part.results;
      text << part.text;
    }
  }
  out.tables.insert(out.tables.begin(), summary);
  out.results = results;
  out.text = text.str();
  return out;
}

const std::map<std::string, Command, std::less<>>& commands() {
  static const std::map<std::string, Command, std::less<>> table{
      {"classify", cmd_classify},         {"spectrum1d", cmd_spectrum1d}, {"critical-lambda", cmd_critical_lambda},
      {"kappa", cmd_kappa},               {"spectrum2d", cmd_spectrum2d}, {"quasimode", cmd_quasimode},
      {"trial-form", cmd_trial_form},     {"certify", cmd_certify},       {"moment-bound", cmd_moment_bound},
      {"report", cmd_report},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"classify", "spectrum1d", "critical-lambda", "kappa",
                                              "spectrum2d", "quasimode", "trial-form", "certify",
                                              "moment-bound", "report"};
  return names;
}

RunResult run_command(std::string_view command, const RunConfig& config, const RunOptions& options) {
  const auto it = commands().find(command);
  if (it == commands().end()) throw ParameterError("unknown command '" + std::string(command) + "'");
  config.validate();
  if (options.dump_matrix && options.out_dir.empty()) throw ParameterError("--dump-matrix needs --out");
  RunResult r;
  r.bundle = it->second(config, options);
  r.bundle.command = std::string(command);
  r.exit_code = r.bundle.inequality_failed ? kExitInequality : kExitOk;
  if (!options.out_dir.empty()) write_report(r.bundle, config, options.out_dir);
  return r;
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return err->category() == ErrorCategory::usage ? kExitUsage : kExitNumerical;
  }
  return kExitNumerical;
}

}  // namespace smilansky
