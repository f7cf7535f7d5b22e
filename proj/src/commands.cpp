#include "helmbif/commands.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "helmbif/branch.hpp"
#include "helmbif/errors.hpp"
#include "helmbif/fields.hpp"
#include "helmbif/helmholtz.hpp"
#include "helmbif/special.hpp"
#include "helmbif/wronskian.hpp"

namespace helmbif {

using nlohmann::json;

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

void require_m(int m, const char* flag) {
  require(m >= 4 && m <= 64, std::string(flag) + " must satisfy 4 <= m <= 64 (m = 0..3 admit no bifurcation)");
}

SolverSettings settings_from(const RunConfig& config) {
  SolverSettings s;
  s.modes = config.modes;
  s.max_modes = std::max(defaults::kMaxModes, config.modes);
  s.dirichlet_tolerance = defaults::kDirichletTolerance;
  s.newton_tolerance = config.tol;
  s.fd_step = defaults::kFdStep;
  s.max_halvings = defaults::kMaxHalvings;
  s.accept_stationary = config.accept_stationary;
  return s;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  return row + '\n';
}

json point_json(const BranchPoint& p, const PointDiagnostics& d) {
  json shape = json::array();
  for (int i = 1; i <= p.map.truncation(); ++i) {
    const int exponent = i * p.m + 1;
    shape.push_back({{"exponent", exponent}, {"coefficient", p.map.coefficient(exponent)}});
  }
  return {{"m", p.m},
          {"eps", p.eps},
          {"lambda", p.lambda},
          {"c", p.c},
          {"gamma", p.gamma},
          {"defect", p.defect},
          {"converged", p.converged},
          {"iterations", p.defect_history.empty() ? 0 : p.defect_history.size() - 1},
          {"non_circularity", d.non_circularity},
          {"symmetry_residual", d.symmetry_residual},
          {"shape", shape}};
}

}  // namespace

void validate(const RunConfig& c) {
  const auto& s = c.subcommand;
  require(c.format == "csv" || c.format == "json", "--format must be csv or json");
  require(c.modes >= 1 && c.modes <= 64, "--modes must satisfy 1 <= K <= 64");
  if (s == "mu-table") {
    require_m(c.m, "--m");
    require_m(c.m_max, "--m-max");
    require(c.m <= c.m_max, "--m must not exceed --m-max");
  } else if (s == "verify") {
    require_m(c.m_max, "--m-max");
  } else if (s == "scaling") {
    require_m(c.m, "--m");
    require(!c.eps_list.empty(), "--eps-list must not be empty");
    for (double e : c.eps_list) require(e > 0.0 && e <= 0.05, "--eps-list values must lie in (0, 0.05]");
    for (std::size_t i = 1; i < c.eps_list.size(); ++i) {
      require(c.eps_list[i] > c.eps_list[i - 1], "--eps-list must be strictly increasing");
    }
    require(std::isfinite(c.control_offset) && c.control_offset != 0.0,
            "--control-offset must be finite and nonzero");
  } else if (s == "branch") {
    require_m(c.m, "--m");
    require(std::abs(c.eps) <= 0.05, "--eps must satisfy |eps| <= 0.05");
    require(c.steps >= 1, "--steps must be >= 1");
    require(c.shape_modes >= 0 && c.shape_modes <= 4, "--shape-modes must satisfy 0 <= J <= 4");
    require(c.tol > 0.0, "--tol must be positive");
  } else if (s == "figure") {
    require(!c.m_list.empty(), "--m-list must not be empty");
    for (int m : c.m_list) require_m(m, "--m-list");
    require(c.grid_n >= 2 && c.grid_n <= defaults::kGridNMax, "--grid-n must satisfy 2 <= n <= 512");
    if (c.first_order) {
      require(std::abs(c.eps) <= 0.2, "--eps must satisfy |eps| <= 0.2 with --first-order");
    } else {
      require(std::abs(c.eps) <= 0.05, "--eps must satisfy |eps| <= 0.05 for refined branch points");
      require(c.shape_modes >= 0 && c.shape_modes <= 4, "--shape-modes must satisfy 0 <= J <= 4");
    }
  } else {
    throw UsageError("unknown subcommand '" + s + "'");
  }
}

CommandResult cmd_mu_table(const RunConfig& config) {
  std::vector<WronskianRoot> roots;
  for (int m = config.m; m <= config.m_max; ++m) roots.push_back(find_mu(m));

  CommandResult result;
  if (config.format == "json") {
    json rows = json::array();
    for (const auto& r : roots) {
      rows.push_back({{"m", r.m}, {"mu_m", r.mu}, {"slope", r.slope},
                      {"J0", r.j0}, {"J1", r.j1}, {"Jm", r.jm}});
    }
    result.files.push_back({"", rows.dump(2) + "\n"});
  } else {
    std::string csv = "m,mu_m,slope,J0(mu_m),J1(mu_m),Jm(mu_m)\n";
    for (const auto& r : roots) {
      csv += csv_row({std::to_string(r.m), format_real(r.mu), format_real(r.slope),
                      format_real(r.j0), format_real(r.j1), format_real(r.jm)});
    }
    result.files.push_back({"", std::move(csv)});
  }
  result.message = "mu table for m = " + std::to_string(config.m) + ".." +
                   std::to_string(config.m_max);
  return result;
}

CommandResult cmd_verify(const RunConfig& config) {
  const auto report = verify_lemma1(config.m_max);
  bool ok = report.all_passed();

  json items = json::array();
  for (const auto& it : report.items) {
    items.push_back({{"name", it.name}, {"m", it.m}, {"passed", it.passed},
                     {"value", it.value}, {"margin", it.margin}});
  }
  json roots = json::array();
  json signs = json::array();
  json kernel = json::array();
  json transversality = json::array();
  for (const auto& r : report.roots) {
    roots.push_back({{"m", r.m}, {"mu", r.mu}, {"bracket", {r.bracket.first, r.bracket.second}},
                     {"slope", r.slope}});
    const bool sign_ok = r.j0 < 0.0 && r.j1 < 0.0 && r.jm > 0.0;
    signs.push_back({{"m", r.m}, {"J0", r.j0}, {"J1", r.j1}, {"Jm", r.jm}, {"passed", sign_ok}});

    const auto at_root = apply_linearized(kernel_fields(r.m, r.mu).as_input(), r.mu);
    const double kin = at_root.kinematic.sup_norm(64);
    const double dyn = at_root.dynamic.sup_norm(64);
    double off = std::numeric_limits<double>::infinity();
    const auto& iv = operating_interval();
    for (double shift : {-0.1, 0.1}) {
      const double mu = r.mu + shift;
      if (mu <= iv.j11 || mu >= iv.j02) continue;
      const auto out = apply_linearized(kernel_fields(r.m, mu).as_input(), mu);
      off = std::min(off, out.dynamic.sup_norm(64));
    }
    // vanishing at mu_m, and not merely small everywhere nearby
    const bool kernel_ok = kin <= 1e-10 && dyn <= 1e-10 && off > 1e3 * dyn;
    kernel.push_back({{"m", r.m}, {"kinematic_sup", kin}, {"dynamic_sup", dyn},
                      {"dynamic_sup_off_root", off}, {"passed", kernel_ok}});

    const double dw = r.slope / r.mu;  // W'_{1,m}(mu_m), since W_{1,m}(mu_m) = 0
    transversality.push_back({{"m", r.m}, {"dW", dw}, {"passed", dw < 0.0}});
    ok = ok && sign_ok && kernel_ok && dw < 0.0;
  }
  const double w14 = wronskian(1, 4, operating_interval().j02);
  ok = ok && w14 < 0.0;

  json doc = {{"m_max", report.m_max},
              {"all_passed", ok},
              {"W14_at_j02", {{"value", w14}, {"passed", w14 < 0.0}}},
              {"identity_max_residual", report.identity_max_residual},
              {"roots", roots},
              {"signs", signs},
              {"kernel", kernel},
              {"transversality", transversality},
              {"items", items}};
  CommandResult result;
  result.exit_code = ok ? 0 : 1;
  result.files.push_back({"", doc.dump(2) + "\n"});
  result.message = ok ? "all checks passed" : "some checks FAILED";
  return result;
}

CommandResult cmd_scaling(const RunConfig& config) {
  const auto settings = settings_from(config);
  const double mu = find_mu(config.m).mu;
  const double control = mu + config.control_offset;
  const auto at_root = scaling_study(config.m, config.eps_list, mu, settings);
  const auto at_control = scaling_study(config.m, config.eps_list, control, settings);

  json summary = {{"m", config.m},
                  {"mu_m", mu},
                  {"control_mu", control},
                  {"slope_at_mu_m", at_root.slope},
                  {"intercept_at_mu_m", at_root.intercept},
                  {"slope_at_control", at_control.slope},
                  {"intercept_at_control", at_control.intercept}};
  CommandResult result;
  if (config.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < at_root.samples.size(); ++i) {
      rows.push_back({{"eps", at_root.samples[i].eps},
                      {"dev_at_mu_m", at_root.samples[i].dev},
                      {"dev_at_control", at_control.samples[i].dev}});
    }
    summary["samples"] = rows;
    result.files.push_back({"", summary.dump(2) + "\n"});
  } else {
    std::string csv = "eps,dev_at_mu_m,dev_at_control\n";
    for (std::size_t i = 0; i < at_root.samples.size(); ++i) {
      csv += csv_row({format_real(at_root.samples[i].eps), format_real(at_root.samples[i].dev),
                      format_real(at_control.samples[i].dev)});
    }
    csv += "# " + summary.dump() + "\n";
    result.files.push_back({"", std::move(csv)});
  }
  std::ostringstream msg;
  msg << "slope at mu_m " << at_root.slope << ", at control " << at_control.slope;
  result.message = msg.str();
  return result;
}

CommandResult cmd_branch(const RunConfig& config) {
  const auto settings = settings_from(config);
  CommandResult result;
  json points = json::array();
  auto emit = [&points](std::span<const BranchPoint> branch) {
    const auto diag = branch_diagnostics(branch);
    for (std::size_t i = 0; i < branch.size(); ++i) points.push_back(point_json(branch[i], diag[i]));
  };
  try {
    const auto branch = newton_continue(config.m, config.eps, config.steps, config.shape_modes,
                                        settings);
    emit(branch);
    std::size_t unconverged = 0;
    for (const auto& p : branch) unconverged += p.converged ? 0 : 1;
    result.message = std::to_string(branch.size()) + " branch points";
    if (unconverged > 0) {
      result.message += ", " + std::to_string(unconverged) +
                        " accepted at a stationary point above tolerance";
    }
  } catch (const ContinuationError& e) {
    emit(e.accepted());
    const auto& last = e.last_iterate();
    points.push_back({{"failure", e.what()}, {"eps", last.eps}, {"last_defect", last.defect}});
    result.exit_code = 1;
    result.message = e.what();
  }
  result.files.push_back({"", points.dump(2) + "\n"});
  return result;
}

namespace {

struct FigureField {
  ConformalMap map;
  std::function<double(Complex)> u;
};

FigureField figure_field(int m, const RunConfig& config) {
  if (config.first_order) {
    auto family = asymptotic_family(m, config.eps);
    auto map = family.map;
    return {map, [family](Complex x) { return family.value(x); }};
  }
  auto settings = settings_from(config);
  settings.accept_stationary = true;
  const auto branch = newton_continue(m, config.eps, config.steps, config.shape_modes, settings);
  const auto& p = branch.back();
  const int modes = select_modes(p.map, p.lambda, settings);
  const auto sol = solve_dirichlet(build_domain(p.map, settings.sample_count(modes)), p.lambda,
                                   modes, settings.dirichlet_tolerance);
  return {p.map, [sol](Complex x) { return sol.value(x); }};
}

bool inside(const std::vector<Complex>& polygon, Complex x) {
  bool in = false;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    const Complex a = polygon[i];
    const Complex b = polygon[j];
    if ((a.imag() > x.imag()) != (b.imag() > x.imag())) {
      const double cross = (b.real() - a.real()) * (x.imag() - a.imag()) / (b.imag() - a.imag()) +
                           a.real();
      if (x.real() < cross) in = !in;
    }
  }
  return in;
}

}  // namespace

CommandResult cmd_figure(const RunConfig& config) {
  CommandResult result;
  for (int m : config.m_list) {
    const auto field = figure_field(m, config);
    const int polyline = std::max(720, 8 * config.grid_n);

    std::vector<Complex> boundary;
    boundary.reserve(static_cast<std::size_t>(polyline));
    std::string bcsv = "x,y,u\n";
    double extent = 0.0;
    for (int i = 0; i < polyline; ++i) {
      const Complex z = field.map.phi(std::polar(1.0, 2.0 * std::numbers::pi * i / polyline));
      boundary.push_back(z);
      extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
      bcsv += csv_row({format_real(z.real()), format_real(z.imag()), format_real(field.u(z))});
    }

    std::string gcsv = "x,y,u\n";
    const int n = config.grid_n;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const Complex x(-extent + 2.0 * extent * ix / (n - 1), -extent + 2.0 * extent * iy / (n - 1));
        if (!inside(boundary, x)) continue;
        gcsv += csv_row({format_real(x.real()), format_real(x.imag()), format_real(field.u(x))});
      }
    }
    const std::string tag = "_m" + std::to_string(m);
    result.files.push_back({tag + "_boundary.csv", std::move(bcsv)});
    result.files.push_back({tag + "_grid.csv", std::move(gcsv)});
  }
  result.message = std::to_string(result.files.size()) + " figure files";
  return result;
}

CommandResult run(const RunConfig& config) {
  try {
    validate(config);
    const auto& s = config.subcommand;
    if (s == "mu-table") return cmd_mu_table(config);
    if (s == "verify") return cmd_verify(config);
    if (s == "scaling") return cmd_scaling(config);
    if (s == "branch") return cmd_branch(config);
    return cmd_figure(config);
  } catch (const UsageError& e) {
    return {2, {}, std::string("usage error: ") + e.what()};
  } catch (const std::exception& e) {
    return {1, {}, std::string("error: ") + e.what()};
  }
}

}  // namespace helmbif
