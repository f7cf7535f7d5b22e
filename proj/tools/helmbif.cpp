// helmbif: Bessel-Wronskian bifurcation points, defect scaling, branch
// continuation and figure data for the overdetermined Helmholtz problem.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "helmbif/commands.hpp"

namespace {

void add_format_out(CLI::App* sub, helmbif::RunConfig& config) {
  sub->add_option("--format", config.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", config.out, "Output path (prefix for figure); stdout if omitted");
}

bool write_outputs(const helmbif::RunConfig& config, const helmbif::CommandResult& result) {
  for (const auto& file : result.files) {
    if (config.out.empty()) {
      if (!file.name.empty()) std::cout << "# file: " << file.name << '\n';
      std::cout << file.content;
      continue;
    }
    const std::string path = config.out + file.name;
    std::ofstream os(path, std::ios::binary);
    os << file.content;
    if (!os) {
      std::cerr << "helmbif: cannot write " << path << '\n';
      return false;
    }
    std::cerr << "wrote " << path << '\n';
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace helmbif;
  RunConfig config;
  CLI::App app{"Numerical construction of Helmholtz bifurcation branches off the disk"};
  app.require_subcommand(1);

  auto* mu_table = app.add_subcommand("mu-table", "Table of bifurcation points mu_m");
  mu_table->add_option("--m", config.m, "First m")->capture_default_str();
  mu_table->add_option("--m-max", config.m_max, "Last m")->capture_default_str();
  add_format_out(mu_table, config);

  auto* verify = app.add_subcommand("verify", "Certify the Wronskian root properties for 4 <= m <= m-max");
  verify->add_option("--m-max", config.m_max, "Largest m")->capture_default_str();
  verify->add_option("--out", config.out, "Output path; stdout if omitted");

  auto* scaling = app.add_subcommand("scaling", "Defect scaling at mu_m and at a control value");
  scaling->add_option("--m", config.m)->capture_default_str();
  scaling->add_option("--eps-list", config.eps_list, "Comma-separated eps values")
      ->delimiter(',')
      ->capture_default_str();
  scaling->add_option("--control-offset", config.control_offset)->capture_default_str();
  scaling->add_option("--modes", config.modes, "Initial Bessel modes K")->capture_default_str();
  add_format_out(scaling, config);

  auto* branch = app.add_subcommand("branch", "Continue the branch from eps = 0 by Gauss-Newton");
  branch->add_option("--m", config.m)->capture_default_str();
  branch->add_option("--eps", config.eps, "Target eps")->capture_default_str();
  branch->add_option("--steps", config.steps)->capture_default_str();
  branch->add_option("--shape-modes", config.shape_modes, "Extra shape modes J")->capture_default_str();
  branch->add_option("--modes", config.modes, "Initial Bessel modes K")->capture_default_str();
  branch->add_option("--tol", config.tol, "Defect tolerance")->capture_default_str();
  branch->add_flag("--accept-stationary", config.accept_stationary,
                   "Keep points stalled above tolerance instead of failing");
  branch->add_option("--out", config.out, "Output path; stdout if omitted");

  auto* figure = app.add_subcommand("figure", "Boundary and interior grids of u per m");
  figure->add_option("--m-list", config.m_list, "Comma-separated m values")
      ->delimiter(',')
      ->capture_default_str();
  figure->add_option("--eps", config.eps)->default_str("0.1");
  figure->add_option("--grid-n", config.grid_n, "Grid points per side")->capture_default_str();
  figure->add_option("--steps", config.steps)->capture_default_str();
  figure->add_option("--shape-modes", config.shape_modes)->capture_default_str();
  figure->add_option("--modes", config.modes)->capture_default_str();
  figure->add_flag("--first-order", config.first_order, "Use the first-order family");
  figure->add_option("--out", config.out, "Output path prefix; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  for (auto* sub : {branch, figure}) {
    if (sub->parsed()) config.eps_given = sub->count("--eps") > 0;
  }
  if (config.subcommand == "figure" && !config.eps_given) config.eps = defaults::kFigureEps;

  const auto start = std::chrono::steady_clock::now();
  const auto result = run(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!write_outputs(config, result)) return 1;
  std::cerr << config.subcommand << ": " << result.message << " (" << seconds << " s)\n";
  return result.exit_code;
}
