#include "helmbif/branch.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "helmbif/special.hpp"
#include "helmbif/wronskian.hpp"

namespace helmbif {

namespace {

struct Solved {
  SymmetricDomain domain;
  DirichletSolution solution;
};

Solved solve_adaptive(const ConformalMap& map, double lambda, const SolverSettings& settings) {
  const int cap = std::min(settings.max_modes, kMaxOrder / map.symmetry());
  for (int k = settings.modes;; k += 4) {
    auto domain = build_domain(map, settings.sample_count(k));
    try {
      auto sol = solve_dirichlet(domain, lambda, k, settings.dirichlet_tolerance);
      return {std::move(domain), std::move(sol)};
    } catch (const NonConvergenceError&) {
      if (k + 4 > cap) throw;
    }
  }
}

}  // namespace

int select_modes(const ConformalMap& map, double lambda, const SolverSettings& settings) {
  return static_cast<int>(solve_adaptive(map, lambda, settings).solution.coefficients().size()) -
         1;
}

double overdetermination_defect(const ConformalMap& map, double lambda,
                                const SolverSettings& settings) {
  const auto [domain, sol] = solve_adaptive(map, lambda, settings);
  const auto trace = normal_derivative(sol, domain);
  return deviation(trace.values, trace.weights).dev;
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DegenerateDataError("fit_loglog: need at least two (x, y) pairs");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw DegenerateDataError("fit_loglog: data must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw DegenerateDataError("fit_loglog: x values coincide");
  const double slope = (n * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / n};
}

ScalingReport scaling_study(int m, std::span<const double> eps_list, double mu,
                            const SolverSettings& settings) {
  if (eps_list.size() < 4) {
    std::ostringstream os;
    os << "scaling_study: need at least 4 eps values, got " << eps_list.size();
    throw DegenerateDataError(os.str());
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] <= 0.05)) {
      throw DomainError("scaling_study: eps values must lie in (0, 0.05]");
    }
    if (i > 0 && !(eps_list[i] > eps_list[i - 1])) {
      throw DomainError("scaling_study: eps values must be strictly increasing");
    }
  }
  if (eps_list.back() < 10.0 * eps_list.front()) {
    throw DegenerateDataError("scaling_study: eps values must span at least a decade");
  }
  if (!(mu > 0.0 && mu < kMaxArgument)) throw DomainError("scaling_study: mu must be positive");

  ScalingReport report{m, mu, {}, 0.0, 0.0};
  std::vector<double> xs, ys;
  for (double eps : eps_list) {
    const double dev = overdetermination_defect(ConformalMap::single_mode(m, eps), mu * mu,
                                                settings);
    if (!(dev >= 1e-13)) {
      std::ostringstream os;
      os << "scaling_study: defect " << dev << " at eps = " << eps
         << " is below 1e-13; slope fit would be noise";
      throw DegenerateDataError(os.str());
    }
    report.samples.push_back({eps, dev});
    xs.push_back(eps);
    ys.push_back(dev);
  }
  const auto fit = fit_loglog(xs, ys);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  return report;
}

namespace {

// Residual of the overdetermined system for a fixed amplitude eps.
// Unknowns: x = (a_{2m+1}, ..., a_{(J+1)m+1}, lambda, c).
class BranchSystem {
 public:
  BranchSystem(int m, double eps, int shape_modes, int modes, const SolverSettings& settings)
      : m_(m), eps_(eps), shape_modes_(shape_modes), modes_(modes), settings_(settings) {}

  Eigen::Index unknowns() const { return shape_modes_ + 2; }

  ConformalMap map(const Eigen::VectorXd& x) const {
    std::vector<double> shape(static_cast<std::size_t>(shape_modes_) + 1, 0.0);
    shape[0] = eps_;
    for (int i = 0; i < shape_modes_; ++i) shape[static_cast<std::size_t>(i) + 1] = x(i);
    return {m_, std::move(shape)};
  }

  struct Evaluation {
    Eigen::VectorXd residual;  // sqrt(w_i / W) (du/dn_i - c)
    double defect = 0.0;
    double norm = 0.0;
  };

  /// nullopt when the iterate leaves the admissible set (non-injective map,
  /// lambda <= 0, Dirichlet solve above tolerance).
  std::optional<Evaluation> evaluate(const Eigen::VectorXd& x) const {
    const double lambda = x(shape_modes_);
    const double c = x(shape_modes_ + 1);
    try {
      const auto domain = build_domain(map(x), settings_.sample_count(modes_));
      const auto sol = solve_dirichlet(domain, lambda, modes_, settings_.dirichlet_tolerance);
      const auto trace = normal_derivative(sol, domain);
      double total = 0.0;
      for (double w : trace.weights) total += w;
      Evaluation e;
      e.residual.resize(static_cast<Eigen::Index>(trace.values.size()));
      for (std::size_t i = 0; i < trace.values.size(); ++i) {
        e.residual(static_cast<Eigen::Index>(i)) =
            std::sqrt(trace.weights[i] / total) * (trace.values[i] - c);
      }
      e.defect = deviation(trace.values, trace.weights).dev;
      e.norm = e.residual.norm();
      return e;
    } catch (const DomainError&) {
      return std::nullopt;
    } catch (const NonConvergenceError&) {
      return std::nullopt;
    }
  }

 private:
  int m_;
  double eps_;
  int shape_modes_;
  int modes_;
  SolverSettings settings_;
};

BranchPoint make_point(const BranchSystem& system, int m, double eps, int shape_modes,
                       const Eigen::VectorXd& x, double c0, double defect,
                       std::vector<double> history) {
  const double lambda = x(shape_modes);
  const double c = x(shape_modes + 1);
  return {m, eps, system.map(x), lambda, c, defect, c0 - c, std::move(history)};
}

}  // namespace

std::vector<BranchPoint> newton_continue(int m, double eps_target, int steps, int shape_modes,
                                         const SolverSettings& settings) {
  if (m < 4 || m > 64) throw DomainError("newton_continue: m must satisfy 4 <= m <= 64");
  if (!(std::abs(eps_target) <= 0.05)) {
    throw DomainError("newton_continue: |eps_target| must be <= 0.05");
  }
  if (steps < 1) throw DomainError("newton_continue: steps must be >= 1");
  if (shape_modes < 0 || shape_modes > 4) {
    throw DomainError("newton_continue: shape modes J must satisfy 0 <= J <= 4");
  }

  const double mu = find_mu(m).mu;
  const double c0 = trivial_solution(mu).c0;
  const Eigen::Index n = shape_modes + 2;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x(shape_modes) = mu * mu;
  x(shape_modes + 1) = c0;

  std::vector<BranchPoint> branch;
  {
    const BranchSystem trivial(m, 0.0, shape_modes, settings.modes, settings);
    const auto e = trivial.evaluate(x);
    if (!e) throw NonConvergenceError("newton_continue: trivial point failed to solve", 0.0);
    branch.push_back(make_point(trivial, m, 0.0, shape_modes, x, c0, e->defect, {e->defect}));
  }
  if (eps_target == 0.0) return branch;

  for (int step = 1; step <= steps; ++step) {
    const double eps = eps_target * step / steps;
    // the mode count is frozen within a step so the residual map stays smooth
    int modes = settings.modes;
    {
      const BranchSystem probe(m, eps, shape_modes, modes, settings);
      try {
        SolverSettings margin = settings;
        margin.dirichlet_tolerance *= 0.01;
        modes = select_modes(probe.map(x), x(shape_modes), margin);
      } catch (const NonConvergenceError& e) {
        throw ContinuationError(std::string("newton_continue: ") + e.what(), e.residual(),
                                branch,
                                make_point(probe, m, eps, shape_modes, x, c0, 0.0, {}));
      }
    }
    const BranchSystem system(m, eps, shape_modes, modes, settings);
    auto current = system.evaluate(x);
    if (!current) {
      throw ContinuationError("newton_continue: initial guess inadmissible", 0.0, branch,
                              make_point(system, m, eps, shape_modes, x, c0, 0.0, {}));
    }
    std::vector<double> history{current->defect};

    auto fail = [&](const std::string& why) {
      std::ostringstream os;
      os << "newton_continue: " << why << " at eps = " << eps << " (defect "
         << current->defect << ")";
      throw ContinuationError(os.str(), current->defect, branch,
                              make_point(system, m, eps, shape_modes, x, c0, current->defect,
                                         history));
    };

    int iteration = 0;
    bool stationary = false;
    while (current->defect > settings.newton_tolerance && !stationary) {
      if (++iteration > settings.max_iterations) {
        if (settings.accept_stationary) break;
        fail("iteration limit reached");
      }

      Eigen::MatrixXd jac(current->residual.size(), n);
      for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd xp = x;
        const double h = settings.fd_step * std::max(1.0, std::abs(x(j)));
        xp(j) += h;
        const auto ep = system.evaluate(xp);
        if (!ep) fail("Jacobian probe left the admissible set");
        jac.col(j) = (ep->residual - current->residual) / h;
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
      if (qr.rank() < n) {
        std::ostringstream os;
        os << "newton_continue: rank-deficient Jacobian (rank " << qr.rank() << " < " << n
           << ") at eps = " << eps;
        throw SingularityError(os.str());
      }
      const Eigen::VectorXd delta = qr.solve(-current->residual);

      const double previous = current->norm;
      double t = 1.0;
      bool accepted = false;
      for (int halving = 0; halving <= settings.max_halvings; ++halving, t *= 0.5) {
        const Eigen::VectorXd trial = x + t * delta;
        if (auto et = system.evaluate(trial); et && et->norm < previous) {
          const double norm = et->norm;
          x = trial;
          current = std::move(et);
          accepted = true;
          // least-squares floor: the step no longer buys anything
          stationary = previous - norm <= 1e-6 * previous ||
                       t * delta.norm() <= 1e-14 * (1.0 + x.norm());
          break;
        }
      }
      if (!accepted) stationary = true;
      else history.push_back(current->defect);
    }
    const bool converged = current->defect <= settings.newton_tolerance;
    if (!converged && !settings.accept_stationary) fail("Gauss-Newton stagnated");
    auto point =
        make_point(system, m, eps, shape_modes, x, c0, current->defect, std::move(history));
    point.converged = converged;
    branch.push_back(std::move(point));
  }
  return branch;
}

double non_circularity(const ConformalMap& map) {
  constexpr int kSamples = 4096;
  std::vector<double> radius(kSamples);
  double mean = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    radius[i] = std::abs(map.phi(std::polar(1.0, 2.0 * std::numbers::pi * i / kSamples)));
    mean += radius[i];
  }
  mean /= kSamples;
  double var = 0.0;
  for (double r : radius) var += (r - mean) * (r - mean);
  return std::sqrt(var / kSamples);
}

std::vector<PointDiagnostics> branch_diagnostics(std::span<const BranchPoint> points) {
  std::vector<PointDiagnostics> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const int m = p.map.symmetry();
    const Complex rot = std::polar(1.0, 2.0 * std::numbers::pi / m);
    double sym = 0.0;
    for (int i = 0; i < 256; ++i) {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * i / 256);
      sym = std::max(sym, std::abs(p.map.phi(rot * z) - rot * p.map.phi(z)));
    }
    out.push_back({p.eps, non_circularity(p.map), p.c < 0.0, sym});
  }
  return out;
}

}  // namespace helmbif
