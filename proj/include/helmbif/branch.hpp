#pragma once

#include <span>
#include <vector>

#include "helmbif/errors.hpp"
#include "helmbif/fields.hpp"
#include "helmbif/helmholtz.hpp"

namespace helmbif {

/// Discretization and tolerance settings shared by defect evaluation and
/// continuation. samples == 0 means 8 (modes + 1).
/// When a Dirichlet solve misses its tolerance, the mode count is raised in
/// steps of 4 up to max_modes (further capped so K m <= 256).
struct SolverSettings {
  int modes = 12;
  int max_modes = 40;
  int samples = 0;
  double dirichlet_tolerance = kDefaultDirichletTolerance;
  double newton_tolerance = 1.0e-9;
  double fd_step = 1.0e-6;
  int max_halvings = 8;
  int max_iterations = 40;
  /// Accept a Gauss-Newton stationary point whose defect stays above
  /// newton_tolerance (marked converged = false) instead of throwing.
  bool accept_stationary = false;

  int sample_count(int k) const { return samples > 0 ? samples : 8 * (k + 1); }
};

/// Smallest K in modes, modes + 4, ... whose Dirichlet solve on phi(D) meets
/// the tolerance. Throws the last NonConvergenceError if none does.
int select_modes(const ConformalMap& map, double lambda, const SolverSettings& settings);

/// Weighted RMS of the normal derivative about its boundary mean for the
/// Dirichlet solution at `lambda` on phi(D).
double overdetermination_defect(const ConformalMap& map, double lambda,
                                const SolverSettings& settings = {});

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (log x, log y). Throws DegenerateDataError for
/// fewer than two points or nonpositive data.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct ScalingSample {
  double eps = 0.0;
  double dev = 0.0;
};

struct ScalingReport {
  int m = 0;
  double mu = 0.0;
  std::vector<ScalingSample> samples;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Defect of w = eps z^{m+1} at lambda = mu^2 for each eps, with a log-log
/// slope fit. eps values must be strictly increasing in (0, 0.05], at least
/// four of them spanning a factor of ten. Throws DegenerateDataError when
/// the data cannot support a fit (including any defect below 1e-13).
ScalingReport scaling_study(int m, std::span<const double> eps_list, double mu,
                            const SolverSettings& settings = {});

struct BranchPoint {
  int m = 0;
  double eps = 0.0;
  ConformalMap map;
  double lambda = 0.0;
  double c = 0.0;
  double defect = 0.0;
  double gamma = 0.0;                  // c0 - c
  std::vector<double> defect_history;  // defect at each Gauss-Newton iterate
  bool converged = true;               // defect <= newton_tolerance
};

/// Thrown by newton_continue; carries the accepted part of the branch and the
/// iterate at which the solve gave up.
class ContinuationError : public NonConvergenceError {
 public:
  ContinuationError(const std::string& what, double residual,
                    std::vector<BranchPoint> accepted, BranchPoint last)
      : NonConvergenceError(what, residual),
        accepted_(std::move(accepted)),
        last_(std::move(last)) {}

  const std::vector<BranchPoint>& accepted() const noexcept { return accepted_; }
  const BranchPoint& last_iterate() const noexcept { return last_; }

 private:
  std::vector<BranchPoint> accepted_;
  BranchPoint last_;
};

/// March eps = a_{m+1} from 0 to eps_target in `steps` equal steps. At each
/// step damped Gauss-Newton solves for (a_{2m+1}, ..., a_{(J+1)m+1}, lambda,
/// c) so that the normal derivative equals c on the validation nodes.
/// Requires |eps_target| <= 0.05, steps >= 1, 0 <= J <= 4.
std::vector<BranchPoint> newton_continue(int m, double eps_target, int steps, int shape_modes,
                                         const SolverSettings& settings = {});

struct PointDiagnostics {
  double eps = 0.0;
  double non_circularity = 0.0;     // RMS of |phi(e^{i theta})| about its mean
  bool c_negative = false;
  double symmetry_residual = 0.0;   // max |phi(R z) - R phi(z)|, R = e^{2 pi i / m}
};

std::vector<PointDiagnostics> branch_diagnostics(std::span<const BranchPoint> points);

/// RMS of |phi(e^{i theta})| about its mean over the full circle.
double non_circularity(const ConformalMap& map);

}  // namespace helmbif
