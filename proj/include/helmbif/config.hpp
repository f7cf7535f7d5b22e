#pragma once

#include <array>

namespace helmbif::defaults {

// Single source of truth for CLI defaults; every value is overridable by a flag.
inline constexpr int kModes = 12;              // --modes K (Trefftz modes 0, m, ..., K m)
inline constexpr int kMaxModes = 40;           // adaptive ceiling for branch solves
inline constexpr int kSamplesPerMode = 8;      // M = 8 (K + 1) collocation nodes per sector
inline constexpr double kDirichletTolerance = 1e-9;
inline constexpr double kNewtonTolerance = 1e-9;  // --tol
inline constexpr double kFdStep = 1e-6;
inline constexpr int kMaxHalvings = 8;
inline constexpr double kControlOffset = 0.3;  // --control-offset
inline constexpr std::array kEpsList{1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2};
inline constexpr double kBranchEps = 0.05;
inline constexpr int kSteps = 10;
inline constexpr int kShapeModes = 3;          // --shape-modes J
inline constexpr int kM = 4;
inline constexpr int kMMax = 8;
inline constexpr double kFigureEps = 0.1;
inline constexpr int kGridN = 101;
inline constexpr int kGridNMax = 512;

}  // namespace helmbif::defaults
