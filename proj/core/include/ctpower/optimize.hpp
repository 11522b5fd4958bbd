#pragma once

// Derivative-free maximisation used by the numeric oracles.

#include <functional>
#include <span>
#include <vector>

#include "ctpower/qlinalg.hpp"

namespace ctpower {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_step = 0.05;
  /// Stop once the largest vertex distance from the best vertex drops below this.
  double diameter_tol = 1e-8;
  int max_iterations = 500;
};

struct OptimumResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

OptimumResult nelder_mead_minimize(const Objective& f, std::vector<double> start,
                                   const NelderMeadOptions& opts = {});

/// Maximises f over su2(theta, phi, chi) angles: a grid of resolution^3 points
/// (theta in [0, pi/2], phi and chi in [0, 2 pi)) seeds a Nelder-Mead run.
struct AngleSearchOptions {
  int grid_resolution = 16;
  NelderMeadOptions refine;
};

struct AngleOptimum {
  double theta = 0.0;
  double phi = 0.0;
  double chi = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;

  CMatrix unitary() const { return su2(theta, phi, chi); }
};

AngleOptimum maximize_over_su2(const std::function<double(const CMatrix&)>& f,
                               const AngleSearchOptions& opts = {});

}  // namespace ctpower
