#include "ctpower/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ctpower {

namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

OptimumResult nelder_mead_minimize(const Objective& f, std::vector<double> start,
                                   const NelderMeadOptions& opts) {
  const std::size_t n = start.size();
  if (n == 0) throw std::invalid_argument("nelder_mead_minimize: empty start point");

  std::vector<Vertex> simplex(n + 1);
  simplex[0] = {start, f(start)};
  for (std::size_t i = 0; i < n; ++i) {
    auto x = start;
    x[i] += opts.initial_step;
    simplex[i + 1].f = f(x);
    simplex[i + 1].x = std::move(x);
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(n), trial(n);
  auto along = [&](double coeff) {
    // centroid + coeff * (centroid - worst)
    for (std::size_t j = 0; j < n; ++j)
      trial[j] = centroid[j] + coeff * (centroid[j] - simplex[n].x[j]);
    return f(trial);
  };

  OptimumResult result;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) diameter = std::max(diameter, distance(simplex[i].x, simplex[0].x));
    if (diameter < opts.diameter_tol) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j] / static_cast<double>(n);

    const double fr = along(opts.reflection);
    if (fr < simplex[0].f) {
      const auto reflected = trial;
      const double fe = along(opts.reflection * opts.expansion);
      if (fe < fr) {
        simplex[n] = {trial, fe};
      } else {
        simplex[n] = {reflected, fr};
      }
      continue;
    }
    if (fr < simplex[n - 1].f) {
      simplex[n] = {trial, fr};
      continue;
    }
    // Outside contraction when the reflection beats the worst, inside otherwise.
    const bool outside = fr < simplex[n].f;
    const double fc = along(outside ? opts.reflection * opts.contraction : -opts.contraction);
    if (fc < (outside ? fr : simplex[n].f)) {
      simplex[n] = {trial, fc};
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        simplex[i].x[j] = simplex[0].x[j] + opts.shrink * (simplex[i].x[j] - simplex[0].x[j]);
      simplex[i].f = f(simplex[i].x);
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  result.x = simplex[0].x;
  result.value = simplex[0].f;
  result.iterations = it;
  return result;
}

AngleOptimum maximize_over_su2(const std::function<double(const CMatrix&)>& f,
                               const AngleSearchOptions& opts) {
  const int res = opts.grid_resolution;
  if (res < 2) throw std::invalid_argument("maximize_over_su2: grid resolution must be >= 2");
  constexpr double pi = std::numbers::pi;

  AngleOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < res; ++a) {
    const double theta = 0.5 * pi * a / (res - 1);
    for (int b = 0; b < res; ++b) {
      const double phi = 2.0 * pi * b / res;
      for (int c = 0; c < res; ++c) {
        const double chi = 2.0 * pi * c / res;
        const double v = f(su2(theta, phi, chi));
        if (v > best.value) best = {theta, phi, chi, v, 0, false};
      }
    }
  }

  const auto refined = nelder_mead_minimize(
      [&](std::span<const double> x) { return -f(su2(x[0], x[1], x[2])); },
      {best.theta, best.phi, best.chi}, opts.refine);
  if (-refined.value >= best.value) {
    best = {refined.x[0], refined.x[1], refined.x[2], -refined.value, refined.iterations, refined.converged};
  } else {
    best.iterations = refined.iterations;
    best.converged = refined.converged;
  }
  return best;
}

}  // namespace ctpower
