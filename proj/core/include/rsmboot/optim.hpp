#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rsmboot/model.hpp"

namespace rsmboot {

enum class BoundaryFlag { kInterior, kAtLo, kAtHi };

struct ConstrainedMaximum {
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  double value = 0.0;
  std::array<BoundaryFlag, 2> on_boundary{BoundaryFlag::kInterior, BoundaryFlag::kInterior};
  bool converged = true;
};

struct NelderMeadConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  int max_iterations = 500;      // per start
  double diameter_tol = 1e-10;   // simplex diameter (inf norm)
  double value_tol = 1e-12;      // best-to-worst value spread
  int restarts = 1;              // fresh simplex around the incumbent

  void validate() const;
};

// Fraction of the coordinate range within which a maximizer coordinate snaps
// onto the bound; downstream jitter depends on recognizing boundary contact.
inline constexpr double kBoundarySnapFraction = 1e-6;

using Objective = std::function<double(const Eigen::Vector2d&)>;

// Nelder-Mead ascent with every trial vertex clamped into the region. Returns
// the best terminal point across starts, snapped to bounds within tolerance.
// A result with converged == false means the iteration budget ran out on
// every start while the simplex diameter was still above tolerance.
ConstrainedMaximum nelder_mead_max(const Objective& objective, const Region& region,
                                   const NelderMeadConfig& config,
                                   const std::vector<Eigen::Vector2d>& starts);

// Exact maximizer set of a quadratic over the box: interior stationary point,
// the four edge sub-problems in closed form, and the four corners. All global
// maximizers within value tolerance 1e-9 are returned in lexicographic point
// order; more than one element means the maximum is not unique.
std::vector<ConstrainedMaximum> quadratic_box_max_exact(const QuadraticModel& model,
                                                        const Region& region);

// Pipeline maximizer: Nelder-Mead over the fitted surface from a default
// multi-start set (region center, corners shrunk 10% inward, and the clamped
// stationary point when B is nonsingular).
ConstrainedMaximum constrained_max(const QuadraticModel& model, const Region& region,
                                   const NelderMeadConfig& config = {});

}  // namespace rsmboot
