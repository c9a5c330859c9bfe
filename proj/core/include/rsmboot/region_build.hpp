#pragma once

#include <optional>
#include <vector>

#include "rsmboot/kde.hpp"

namespace rsmboot {

using Polygon = std::vector<Eigen::Vector2d>;

struct ConfidenceRegion {
  double alpha = 0.0;
  double f_alpha = 0.0;
  int captured_count = 0;
  std::vector<Polygon> polygons;
  int grid_resolution = 0;
  std::optional<bool> contains_true_point;
  double min_grid_density = 0.0;  // most negative boundary-kernel dip, diagnostic
};

// (1 - alpha) * b as an exact integer; throws NonIntegerMassError when it is
// more than 1e-9 from one. Rounding silently would change the confidence
// coefficient.
int required_capture_count(double alpha, int b);

// The (1-alpha)b-th largest of the density values at the cloud points: the
// level whose superlevel set captures exactly that many replicates (more on
// ties, making the region conservative).
double select_f_alpha(const Eigen::VectorXd& density_values_at_cloud, double alpha, int b);

// Membership is defined by the density threshold, not polygon containment;
// polygons are a finite-resolution rendering of the same set.
bool membership(const ConfidenceRegion& region_result, const DensityEstimate& density,
                const Eigen::Vector2d& x);

// Marching-squares isolines at the given level with linear interpolation
// along lattice edges. The grid is padded with a below-level ring so chains
// that reach the support boundary close along it; every returned polyline is
// a closed loop with vertices inside the support. Saddle cells resolve by the
// cell-center average.
std::vector<Polygon> extract_contours(const DensityGrid& grid, double level);

ConfidenceRegion build_region(const DensityEstimate& density, double alpha, int grid_resolution,
                              unsigned threads = 1);

}  // namespace rsmboot
