#pragma once

#include <vector>

#include "rsmboot/bootstrap.hpp"

namespace rsmboot {

// Biweight density (15/16)(1 - u^2)^2 on [-1, 1].
inline double biweight(double u) {
  if (u < -1.0 || u > 1.0) return 0.0;
  const double t = 1.0 - u * u;
  return 0.9375 * t * t;
}

// Linear boundary-kernel modifier m(u) = alpha + gamma * u for a kernel
// centered at x and truncated to S(x) = [max(-1,(lo-x)/h), min(1,(hi-x)/h)].
// The coefficients solve the two moment conditions
//   integral of m*K over S = 1,  integral of u*m*K over S = 0,
// from the truncated biweight moments a_r = integral of u^r K(u) du over S,
// which are closed-form polynomial antiderivatives. Valid for any h/interval
// ratio, which is what permits bandwidths comparable to the support width.
struct BoundaryWeights {
  double alpha = 1.0;
  double gamma = 0.0;
  double s_lo = -1.0;
  double s_hi = 1.0;
};

BoundaryWeights boundary_kernel_weights(double x, double lo, double hi, double h);

// Boundary-corrected product-kernel density estimate over the support
// rectangle. The correction is applied per data point: each point's kernel is
// a proper (signed) density on the support, so the estimate integrates to one
// for any cloud.
struct DensityEstimate {
  BootstrapCloud cloud;
  Eigen::Vector2d bandwidths;
  Region support;
  std::vector<std::array<BoundaryWeights, 2>> point_weights;

  static DensityEstimate build(BootstrapCloud cloud, const Eigen::Vector2d& bandwidths,
                               const Region& support);
};

// Zero outside the support. Values near edges can dip slightly negative
// (linear boundary kernels are not nonnegative); clipping is left to the
// rendering stage so that moment and normalization properties hold here.
double density_at(const DensityEstimate& estimate, const Eigen::Vector2d& x);

struct DensityGrid {
  int resolution = 0;  // lattice is (resolution+1)^2 inclusive of edges
  Region support;
  std::vector<double> xs;  // size resolution+1
  std::vector<double> ys;
  Eigen::MatrixXd values;  // values(ix, iy) = f(xs[ix], ys[iy])
};

DensityGrid density_on_grid(const DensityEstimate& estimate, int resolution,
                            unsigned threads = 1);

}  // namespace rsmboot
