#include "rsmboot/kde.hpp"

#include <cmath>

#include "rsmboot/parallel.hpp"

namespace rsmboot {

namespace {

// Antiderivatives of u^r * (15/16)(1-u^2)^2 for r = 0, 1, 2.
double f0(double u) { return 0.9375 * (u - (2.0 / 3.0) * u * u * u + 0.2 * std::pow(u, 5)); }
double f1(double u) {
  const double u2 = u * u;
  return 0.9375 * (0.5 * u2 - 0.5 * u2 * u2 + u2 * u2 * u2 / 6.0);
}
double f2(double u) {
  const double u3 = u * u * u;
  return 0.9375 * (u3 / 3.0 - 0.4 * u3 * u * u + u3 * u3 * u / 7.0);
}

}  // namespace

BoundaryWeights boundary_kernel_weights(double x, double lo, double hi, double h) {
  if (!(lo < hi)) throw std::invalid_argument("boundary_kernel_weights: lo must be < hi");
  if (!(h > 0.0)) throw std::invalid_argument("boundary_kernel_weights: h must be positive");
  if (x < lo || x > hi)
    throw std::invalid_argument("boundary_kernel_weights: x must lie in [lo, hi]");

  BoundaryWeights w;
  w.s_lo = std::max(-1.0, (lo - x) / h);
  w.s_hi = std::min(1.0, (hi - x) / h);
  if (w.s_hi - w.s_lo < 1e-12)
    throw DegenerateSupportError("boundary_kernel_weights: truncated support has zero length");
  if (w.s_lo == -1.0 && w.s_hi == 1.0) return w;  // untruncated: plain biweight

  const double a0 = f0(w.s_hi) - f0(w.s_lo);
  const double a1 = f1(w.s_hi) - f1(w.s_lo);
  const double a2 = f2(w.s_hi) - f2(w.s_lo);
  const double denom = a0 * a2 - a1 * a1;
  if (denom < 1e-14)
    throw NearSingularMomentsError(
        "boundary_kernel_weights: truncated moments nearly singular (bandwidth vastly larger "
        "than the support interval)");
  w.alpha = a2 / denom;
  w.gamma = -a1 / denom;
  return w;
}

DensityEstimate DensityEstimate::build(BootstrapCloud cloud, const Eigen::Vector2d& bandwidths,
                                       const Region& support) {
  for (int j = 0; j < 2; ++j)
    if (!(bandwidths[j] > 0.0))
      throw std::invalid_argument("DensityEstimate: bandwidths must be positive");

  DensityEstimate est{std::move(cloud), bandwidths, support, {}};
  const int b = est.cloud.b();
  est.point_weights.resize(b);
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < 2; ++j) {
      est.point_weights[i][j] = boundary_kernel_weights(est.cloud.points(i, j), support.lo[j],
                                                        support.hi[j], bandwidths[j]);
    }
  }
  return est;
}

double density_at(const DensityEstimate& estimate, const Eigen::Vector2d& x) {
  if (!estimate.support.contains(x)) return 0.0;
  const int b = estimate.cloud.b();
  const double h1 = estimate.bandwidths[0];
  const double h2 = estimate.bandwidths[1];
  double sum = 0.0;
  for (int i = 0; i < b; ++i) {
    const double u1 = (x[0] - estimate.cloud.points(i, 0)) / h1;
    if (u1 < -1.0 || u1 > 1.0) continue;
    const double u2 = (x[1] - estimate.cloud.points(i, 1)) / h2;
    if (u2 < -1.0 || u2 > 1.0) continue;
    const auto& w1 = estimate.point_weights[i][0];
    const auto& w2 = estimate.point_weights[i][1];
    sum += (w1.alpha + w1.gamma * u1) * biweight(u1) * (w2.alpha + w2.gamma * u2) * biweight(u2);
  }
  return sum / (static_cast<double>(b) * h1 * h2);
}

DensityGrid density_on_grid(const DensityEstimate& estimate, int resolution, unsigned threads) {
  if (resolution < 16) throw std::invalid_argument("density_on_grid: resolution must be >= 16");
  DensityGrid grid{resolution, estimate.support, {}, {}, {}};
  const int nodes = resolution + 1;
  grid.xs.resize(nodes);
  grid.ys.resize(nodes);
  for (int i = 0; i <= resolution; ++i) {
    const double t = static_cast<double>(i) / resolution;
    grid.xs[i] = estimate.support.lo[0] + t * estimate.support.width(0);
    grid.ys[i] = estimate.support.lo[1] + t * estimate.support.width(1);
  }
  // Exact endpoints so contour clamping and support checks are bit-clean.
  grid.xs[0] = estimate.support.lo[0];
  grid.xs[resolution] = estimate.support.hi[0];
  grid.ys[0] = estimate.support.lo[1];
  grid.ys[resolution] = estimate.support.hi[1];

  grid.values.resize(nodes, nodes);
  parallel_for(static_cast<std::size_t>(nodes), threads, [&](std::size_t iy) {
    for (int ix = 0; ix < nodes; ++ix) {
      grid.values(ix, static_cast<Eigen::Index>(iy)) =
          density_at(estimate, {grid.xs[ix], grid.ys[iy]});
    }
  });
  return grid;
}

}  // namespace rsmboot
