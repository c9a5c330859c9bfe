#pragma once

#include <cstdint>
#include <vector>

#include "rsmboot/model.hpp"
#include "rsmboot/optim.hpp"

namespace rsmboot {

// b bootstrap estimates of the constrained maximum, one row per replicate.
struct BootstrapCloud {
  Eigen::MatrixX2d points;
  Eigen::VectorXd values;
  std::vector<std::array<BoundaryFlag, 2>> boundary_flags;
  std::vector<std::uint8_t> converged;
  Region region;
  std::uint64_t seed = 0;

  int b() const { return static_cast<int>(points.rows()); }
};

// Balanced resampling (Davison, Hinkley and Schechtman): b copies of 0..n-1
// are concatenated, permuted once by Fisher-Yates on the (seed, "balance")
// substream, and split into b rows of n. Every index appears exactly b times.
Eigen::MatrixXi balanced_resample_indices(int n, int b, std::uint64_t seed);

// Residual bootstrap of the constrained maximum: for each replicate,
// y* = X theta_hat + eps*_s (standardized residuals, balanced resampling),
// refit by least squares on the fixed design, then maximize the refitted
// surface over the region. Deterministic for any thread count.
BootstrapCloud bootstrap_xcm(const FitResult& fit_result, const Experiment& experiment, int b,
                             std::uint64_t seed, const NelderMeadConfig& config = {},
                             unsigned threads = 1);

}  // namespace rsmboot
