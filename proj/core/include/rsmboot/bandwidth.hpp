#pragma once

#include <cstdint>

#include "rsmboot/bootstrap.hpp"

namespace rsmboot {

enum class BandwidthMethod { kRuleOfThumb, kPlugin };

const char* bandwidth_method_name(BandwidthMethod m);

struct BandwidthSelection {
  Eigen::Vector2d h = Eigen::Vector2d::Zero();
  BandwidthMethod method = BandwidthMethod::kRuleOfThumb;
  Eigen::Vector2d scales = Eigen::Vector2d::Zero();  // jittered standard deviations
  std::uint64_t jitter_seed = 0;
  bool plugin_fell_back = false;
};

// Copy of the cloud points with every boundary-trapped coordinate moved
// inward from its bound by an independent U(0, 0.05) deviate. Interior
// coordinates are returned untouched; the cloud itself is never modified.
Eigen::MatrixX2d jittered_points(const BootstrapCloud& cloud, const Region& region,
                                 std::uint64_t seed);

// Per-coordinate sample standard deviations of the jitter-modified cloud.
// Throws ZeroScaleError if a coordinate still has zero spread.
Eigen::Vector2d jittered_scale(const BootstrapCloud& cloud, const Region& region,
                               std::uint64_t seed);

// Scott's d=2 rule scaled to the biweight kernel:
//   h_j = 35^(1/5) * scale_j * b^(-1/6).
Eigen::Vector2d rule_of_thumb(const Eigen::Vector2d& scales, int b);

// Two-stage diagonal plug-in: Normal-reference pilot bandwidths from the
// jittered scales, Gaussian-kernel estimates of the fourth-order integrated
// density-derivative functionals on the jitter-modified points, then the
// closed-form diagonal-AMISE solve converted to biweight scale. Throws
// PluginFailureError when the functional estimates leave no positive
// bandwidth solution.
Eigen::Vector2d plugin_bandwidth(const Eigen::MatrixX2d& points, const Eigen::Vector2d& scales);

// Pipeline selector: one jitter pass feeding the chosen method. Plug-in
// failures fall back to the rule of thumb (flagged) unless forbidden.
BandwidthSelection select_bandwidths(const BootstrapCloud& cloud, const Region& region,
                                     BandwidthMethod method, std::uint64_t jitter_seed,
                                     bool allow_plugin_fallback = true);

}  // namespace rsmboot
