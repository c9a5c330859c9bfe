#include "rsmboot/bandwidth.hpp"

#include <cmath>

#include "rsmboot/rng.hpp"

namespace rsmboot {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kJitterWidth = 0.05;  // U(0, 0.05) inward perturbation

// Biweight kernel constants: roughness R(K) = 5/7, second moment mu2 = 1/7.
constexpr double kBiweightRoughness = 5.0 / 7.0;
constexpr double kBiweightMu2 = 1.0 / 7.0;

Eigen::Vector2d column_sample_sd(const Eigen::MatrixX2d& pts) {
  const Eigen::Index b = pts.rows();
  Eigen::Vector2d sd;
  for (int j = 0; j < 2; ++j) {
    const double mean = pts.col(j).mean();
    sd[j] = std::sqrt((pts.col(j).array() - mean).square().sum() / static_cast<double>(b - 1));
  }
  return sd;
}

}  // namespace

const char* bandwidth_method_name(BandwidthMethod m) {
  return m == BandwidthMethod::kRuleOfThumb ? "rot" : "plugin";
}

Eigen::MatrixX2d jittered_points(const BootstrapCloud& cloud, const Region& region,
                                 std::uint64_t seed) {
  if (cloud.b() < 2) throw std::invalid_argument("jittered_points: need b >= 2");
  Eigen::MatrixX2d pts = cloud.points;
  for (int j = 0; j < 2; ++j) {
    RngStream stream = RngStream::from(seed, {static_cast<std::uint64_t>(j)});
    for (int i = 0; i < cloud.b(); ++i) {
      if (cloud.boundary_flags[i][j] == BoundaryFlag::kAtLo)
        pts(i, j) = region.lo[j] + stream.uniform(0.0, kJitterWidth);
      else if (cloud.boundary_flags[i][j] == BoundaryFlag::kAtHi)
        pts(i, j) = region.hi[j] - stream.uniform(0.0, kJitterWidth);
    }
  }
  return pts;
}

Eigen::Vector2d jittered_scale(const BootstrapCloud& cloud, const Region& region,
                               std::uint64_t seed) {
  const Eigen::Vector2d sd = column_sample_sd(jittered_points(cloud, region, seed));
  for (int j = 0; j < 2; ++j) {
    if (!(sd[j] > 0.0))
      throw ZeroScaleError("jittered_scale: coordinate " + std::to_string(j + 1) +
                           " has zero spread (degenerate cloud of interior points)");
  }
  return sd;
}

Eigen::Vector2d rule_of_thumb(const Eigen::Vector2d& scales, int b) {
  if (b < 2) throw std::invalid_argument("rule_of_thumb: need b >= 2");
  for (int j = 0; j < 2; ++j)
    if (!(scales[j] > 0.0)) throw std::invalid_argument("rule_of_thumb: scales must be positive");
  // 35^(1/5) is the biweight canonical bandwidth; Scott's rule uses b^(-1/(d+4)).
  const double c = std::pow(35.0, 0.2) * std::pow(static_cast<double>(b), -1.0 / 6.0);
  return c * scales;
}

Eigen::Vector2d plugin_bandwidth(const Eigen::MatrixX2d& points, const Eigen::Vector2d& scales) {
  const Eigen::Index b = points.rows();
  if (b < 10) throw std::invalid_argument("plugin_bandwidth: need b >= 10");
  for (int j = 0; j < 2; ++j)
    if (!(scales[j] > 0.0))
      throw std::invalid_argument("plugin_bandwidth: scales must be positive");

  // Stage 0/1 pilot: coordinate-symmetric bias balance against the
  // Normal-reference sixth-order functionals, g_j = scale_j (32/(5b))^(1/8).
  const double t = std::pow(32.0 / (5.0 * static_cast<double>(b)), 0.125);
  const double g1 = scales[0] * t;
  const double g2 = scales[1] * t;

  // Gaussian-kernel estimates of psi40, psi22, psi04. All derivative orders
  // are even, so pair terms are symmetric and the i<j sum doubles.
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * kPi);
  double s40 = 0.0, s22 = 0.0, s04 = 0.0;
  const auto accumulate = [&](double d1, double d2, double weight) {
    const double u1 = d1 / g1;
    const double u2 = d2 / g2;
    const double phi1 = inv_sqrt2pi * std::exp(-0.5 * u1 * u1);
    const double phi2 = inv_sqrt2pi * std::exp(-0.5 * u2 * u2);
    const double he2_1 = u1 * u1 - 1.0;
    const double he2_2 = u2 * u2 - 1.0;
    const double he4_1 = u1 * u1 * (u1 * u1 - 6.0) + 3.0;
    const double he4_2 = u2 * u2 * (u2 * u2 - 6.0) + 3.0;
    const double pp = phi1 * phi2 * weight;
    s40 += he4_1 * pp;
    s04 += he4_2 * pp;
    s22 += he2_1 * he2_2 * pp;
  };
  for (Eigen::Index i = 0; i < b; ++i) {
    accumulate(0.0, 0.0, 1.0);  // diagonal term
    for (Eigen::Index j = i + 1; j < b; ++j)
      accumulate(points(i, 0) - points(j, 0), points(i, 1) - points(j, 1), 2.0);
  }
  const double bb = static_cast<double>(b) * static_cast<double>(b);
  const double psi40 = s40 / (bb * std::pow(g1, 5) * g2);
  const double psi04 = s04 / (bb * std::pow(g2, 5) * g1);
  const double psi22 = s22 / (bb * std::pow(g1, 3) * std::pow(g2, 3));

  if (!(psi40 > 0.0) || !(psi04 > 0.0))
    throw PluginFailureError("plugin_bandwidth: nonpositive curvature functional estimate");
  const double ratio = std::pow(psi40 / psi04, 0.25);
  const double denom = psi40 + ratio * ratio * psi22;
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw PluginFailureError("plugin_bandwidth: AMISE system has no positive solution");

  // Diagonal-AMISE solution for the biweight product kernel; equivalently the
  // Gaussian-scale solution times the canonical ratio (100 pi)^(1/6).
  const double roughness_ratio =
      (kBiweightRoughness * kBiweightRoughness) / (kBiweightMu2 * kBiweightMu2);
  const double h1 =
      std::pow(roughness_ratio / (static_cast<double>(b) * ratio * denom), 1.0 / 6.0);
  const Eigen::Vector2d h{h1, ratio * h1};
  if (!(h[0] > 0.0) || !(h[1] > 0.0) || !h.allFinite())
    throw PluginFailureError("plugin_bandwidth: solved bandwidths not positive finite");
  return h;
}

BandwidthSelection select_bandwidths(const BootstrapCloud& cloud, const Region& region,
                                     BandwidthMethod method, std::uint64_t jitter_seed,
                                     bool allow_plugin_fallback) {
  BandwidthSelection sel;
  sel.method = method;
  sel.jitter_seed = jitter_seed;
  const Eigen::MatrixX2d pts = jittered_points(cloud, region, jitter_seed);
  sel.scales = column_sample_sd(pts);
  for (int j = 0; j < 2; ++j) {
    if (!(sel.scales[j] > 0.0))
      throw ZeroScaleError("select_bandwidths: coordinate " + std::to_string(j + 1) +
                           " has zero spread (degenerate cloud of interior points)");
  }

  if (method == BandwidthMethod::kPlugin) {
    try {
      sel.h = plugin_bandwidth(pts, sel.scales);
      return sel;
    } catch (const PluginFailureError&) {
      if (!allow_plugin_fallback) throw;
      sel.plugin_fell_back = true;
    }
  }
  sel.h = rule_of_thumb(sel.scales, cloud.b());
  return sel;
}

}  // namespace rsmboot
