#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rsmboot/bandwidth.hpp"
#include "rsmboot/rng.hpp"
#include "test_util.hpp"

using namespace rsmboot;
using testutil::make_cloud;

namespace {

const Region kBox = Region::square(1.4);

Eigen::MatrixX2d interior_cloud(int b, std::uint64_t seed, double s1 = 0.3, double s2 = 0.3) {
  RngStream rng = RngStream::from(seed);
  Eigen::MatrixX2d pts(b, 2);
  for (int i = 0; i < b; ++i) {
    pts(i, 0) = std::clamp(0.1 + s1 * rng.normal(), -1.39, 1.39);
    pts(i, 1) = std::clamp(-0.2 + s2 * rng.normal(), -1.39, 1.39);
  }
  return pts;
}

}  // namespace

TEST_CASE("jitter is inert for interior clouds") {
  const BootstrapCloud cloud = make_cloud(interior_cloud(60, 1), kBox);
  const Eigen::MatrixX2d pts = jittered_points(cloud, kBox, 7);
  CHECK((pts - cloud.points).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::Vector2d sd = jittered_scale(cloud, kBox, 7);
  // Plain sample standard deviation.
  for (int j = 0; j < 2; ++j) {
    const double mean = cloud.points.col(j).mean();
    const double expect = std::sqrt((cloud.points.col(j).array() - mean).square().sum() / 59.0);
    CHECK(sd[j] == expect);
  }
}

TEST_CASE("boundary-trapped coordinates gain strictly positive spread") {
  Eigen::MatrixX2d pts(40, 2);
  RngStream rng = RngStream::from(2);
  for (int i = 0; i < 40; ++i) pts.row(i) << -1.4, rng.uniform(-1.0, 1.0);
  const BootstrapCloud cloud = make_cloud(pts, kBox);
  const Eigen::MatrixX2d jit = jittered_points(cloud, kBox, 11);
  for (int i = 0; i < 40; ++i) {
    CHECK(jit(i, 0) > -1.4);
    CHECK(jit(i, 0) < -1.35);            // inward by U(0, 0.05)
    CHECK(jit(i, 1) == cloud.points(i, 1));  // interior coordinate untouched
  }
  const Eigen::Vector2d sd = jittered_scale(cloud, kBox, 11);
  CHECK(sd[0] > 0.0);
  CHECK(sd[0] < 0.05);
  // Without jitter this coordinate's scale would be zero.
  CHECK_THROWS_AS(jittered_scale(make_cloud(Eigen::MatrixX2d::Zero(5, 2), kBox), kBox, 1),
                  ZeroScaleError);
}

TEST_CASE("jitter determinism") {
  Eigen::MatrixX2d pts(20, 2);
  for (int i = 0; i < 20; ++i) pts.row(i) << 1.4, -1.4;
  const BootstrapCloud cloud = make_cloud(pts, kBox);
  const Eigen::Vector2d a = jittered_scale(cloud, kBox, 5);
  const Eigen::Vector2d b = jittered_scale(cloud, kBox, 5);
  const Eigen::Vector2d c = jittered_scale(cloud, kBox, 6);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  CHECK(a[0] != c[0]);
}

TEST_CASE("rule of thumb") {
  SUBCASE("unit scales, b = 2000") {
    const Eigen::Vector2d h = rule_of_thumb({1.0, 1.0}, 2000);
    CHECK(h[0] == doctest::Approx(0.5736).epsilon(2e-4));  // 2.036 / 2000^(1/6)
    CHECK(h[1] == h[0]);
  }
  SUBCASE("degree-one homogeneity in scale") {
    const Eigen::Vector2d h1 = rule_of_thumb({0.4, 0.7}, 500);
    const Eigen::Vector2d h2 = rule_of_thumb({0.8, 1.4}, 500);
    CHECK(h2[0] == doctest::Approx(2.0 * h1[0]).epsilon(1e-14));
    CHECK(h2[1] == doctest::Approx(2.0 * h1[1]).epsilon(1e-14));
  }
  SUBCASE("strictly decreasing in b") {
    double prev = std::numeric_limits<double>::infinity();
    for (const int b : {10, 100, 1000, 10000, 100000}) {
      const double h = rule_of_thumb({1.0, 1.0}, b)[0];
      CHECK(h < prev);
      prev = h;
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(rule_of_thumb({0.0, 1.0}, 100), std::invalid_argument);
    CHECK_THROWS_AS(rule_of_thumb({1.0, 1.0}, 1), std::invalid_argument);
  }
}

TEST_CASE("selectors are equivariant under coordinate relabeling") {
  const Eigen::MatrixX2d pts = interior_cloud(400, 3, 0.25, 0.6);
  Eigen::MatrixX2d swapped(400, 2);
  swapped.col(0) = pts.col(1);
  swapped.col(1) = pts.col(0);
  const BootstrapCloud cloud = make_cloud(pts, kBox);
  const BootstrapCloud cloud_swapped = make_cloud(swapped, kBox);

  const Eigen::Vector2d s1 = jittered_scale(cloud, kBox, 4);
  const Eigen::Vector2d s2 = jittered_scale(cloud_swapped, kBox, 4);
  CHECK(s1[0] == s2[1]);
  CHECK(s1[1] == s2[0]);

  const Eigen::Vector2d rot1 = rule_of_thumb(s1, 400);
  const Eigen::Vector2d rot2 = rule_of_thumb(s2, 400);
  CHECK(rot1[0] == rot2[1]);
  CHECK(rot1[1] == rot2[0]);

  const Eigen::Vector2d pi1 = plugin_bandwidth(pts, s1);
  const Eigen::Vector2d pi2 = plugin_bandwidth(swapped, s2);
  CHECK(pi1[0] == doctest::Approx(pi2[1]).epsilon(1e-10));
  CHECK(pi1[1] == doctest::Approx(pi2[0]).epsilon(1e-10));
}

TEST_CASE("plug-in matches the Normal AMISE oracle within 25 percent") {
  const double s1 = 0.5, s2 = 0.9;
  const int b = 4000;
  RngStream rng = RngStream::from(12);
  Eigen::MatrixX2d pts(b, 2);
  for (int i = 0; i < b; ++i) pts.row(i) << s1 * rng.normal(), s2 * rng.normal();
  const Eigen::Vector2d scales{s1, s2};
  const Eigen::Vector2d h = plugin_bandwidth(pts, scales);
  // Independent coordinates, Normal truth: h_j = sigma_j (100 pi / b)^(1/6).
  const double c = std::pow(100.0 * 3.14159265358979323846 / b, 1.0 / 6.0);
  CHECK(h[0] == doctest::Approx(s1 * c).epsilon(0.25));
  CHECK(h[1] == doctest::Approx(s2 * c).epsilon(0.25));
}

TEST_CASE("select_bandwidths always returns positive finite bandwidths") {
  // Saddle-like degenerate cloud: one coordinate entirely on the bound.
  RngStream rng = RngStream::from(14);
  Eigen::MatrixX2d pts(120, 2);
  for (int i = 0; i < 120; ++i) pts.row(i) << -1.4, std::clamp(0.46 + 0.3 * rng.normal(), -1.39, 1.39);
  for (const auto method : {BandwidthMethod::kRuleOfThumb, BandwidthMethod::kPlugin}) {
    const BandwidthSelection sel = select_bandwidths(make_cloud(pts, kBox), kBox, method, 91);
    CHECK(sel.h[0] > 0.0);
    CHECK(sel.h[1] > 0.0);
    CHECK(std::isfinite(sel.h[0]));
    CHECK(std::isfinite(sel.h[1]));
    if (method == BandwidthMethod::kPlugin && !sel.plugin_fell_back) {
      CHECK(sel.h[0] < 0.1);  // tight boundary cluster: h1 at the jitter scale
    }
  }
  // Interior cloud, plug-in path, no fallback.
  const BandwidthSelection sel =
      select_bandwidths(make_cloud(interior_cloud(200, 15), kBox), kBox,
                        BandwidthMethod::kPlugin, 17);
  CHECK_FALSE(sel.plugin_fell_back);
  CHECK(sel.h.allFinite());
}

TEST_CASE("plugin input validation") {
  CHECK_THROWS_AS(plugin_bandwidth(Eigen::MatrixX2d::Zero(5, 2), {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(plugin_bandwidth(interior_cloud(50, 16), {0.0, 1.0}), std::invalid_argument);
}
