#include "rsmboot/region_build.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rsmboot/parallel.hpp"

namespace rsmboot {

int required_capture_count(double alpha, int b) {
  if (b < 1) throw std::invalid_argument("required_capture_count: b must be >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("required_capture_count: alpha must be in [0, 1)");
  const double mass = (1.0 - alpha) * static_cast<double>(b);
  const double rounded = std::round(mass);
  if (std::abs(mass - rounded) > 1e-9)
    throw NonIntegerMassError("(1 - alpha) * b = " + std::to_string(mass) +
                              " is not an integer; choose b so the capture count is exact");
  const int m = static_cast<int>(rounded);
  if (m < 1) throw std::invalid_argument("required_capture_count: capture count must be >= 1");
  return m;
}

double select_f_alpha(const Eigen::VectorXd& density_values_at_cloud, double alpha, int b) {
  if (density_values_at_cloud.size() != b)
    throw std::invalid_argument("select_f_alpha: value count differs from b");
  if (!density_values_at_cloud.allFinite())
    throw std::invalid_argument("select_f_alpha: density values must be finite");
  const int m = required_capture_count(alpha, b);
  std::vector<double> values(density_values_at_cloud.data(), density_values_at_cloud.data() + b);
  std::nth_element(values.begin(), values.begin() + (m - 1), values.end(), std::greater<>());
  return values[m - 1];
}

bool membership(const ConfidenceRegion& region_result, const DensityEstimate& density,
                const Eigen::Vector2d& x) {
  if (!density.support.contains(x)) return false;
  return density_at(density, x) >= region_result.f_alpha;
}

namespace {

// Padded-lattice marching squares. The grid is surrounded by a virtual ring
// of below-level values, so every isoline is a closed loop; ring-cell
// vertices clamp exactly onto the support boundary, which is the required
// closure along it. Each crossing edge carries exactly two segments (one per
// adjacent cell), so loop walking is a perfect matching.
class ContourBuilder {
 public:
  ContourBuilder(const DensityGrid& grid, double level) : grid_(grid), level_(level) {
    nodes_ = grid.resolution + 3;  // actual lattice plus one ring
    pad_value_ = std::min(level, grid.values.minCoeff()) - 1.0;
    spacing_x_ = grid.support.width(0) / grid.resolution;
    spacing_y_ = grid.support.width(1) / grid.resolution;
  }

  std::vector<Polygon> run() {
    for (int cy = 0; cy + 1 < nodes_; ++cy)
      for (int cx = 0; cx + 1 < nodes_; ++cx) emit_cell(cx, cy);

    std::vector<Polygon> polygons;
    std::vector<bool> used(segments_.size(), false);
    for (std::size_t s0 = 0; s0 < segments_.size(); ++s0) {
      if (used[s0]) continue;
      Polygon poly;
      std::size_t seg = s0;
      std::int64_t edge = segments_[s0].first;
      while (!used[seg]) {
        used[seg] = true;
        append_vertex(poly, edge);
        const std::int64_t next_edge =
            segments_[seg].first == edge ? segments_[seg].second : segments_[seg].first;
        append_vertex(poly, next_edge);
        const auto& pair = incident_.at(next_edge);
        seg = pair[0] == seg ? pair[1] : pair[0];
        edge = next_edge;
      }
      dedupe(poly);
      if (poly.size() >= 3) polygons.push_back(std::move(poly));
    }
    return polygons;
  }

 private:
  double value(int px, int py) const {
    if (px == 0 || py == 0 || px == nodes_ - 1 || py == nodes_ - 1) return pad_value_;
    return grid_.values(px - 1, py - 1);
  }

  double coord_x(int px) const {
    if (px == 0) return grid_.support.lo[0] - spacing_x_;
    if (px == nodes_ - 1) return grid_.support.hi[0] + spacing_x_;
    return grid_.xs[px - 1];
  }

  double coord_y(int py) const {
    if (py == 0) return grid_.support.lo[1] - spacing_y_;
    if (py == nodes_ - 1) return grid_.support.hi[1] + spacing_y_;
    return grid_.ys[py - 1];
  }

  bool inside(int px, int py) const { return value(px, py) >= level_; }

  // Edge ids: horizontal edges join (ex,ey)-(ex+1,ey), vertical (ex,ey)-(ex,ey+1).
  std::int64_t h_edge(int ex, int ey) const {
    return (static_cast<std::int64_t>(ey) * nodes_ + ex) * 2;
  }
  std::int64_t v_edge(int ex, int ey) const {
    return (static_cast<std::int64_t>(ey) * nodes_ + ex) * 2 + 1;
  }

  Eigen::Vector2d crossing_point(std::int64_t edge) const {
    const bool vertical = (edge & 1) != 0;
    const std::int64_t cell = edge >> 1;
    const int ex = static_cast<int>(cell % nodes_);
    const int ey = static_cast<int>(cell / nodes_);
    const double va = value(ex, ey);
    const double vb = vertical ? value(ex, ey + 1) : value(ex + 1, ey);
    const double s = (level_ - va) / (vb - va);
    if (vertical) {
      const double y = coord_y(ey) + s * (coord_y(ey + 1) - coord_y(ey));
      return {coord_x(ex), y};
    }
    const double x = coord_x(ex) + s * (coord_x(ex + 1) - coord_x(ex));
    return {x, coord_y(ey)};
  }

  void add_segment(std::int64_t e1, std::int64_t e2) {
    const auto index = segments_.size();
    segments_.emplace_back(e1, e2);
    for (const std::int64_t e : {e1, e2}) {
      auto [it, inserted] = incident_.try_emplace(e, std::array<std::size_t, 2>{index, index});
      if (!inserted) it->second[1] = index;
    }
  }

  void emit_cell(int cx, int cy) {
    const bool b00 = inside(cx, cy);
    const bool b10 = inside(cx + 1, cy);
    const bool b11 = inside(cx + 1, cy + 1);
    const bool b01 = inside(cx, cy + 1);
    const int code = (b00 ? 1 : 0) | (b10 ? 2 : 0) | (b11 ? 4 : 0) | (b01 ? 8 : 0);
    if (code == 0 || code == 15) return;

    const std::int64_t bottom = h_edge(cx, cy);
    const std::int64_t top = h_edge(cx, cy + 1);
    const std::int64_t left = v_edge(cx, cy);
    const std::int64_t right = v_edge(cx + 1, cy);

    switch (code) {
      case 1: case 14: add_segment(left, bottom); break;
      case 2: case 13: add_segment(bottom, right); break;
      case 3: case 12: add_segment(left, right); break;
      case 4: case 11: add_segment(right, top); break;
      case 6: case 9: add_segment(bottom, top); break;
      case 7: case 8: add_segment(left, top); break;
      case 5: {  // inside at BL and TR; split by the cell-center average
        const double center = 0.25 * (value(cx, cy) + value(cx + 1, cy) + value(cx + 1, cy + 1) +
                                      value(cx, cy + 1));
        if (center >= level_) {
          add_segment(left, top);
          add_segment(bottom, right);
        } else {
          add_segment(left, bottom);
          add_segment(right, top);
        }
        break;
      }
      case 10: {  // inside at BR and TL
        const double center = 0.25 * (value(cx, cy) + value(cx + 1, cy) + value(cx + 1, cy + 1) +
                                      value(cx, cy + 1));
        if (center >= level_) {
          add_segment(left, bottom);
          add_segment(right, top);
        } else {
          add_segment(bottom, right);
          add_segment(left, top);
        }
        break;
      }
      default: break;
    }
  }

  void append_vertex(Polygon& poly, std::int64_t edge) const {
    Eigen::Vector2d p = crossing_point(edge);
    p[0] = std::min(std::max(p[0], grid_.support.lo[0]), grid_.support.hi[0]);
    p[1] = std::min(std::max(p[1], grid_.support.lo[1]), grid_.support.hi[1]);
    poly.push_back(p);
  }

  static void dedupe(Polygon& poly) {
    Polygon out;
    for (const auto& p : poly) {
      if (out.empty() || p != out.back()) out.push_back(p);
    }
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    poly = std::move(out);
  }

  const DensityGrid& grid_;
  double level_;
  int nodes_;
  double pad_value_;
  double spacing_x_;
  double spacing_y_;
  std::vector<std::pair<std::int64_t, std::int64_t>> segments_;
  std::unordered_map<std::int64_t, std::array<std::size_t, 2>> incident_;
};

}  // namespace

std::vector<Polygon> extract_contours(const DensityGrid& grid, double level) {
  if (!std::isfinite(level)) throw std::invalid_argument("extract_contours: level must be finite");
  return ContourBuilder(grid, level).run();
}

ConfidenceRegion build_region(const DensityEstimate& density, double alpha, int grid_resolution,
                              unsigned threads) {
  const int b = density.cloud.b();
  Eigen::VectorXd at_cloud(b);
  parallel_for(static_cast<std::size_t>(b), threads, [&](std::size_t i) {
    at_cloud[static_cast<Eigen::Index>(i)] =
        density_at(density, density.cloud.points.row(static_cast<Eigen::Index>(i)));
  });

  ConfidenceRegion out;
  out.alpha = alpha;
  out.grid_resolution = grid_resolution;
  out.f_alpha = select_f_alpha(at_cloud, alpha, b);
  out.captured_count = static_cast<int>((at_cloud.array() >= out.f_alpha).count());

  DensityGrid grid = density_on_grid(density, grid_resolution, threads);
  out.min_grid_density = grid.values.minCoeff();
  grid.values = grid.values.cwiseMax(0.0);  // clip for rendering only
  out.polygons = extract_contours(grid, out.f_alpha);
  return out;
}

}  // namespace rsmboot
