#include "rsmboot/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace rsmboot {

std::string format_double(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

namespace {

std::string format_point(const Eigen::Vector2d& p) {
  return format_double(p[0]) + " " + format_double(p[1]);
}

const char* flag_code(BoundaryFlag f) {
  switch (f) {
    case BoundaryFlag::kAtLo: return "-1";
    case BoundaryFlag::kAtHi: return "1";
    case BoundaryFlag::kInterior: break;
  }
  return "0";
}

double parse_field(const std::string& field, int line_no, const char* name) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end)
    throw CsvParseError("row " + std::to_string(line_no) + ": field '" + name +
                        "' is not a decimal-point real: '" + field + "'");
  return value;
}

std::string echo_block(const RunEcho& echo) {
  std::ostringstream out;
  out << "command: " << echo.command << "\n";
  if (!echo.input_path.empty()) out << "input: " << echo.input_path << "\n";
  out << "region: " << format_double(echo.region.lo[0]) << " " << format_double(echo.region.hi[0])
      << " " << format_double(echo.region.lo[1]) << " " << format_double(echo.region.hi[1])
      << "\n";
  if (echo.b > 0) out << "b: " << echo.b << "\n";
  if (echo.alpha > 0.0) out << "alpha: " << format_double(echo.alpha) << "\n";
  if (!echo.bandwidth_method.empty()) out << "bandwidth-method: " << echo.bandwidth_method << "\n";
  if (echo.grid_resolution > 0) out << "grid-resolution: " << echo.grid_resolution << "\n";
  if (echo.has_seed) out << "seed: " << echo.seed << "\n";
  return out.str();
}

}  // namespace

Experiment read_experiment_csv(const std::string& path, const Region& region) {
  std::ifstream in(path);
  if (!in) throw CsvParseError("cannot open input file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw CsvParseError("empty input file '" + path + "'");
  std::string header = line;
  header.erase(std::remove_if(header.begin(), header.end(),
                              [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
               header.end());
  if (header != "x1,x2,y")
    throw CsvParseError("row 1: expected header 'x1,x2,y', got '" + line + "'");

  std::vector<std::array<double, 3>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    trimmed.erase(std::remove(trimmed.begin(), trimmed.end(), '\r'), trimmed.end());
    if (trimmed.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = trimmed.find(',', start);
      fields.push_back(trimmed.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 3)
      throw CsvParseError("row " + std::to_string(line_no) + ": expected 3 comma-separated "
                          "fields, got " + std::to_string(fields.size()));
    rows.push_back({parse_field(fields[0], line_no, "x1"), parse_field(fields[1], line_no, "x2"),
                    parse_field(fields[2], line_no, "y")});
  }

  Eigen::MatrixX2d points(rows.size(), 2);
  Eigen::VectorXd responses(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    points(static_cast<Eigen::Index>(i), 0) = rows[i][0];
    points(static_cast<Eigen::Index>(i), 1) = rows[i][1];
    responses[static_cast<Eigen::Index>(i)] = rows[i][2];
  }
  return Experiment(std::move(points), std::move(responses), region);
}

std::string cloud_csv(const BootstrapCloud& cloud) {
  std::ostringstream out;
  out << "x1,x2,value,on_b1,on_b2\n";
  for (int i = 0; i < cloud.b(); ++i) {
    out << format_double(cloud.points(i, 0)) << "," << format_double(cloud.points(i, 1)) << ","
        << format_double(cloud.values[i]) << "," << flag_code(cloud.boundary_flags[i][0]) << ","
        << flag_code(cloud.boundary_flags[i][1]) << "\n";
  }
  return out.str();
}

std::string grid_csv(const DensityGrid& grid) {
  std::ostringstream out;
  out << "x1,x2,f\n";
  for (std::size_t iy = 0; iy < grid.ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
      out << format_double(grid.xs[ix]) << "," << format_double(grid.ys[iy]) << ","
          << format_double(grid.values(static_cast<Eigen::Index>(ix),
                                       static_cast<Eigen::Index>(iy)))
          << "\n";
    }
  }
  return out.str();
}

std::string coverage_groups_csv(const CoverageReport& report) {
  std::ostringstream out;
  out << "alpha,group,coverage\n";
  for (const auto& row : report.rows) {
    for (std::size_t g = 0; g < row.group_coverage.size(); ++g) {
      out << format_double(row.alpha) << "," << (g + 1) << ","
          << format_double(row.group_coverage[g]) << "\n";
    }
  }
  return out.str();
}

std::string coverage_series_csv(const std::vector<CoverageReport>& reports) {
  std::ostringstream out;
  out << "system,n,b,bandwidth,alpha,mean_coverage,std_error\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      out << report.system << "," << report.n << "," << report.b << ","
          << bandwidth_method_name(report.bandwidth_method) << "," << format_double(row.alpha)
          << "," << format_double(row.mean_coverage) << "," << format_double(row.std_error)
          << "\n";
    }
  }
  return out.str();
}

std::string fit_report_document(const FitReportData& data) {
  std::ostringstream out;
  out << "schema: rsmboot.fit/1\n" << echo_block(data.echo);
  const auto& model = data.fit.model;
  out << "n: " << data.fit.design_matrix.rows() << "\n";
  out << "beta0: " << format_double(model.beta0) << "\n";
  out << "beta1: " << format_double(model.beta[0]) << "\n";
  out << "beta2: " << format_double(model.beta[1]) << "\n";
  out << "beta12: " << format_double(model.b12) << "\n";
  out << "beta11: " << format_double(model.b11) << "\n";
  out << "beta22: " << format_double(model.b22) << "\n";
  out << "curvature-eigenvalues: " << format_double(data.curvature.lambda_min) << " "
      << format_double(data.curvature.lambda_max) << "\n";
  out << "classification: " << surface_class_name(data.curvature.classification) << "\n";
  if (data.has_stationary_point) {
    out << "stationary-point: " << format_point(data.stationary) << "\n";
    if (data.curvature.classification != SurfaceClass::kConcaveDown)
      out << "stationary-point-note: not a maximum\n";
  } else {
    out << "stationary-point: none (singular curvature matrix)\n";
  }
  out << "x-cm: " << format_point(data.x_cm.point) << "\n";
  out << "x-cm-value: " << format_double(data.x_cm.value) << "\n";
  out << "x-cm-boundary:";
  for (const auto flag : data.x_cm.on_boundary) {
    out << (flag == BoundaryFlag::kInterior ? " interior"
                                            : (flag == BoundaryFlag::kAtLo ? " at-lo" : " at-hi"));
  }
  out << "\n";
  out << "sigma2-hat: " << format_double(data.fit.sigma2_hat) << "\n";
  out << "leverage-sum: " << format_double(data.fit.leverage.sum()) << "\n";
  out << "max-abs-std-residual: " << format_double(data.fit.std_residuals.cwiseAbs().maxCoeff())
      << "\n";
  if (data.has_f_test) {
    out << "symmetry-test-f: " << format_double(data.symmetry_test.f) << "\n";
    out << "symmetry-test-df: " << data.symmetry_test.df_num << " " << data.symmetry_test.df_den
        << "\n";
    out << "symmetry-test-p: " << format_double(data.symmetry_test.p_value) << "\n";
  }
  return out.str();
}

std::string region_document(const RunEcho& echo, const BandwidthSelection& bw,
                            const ConfidenceRegion& region, const BootstrapCloud& cloud) {
  std::ostringstream out;
  out << "schema: rsmboot.region/1\n" << echo_block(echo);
  out << "scales: " << format_double(bw.scales[0]) << " " << format_double(bw.scales[1]) << "\n";
  out << "bandwidths: " << format_double(bw.h[0]) << " " << format_double(bw.h[1]) << "\n";
  out << "plugin-fell-back: " << (bw.plugin_fell_back ? "yes" : "no") << "\n";
  out << "f-alpha: " << format_double(region.f_alpha) << "\n";
  out << "captured-count: " << region.captured_count << "\n";
  int boundary_points = 0;
  for (const auto& flags : cloud.boundary_flags)
    if (flags[0] != BoundaryFlag::kInterior || flags[1] != BoundaryFlag::kInterior)
      ++boundary_points;
  out << "cloud-boundary-points: " << boundary_points << "\n";
  out << "min-grid-density: " << format_double(region.min_grid_density) << "\n";
  out << "polygons: " << region.polygons.size() << "\n";
  for (std::size_t p = 0; p < region.polygons.size(); ++p) {
    out << "polygon-" << p << ":";
    for (const auto& v : region.polygons[p]) {
      out << " " << format_double(v[0]) << " " << format_double(v[1]) << ";";
    }
    out << "\n";
  }
  return out.str();
}

std::string coverage_document(const RunEcho& echo, const CoverageReport& report) {
  std::ostringstream out;
  out << "schema: rsmboot.coverage/1\n" << echo_block(echo);
  out << "system: " << report.system << "\n";
  out << "n: " << report.n << "\n";
  out << "groups: " << report.groups << "\n";
  out << "experiments-per-group: " << report.experiments_per_group << "\n";
  out << "failed-experiments: " << report.failed_experiments << "\n";
  out << "sigma: " << format_double(report.sigma) << "\n";
  out << "mean-bandwidths: " << format_double(report.mean_bandwidth[0]) << " "
      << format_double(report.mean_bandwidth[1]) << "\n";
  for (const auto& row : report.rows) {
    out << "coverage[" << format_double(row.alpha) << "]: mean " << format_double(row.mean_coverage)
        << " se " << format_double(row.std_error) << " groups";
    for (const double g : row.group_coverage) out << " " << format_double(g);
    out << "\n";
  }
  return out.str();
}

std::string region_svg(const BootstrapCloud& cloud, const std::vector<Polygon>& polygons,
                       const Region& region, const Eigen::Vector2d& x_cm_hat,
                       const Eigen::Vector2d* true_point) {
  constexpr double kSize = 640.0;
  constexpr double kMargin = 40.0;
  const double scale_x = (kSize - 2 * kMargin) / region.width(0);
  const double scale_y = (kSize - 2 * kMargin) / region.width(1);
  const auto px = [&](double x) { return kMargin + (x - region.lo[0]) * scale_x; };
  const auto py = [&](double y) { return kSize - kMargin - (y - region.lo[1]) * scale_y; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n";
  out << "<rect x=\"" << format_double(px(region.lo[0])) << "\" y=\""
      << format_double(py(region.hi[1])) << "\" width=\"" << format_double(scale_x * region.width(0))
      << "\" height=\"" << format_double(scale_y * region.width(1))
      << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i < cloud.b(); ++i) {
    out << "<circle cx=\"" << format_double(px(cloud.points(i, 0))) << "\" cy=\""
        << format_double(py(cloud.points(i, 1)))
        << "\" r=\"1.6\" fill=\"#4477aa\" fill-opacity=\"0.45\"/>\n";
  }
  for (const auto& poly : polygons) {
    out << "<path d=\"";
    for (std::size_t v = 0; v < poly.size(); ++v) {
      out << (v == 0 ? "M" : "L") << format_double(px(poly[v][0])) << " "
          << format_double(py(poly[v][1]));
    }
    out << "Z\" fill=\"none\" stroke=\"#cc3311\" stroke-width=\"1.8\"/>\n";
  }
  const auto cross = [&](const Eigen::Vector2d& p, const char* color) {
    const double cx = px(p[0]);
    const double cy = py(p[1]);
    for (const auto [dx, dy] : {std::pair{6.0, 6.0}, std::pair{6.0, -6.0}}) {
      out << "<line x1=\"" << format_double(cx - dx) << "\" y1=\"" << format_double(cy - dy)
          << "\" x2=\"" << format_double(cx + dx) << "\" y2=\"" << format_double(cy + dy)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    }
  };
  cross(x_cm_hat, "#117733");
  if (true_point != nullptr) cross(*true_point, "#000000");
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing output file '" + path + "'");
}

}  // namespace rsmboot
