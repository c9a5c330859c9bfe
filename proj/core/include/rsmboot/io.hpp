#pragma once

#include <string>

#include "rsmboot/sim.hpp"

namespace rsmboot {

// Shortest round-trip decimal form; stable across runs for byte-identical
// output documents.
std::string format_double(double v);

// CSV with header "x1,x2,y", decimal-point reals, one row per run.
Experiment read_experiment_csv(const std::string& path, const Region& region);

std::string cloud_csv(const BootstrapCloud& cloud);       // x1,x2,value,on_b1,on_b2
std::string grid_csv(const DensityGrid& grid);            // x1,x2,f
std::string coverage_groups_csv(const CoverageReport& report);  // alpha,group,coverage
std::string coverage_series_csv(const std::vector<CoverageReport>& reports);

// Key-value audit block shared by the output documents; excludes
// execution-only settings (thread counts) so reruns compare byte-identical.
struct RunEcho {
  std::string command;
  std::string input_path;
  Region region = Region::square(1.4);
  int b = 0;
  double alpha = 0.0;
  std::string bandwidth_method;
  int grid_resolution = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

struct FitReportData {
  RunEcho echo;
  FitResult fit;
  CurvatureEigen curvature;
  bool has_stationary_point = false;
  Eigen::Vector2d stationary = Eigen::Vector2d::Zero();
  ConstrainedMaximum x_cm;
  bool has_f_test = false;
  FTestResult symmetry_test;
};

std::string fit_report_document(const FitReportData& data);

std::string region_document(const RunEcho& echo, const BandwidthSelection& bw,
                            const ConfidenceRegion& region, const BootstrapCloud& cloud);

std::string coverage_document(const RunEcho& echo, const CoverageReport& report);

// Self-contained rendering: cloud points, contour polylines, region bounds,
// and maximizer markers.
std::string region_svg(const BootstrapCloud& cloud, const std::vector<Polygon>& polygons,
                       const Region& region, const Eigen::Vector2d& x_cm_hat,
                       const Eigen::Vector2d* true_point = nullptr);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rsmboot
