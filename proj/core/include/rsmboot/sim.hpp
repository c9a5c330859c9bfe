#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsmboot/bandwidth.hpp"
#include "rsmboot/region_build.hpp"

namespace rsmboot {

// A generating truth: Table-style coefficients plus the location of the box
// maximum, validated against the exact enumerator at construction.
struct TrueSystem {
  QuadraticModel model;
  Eigen::Vector2d x_cm_true;
  std::string name;

  TrueSystem(QuadraticModel m, const Eigen::Vector2d& x_cm, std::string system_name,
             const Region& region = Region::square(1.4));

  static TrueSystem concave_down();
  static TrueSystem saddle();
  static TrueSystem by_name(const std::string& name);
};

// y_i = g(x_i; true theta) + N(0, sigma^2) draws from the seed's substream.
Experiment simulate_experiment(const TrueSystem& system, const Eigen::MatrixX2d& design,
                               const Region& region, double sigma, std::uint64_t seed);

struct StudySettings {
  int n_reps = 100;
  int group_size = 20;
  int design_replicates = 1;  // 1 -> n=13, 2 -> 26, 16 -> 208
  int center_runs = 5;
  double axial_distance = 1.4142135623730951;
  int b = 500;
  std::vector<double> alphas{0.10, 0.05, 0.02};
  BandwidthMethod bandwidth_method = BandwidthMethod::kRuleOfThumb;
  double sigma = 3.0;
  Region region = Region::square(1.4);
  std::uint64_t seed = 0;
  NelderMeadConfig optim;
  unsigned threads = 1;
};

struct CoverageReport {
  struct AlphaRow {
    double alpha = 0.0;
    double mean_coverage = 0.0;
    double std_error = 0.0;
    std::vector<double> group_coverage;
  };
  std::string system;
  int n = 0;
  int b = 0;
  int groups = 0;
  int experiments_per_group = 0;
  int failed_experiments = 0;
  BandwidthMethod bandwidth_method = BandwidthMethod::kRuleOfThumb;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<AlphaRow> rows;
  // Bandwidth averages across successful experiments, for selector comparisons.
  Eigen::Vector2d mean_bandwidth = Eigen::Vector2d::Zero();
};

// Simulate -> fit -> bootstrap -> bandwidths -> density -> per-alpha
// threshold, recording whether the region captured the true maximizer.
// Coverage is aggregated in groups; the standard error is the sample SD of
// group means over sqrt(groups). Experiments whose pipeline throws are
// excluded from their group's denominator and counted in the report.
CoverageReport coverage_study(const TrueSystem& system, const StudySettings& settings);

std::vector<CoverageReport> compare_sample_sizes(const TrueSystem& system,
                                                 const std::vector<int>& replicate_counts,
                                                 const StudySettings& settings);

}  // namespace rsmboot
