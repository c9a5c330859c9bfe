#include "rsmboot/sim.hpp"

#include <cmath>

#include "rsmboot/parallel.hpp"
#include "rsmboot/rng.hpp"

namespace rsmboot {

TrueSystem::TrueSystem(QuadraticModel m, const Eigen::Vector2d& x_cm, std::string system_name,
                       const Region& region)
    : model(m), x_cm_true(x_cm), name(std::move(system_name)) {
  const auto maxima = quadratic_box_max_exact(model, region);
  if (maxima.size() != 1)
    throw std::invalid_argument("TrueSystem '" + name + "': box maximum is not unique");
  if ((maxima[0].point - x_cm_true).cwiseAbs().maxCoeff() > 1e-3)
    throw std::invalid_argument("TrueSystem '" + name +
                                "': stated x_cm disagrees with the exact maximizer");
}

TrueSystem TrueSystem::concave_down() {
  QuadraticModel m;
  m.beta0 = 86.850;
  m.beta = {5.242, 4.778};
  m.b12 = -0.775;
  m.b11 = -2.781;
  m.b22 = -2.524;
  // Interior maximum at -B^{-1} beta / 2, printed as (0.828, 0.819).
  return TrueSystem(m, {0.82830016256525475, 0.81934773653168137}, "concave-down");
}

TrueSystem TrueSystem::saddle() {
  QuadraticModel m;
  m.beta0 = 90.259;
  m.beta = {-6.425, 1.244};
  m.b12 = -0.775;
  m.b11 = 2.781;
  m.b22 = -2.524;
  // Boundary maximum on the x1 = -1.4 edge, printed as (-1.4, 0.462).
  return TrueSystem(m, {-1.4, 0.46137083993660856}, "saddle");
}

TrueSystem TrueSystem::by_name(const std::string& name) {
  if (name == "concave-down") return concave_down();
  if (name == "saddle") return saddle();
  throw std::invalid_argument("unknown system '" + name + "' (use concave-down or saddle)");
}

Experiment simulate_experiment(const TrueSystem& system, const Eigen::MatrixX2d& design,
                               const Region& region, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("simulate_experiment: sigma must be >= 0");
  RngStream noise = RngStream::from(seed, {kTagNoise});
  Eigen::VectorXd y(design.rows());
  for (Eigen::Index i = 0; i < design.rows(); ++i)
    y[i] = system.model.value(design.row(i)) + sigma * noise.normal();
  return Experiment(design, std::move(y), region);
}

namespace {

struct ExperimentOutcome {
  bool failed = false;
  std::vector<std::uint8_t> covered;  // one flag per alpha
  Eigen::Vector2d bandwidths = Eigen::Vector2d::Zero();
};

}  // namespace

CoverageReport coverage_study(const TrueSystem& system, const StudySettings& settings) {
  if (settings.n_reps < 1 || settings.group_size < 1 ||
      settings.n_reps % settings.group_size != 0)
    throw std::invalid_argument("coverage_study: n_reps must be a positive multiple of group_size");
  if (settings.alphas.empty()) throw std::invalid_argument("coverage_study: no alphas given");
  for (const double alpha : settings.alphas)
    required_capture_count(alpha, settings.b);  // reject before any simulation

  const Eigen::MatrixX2d design = replicate_design(
      ccd_design(settings.center_runs, settings.axial_distance), settings.design_replicates);
  const std::size_t n_alphas = settings.alphas.size();

  std::vector<ExperimentOutcome> outcomes(settings.n_reps);
  parallel_for(static_cast<std::size_t>(settings.n_reps), settings.threads, [&](std::size_t e) {
    ExperimentOutcome& out = outcomes[e];
    out.covered.assign(n_alphas, 0);
    try {
      const std::uint64_t exp_seed = derive_stream(settings.seed, {e});
      const Experiment experiment =
          simulate_experiment(system, design, settings.region, settings.sigma, exp_seed);
      const FitResult fitted = fit(experiment);
      const BootstrapCloud cloud =
          bootstrap_xcm(fitted, experiment, settings.b, derive_stream(exp_seed, {kTagBoot}),
                        settings.optim, 1);
      const BandwidthSelection bw = select_bandwidths(
          cloud, settings.region, settings.bandwidth_method, derive_stream(exp_seed, {kTagJitter}));
      const DensityEstimate density = DensityEstimate::build(cloud, bw.h, settings.region);

      Eigen::VectorXd at_cloud(settings.b);
      for (int i = 0; i < settings.b; ++i)
        at_cloud[i] = density_at(density, density.cloud.points.row(i));
      const double at_true = density_at(density, system.x_cm_true);

      for (std::size_t a = 0; a < n_alphas; ++a) {
        const double f_alpha = select_f_alpha(at_cloud, settings.alphas[a], settings.b);
        out.covered[a] = settings.region.contains(system.x_cm_true) && at_true >= f_alpha ? 1 : 0;
      }
      out.bandwidths = bw.h;
    } catch (const std::exception&) {
      out.failed = true;
    }
  });

  CoverageReport report;
  report.system = system.name;
  report.n = static_cast<int>(design.rows());
  report.b = settings.b;
  report.groups = settings.n_reps / settings.group_size;
  report.experiments_per_group = settings.group_size;
  report.bandwidth_method = settings.bandwidth_method;
  report.sigma = settings.sigma;
  report.seed = settings.seed;

  int successes = 0;
  for (const auto& out : outcomes) {
    if (out.failed) {
      ++report.failed_experiments;
    } else {
      report.mean_bandwidth += out.bandwidths;
      ++successes;
    }
  }
  if (successes > 0) report.mean_bandwidth /= successes;

  for (std::size_t a = 0; a < n_alphas; ++a) {
    CoverageReport::AlphaRow row;
    row.alpha = settings.alphas[a];
    for (int g = 0; g < report.groups; ++g) {
      int hits = 0;
      int denom = 0;
      for (int e = g * settings.group_size; e < (g + 1) * settings.group_size; ++e) {
        if (outcomes[e].failed) continue;
        ++denom;
        hits += outcomes[e].covered[a];
      }
      row.group_coverage.push_back(denom > 0 ? static_cast<double>(hits) / denom : 0.0);
    }
    double mean = 0.0;
    for (const double c : row.group_coverage) mean += c;
    mean /= report.groups;
    row.mean_coverage = mean;
    if (report.groups > 1) {
      double ss = 0.0;
      for (const double c : row.group_coverage) ss += (c - mean) * (c - mean);
      row.std_error = std::sqrt(ss / (report.groups - 1)) / std::sqrt(report.groups);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<CoverageReport> compare_sample_sizes(const TrueSystem& system,
                                                 const std::vector<int>& replicate_counts,
                                                 const StudySettings& settings) {
  if (replicate_counts.empty())
    throw std::invalid_argument("compare_sample_sizes: no replicate counts given");
  std::vector<CoverageReport> reports;
  reports.reserve(replicate_counts.size());
  for (const int count : replicate_counts) {
    StudySettings local = settings;
    local.design_replicates = count;
    reports.push_back(coverage_study(system, local));
  }
  return reports;
}

}  // namespace rsmboot
