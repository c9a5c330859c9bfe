// Batch front end: fit a second-order surface, build a bootstrap confidence
// region for its constrained maximum, or run Monte Carlo coverage studies.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "rsmboot/io.hpp"
#include "rsmboot/parallel.hpp"
#include "rsmboot/rng.hpp"

namespace fs = std::filesystem;
using namespace rsmboot;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitRankDeficient = 3;
constexpr int kExitNonIntegerMass = 4;
constexpr int kExitPluginFailure = 5;
constexpr int kExitSimAlpha = 6;

struct CommonOptions {
  std::vector<double> region_bounds{-1.4, 1.4, -1.4, 1.4};  // lo1 hi1 lo2 hi2
  std::string out_dir = ".";
  unsigned threads = 0;

  Region region() const {
    return Region({region_bounds[0], region_bounds[2]}, {region_bounds[1], region_bounds[3]});
  }
  unsigned effective_threads() const { return threads == 0 ? default_thread_count() : threads; }
  fs::path out_path(const std::string& name) const {
    fs::create_directories(out_dir);
    return fs::path(out_dir) / name;
  }
};

BandwidthMethod parse_method(const std::string& name) {
  if (name == "rot") return BandwidthMethod::kRuleOfThumb;
  if (name == "plugin") return BandwidthMethod::kPlugin;
  throw CLI::ValidationError("--bandwidth", "must be 'rot' or 'plugin'");
}

int run_fit(const CommonOptions& common, const std::string& input) {
  const Experiment experiment = read_experiment_csv(input, common.region());
  const FitResult fitted = fit(experiment);

  FitReportData data;
  data.echo.command = "fit";
  data.echo.input_path = input;
  data.echo.region = common.region();
  data.fit = fitted;
  data.curvature = curvature_eigenvalues(fitted.model);
  if (!b_is_singular(fitted.model)) {
    data.has_stationary_point = true;
    data.stationary = stationary_point(fitted.model);
  }
  data.x_cm = constrained_max(fitted.model, common.region());
  if (experiment.n() > 6) {
    data.has_f_test = true;
    data.symmetry_test = linear_hypothesis_test(fitted, symmetry_constraints());
  }

  const std::string doc = fit_report_document(data);
  write_text_file(common.out_path("fit.txt").string(), doc);
  std::cout << doc;
  return 0;
}

int run_region(const CommonOptions& common, const std::string& input, int b, double alpha,
               const std::string& method_name, int grid_resolution, std::uint64_t seed,
               const std::vector<double>& manual_bandwidth, bool no_plugin_fallback,
               bool emit_svg, bool emit_cloud, bool emit_grid) {
  required_capture_count(alpha, b);  // reject bad (alpha, b) before any computation
  const Region region = common.region();
  const unsigned threads = common.effective_threads();

  const Experiment experiment = read_experiment_csv(input, region);
  const FitResult fitted = fit(experiment);
  const BootstrapCloud cloud =
      bootstrap_xcm(fitted, experiment, b, derive_stream(seed, {kTagBoot}), {}, threads);

  BandwidthSelection bw;
  if (!manual_bandwidth.empty()) {
    bw.h = {manual_bandwidth[0], manual_bandwidth[1]};
    bw.scales = jittered_scale(cloud, region, derive_stream(seed, {kTagJitter}));
  } else {
    bw = select_bandwidths(cloud, region, parse_method(method_name),
                           derive_stream(seed, {kTagJitter}), !no_plugin_fallback);
  }

  const DensityEstimate density = DensityEstimate::build(cloud, bw.h, region);
  const ConfidenceRegion region_result = build_region(density, alpha, grid_resolution, threads);

  RunEcho echo;
  echo.command = "region";
  echo.input_path = input;
  echo.region = region;
  echo.b = b;
  echo.alpha = alpha;
  echo.bandwidth_method = manual_bandwidth.empty() ? method_name : "manual";
  echo.grid_resolution = grid_resolution;
  echo.seed = seed;
  echo.has_seed = true;

  write_text_file(common.out_path("region.txt").string(),
                  region_document(echo, bw, region_result, cloud));
  if (emit_cloud) write_text_file(common.out_path("cloud.csv").string(), cloud_csv(cloud));
  if (emit_grid) {
    write_text_file(common.out_path("grid.csv").string(),
                    grid_csv(density_on_grid(density, grid_resolution, threads)));
  }
  if (emit_svg) {
    const ConstrainedMaximum x_cm = constrained_max(fitted.model, region);
    write_text_file(common.out_path("region.svg").string(),
                    region_svg(cloud, region_result.polygons, region, x_cm.point));
  }

  std::cout << "bandwidths: " << format_double(bw.h[0]) << " " << format_double(bw.h[1]) << "\n"
            << "f-alpha: " << format_double(region_result.f_alpha) << "\n"
            << "captured-count: " << region_result.captured_count << "\n";
  return 0;
}

void write_coverage_outputs(const CommonOptions& common, const std::string& command,
                            const std::vector<CoverageReport>& reports,
                            const StudySettings& settings) {
  for (const auto& report : reports) {
    RunEcho echo;
    echo.command = command;
    echo.region = settings.region;
    echo.b = settings.b;
    echo.bandwidth_method = bandwidth_method_name(settings.bandwidth_method);
    echo.seed = settings.seed;
    echo.has_seed = true;
    const std::string stem = "coverage_" + report.system + "_n" + std::to_string(report.n);
    write_text_file(common.out_path(stem + ".txt").string(), coverage_document(echo, report));
    write_text_file(common.out_path(stem + "_groups.csv").string(), coverage_groups_csv(report));
  }
  write_text_file(common.out_path("coverage_series.csv").string(), coverage_series_csv(reports));
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      std::cout << report.system << " n=" << report.n << " alpha=" << format_double(row.alpha)
                << " coverage=" << format_double(row.mean_coverage)
                << " se=" << format_double(row.std_error) << "\n";
    }
  }
}

int run_simulate(const CommonOptions& common, const std::string& system_name,
                 const std::vector<int>& replicates, const StudySettings& base) {
  const TrueSystem system = TrueSystem::by_name(system_name);
  StudySettings settings = base;
  settings.region = common.region();
  settings.threads = common.effective_threads();
  if (settings.alphas.empty()) throw CLI::ValidationError("--alphas", "at least one alpha needed");
  for (const double alpha : settings.alphas) required_capture_count(alpha, settings.b);

  const std::vector<CoverageReport> reports =
      compare_sample_sizes(system, replicates, settings);
  write_coverage_outputs(common, replicates.size() == 1 ? "simulate" : "compare-n", reports,
                         settings);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap confidence regions for the constrained maximum of a fitted "
               "second-order response surface"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string input;
  int b = 2000;
  double alpha = 0.10;
  std::string bandwidth = "rot";
  int grid_resolution = 256;
  std::uint64_t seed = 0;
  std::vector<double> manual_bandwidth;
  bool no_plugin_fallback = false;
  bool emit_svg = false;
  bool emit_cloud = false;
  bool emit_grid = false;
  std::string system_name;
  StudySettings study;
  std::vector<int> replicates{1};

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--region", common.region_bounds,
                    "Experimental region bounds: lo1 hi1 lo2 hi2")
        ->expected(4);
    cmd->add_option("--out", common.out_dir, "Output directory");
    cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  };

  CLI::App* cmd_fit = app.add_subcommand("fit", "Least-squares fit and surface diagnostics");
  cmd_fit->add_option("--input", input, "CSV with header x1,x2,y")->required();
  add_common(cmd_fit);

  CLI::App* cmd_region =
      app.add_subcommand("region", "Bootstrap confidence region for the constrained maximum");
  cmd_region->add_option("--input", input, "CSV with header x1,x2,y")->required();
  cmd_region->add_option("--seed", seed, "RNG seed")->required();
  cmd_region->add_option("--b", b, "Bootstrap replicates");
  cmd_region->add_option("--alpha", alpha, "1 - confidence coefficient");
  cmd_region->add_option("--bandwidth", bandwidth, "Bandwidth selector: rot | plugin");
  cmd_region->add_option("--grid-resolution", grid_resolution, "Contour grid resolution");
  cmd_region->add_option("--manual-bandwidth", manual_bandwidth, "Override bandwidths: h1 h2")
      ->expected(2);
  cmd_region->add_flag("--no-plugin-fallback", no_plugin_fallback,
                       "Fail instead of falling back to the rule of thumb");
  cmd_region->add_flag("--emit-svg", emit_svg, "Write region.svg");
  cmd_region->add_flag("--emit-cloud", emit_cloud, "Write cloud.csv");
  cmd_region->add_flag("--emit-grid", emit_grid, "Write grid.csv");
  add_common(cmd_region);

  const auto add_study = [&](CLI::App* cmd) {
    cmd->add_option("system", system_name, "True system: concave-down | saddle")->required();
    cmd->add_option("--seed", study.seed, "RNG seed")->required();
    cmd->add_option("--n-reps", study.n_reps, "Simulated experiments");
    cmd->add_option("--group-size", study.group_size, "Experiments per coverage group");
    cmd->add_option("--b", study.b, "Bootstrap replicates");
    cmd->add_option("--alphas", study.alphas, "Confidence levels (1 - coefficient)");
    cmd->add_option("--bandwidth", bandwidth, "Bandwidth selector: rot | plugin");
    cmd->add_option("--sigma", study.sigma, "Error standard deviation");
    add_common(cmd);
  };

  CLI::App* cmd_sim = app.add_subcommand("simulate", "Monte Carlo coverage study");
  add_study(cmd_sim);
  cmd_sim->add_option("--replicates", replicates.front(), "Design replications (n = 13r)");

  CLI::App* cmd_compare =
      app.add_subcommand("compare-n", "Coverage across design replication counts");
  add_study(cmd_compare);
  cmd_compare->add_option("--replicates", replicates, "Design replication counts, e.g. 1 2 16")
      ->expected(-1);

  CLI11_PARSE(app, argc, argv);

  const bool simulating = cmd_sim->parsed() || cmd_compare->parsed();
  try {
    if (cmd_fit->parsed()) return run_fit(common, input);
    if (cmd_region->parsed())
      return run_region(common, input, b, alpha, bandwidth, grid_resolution, seed,
                        manual_bandwidth, no_plugin_fallback, emit_svg, emit_cloud, emit_grid);
    study.bandwidth_method = parse_method(bandwidth);
    return run_simulate(common, system_name, replicates, study);
  } catch (const CsvParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InsufficientRunsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRankDeficient;
  } catch (const RankDeficientError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRankDeficient;
  } catch (const NonIntegerMassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return simulating ? kExitSimAlpha : kExitNonIntegerMass;
  } catch (const PluginFailureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPluginFailure;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
