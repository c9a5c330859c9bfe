#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rsmboot/io.hpp"
#include "rsmboot/sim.hpp"

using namespace rsmboot;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("RSMBOOT_CLI");
  REQUIRE_MESSAGE(env != nullptr, "RSMBOOT_CLI must point at the CLI binary");
  return env;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rsmboot-cli-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_noise_free_csv(const fs::path& path, const TrueSystem& sys) {
  const Experiment e = simulate_experiment(sys, ccd_design(5, std::sqrt(2.0)),
                                           Region::square(1.4), 0.0, 1);
  std::ofstream out(path);
  out << "x1,x2,y\n";
  for (Eigen::Index i = 0; i < e.n(); ++i)
    out << format_double(e.points(i, 0)) << "," << format_double(e.points(i, 1)) << ","
        << format_double(e.responses[i]) << "\n";
}

void write_noisy_csv(const fs::path& path, std::uint64_t seed) {
  const Experiment e = simulate_experiment(TrueSystem::concave_down(),
                                           ccd_design(5, std::sqrt(2.0)), Region::square(1.4),
                                           3.0, seed);
  std::ofstream out(path);
  out << "x1,x2,y\n";
  for (Eigen::Index i = 0; i < e.n(); ++i)
    out << format_double(e.points(i, 0)) << "," << format_double(e.points(i, 1)) << ","
        << format_double(e.responses[i]) << "\n";
}

}  // namespace

TEST_CASE("fit command") {
  const fs::path dir = scratch_dir("fit");
  SUBCASE("concave-down data reports the Table values") {
    write_noise_free_csv(dir / "cd.csv", TrueSystem::concave_down());
    CHECK(run("fit --input " + (dir / "cd.csv").string() + " --out " + dir.string()) == 0);
    const std::string doc = slurp(dir / "fit.txt");
    CHECK(doc.find("classification: concave-down") != std::string::npos);
    CHECK(doc.find("x-cm: 0.82830") != std::string::npos);
    CHECK(doc.find("x-cm-boundary: interior interior") != std::string::npos);
  }
  SUBCASE("saddle data flags the stationary point") {
    write_noise_free_csv(dir / "sa.csv", TrueSystem::saddle());
    CHECK(run("fit --input " + (dir / "sa.csv").string() + " --out " + dir.string()) == 0);
    const std::string doc = slurp(dir / "fit.txt");
    CHECK(doc.find("classification: saddle") != std::string::npos);
    CHECK(doc.find("stationary-point-note: not a maximum") != std::string::npos);
    CHECK(doc.find("x-cm: -1.4 0.46137") != std::string::npos);
  }
  SUBCASE("insufficient runs exit 3") {
    std::ofstream(dir / "short.csv") << "x1,x2,y\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n0.5,0.5,5\n";
    CHECK(run("fit --input " + (dir / "short.csv").string() + " --out " + dir.string()) == 3);
  }
  SUBCASE("parse failure exit 2") {
    std::ofstream(dir / "bad.csv") << "x1,x2,y\n0,zero,1\n";
    CHECK(run("fit --input " + (dir / "bad.csv").string() + " --out " + dir.string()) == 2);
    CHECK(run("fit --input " + (dir / "missing.csv").string() + " --out " + dir.string()) == 2);
  }
}

TEST_CASE("region command") {
  const fs::path dir = scratch_dir("region");
  write_noisy_csv(dir / "data.csv", 31);
  const std::string base = "region --input " + (dir / "data.csv").string() +
                           " --seed 9 --b 400 --alpha 0.1 --grid-resolution 64";

  SUBCASE("reruns are byte-identical, independent of threads") {
    CHECK(run(base + " --emit-cloud --emit-svg --threads 1 --out " + (dir / "a").string()) == 0);
    CHECK(run(base + " --emit-cloud --emit-svg --threads 1 --out " + (dir / "b").string()) == 0);
    CHECK(run(base + " --emit-cloud --emit-svg --threads 2 --out " + (dir / "c").string()) == 0);
    const std::string a = slurp(dir / "a/region.txt");
    CHECK(a == slurp(dir / "b/region.txt"));
    CHECK(a == slurp(dir / "c/region.txt"));
    CHECK(slurp(dir / "a/cloud.csv") == slurp(dir / "c/cloud.csv"));
    CHECK(slurp(dir / "a/region.svg") == slurp(dir / "c/region.svg"));
    CHECK(a.find("captured-count: 360") != std::string::npos);
  }
  SUBCASE("non-integral mass exit 4") {
    CHECK(run("region --input " + (dir / "data.csv").string() +
              " --seed 9 --b 1000 --alpha 0.1005 --out " + dir.string()) == 4);
  }
  SUBCASE("manual bandwidth override") {
    CHECK(run(base + " --manual-bandwidth 0.25 0.3 --out " + (dir / "m").string()) == 0);
    CHECK(slurp(dir / "m/region.txt").find("bandwidths: 0.25 0.3") != std::string::npos);
    CHECK(slurp(dir / "m/region.txt").find("bandwidth-method: manual") != std::string::npos);
  }
  SUBCASE("plugin bandwidth run") {
    CHECK(run(base + " --bandwidth plugin --out " + (dir / "p").string()) == 0);
    CHECK(slurp(dir / "p/region.txt").find("bandwidth-method: plugin") != std::string::npos);
  }
}

TEST_CASE("simulate and compare-n commands") {
  const fs::path dir = scratch_dir("simulate");
  SUBCASE("small study writes reports and series") {
    CHECK(run("simulate concave-down --seed 4 --n-reps 4 --group-size 2 --b 50 "
              "--alphas 0.1 0.02 --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "coverage_concave-down_n13.txt"));
    CHECK(fs::exists(dir / "coverage_concave-down_n13_groups.csv"));
    const std::string series = slurp(dir / "coverage_series.csv");
    CHECK(series.find("system,n,b,bandwidth,alpha,mean_coverage,std_error") == 0);
    CHECK(series.find("concave-down,13,50,rot,0.1,") != std::string::npos);
  }
  SUBCASE("alpha integrality violation exit 6") {
    CHECK(run("simulate saddle --seed 4 --n-reps 4 --group-size 2 --b 50 --alphas 0.123 --out " +
              dir.string()) == 6);
  }
  SUBCASE("unknown system fails") {
    CHECK(run("simulate bowl --seed 4 --out " + dir.string()) != 0);
  }
  SUBCASE("compare-n emits one report per n") {
    CHECK(run("compare-n saddle --seed 4 --n-reps 4 --group-size 2 --b 50 --alphas 0.1 "
              "--replicates 1 2 --out " +
              (dir / "cmp").string()) == 0);
    CHECK(fs::exists(dir / "cmp/coverage_saddle_n13.txt"));
    CHECK(fs::exists(dir / "cmp/coverage_saddle_n26.txt"));
    const std::string series = slurp(dir / "cmp/coverage_series.csv");
    CHECK(series.find("saddle,13,") != std::string::npos);
    CHECK(series.find("saddle,26,") != std::string::npos);
  }
  SUBCASE("missing alphas is a usage error") {
    CHECK(run("simulate concave-down --seed 4 --alphas --out " + dir.string()) != 0);
  }
}
