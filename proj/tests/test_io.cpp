#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "rsmboot/io.hpp"
#include "rsmboot/rng.hpp"
#include "test_util.hpp"

using namespace rsmboot;
namespace fs = std::filesystem;

namespace {

fs::path scratch_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rsmboot-io-tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  RngStream rng = RngStream::from(88);
  for (int i = 0; i < 2000; ++i) {
    double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(21)) - 10.0);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-1.4) == "-1.4");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("experiment CSV round trip and error reporting") {
  const Region region = Region::square(1.4);
  SUBCASE("round trip") {
    const fs::path path = scratch_file("ok.csv");
    std::ofstream out(path);
    out << "x1,x2,y\n";
    RngStream rng = RngStream::from(3);
    Eigen::MatrixX2d pts(8, 2);
    Eigen::VectorXd y(8);
    for (int i = 0; i < 8; ++i) {
      pts.row(i) << rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4);
      y[i] = 50.0 + rng.normal();
      out << format_double(pts(i, 0)) << "," << format_double(pts(i, 1)) << ","
          << format_double(y[i]) << "\n";
    }
    out.close();
    const Experiment e = read_experiment_csv(path.string(), region);
    CHECK((e.points - pts).cwiseAbs().maxCoeff() == 0.0);
    CHECK((e.responses - y).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("bad header names row 1") {
    const fs::path path = scratch_file("badheader.csv");
    std::ofstream(path) << "a,b,c\n1,2,3\n";
    CHECK_THROWS_WITH_AS(read_experiment_csv(path.string(), region),
                         doctest::Contains("row 1"), CsvParseError);
  }
  SUBCASE("bad field names its row") {
    const fs::path path = scratch_file("badfield.csv");
    std::ofstream(path) << "x1,x2,y\n0,0,1\n0.5,oops,2\n";
    CHECK_THROWS_WITH_AS(read_experiment_csv(path.string(), region),
                         doctest::Contains("row 3"), CsvParseError);
  }
  SUBCASE("wrong field count") {
    const fs::path path = scratch_file("badcount.csv");
    std::ofstream(path) << "x1,x2,y\n0,0\n";
    CHECK_THROWS_AS(read_experiment_csv(path.string(), region), CsvParseError);
  }
  SUBCASE("too few rows") {
    const fs::path path = scratch_file("short.csv");
    std::ofstream(path) << "x1,x2,y\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n0.5,0.5,5\n";
    CHECK_THROWS_AS(read_experiment_csv(path.string(), region), InsufficientRunsError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_experiment_csv("/nonexistent/x.csv", region), CsvParseError);
  }
}

TEST_CASE("cloud CSV encodes boundary flags") {
  Eigen::MatrixX2d pts(2, 2);
  pts << -1.4, 0.25, 0.5, 1.4;
  BootstrapCloud cloud = testutil::make_cloud(pts, Region::square(1.4));
  cloud.values << 1.0, 2.0;
  const std::string csv = cloud_csv(cloud);
  CHECK(csv == "x1,x2,value,on_b1,on_b2\n-1.4,0.25,1,-1,0\n0.5,1.4,2,0,1\n");
}

TEST_CASE("svg rendering contains the expected elements") {
  Eigen::MatrixX2d pts(3, 2);
  pts << 0.0, 0.0, 0.5, 0.5, -0.5, 0.2;
  const BootstrapCloud cloud = testutil::make_cloud(pts, Region::square(1.4));
  std::vector<Polygon> polys{{{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}}};
  const Eigen::Vector2d truth{0.8, 0.8};
  const std::string svg =
      region_svg(cloud, polys, Region::square(1.4), {0.1, 0.2}, &truth);
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1))
    ++circles;
  CHECK(circles == 3);
  CHECK(svg.find("<path") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("documents embed the run configuration") {
  RunEcho echo;
  echo.command = "region";
  echo.input_path = "data.csv";
  echo.b = 2000;
  echo.alpha = 0.1;
  echo.bandwidth_method = "rot";
  echo.grid_resolution = 256;
  echo.seed = 42;
  echo.has_seed = true;

  Eigen::MatrixX2d pts(2, 2);
  pts << 0.0, 0.0, 0.5, 0.5;
  BootstrapCloud cloud = testutil::make_cloud(pts, Region::square(1.4));
  BandwidthSelection bw;
  bw.h = {0.2, 0.3};
  bw.scales = {0.3, 0.4};
  ConfidenceRegion region;
  region.alpha = 0.1;
  region.f_alpha = 1.5;
  region.captured_count = 2;
  region.polygons = {{{0.0, 0.0}, {0.1, 0.0}, {0.1, 0.1}}};

  const std::string doc = region_document(echo, bw, region, cloud);
  CHECK(doc.find("schema: rsmboot.region/1\n") == 0);
  CHECK(doc.find("seed: 42") != std::string::npos);
  CHECK(doc.find("b: 2000") != std::string::npos);
  CHECK(doc.find("alpha: 0.1") != std::string::npos);
  CHECK(doc.find("bandwidths: 0.2 0.3") != std::string::npos);
  CHECK(doc.find("captured-count: 2") != std::string::npos);
  CHECK(doc.find("polygon-0:") != std::string::npos);
}
