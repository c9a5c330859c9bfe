#pragma once

#include <Eigen/Dense>

#include "rsmboot/errors.hpp"

namespace rsmboot {

// Rectangular experimental region, a product of two intervals.
struct Region {
  Eigen::Vector2d lo;
  Eigen::Vector2d hi;

  Region(const Eigen::Vector2d& lo_, const Eigen::Vector2d& hi_) : lo(lo_), hi(hi_) {
    for (int j = 0; j < 2; ++j) {
      if (!(lo[j] < hi[j])) throw std::invalid_argument("Region: lo must be < hi per coordinate");
    }
  }

  static Region square(double a) { return Region({-a, -a}, {a, a}); }

  double width(int j) const { return hi[j] - lo[j]; }
  Eigen::Vector2d center() const { return 0.5 * (lo + hi); }

  bool contains(const Eigen::Vector2d& x) const {
    return x[0] >= lo[0] && x[0] <= hi[0] && x[1] >= lo[1] && x[1] <= hi[1];
  }

  Eigen::Vector2d clamp(const Eigen::Vector2d& x) const {
    return {std::min(std::max(x[0], lo[0]), hi[0]), std::min(std::max(x[1], lo[1]), hi[1])};
  }
};

// Second-order surface in two factors:
//   g(x) = beta0 + x'beta + x'Bx,  B = [[b11, b12/2], [b12/2, b22]].
struct QuadraticModel {
  double beta0 = 0.0;
  Eigen::Vector2d beta = Eigen::Vector2d::Zero();
  double b12 = 0.0;
  double b11 = 0.0;
  double b22 = 0.0;

  Eigen::Matrix2d bmat() const {
    Eigen::Matrix2d b;
    b << b11, 0.5 * b12, 0.5 * b12, b22;
    return b;
  }

  double value(const Eigen::Vector2d& x) const {
    return beta0 + beta[0] * x[0] + beta[1] * x[1] + b12 * x[0] * x[1] + b11 * x[0] * x[0] +
           b22 * x[1] * x[1];
  }

  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const {
    return {beta[0] + b12 * x[1] + 2.0 * b11 * x[0], beta[1] + b12 * x[0] + 2.0 * b22 * x[1]};
  }

  // Coefficients in design-matrix column order (1, x1, x2, x1*x2, x1^2, x2^2).
  static QuadraticModel from_coefficients(const Eigen::VectorXd& theta) {
    QuadraticModel m;
    m.beta0 = theta[0];
    m.beta = {theta[1], theta[2]};
    m.b12 = theta[3];
    m.b11 = theta[4];
    m.b22 = theta[5];
    return m;
  }

  Eigen::VectorXd coefficients() const {
    Eigen::VectorXd theta(6);
    theta << beta0, beta[0], beta[1], b12, b11, b22;
    return theta;
  }
};

struct Experiment {
  Eigen::MatrixX2d points;
  Eigen::VectorXd responses;
  Region region;

  Experiment(Eigen::MatrixX2d pts, Eigen::VectorXd y, Region reg)
      : points(std::move(pts)), responses(std::move(y)), region(reg) {
    if (points.rows() != responses.size())
      throw std::invalid_argument("Experiment: points/responses size mismatch");
    if (points.rows() < 6)
      throw InsufficientRunsError("Experiment: insufficient runs, the six-parameter "
                                  "second-order model needs n >= 6");
  }

  Eigen::Index n() const { return points.rows(); }
};

struct FitResult {
  QuadraticModel model;
  Eigen::VectorXd residuals;
  Eigen::VectorXd std_residuals;  // residuals / sqrt(1 - leverage)
  Eigen::VectorXd leverage;
  double sigma2_hat = 0.0;  // RSS / (n - 6)
  Eigen::MatrixXd design_matrix;
};

// Central composite design: 4 factorial points (+-1, +-1), 4 axial points at
// +-axial_distance, and center_runs center points. Rotatable when
// axial_distance = sqrt(2); the paper's 13-run design uses center_runs = 5.
Eigen::MatrixX2d ccd_design(int center_runs, double axial_distance);

Eigen::MatrixX2d replicate_design(const Eigen::MatrixX2d& design, int times);

// Row i -> (1, x1, x2, x1*x2, x1^2, x2^2).
Eigen::MatrixXd expand_design(const Eigen::MatrixX2d& points);

// Least squares by column-pivoted Householder QR; throws RankDeficientError
// when the expanded design's diagonal-R condition estimate exceeds 1e10.
FitResult fit(const Experiment& experiment);

// Solution of grad g = 0, x_sp = -B^{-1} beta / 2. Throws SingularBError when
// |det B| < 1e-12 * (1 + ||B||_F^2).
Eigen::Vector2d stationary_point(const QuadraticModel& model);

bool b_is_singular(const QuadraticModel& model);

enum class SurfaceClass { kConcaveDown, kConcaveUp, kSaddle };

struct CurvatureEigen {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  SurfaceClass classification = SurfaceClass::kSaddle;
};

// Closed-form eigenvalues of the symmetric 2x2 curvature matrix B, sorted
// ascending. Zero eigenvalues classify as saddle/indefinite.
CurvatureEigen curvature_eigenvalues(const QuadraticModel& model);

const char* surface_class_name(SurfaceClass c);

struct FTestResult {
  double f = 0.0;
  int df_num = 0;
  int df_den = 0;
  double p_value = 1.0;
};

// Classical F-test of H0: C theta = 0 against the unrestricted fit.
FTestResult linear_hypothesis_test(const FitResult& fit_result,
                                   const Eigen::MatrixXd& constraints);

// Constraint rows selecting beta1, beta2 and (b11 - b22): the uniqueness
// hypothesis for a symmetric surface whose box maximum is attained at all
// four corners.
Eigen::MatrixXd symmetry_constraints();

}  // namespace rsmboot
