#include "rsmboot/model.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>

namespace rsmboot {

Eigen::MatrixX2d ccd_design(int center_runs, double axial_distance) {
  if (center_runs < 1) throw std::invalid_argument("ccd_design: center_runs must be >= 1");
  if (!(axial_distance > 0.0))
    throw std::invalid_argument("ccd_design: axial_distance must be positive");
  const double a = axial_distance;
  Eigen::MatrixX2d design(8 + center_runs, 2);
  design.row(0) << -1.0, -1.0;
  design.row(1) << 1.0, -1.0;
  design.row(2) << -1.0, 1.0;
  design.row(3) << 1.0, 1.0;
  design.row(4) << -a, 0.0;
  design.row(5) << a, 0.0;
  design.row(6) << 0.0, -a;
  design.row(7) << 0.0, a;
  for (int i = 0; i < center_runs; ++i) design.row(8 + i).setZero();
  return design;
}

Eigen::MatrixX2d replicate_design(const Eigen::MatrixX2d& design, int times) {
  if (times < 1) throw std::invalid_argument("replicate_design: times must be >= 1");
  Eigen::MatrixX2d out(design.rows() * times, 2);
  for (int r = 0; r < times; ++r) out.middleRows(r * design.rows(), design.rows()) = design;
  return out;
}

Eigen::MatrixXd expand_design(const Eigen::MatrixX2d& points) {
  Eigen::MatrixXd x(points.rows(), 6);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double x1 = points(i, 0);
    const double x2 = points(i, 1);
    x.row(i) << 1.0, x1, x2, x1 * x2, x1 * x1, x2 * x2;
  }
  return x;
}

FitResult fit(const Experiment& experiment) {
  const Eigen::Index n = experiment.n();
  Eigen::MatrixXd x = expand_design(experiment.points);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::VectorXd rdiag = qr.matrixR().diagonal().head(6).cwiseAbs();
  const double rmax = rdiag.maxCoeff();
  const double rmin = rdiag.minCoeff();
  if (!(rmin > rmax * 1e-10)) {
    const double cond = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
    throw RankDeficientError(
        "fit: expanded design is rank deficient (condition estimate " + std::to_string(cond) +
            "); the design does not support a full second-order model",
        cond);
  }

  FitResult result;
  const Eigen::VectorXd theta = qr.solve(experiment.responses);
  result.model = QuadraticModel::from_coefficients(theta);
  result.residuals = experiment.responses - x * theta;

  // Hat diagonal from the thin Q factor: h_ii = ||Q1 row i||^2.
  const Eigen::MatrixXd thin_q =
      qr.householderQ() * Eigen::MatrixXd::Identity(n, 6);
  result.leverage = thin_q.rowwise().squaredNorm();

  result.std_residuals.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    result.std_residuals[i] = result.residuals[i] / std::sqrt(1.0 - result.leverage[i]);

  const double rss = result.residuals.squaredNorm();
  result.sigma2_hat = n > 6 ? rss / static_cast<double>(n - 6) : 0.0;
  result.design_matrix = std::move(x);
  return result;
}

bool b_is_singular(const QuadraticModel& model) {
  const Eigen::Matrix2d b = model.bmat();
  const double det = b.determinant();
  return std::abs(det) < 1e-12 * (1.0 + b.squaredNorm());
}

Eigen::Vector2d stationary_point(const QuadraticModel& model) {
  const Eigen::Matrix2d b = model.bmat();
  const double det = b.determinant();
  if (b_is_singular(model))
    throw SingularBError("stationary_point: curvature matrix is singular (ridge system)", det);
  // -B^{-1} beta / 2 via the 2x2 adjugate.
  const Eigen::Vector2d rhs = -0.5 * model.beta;
  return Eigen::Vector2d{(b(1, 1) * rhs[0] - b(0, 1) * rhs[1]) / det,
                         (b(0, 0) * rhs[1] - b(1, 0) * rhs[0]) / det};
}

CurvatureEigen curvature_eigenvalues(const QuadraticModel& model) {
  const Eigen::Matrix2d b = model.bmat();
  const double mean = 0.5 * (b(0, 0) + b(1, 1));
  const double half_diff = 0.5 * (b(0, 0) - b(1, 1));
  const double radius = std::sqrt(half_diff * half_diff + b(0, 1) * b(0, 1));
  CurvatureEigen out;
  out.lambda_min = mean - radius;
  out.lambda_max = mean + radius;
  if (out.lambda_max < 0.0)
    out.classification = SurfaceClass::kConcaveDown;
  else if (out.lambda_min > 0.0)
    out.classification = SurfaceClass::kConcaveUp;
  else
    out.classification = SurfaceClass::kSaddle;
  return out;
}

const char* surface_class_name(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::kConcaveDown: return "concave-down";
    case SurfaceClass::kConcaveUp: return "concave-up";
    case SurfaceClass::kSaddle: return "saddle";
  }
  return "unknown";
}

FTestResult linear_hypothesis_test(const FitResult& fit_result,
                                   const Eigen::MatrixXd& constraints) {
  const Eigen::Index n = fit_result.design_matrix.rows();
  const Eigen::Index m = constraints.rows();
  if (constraints.cols() != 6)
    throw std::invalid_argument("linear_hypothesis_test: constraints must have 6 columns");
  if (m < 1 || m > 6) throw std::invalid_argument("linear_hypothesis_test: need 1..6 constraints");
  if (n <= 6)
    throw std::invalid_argument("linear_hypothesis_test: no denominator degrees of freedom");

  Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints);
  lu.setThreshold(1e-10);
  if (lu.rank() < m)
    throw RankDeficientError("linear_hypothesis_test: constraint rows are not independent",
                             0.0);

  // Restricted fit over the null space of C: theta = N * gamma satisfies
  // C theta = 0 exactly.
  const Eigen::MatrixXd null_basis = lu.kernel();
  double rss_restricted = 0.0;
  const Eigen::VectorXd y =
      fit_result.residuals + fit_result.design_matrix * fit_result.model.coefficients();
  if (null_basis.cols() == 0) {
    rss_restricted = y.squaredNorm();
  } else {
    const Eigen::MatrixXd xn = fit_result.design_matrix * null_basis;
    const Eigen::VectorXd gamma = xn.colPivHouseholderQr().solve(y);
    rss_restricted = (y - xn * gamma).squaredNorm();
  }

  const double rss_full = fit_result.residuals.squaredNorm();
  FTestResult out;
  out.df_num = static_cast<int>(m);
  out.df_den = static_cast<int>(n - 6);
  const double numerator = std::max(rss_restricted - rss_full, 0.0) / out.df_num;
  const double denominator = rss_full / out.df_den;
  if (numerator == 0.0) {
    out.f = 0.0;
    out.p_value = 1.0;
    return out;
  }
  if (denominator == 0.0) {
    out.f = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
    return out;
  }
  out.f = numerator / denominator;
  const boost::math::fisher_f dist(out.df_num, out.df_den);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.f));
  return out;
}

Eigen::MatrixXd symmetry_constraints() {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 6);
  c(0, 1) = 1.0;   // beta1 = 0
  c(1, 2) = 1.0;   // beta2 = 0
  c(2, 4) = 1.0;   // b11 - b22 = 0
  c(2, 5) = -1.0;
  return c;
}

}  // namespace rsmboot
