#include "rsmboot/bootstrap.hpp"

#include <numeric>

#include "rsmboot/parallel.hpp"
#include "rsmboot/rng.hpp"

namespace rsmboot {

Eigen::MatrixXi balanced_resample_indices(int n, int b, std::uint64_t seed) {
  if (n < 1 || b < 1) throw std::invalid_argument("balanced_resample_indices: n, b must be >= 1");
  std::vector<int> pool(static_cast<std::size_t>(n) * b);
  for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = static_cast<int>(k % n);

  RngStream stream = RngStream::from(seed, {kTagBalance});
  for (std::size_t i = pool.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(stream.below(i + 1));
    std::swap(pool[i], pool[j]);
  }

  Eigen::MatrixXi indices(b, n);
  for (int r = 0; r < b; ++r)
    for (int c = 0; c < n; ++c) indices(r, c) = pool[static_cast<std::size_t>(r) * n + c];
  return indices;
}

BootstrapCloud bootstrap_xcm(const FitResult& fit_result, const Experiment& experiment, int b,
                             std::uint64_t seed, const NelderMeadConfig& config,
                             unsigned threads) {
  const Eigen::Index n = experiment.n();
  if (fit_result.design_matrix.rows() != n)
    throw std::invalid_argument("bootstrap_xcm: fit and experiment have different n");
  if (b < 1) throw std::invalid_argument("bootstrap_xcm: b must be >= 1");

  const Eigen::MatrixXi indices = balanced_resample_indices(static_cast<int>(n), b, seed);
  const Eigen::VectorXd fitted =
      fit_result.design_matrix * fit_result.model.coefficients();

  // X is fixed across replicates; factor once and reuse for every y*.
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(fit_result.design_matrix);

  BootstrapCloud cloud{Eigen::MatrixX2d(b, 2),
                       Eigen::VectorXd(b),
                       std::vector<std::array<BoundaryFlag, 2>>(b),
                       std::vector<std::uint8_t>(b, 1),
                       experiment.region,
                       seed};

  parallel_for(static_cast<std::size_t>(b), threads, [&](std::size_t i) {
    Eigen::VectorXd y_star(n);
    for (Eigen::Index k = 0; k < n; ++k)
      y_star[k] = fitted[k] + fit_result.std_residuals[indices(static_cast<int>(i), k)];
    const Eigen::VectorXd theta_star = qr.solve(y_star);
    const QuadraticModel refit = QuadraticModel::from_coefficients(theta_star);
    const ConstrainedMaximum cm = constrained_max(refit, experiment.region, config);
    cloud.points.row(static_cast<Eigen::Index>(i)) = cm.point.transpose();
    cloud.values[static_cast<Eigen::Index>(i)] = cm.value;
    cloud.boundary_flags[i] = cm.on_boundary;
    cloud.converged[i] = cm.converged ? 1 : 0;
  });
  return cloud;
}

}  // namespace rsmboot
