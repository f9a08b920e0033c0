#include "support/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace netsig_test {

Eigen::MatrixXd pcorr_by_residual_regression(const Eigen::MatrixXd& data) {
  const Eigen::Index T = data.rows();
  const Eigen::Index R = data.cols();
  Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(R, R);
  for (Eigen::Index i = 0; i < R; ++i) {
    for (Eigen::Index j = i + 1; j < R; ++j) {
      Eigen::MatrixXd others(T, R - 2);
      Eigen::Index col = 0;
      for (Eigen::Index c = 0; c < R; ++c)
        if (c != i && c != j) others.col(col++) = centered.col(c);
      Eigen::VectorXd res_i = centered.col(i);
      Eigen::VectorXd res_j = centered.col(j);
      if (others.cols() > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
        res_i -= others * qr.solve(centered.col(i));
        res_j -= others * qr.solve(centered.col(j));
      }
      double denom = std::sqrt(res_i.squaredNorm() * res_j.squaredNorm());
      double value = denom > 0 ? res_i.dot(res_j) / denom : 0.0;
      rho(i, j) = value;
      rho(j, i) = value;
    }
  }
  return rho;
}

double penrose_max_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x) {
  auto rel = [](const Eigen::MatrixXd& residual, const Eigen::MatrixXd& reference) {
    double ref = reference.norm();
    return residual.norm() / std::max(ref, 1e-300);
  };
  Eigen::MatrixXd ax = a * x;
  Eigen::MatrixXd xa = x * a;
  double worst = rel(a * x * a - a, a);
  worst = std::max(worst, rel(x * a * x - x, x));
  worst = std::max(worst, rel(ax.transpose() - ax, ax));
  worst = std::max(worst, rel(xa.transpose() - xa, xa));
  return worst;
}

}  // namespace netsig_test
