#include "netsig/pcorr.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "netsig/error.hpp"

namespace netsig {

CovarianceMatrix sample_covariance(const TimeSeriesMatrix& ts) {
  const auto T = ts.timepoints();
  Eigen::MatrixXd centered = ts.values.rowwise() - ts.values.colwise().mean();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(T - 1);
  cov = ((cov + cov.transpose()) * 0.5).eval();
  return CovarianceMatrix{std::move(cov), ts.labels};
}

double default_rank_tolerance(Eigen::Index roi_count) {
  return static_cast<double>(roi_count) * std::numeric_limits<double>::epsilon();
}

PrecisionMatrix precision_via_pseudoinverse(const CovarianceMatrix& cov, double rank_tolerance) {
  const auto R = cov.values.rows();
  if (rank_tolerance < 0.0) rank_tolerance = default_rank_tolerance(R);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov.values);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  const double max_abs = lambda.cwiseAbs().maxCoeff();
  const double cutoff = rank_tolerance * max_abs;

  PrecisionMatrix prec;
  prec.labels = cov.labels;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(R);
  for (Eigen::Index i = 0; i < R; ++i) {
    if (std::abs(lambda[i]) > cutoff && lambda[i] != 0.0) {
      inv[i] = 1.0 / lambda[i];
      ++prec.rank;
      if (lambda[i] < 0.0) {
        ++prec.negative_eigenvalues_inverted;
        prec.most_negative_eigenvalue = std::min(prec.most_negative_eigenvalue, lambda[i]);
      }
    }
  }
  if (prec.rank == 0) {
    throw Error(ErrorCode::AllEigenvaluesDiscarded,
                "covariance numerically zero (max |eigenvalue| = " + std::to_string(max_abs) + ")");
  }
  prec.values = vectors * inv.asDiagonal() * vectors.transpose();
  prec.values = ((prec.values + prec.values.transpose()) * 0.5).eval();
  return prec;
}

PartialCorrelationMatrix partial_correlation(const PrecisionMatrix& prec) {
  const auto R = prec.values.rows();
  const double max_diag = prec.values.diagonal().maxCoeff();
  const double floor = 1e-12 * max_diag;
  for (Eigen::Index i = 0; i < R; ++i) {
    if (prec.values(i, i) <= floor) {
      throw Error(ErrorCode::NonPositiveDiagonal,
                  "ROI " + std::to_string(i) + " (omega_ii = " + std::to_string(prec.values(i, i)) + ")");
    }
  }

  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(R, R);
  for (Eigen::Index i = 0; i < R; ++i) {
    for (Eigen::Index j = i + 1; j < R; ++j) {
      double v = -prec.values(i, j) / std::sqrt(prec.values(i, i) * prec.values(j, j));
      v = std::clamp(v, -1.0, 1.0);
      rho(i, j) = v;
      rho(j, i) = v;
    }
  }
  return PartialCorrelationMatrix{std::move(rho), prec.labels};
}

}  // namespace netsig
