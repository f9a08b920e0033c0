#pragma once

#include <Eigen/Core>
#include <vector>

#include "netsig/ingest.hpp"

namespace netsig {

struct CovarianceMatrix {
  Eigen::MatrixXd values;  // R x R, symmetrized on construction
  std::vector<RoiLabel> labels;
};

struct PrecisionMatrix {
  Eigen::MatrixXd values;  // R x R symmetric
  std::vector<RoiLabel> labels;
  int rank = 0;  // eigenvalues kept by the pseudo-inverse cutoff
  // Eigenvalues that were negative yet above the cutoff in magnitude.
  // A PSD estimate should not have any; a material one means corrupt
  // input, so it is inverted as-is and surfaced here for diagnostics.
  int negative_eigenvalues_inverted = 0;
  double most_negative_eigenvalue = 0.0;
};

struct PartialCorrelationMatrix {
  Eigen::MatrixXd values;  // symmetric, zero diagonal, entries in [-1, 1]
  std::vector<RoiLabel> labels;
};

// Unbiased estimator: (i,j) = sum_t (x_ti - mean_i)(x_tj - mean_j) / (T-1).
CovarianceMatrix sample_covariance(const TimeSeriesMatrix& ts);

// Moore-Penrose pseudo-inverse via symmetric eigendecomposition.
// Eigenvalues with |lambda| <= rank_tolerance * max|lambda| are treated as
// zero. rank_tolerance < 0 selects the default R * machine-epsilon.
// Throws AllEigenvaluesDiscarded when nothing survives the cutoff.
PrecisionMatrix precision_via_pseudoinverse(const CovarianceMatrix& cov,
                                            double rank_tolerance = -1.0);

double default_rank_tolerance(Eigen::Index roi_count);

// rho_ij = -w_ij / sqrt(w_ii * w_jj), diagonal fixed to 0, clamped to
// [-1, 1]. Throws NonPositiveDiagonal(i) when w_ii <= 1e-12 * max_j w_jj,
// which marks ROI i as numerically rank-deficient; the subject fails whole.
PartialCorrelationMatrix partial_correlation(const PrecisionMatrix& prec);

}  // namespace netsig
