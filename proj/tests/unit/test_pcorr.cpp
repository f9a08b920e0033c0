#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "netsig/error.hpp"
#include "netsig/pcorr.hpp"
#include "netsig/rng.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace netsig;
using netsig_test::random_normals;

namespace {

TimeSeriesMatrix make_ts(const Eigen::MatrixXd& values) {
  TimeSeriesMatrix ts;
  ts.subject_id = "t";
  ts.values = values;
  for (Eigen::Index j = 0; j < values.cols(); ++j)
    ts.labels.push_back(RoiLabel{"n" + std::to_string(j), static_cast<int>(j)});
  return ts;
}

CovarianceMatrix make_cov(const Eigen::MatrixXd& values) {
  CovarianceMatrix cov;
  cov.values = values;
  for (Eigen::Index j = 0; j < values.cols(); ++j)
    cov.labels.push_back(RoiLabel{"n" + std::to_string(j), static_cast<int>(j)});
  return cov;
}

}  // namespace

TEST_CASE("sample covariance uses the unbiased denominator") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 2, 4, 3, 6;
  CovarianceMatrix cov = sample_covariance(make_ts(x));
  // column means 2 and 4; sum of squares 2 and 8; cross 4; divided by T-1 = 2
  CHECK(cov.values(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cov.values(1, 1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(cov.values(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cov.values(0, 1) == cov.values(1, 0));
}

TEST_CASE("equicorrelated trivariate has known partial correlation") {
  // For cov = I + r(J - I) on 3 nodes, each partial correlation is r/(1+r).
  const double r = 0.4;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(3, 3, r);
  sigma.diagonal().setOnes();
  PrecisionMatrix prec = precision_via_pseudoinverse(make_cov(sigma));
  PartialCorrelationMatrix rho = partial_correlation(prec);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j)
        CHECK(rho.values(i, j) == 0.0);
      else
        CHECK(rho.values(i, j) == doctest::Approx(r / (1 + r)).epsilon(1e-12));
    }
}

TEST_CASE("partial correlation matches the residual-regression oracle") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    int R = 3 + static_cast<int>(seed % 6);
    int T = 50 * R;
    Eigen::MatrixXd data = random_normals(T, R, 1000 + seed);
    // mix the columns so they correlate
    Eigen::MatrixXd mix = random_normals(R, R, 2000 + seed);
    mix += 2.0 * Eigen::MatrixXd::Identity(R, R);
    data = data * mix;

    TimeSeriesMatrix ts = make_ts(data);
    PartialCorrelationMatrix rho =
        partial_correlation(precision_via_pseudoinverse(sample_covariance(ts)));
    Eigen::MatrixXd expected = netsig_test::pcorr_by_residual_regression(data);
    double worst = (rho.values - expected).cwiseAbs().maxCoeff();
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("pseudo-inverse satisfies the Penrose conditions, including rank-deficient input") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    int R = 4 + static_cast<int>(seed % 5);
    int T = (seed % 2 == 0) ? R - 2 : 3 * R;  // half the cases are rank-deficient
    if (T < 2) T = 2;
    Eigen::MatrixXd data = random_normals(T, R, 3000 + seed);
    CovarianceMatrix cov = sample_covariance(make_ts(data));
    PrecisionMatrix prec = precision_via_pseudoinverse(cov);
    CHECK(netsig_test::penrose_max_residual(cov.values, prec.values) < 1e-8);
    if (T <= R) CHECK(prec.rank < R);
    if (T > R) CHECK(prec.rank == R);
  }
}

TEST_CASE("partial correlation is invariant to positive per-ROI rescaling") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    int R = 5;
    int T = 60;
    Eigen::MatrixXd data = random_normals(T, R, 4000 + seed);
    SplitMix64 gen{5000 + seed};
    Eigen::VectorXd scale(R);
    for (int j = 0; j < R; ++j) scale(j) = 0.1 + 10.0 * gen.next_unit();

    auto rho_of = [&](const Eigen::MatrixXd& d) {
      return partial_correlation(precision_via_pseudoinverse(sample_covariance(make_ts(d))));
    };
    Eigen::MatrixXd scaled = data * scale.asDiagonal();
    double worst = (rho_of(data).values - rho_of(scaled).values).cwiseAbs().maxCoeff();
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("rank-deficiency diagnostics") {
  // Exact zero block: node 2 carries no variance at all.
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(3, 3);
  sigma(0, 0) = 1.0;
  sigma(1, 1) = 1.0;
  sigma(0, 1) = sigma(1, 0) = 0.3;
  PrecisionMatrix prec = precision_via_pseudoinverse(make_cov(sigma));
  CHECK(prec.rank == 2);
  CHECK_THROWS_AS(partial_correlation(prec), Error);
  try {
    partial_correlation(prec);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveDiagonal);
  }
}

TEST_CASE("all-zero covariance is rejected") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  try {
    precision_via_pseudoinverse(make_cov(zero));
    FAIL("expected AllEigenvaluesDiscarded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllEigenvaluesDiscarded);
  }
}

TEST_CASE("negative eigenvalues above the cutoff are inverted and flagged") {
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;  // eigenvalues 3 and -1
  PrecisionMatrix prec = precision_via_pseudoinverse(make_cov(indefinite));
  CHECK(prec.rank == 2);
  CHECK(prec.negative_eigenvalues_inverted == 1);
  CHECK(prec.most_negative_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
  // inverse of the matrix itself: [[1,2],[2,1]]^-1 = (1/-3)[[1,-2],[-2,1]]
  CHECK(prec.values(0, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(prec.values(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("clamping keeps rho inside [-1, 1] with zero diagonal") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    int R = 6;
    int T = 4;  // heavily rank-deficient: pseudo-inverse route
    Eigen::MatrixXd data = random_normals(T, R, 6000 + seed);
    CovarianceMatrix cov = sample_covariance(make_ts(data));
    PrecisionMatrix prec = precision_via_pseudoinverse(cov);
    try {
      PartialCorrelationMatrix rho = partial_correlation(prec);
      CHECK(rho.values.cwiseAbs().maxCoeff() <= 1.0);
      CHECK(rho.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
      CHECK((rho.values - rho.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
    } catch (const Error& e) {
      // legitimately possible on tiny T when a diagonal entry collapses
      CHECK(e.code() == ErrorCode::NonPositiveDiagonal);
    }
  }
}
