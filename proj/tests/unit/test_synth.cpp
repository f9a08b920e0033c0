#include <Eigen/Dense>

#include "doctest.h"
#include "netsig/error.hpp"
#include "netsig/synth.hpp"
#include "netsig/text.hpp"
#include "support/builders.hpp"

using namespace netsig;
using netsig_test::TempDir;

namespace {

SynthSpec small_spec() {
  SynthSpec spec;
  spec.roi_count = 6;
  spec.timepoints = 40;
  spec.subjects_per_class = 3;
  spec.core = {0, 1, 2};
  spec.weakened = {0};
  spec.rho_core = 0.6;
  spec.alpha = 0.4;
  spec.seed = 9;
  return spec;
}

ErrorCode spec_error(SynthSpec spec) {
  try {
    validate_spec(spec);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected InvalidSpec");
  return ErrorCode::InvalidSpec;
}

}  // namespace

TEST_CASE("spec validation rejects each violated invariant") {
  SynthSpec ok = small_spec();
  CHECK_NOTHROW(validate_spec(ok));

  SynthSpec s = ok;
  s.core = {0, 1};  // |core| < 3
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);

  s = ok;
  s.weakened = {5};  // not a subset of core
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);

  s = ok;
  s.timepoints = 6;  // T must exceed R
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);

  s = ok;
  s.rho_core = 1.0;  // open interval
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);

  s = ok;
  s.alpha = 1.5;
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);

  s = ok;
  s.alpha = 1.0;  // the null model is allowed
  CHECK_NOTHROW(validate_spec(s));

  s = ok;
  s.core = {0, 0, 1};  // duplicate index
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);

  s = ok;
  s.core = {0, 1, 7};  // out of range
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);

  s = ok;
  s.subjects_per_class = 0;
  CHECK(spec_error(s) == ErrorCode::InvalidSpec);
}

TEST_CASE("class covariances carry the planted structure") {
  SynthSpec spec = small_spec();
  Eigen::MatrixXd healthy = synth_covariance(spec, false);
  Eigen::MatrixXd impaired = synth_covariance(spec, true);

  // diagonal stays 1 in both classes
  for (int i = 0; i < spec.roi_count; ++i) {
    CHECK(healthy(i, i) == 1.0);
    CHECK(impaired(i, i) == 1.0);
  }
  // core pairs at rho_core, everything else 0 (healthy)
  CHECK(healthy(0, 1) == spec.rho_core);
  CHECK(healthy(1, 2) == spec.rho_core);
  CHECK(healthy(0, 3) == 0.0);
  CHECK(healthy(3, 4) == 0.0);
  // impaired: pairs touching the weakened node scale by alpha
  CHECK(impaired(0, 1) == doctest::Approx(spec.rho_core * spec.alpha).epsilon(1e-15));
  CHECK(impaired(0, 2) == doctest::Approx(spec.rho_core * spec.alpha).epsilon(1e-15));
  CHECK(impaired(1, 2) == spec.rho_core);  // untouched pair

  // two weakened nodes attenuate their mutual entry twice
  SynthSpec two = spec;
  two.weakened = {0, 1};
  Eigen::MatrixXd both = synth_covariance(two, true);
  CHECK(both(0, 1) ==
        doctest::Approx(spec.rho_core * spec.alpha * spec.alpha).epsilon(1e-15));
  CHECK(both(0, 2) == doctest::Approx(spec.rho_core * spec.alpha).epsilon(1e-15));

  // alpha = 1 collapses the class difference entirely
  SynthSpec null_spec = spec;
  null_spec.alpha = 1.0;
  CHECK((synth_covariance(null_spec, true) - synth_covariance(null_spec, false))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("generated cohorts are reproducible and class-structured") {
  SynthSpec spec = small_spec();
  ValidatedCohort a = generate_cohort(spec);
  ValidatedCohort b = generate_cohort(spec);
  REQUIRE(a.healthy.size() == 3);
  REQUIRE(a.impaired.size() == 3);
  CHECK(a.healthy[0].subject_id == b.healthy[0].subject_id);
  CHECK(a.healthy[0].series.values == b.healthy[0].series.values);
  CHECK(a.impaired[2].series.values == b.impaired[2].series.values);
  CHECK(a.labels.size() == 6);
  CHECK(a.labels[0].name == synth_roi_name(0, 6));

  // subjects differ from each other
  CHECK(a.healthy[0].series.values != a.healthy[1].series.values);

  SynthSpec other = spec;
  other.seed = 10;
  ValidatedCohort c = generate_cohort(other);
  CHECK(a.healthy[0].series.values != c.healthy[0].series.values);
}

TEST_CASE("empirical covariance approaches the target") {
  SynthSpec spec = small_spec();
  spec.timepoints = 4000;
  spec.subjects_per_class = 1;
  ValidatedCohort cohort = generate_cohort(spec);
  const auto& x = cohort.healthy[0].series.values;
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd emp = centered.transpose() * centered / double(x.rows() - 1);
  Eigen::MatrixXd target = synth_covariance(spec, false);
  CHECK((emp - target).cwiseAbs().maxCoeff() < 0.12);
}

TEST_CASE("write_cohort emits loadable, byte-stable files") {
  SynthSpec spec = small_spec();
  TempDir dir_a("synth_a");
  TempDir dir_b("synth_b");
  auto manifest_a = write_cohort(spec, dir_a.path());
  auto manifest_b = write_cohort(spec, dir_b.path());
  CHECK(manifest_a.filename() == "manifest.csv");

  // identical bytes across runs
  CohortManifest ma = load_manifest(manifest_a);
  REQUIRE(ma.entries.size() == 6);
  for (const auto& entry : ma.entries) {
    auto rel = std::filesystem::path(entry.path);
    CHECK(netsig_test::read_text(dir_a.path() / rel) ==
          netsig_test::read_text(dir_b.path() / rel));
  }
  CHECK(netsig_test::read_text(manifest_a) == netsig_test::read_text(manifest_b));

  // and the cohort validates round-trip with the in-memory generator
  ValidatedCohort from_disk = validate_cohort(ma);
  ValidatedCohort in_memory = generate_cohort(spec);
  CHECK(from_disk.healthy[1].series.values == in_memory.healthy[1].series.values);
  CHECK(from_disk.labels.size() == in_memory.labels.size());
}
