#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "netsig/ingest.hpp"

namespace netsig {

// Two-class cohort with planted structure: core nodes share pairwise
// covariance rho_core; in the impaired class the covariance rows/columns
// of weakened nodes are attenuated by alpha (variances stay 1), so the
// class difference lives in the dependence structure, not the amplitude.
struct SynthSpec {
  int roi_count = 12;
  int timepoints = 200;
  int subjects_per_class = 20;
  std::vector<int> core;      // node subset with strong mutual coupling
  std::vector<int> weakened;  // subset of core, attenuated in impaired class
  double rho_core = 0.9;      // in (0, 1)
  double alpha = 0.3;         // in [0, 1]; 1 means no attenuation (null model)
  std::uint64_t seed = 0;
};

// Throws InvalidSpec unless: weakened is a subset of core; R >= |core| >= 3;
// T > R; rho_core in (0,1); alpha in [0,1]; indices in range and unique.
void validate_spec(const SynthSpec& spec);

// Deterministic given the seed: subject s (healthy 0..n-1 first, then
// impaired n..2n-1) draws T rows from N(0, Sigma_class) via the symmetric
// square root of the class covariance and a per-subject splitmix64 stream.
// Both class covariances are checked positive definite (eigenvalue floor);
// violation is InvalidSpec.
ValidatedCohort generate_cohort(const SynthSpec& spec);

// Healthy (alpha applied = false) or impaired (true) class covariance.
Eigen::MatrixXd synth_covariance(const SynthSpec& spec, bool impaired);

// Writes manifest.csv plus one time-series file per subject into dir,
// in the ingest formats. Same spec (same seed) gives byte-identical files.
// Returns the manifest path.
std::filesystem::path write_cohort(const SynthSpec& spec, const std::filesystem::path& dir);

// ROI label used for synthetic data: "roi_00", "roi_01", ...
std::string synth_roi_name(int index, int roi_count);

}  // namespace netsig
