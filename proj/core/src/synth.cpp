#include "netsig/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "netsig/error.hpp"
#include "netsig/rng.hpp"
#include "netsig/text.hpp"

namespace netsig {

void validate_spec(const SynthSpec& spec) {
  const int R = spec.roi_count;
  if (spec.core.size() < 3) {
    throw Error(ErrorCode::InvalidSpec, "core must have at least 3 nodes");
  }
  if (static_cast<int>(spec.core.size()) > R) {
    throw Error(ErrorCode::InvalidSpec, "core larger than roi_count");
  }
  if (spec.timepoints <= R) {
    throw Error(ErrorCode::InvalidSpec, "timepoints must exceed roi_count for a full-rank covariance");
  }
  if (spec.subjects_per_class < 1) {
    throw Error(ErrorCode::InvalidSpec, "subjects_per_class must be at least 1");
  }
  if (!(spec.rho_core > 0.0 && spec.rho_core < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "rho_core must lie in (0, 1)");
  }
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "alpha must lie in [0, 1]");
  }
  std::set<int> core(spec.core.begin(), spec.core.end());
  if (core.size() != spec.core.size()) {
    throw Error(ErrorCode::InvalidSpec, "core contains duplicate nodes");
  }
  for (int v : spec.core) {
    if (v < 0 || v >= R) throw Error(ErrorCode::InvalidSpec, "core node out of range");
  }
  std::set<int> weakened(spec.weakened.begin(), spec.weakened.end());
  if (weakened.size() != spec.weakened.size()) {
    throw Error(ErrorCode::InvalidSpec, "weakened contains duplicate nodes");
  }
  for (int v : spec.weakened) {
    if (!core.count(v)) throw Error(ErrorCode::InvalidSpec, "weakened node not in core");
  }
}

Eigen::MatrixXd synth_covariance(const SynthSpec& spec, bool impaired) {
  const int R = spec.roi_count;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(R, R);
  for (int a : spec.core) {
    for (int b : spec.core) {
      if (a != b) sigma(a, b) = spec.rho_core;
    }
  }
  if (impaired) {
    // Off-diagonal rows/columns of weakened nodes scaled by alpha; a pair of
    // weakened nodes is scaled twice. Variances are untouched.
    for (int v : spec.weakened) {
      for (int j = 0; j < R; ++j) {
        if (j == v) continue;
        sigma(v, j) *= spec.alpha;
        sigma(j, v) *= spec.alpha;
      }
    }
  }
  return sigma;
}

namespace {

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  if (solver.eigenvalues().minCoeff() <= 1e-10) {
    throw Error(ErrorCode::InvalidSpec,
                "class covariance not positive definite (min eigenvalue " +
                    std::to_string(solver.eigenvalues().minCoeff()) + ")");
  }
  return solver.eigenvectors() * solver.eigenvalues().cwiseSqrt().asDiagonal() *
         solver.eigenvectors().transpose();
}

// T x R matrix of iid standard normals from the subject's own stream.
// Box-Muller on 53-bit uniforms; <random> distributions are not
// reproducible across standard libraries.
Eigen::MatrixXd standard_normals(int T, int R, std::uint64_t subject_seed) {
  SplitMix64 gen(subject_seed);
  Eigen::MatrixXd z(T, R);
  double spare = 0.0;
  bool have_spare = false;
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < R; ++j) {
      if (have_spare) {
        z(t, j) = spare;
        have_spare = false;
        continue;
      }
      double u1 = gen.next_unit();
      double u2 = gen.next_unit();
      double radius = std::sqrt(-2.0 * std::log(u1));
      double angle = 2.0 * std::numbers::pi * u2;
      z(t, j) = radius * std::cos(angle);
      spare = radius * std::sin(angle);
      have_spare = true;
    }
  }
  return z;
}

std::uint64_t subject_seed(std::uint64_t base, int global_index) {
  SplitMix64 gen(base + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(global_index));
  return gen.next();
}

}  // namespace

std::string synth_roi_name(int index, int roi_count) {
  int width = roi_count > 100 ? 3 : 2;
  std::string digits = std::to_string(index);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return "roi_" + digits;
}

ValidatedCohort generate_cohort(const SynthSpec& spec) {
  validate_spec(spec);
  const int R = spec.roi_count;
  const int T = spec.timepoints;
  const int n = spec.subjects_per_class;

  std::vector<RoiLabel> labels;
  labels.reserve(static_cast<size_t>(R));
  for (int j = 0; j < R; ++j) labels.push_back(RoiLabel{synth_roi_name(j, R), j});

  const Eigen::MatrixXd sqrt_healthy = symmetric_sqrt(synth_covariance(spec, false));
  const Eigen::MatrixXd sqrt_impaired = symmetric_sqrt(synth_covariance(spec, true));

  ValidatedCohort cohort;
  cohort.labels = labels;
  for (int cls = 0; cls < 2; ++cls) {
    const bool impaired = cls == 1;
    const auto& sqrt_sigma = impaired ? sqrt_impaired : sqrt_healthy;
    for (int s = 0; s < n; ++s) {
      const int global = cls * n + s;
      Eigen::MatrixXd z = standard_normals(T, R, subject_seed(spec.seed, global));

      Subject subject;
      subject.label = impaired ? ClassLabel::impaired : ClassLabel::healthy;
      std::string digits = std::to_string(s);
      while (digits.size() < 2) digits.insert(digits.begin(), '0');
      subject.subject_id = (impaired ? "i" : "h") + digits;
      subject.series.subject_id = subject.subject_id;
      subject.series.labels = labels;
      subject.series.values = z * sqrt_sigma;  // rows ~ N(0, Sigma)
      (impaired ? cohort.impaired : cohort.healthy).push_back(std::move(subject));
    }
  }
  return cohort;
}

std::filesystem::path write_cohort(const SynthSpec& spec, const std::filesystem::path& dir) {
  ValidatedCohort cohort = generate_cohort(spec);
  std::filesystem::create_directories(dir);

  std::string manifest = "subject_id,path,class\n";
  auto write_subject = [&](const Subject& subject) {
    std::string content;
    for (size_t j = 0; j < cohort.labels.size(); ++j) {
      if (j) content += ',';
      content += cohort.labels[j].name;
    }
    content += '\n';
    const auto& values = subject.series.values;
    for (Eigen::Index t = 0; t < values.rows(); ++t) {
      for (Eigen::Index j = 0; j < values.cols(); ++j) {
        if (j) content += ',';
        content += format_double(values(t, j));
      }
      content += '\n';
    }
    const std::string filename = subject.subject_id + ".csv";
    write_file(dir / filename, content);
    manifest += subject.subject_id + "," + filename + "," +
                std::string(class_label_name(subject.label)) + "\n";
  };
  for (const auto& subject : cohort.healthy) write_subject(subject);
  for (const auto& subject : cohort.impaired) write_subject(subject);

  const auto manifest_path = dir / "manifest.csv";
  write_file(manifest_path, manifest);
  return manifest_path;
}

}  // namespace netsig
