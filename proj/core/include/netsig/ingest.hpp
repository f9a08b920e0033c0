#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace netsig {

struct RoiLabel {
  std::string name;  // unique within a cohort
  int index = 0;     // 0-based column position
};

bool operator==(const RoiLabel& a, const RoiLabel& b);

enum class ClassLabel { healthy, impaired };

std::string_view class_label_name(ClassLabel label);

// Parses one manifest class field: trimmed, case-insensitive.
// healthy|control|hc -> healthy; mci|impaired|patient -> impaired.
// Throws UnknownClassLabel otherwise.
ClassLabel parse_class_label(std::string_view text);

struct ManifestEntry {
  std::string subject_id;
  std::string path;  // relative to the manifest's directory unless absolute
  ClassLabel label;
};

struct CohortManifest {
  std::filesystem::path directory;  // base for relative entry paths
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry& entry) const;
};

struct TimeSeriesMatrix {
  std::string subject_id;
  Eigen::MatrixXd values;  // T x R, finite, no constant column
  std::vector<RoiLabel> labels;

  Eigen::Index timepoints() const { return values.rows(); }
  Eigen::Index roi_count() const { return values.cols(); }
};

struct Subject {
  std::string subject_id;
  ClassLabel label;
  TimeSeriesMatrix series;
};

// Subjects grouped by class, all sharing one ROI label list.
// manifest_order preserves the original row order as (class, bucket index)
// so downstream outputs can follow the manifest.
struct ValidatedCohort {
  std::vector<RoiLabel> labels;
  std::vector<Subject> healthy;
  std::vector<Subject> impaired;
  std::vector<std::pair<ClassLabel, size_t>> manifest_order;

  int roi_count() const { return static_cast<int>(labels.size()); }
  const Subject& subject_at(size_t manifest_index) const {
    const auto& [label, idx] = manifest_order[manifest_index];
    return label == ClassLabel::healthy ? healthy[idx] : impaired[idx];
  }
};

// Format: header "subject_id,path,class", one row per subject.
// Errors: MissingFile, MalformedManifest(row, reason), DuplicateSubject(id),
// UnknownClassLabel(text). Row indices in errors are 0-based data rows.
CohortManifest load_manifest(const std::filesystem::path& path);

// Format: first row ROI labels, then one row of R decimal numbers per
// timepoint. Errors: MalformedMatrix(row, col), NonFiniteValue(row, col),
// LabelMismatch(position), ConstantColumn(label), TooFewTimepoints.
// Coordinates are 0-based over data rows.
TimeSeriesMatrix load_timeseries(
    const std::filesystem::path& path,
    const std::optional<std::vector<RoiLabel>>& expected_labels = std::nullopt,
    std::string subject_id = {});

// Loads every subject and checks all label lists are identical as ordered
// sequences. Load errors are rethrown with the subject_id attached; a label
// list differing from the first subject's is InconsistentRoiSet.
// A class with zero subjects is permitted; disparity is then unavailable.
ValidatedCohort validate_cohort(const CohortManifest& manifest);

}  // namespace netsig
