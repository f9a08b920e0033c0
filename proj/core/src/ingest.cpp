#include "netsig/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "netsig/error.hpp"
#include "netsig/text.hpp"

namespace netsig {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool valid_subject_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == '/' || c == '\\' || c == '\0') return false;
  }
  return true;
}

}  // namespace

bool operator==(const RoiLabel& a, const RoiLabel& b) {
  return a.name == b.name && a.index == b.index;
}

std::string_view class_label_name(ClassLabel label) {
  return label == ClassLabel::healthy ? "healthy" : "impaired";
}

ClassLabel parse_class_label(std::string_view text) {
  std::string t = lower(trim(text));
  if (t == "healthy" || t == "control" || t == "hc") return ClassLabel::healthy;
  if (t == "mci" || t == "impaired" || t == "patient") return ClassLabel::impaired;
  throw Error(ErrorCode::UnknownClassLabel, "\"" + std::string(trim(text)) + "\"");
}

std::filesystem::path CohortManifest::resolve(const ManifestEntry& entry) const {
  std::filesystem::path p(entry.path);
  if (p.is_absolute()) return p;
  return directory / p;
}

CohortManifest load_manifest(const std::filesystem::path& path) {
  std::string content = read_file(path);
  auto lines = split_lines(content);
  if (lines.empty()) {
    throw Error(ErrorCode::MalformedManifest, "row 0: empty file, expected header subject_id,path,class");
  }
  auto header = split_fields(lines[0]);
  if (header.size() != 3 || trim(header[0]) != "subject_id" || trim(header[1]) != "path" ||
      trim(header[2]) != "class") {
    throw Error(ErrorCode::MalformedManifest, "row 0: header must be subject_id,path,class");
  }

  CohortManifest manifest;
  manifest.directory = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::unordered_set<std::string> seen;
  for (size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    size_t row = li - 1;  // 0-based data row
    auto fields = split_fields(lines[li]);
    if (fields.size() != 3) {
      throw Error(ErrorCode::MalformedManifest,
                  "row " + std::to_string(row) + ": expected 3 fields, got " +
                      std::to_string(fields.size()));
    }
    ManifestEntry entry;
    entry.subject_id = std::string(trim(fields[0]));
    entry.path = std::string(trim(fields[1]));
    if (!valid_subject_id(entry.subject_id)) {
      throw Error(ErrorCode::MalformedManifest,
                  "row " + std::to_string(row) + ": subject_id must be nonempty with no path separators");
    }
    if (entry.path.empty()) {
      throw Error(ErrorCode::MalformedManifest, "row " + std::to_string(row) + ": empty path");
    }
    entry.label = parse_class_label(fields[2]);
    if (!seen.insert(entry.subject_id).second) {
      throw Error(ErrorCode::DuplicateSubject, entry.subject_id);
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

TimeSeriesMatrix load_timeseries(const std::filesystem::path& path,
                                 const std::optional<std::vector<RoiLabel>>& expected_labels,
                                 std::string subject_id) {
  std::string content = read_file(path);
  auto lines = split_lines(content);

  std::vector<std::string_view> raw_lines;
  raw_lines.reserve(lines.size());
  for (auto line : lines) {
    if (!trim(line).empty()) raw_lines.push_back(line);
  }
  if (raw_lines.empty()) {
    throw Error(ErrorCode::MalformedMatrix, "row 0, col 0: empty file");
  }

  auto header = split_fields(raw_lines[0]);
  std::vector<RoiLabel> labels;
  labels.reserve(header.size());
  for (size_t j = 0; j < header.size(); ++j) {
    labels.push_back(RoiLabel{std::string(trim(header[j])), static_cast<int>(j)});
    if (labels.back().name.empty()) {
      throw Error(ErrorCode::MalformedMatrix, "row 0, col " + std::to_string(j) + ": empty ROI label");
    }
  }
  for (size_t j = 0; j < labels.size(); ++j) {
    for (size_t k = j + 1; k < labels.size(); ++k) {
      if (labels[j].name == labels[k].name) {
        throw Error(ErrorCode::MalformedMatrix,
                    "row 0, col " + std::to_string(k) + ": duplicate ROI label \"" + labels[k].name + "\"");
      }
    }
  }
  const auto R = static_cast<Eigen::Index>(labels.size());
  if (R < 2) {
    throw Error(ErrorCode::MalformedMatrix, "row 0, col 0: need at least 2 ROI columns");
  }

  if (expected_labels) {
    const auto& exp = *expected_labels;
    for (size_t j = 0; j < std::max(exp.size(), labels.size()); ++j) {
      if (j >= exp.size() || j >= labels.size() || !(exp[j] == labels[j])) {
        throw Error(ErrorCode::LabelMismatch, "position " + std::to_string(j));
      }
    }
  }

  const auto T = static_cast<Eigen::Index>(raw_lines.size()) - 1;
  if (T < 2) {
    throw Error(ErrorCode::TooFewTimepoints,
                "got " + std::to_string(T) + " timepoints, need at least 2");
  }

  Eigen::MatrixXd values(T, R);
  for (Eigen::Index t = 0; t < T; ++t) {
    auto fields = split_fields(raw_lines[static_cast<size_t>(t) + 1]);
    if (static_cast<Eigen::Index>(fields.size()) != R) {
      throw Error(ErrorCode::MalformedMatrix,
                  "row " + std::to_string(t) + ", col " + std::to_string(fields.size()) +
                      ": expected " + std::to_string(R) + " fields");
    }
    for (Eigen::Index j = 0; j < R; ++j) {
      auto parsed = parse_double(trim(fields[static_cast<size_t>(j)]));
      if (!parsed) {
        throw Error(ErrorCode::MalformedMatrix,
                    "row " + std::to_string(t) + ", col " + std::to_string(j) + ": unparseable number");
      }
      if (!std::isfinite(*parsed)) {
        throw Error(ErrorCode::NonFiniteValue,
                    "row " + std::to_string(t) + ", col " + std::to_string(j));
      }
      values(t, j) = *parsed;
    }
  }

  for (Eigen::Index j = 0; j < R; ++j) {
    if ((values.col(j).array() == values(0, j)).all()) {
      throw Error(ErrorCode::ConstantColumn, labels[static_cast<size_t>(j)].name);
    }
  }

  TimeSeriesMatrix ts;
  ts.subject_id = std::move(subject_id);
  ts.values = std::move(values);
  ts.labels = std::move(labels);
  return ts;
}

ValidatedCohort validate_cohort(const CohortManifest& manifest) {
  ValidatedCohort cohort;
  bool first = true;
  for (const auto& entry : manifest.entries) {
    TimeSeriesMatrix ts;
    try {
      if (first) {
        ts = load_timeseries(manifest.resolve(entry), std::nullopt, entry.subject_id);
      } else {
        ts = load_timeseries(manifest.resolve(entry), cohort.labels, entry.subject_id);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LabelMismatch) {
        throw Error(ErrorCode::InconsistentRoiSet, "subject " + entry.subject_id + ": " + e.detail());
      }
      throw Error(e.code(), "subject " + entry.subject_id + ": " + e.detail());
    }
    if (first) {
      cohort.labels = ts.labels;
      first = false;
    }
    auto& bucket = entry.label == ClassLabel::healthy ? cohort.healthy : cohort.impaired;
    cohort.manifest_order.emplace_back(entry.label, bucket.size());
    bucket.push_back(Subject{entry.subject_id, entry.label, std::move(ts)});
  }
  return cohort;
}

}  // namespace netsig
