#include "netsig/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "netsig/error.hpp"
#include "netsig/text.hpp"
#include "netsig/version.hpp"

namespace netsig {

namespace {

std::string join_names(const std::vector<RoiLabel>& labels) {
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += labels[i].name;
  }
  return out;
}

std::string edge_policy_string(const EdgePolicy& edge) {
  if (edge.mode == EdgePolicy::Mode::threshold)
    return "edge=threshold,tau=" + format_double(edge.tau);
  return "edge=density,fraction=" + format_double(edge.density);
}

// Comment lines (leading '#') split off from data lines. comments keeps the
// text after "# "; data keeps (line, 0-based data row index implied by order).
// Views into the argument: the backing string must outlive the result.
struct FileLines {
  std::vector<std::string_view> comments;
  std::vector<std::string_view> data;
};

FileLines split_comment_lines(std::string_view text) {
  FileLines out;
  for (std::string_view line : split_lines(text)) {
    if (!line.empty() && line.front() == '#') {
      std::string_view body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      out.comments.push_back(body);
    } else {
      out.data.push_back(line);
    }
  }
  return out;
}

std::optional<std::string_view> comment_value(const FileLines& lines, std::string_view key) {
  for (std::string_view c : lines.comments) {
    if (c.size() > key.size() && c.substr(0, key.size()) == key && c[key.size()] == ' ')
      return trim(c.substr(key.size() + 1));
  }
  return std::nullopt;
}

[[noreturn]] void malformed(const std::filesystem::path& path, size_t row, const std::string& why) {
  throw Error(ErrorCode::MalformedManifest,
              path.generic_string() + ": data row " + std::to_string(row) + ": " + why);
}

double parse_cell(const std::filesystem::path& path, size_t row, size_t col,
                  std::string_view token) {
  auto v = parse_double(trim(token));
  if (!v)
    throw Error(ErrorCode::MalformedMatrix, path.generic_string() + ": data row " +
                                                std::to_string(row) + ", column " +
                                                std::to_string(col) + ": not a number: '" +
                                                std::string(token) + "'");
  return *v;
}

std::vector<RoiLabel> parse_label_row(const std::filesystem::path& path, size_t row,
                                      std::string_view line) {
  std::vector<RoiLabel> labels;
  std::unordered_set<std::string> seen;
  auto fields = split_fields(line);
  for (size_t i = 0; i < fields.size(); ++i) {
    std::string name(trim(fields[i]));
    if (name.empty()) malformed(path, row, "empty ROI label in column " + std::to_string(i));
    if (!seen.insert(name).second) malformed(path, row, "duplicate ROI label '" + name + "'");
    labels.push_back(RoiLabel{std::move(name), static_cast<int>(i)});
  }
  if (labels.empty()) malformed(path, row, "no ROI labels");
  return labels;
}

}  // namespace

std::string pcorr_config_string(double rank_tolerance) {
  return "pcorr:rank_tolerance=" +
         (rank_tolerance < 0 ? std::string("auto") : format_double(rank_tolerance));
}

std::string communities_config_string(const EdgePolicy& edge, int cpm_k, EigenVariant variant,
                                      std::optional<std::uint64_t> node_order_seed) {
  return "communities:" + edge_policy_string(edge) + ";cpm_k=" + std::to_string(cpm_k) +
         ";eigen_variant=" + std::string(eigen_variant_name(variant)) + ";node_order_seed=" +
         (node_order_seed ? std::to_string(*node_order_seed) : std::string("none"));
}

std::string nss_config_string(RankAggregation aggregation) {
  return "nss:aggregation=" + std::string(rank_aggregation_name(aggregation));
}

std::string disparity_config_string(DisparityDenominator denominator) {
  return "disparity:denominator=" + std::string(disparity_denominator_name(denominator));
}

std::string report_config_string(int top_k, std::optional<double> threshold) {
  return "report:top_k=" + std::to_string(top_k) + ";threshold=" +
         (threshold ? format_double(*threshold) : std::string("none"));
}

std::string file_header(const std::string& config_string) {
  return "# " + std::string(tool_name) + " " + std::string(tool_version) + "\n# config " +
         hex16(fnv1a64(config_string)) + "\n";
}

// --- partial-correlation files ----------------------------------------------

std::string render_pcorr_file(const PartialCorrelationMatrix& matrix, double rank_tolerance) {
  std::string out = file_header(pcorr_config_string(rank_tolerance));
  out += join_names(matrix.labels);
  out += '\n';
  const auto R = matrix.values.rows();
  for (Eigen::Index i = 0; i < R; ++i) {
    for (Eigen::Index j = 0; j < R; ++j) {
      if (j) out += ',';
      out += format_double(matrix.values(i, j));
    }
    out += '\n';
  }
  return out;
}

PartialCorrelationMatrix parse_pcorr_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  FileLines lines = split_comment_lines(text);
  if (lines.data.empty()) malformed(path, 0, "missing ROI label row");
  PartialCorrelationMatrix out;
  out.labels = parse_label_row(path, 0, lines.data[0]);
  const size_t R = out.labels.size();
  if (lines.data.size() - 1 != R)
    malformed(path, lines.data.size() - 1,
              "expected " + std::to_string(R) + " matrix rows, found " +
                  std::to_string(lines.data.size() - 1));
  out.values.resize(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(R));
  for (size_t i = 0; i < R; ++i) {
    auto fields = split_fields(lines.data[i + 1]);
    if (fields.size() != R)
      malformed(path, i + 1,
                "expected " + std::to_string(R) + " columns, found " +
                    std::to_string(fields.size()));
    for (size_t j = 0; j < R; ++j) {
      double v = parse_cell(path, i + 1, j, fields[j]);
      if (!std::isfinite(v) || v < -1.0 || v > 1.0)
        throw Error(ErrorCode::MalformedMatrix,
                    path.generic_string() + ": data row " + std::to_string(i + 1) + ", column " +
                        std::to_string(j) + ": value outside [-1, 1]");
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  for (size_t i = 0; i < R; ++i) {
    if (out.values(i, i) != 0.0)
      throw Error(ErrorCode::MalformedMatrix,
                  path.generic_string() + ": diagonal entry " + std::to_string(i) + " is nonzero");
    for (size_t j = i + 1; j < R; ++j)
      if (out.values(i, j) != out.values(j, i))
        throw Error(ErrorCode::MalformedMatrix, path.generic_string() + ": entry (" +
                                                    std::to_string(i) + ", " + std::to_string(j) +
                                                    ") is not symmetric");
  }
  return out;
}

// --- community log ------------------------------------------------------------

CommunityLogBuilder::CommunityLogBuilder(const std::vector<RoiLabel>& labels,
                                         const std::string& config_string)
    : labels_(labels) {
  header_ = file_header(config_string);
  header_ += "# labels " + join_names(labels_) + "\n";
  header_ += "subject_id,method,community_index,node_labels\n";
}

void CommunityLogBuilder::add_subject(
    const std::string& subject_id,
    const std::array<std::vector<std::vector<int>>, 4>& communities,
    const SubjectDetectionRecord& record) {
  auto append_row = [&](Method m, const std::string& index_field, const std::vector<int>& nodes) {
    body_ += subject_id;
    body_ += ',';
    body_ += method_name(m);
    body_ += ',';
    body_ += index_field;
    for (int node : nodes) {
      body_ += ',';
      body_ += labels_[static_cast<size_t>(node)].name;
    }
    body_ += '\n';
  };
  for (Method m : all_methods) {
    const auto& lists = communities[static_cast<size_t>(m)];
    for (size_t c = 0; c < lists.size(); ++c) append_row(m, std::to_string(c), lists[c]);
    append_row(m, "largest", record.largest_of(m));
  }
}

std::string CommunityLogBuilder::finish() const { return header_ + body_; }

CommunityLog parse_communities_log(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  FileLines lines = split_comment_lines(text);
  auto label_text = comment_value(lines, "labels");
  if (!label_text)
    throw Error(ErrorCode::MalformedManifest,
                path.generic_string() + ": missing '# labels' comment");
  CommunityLog log;
  log.labels = parse_label_row(path, 0, *label_text);
  std::unordered_map<std::string, int> label_index;
  for (const auto& l : log.labels) label_index.emplace(l.name, l.index);

  if (lines.data.empty() || trim(lines.data[0]) != "subject_id,method,community_index,node_labels")
    malformed(path, 0, "missing header row 'subject_id,method,community_index,node_labels'");

  std::unordered_map<std::string, size_t> entry_index;
  std::vector<std::array<bool, 4>> have_largest;
  for (size_t r = 1; r < lines.data.size(); ++r) {
    auto fields = split_fields(lines.data[r]);
    if (fields.size() < 3) malformed(path, r, "expected at least 3 fields");
    std::string subject(trim(fields[0]));
    if (subject.empty()) malformed(path, r, "empty subject_id");
    auto method = parse_method(trim(fields[1]));
    if (!method) malformed(path, r, "unknown method '" + std::string(trim(fields[1])) + "'");
    const size_t mi = static_cast<size_t>(*method);

    auto [it, inserted] = entry_index.emplace(subject, log.entries.size());
    if (inserted) {
      log.entries.push_back(CommunityLogEntry{});
      log.entries.back().subject_id = subject;
      log.entries.back().record.subject_id = subject;
      have_largest.push_back({false, false, false, false});
    }
    CommunityLogEntry& entry = log.entries[it->second];

    std::vector<int> nodes;
    nodes.reserve(fields.size() - 3);
    for (size_t f = 3; f < fields.size(); ++f) {
      auto li = label_index.find(std::string(trim(fields[f])));
      if (li == label_index.end())
        malformed(path, r, "unknown ROI label '" + std::string(trim(fields[f])) + "'");
      nodes.push_back(li->second);
    }
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
      malformed(path, r, "repeated ROI label in one community");

    std::string_view index_field = trim(fields[2]);
    if (index_field == "largest") {
      if (have_largest[it->second][mi])
        malformed(path, r, "duplicate 'largest' row for subject '" + subject + "'");
      have_largest[it->second][mi] = true;
      entry.record.largest[mi] = std::move(nodes);
    } else {
      size_t expected = entry.communities[mi].size();
      if (index_field != std::to_string(expected))
        malformed(path, r,
                  "community_index '" + std::string(index_field) + "' out of order (expected " +
                      std::to_string(expected) + ")");
      if (nodes.empty()) malformed(path, r, "empty community");
      entry.communities[mi].push_back(std::move(nodes));
    }
  }
  for (size_t e = 0; e < log.entries.size(); ++e)
    for (Method m : all_methods)
      if (!have_largest[e][static_cast<size_t>(m)])
        throw Error(ErrorCode::MalformedManifest,
                    path.generic_string() + ": subject '" + log.entries[e].subject_id +
                        "' has no 'largest' row for method " + std::string(method_name(m)));
  return log;
}

// --- NSS tables ---------------------------------------------------------------

std::string render_nss_table(const NssTable& table, RankAggregation aggregation) {
  std::string out = file_header(nss_config_string(aggregation));
  out += "# cohort " + table.cohort_label + "\n";
  out += "# subjects " + std::to_string(table.subject_count) + "\n";
  out += "roi,h,r_mean,nss\n";
  for (size_t i = 0; i < table.labels.size(); ++i) {
    out += table.labels[i].name;
    out += ',';
    out += format_double(table.h[i]);
    out += ',';
    out += format_double(table.r_agg[i]);
    out += ',';
    out += format_double(table.nss[i]);
    out += '\n';
  }
  return out;
}

NssTable parse_nss_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  FileLines lines = split_comment_lines(text);
  NssTable table;
  if (auto cohort = comment_value(lines, "cohort")) table.cohort_label = std::string(*cohort);
  if (auto subjects = comment_value(lines, "subjects")) {
    auto v = parse_double(*subjects);
    if (v && *v >= 0 && *v == static_cast<int>(*v)) table.subject_count = static_cast<int>(*v);
  }
  if (lines.data.empty() || trim(lines.data[0]) != "roi,h,r_mean,nss")
    malformed(path, 0, "missing header row 'roi,h,r_mean,nss'");
  for (size_t r = 1; r < lines.data.size(); ++r) {
    auto fields = split_fields(lines.data[r]);
    if (fields.size() != 4) malformed(path, r, "expected 4 fields");
    std::string name(trim(fields[0]));
    if (name.empty()) malformed(path, r, "empty ROI label");
    table.labels.push_back(RoiLabel{std::move(name), static_cast<int>(r - 1)});
    table.h.push_back(parse_cell(path, r, 1, fields[1]));
    table.r_agg.push_back(parse_cell(path, r, 2, fields[2]));
    table.nss.push_back(parse_cell(path, r, 3, fields[3]));
  }
  if (table.labels.empty()) malformed(path, 0, "no ROI rows");
  return table;
}

// --- disparity report ----------------------------------------------------------

std::string render_disparity_report(const DisparityReport& report,
                                    DisparityDenominator denominator) {
  std::string out = file_header(disparity_config_string(denominator));
  out += "roi,nss_healthy,nss_impaired,disparity_percent\n";
  for (const DisparityRow& row : report.rows) {
    out += report.labels[static_cast<size_t>(row.roi)].name;
    out += ',';
    out += format_double(row.nss_healthy);
    out += ',';
    out += format_double(row.nss_impaired);
    out += ',';
    out += row.defined ? format_double(row.disparity_percent) : std::string("undefined");
    out += '\n';
  }
  return out;
}

DisparityReport parse_disparity_report(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  FileLines lines = split_comment_lines(text);
  if (lines.data.empty() || trim(lines.data[0]) != "roi,nss_healthy,nss_impaired,disparity_percent")
    malformed(path, 0, "missing header row 'roi,nss_healthy,nss_impaired,disparity_percent'");
  DisparityReport report;
  std::unordered_set<std::string> seen;
  for (size_t r = 1; r < lines.data.size(); ++r) {
    auto fields = split_fields(lines.data[r]);
    if (fields.size() != 4) malformed(path, r, "expected 4 fields");
    std::string name(trim(fields[0]));
    if (name.empty()) malformed(path, r, "empty ROI label");
    if (!seen.insert(name).second) malformed(path, r, "duplicate ROI '" + name + "'");
    DisparityRow row;
    row.roi = static_cast<int>(r - 1);
    report.labels.push_back(RoiLabel{std::move(name), row.roi});
    row.nss_healthy = parse_cell(path, r, 1, fields[1]);
    row.nss_impaired = parse_cell(path, r, 2, fields[2]);
    if (trim(fields[3]) == "undefined") {
      row.defined = false;
      row.disparity_percent = 0.0;
    } else {
      row.defined = true;
      row.disparity_percent = parse_cell(path, r, 3, fields[3]);
    }
    report.rows.push_back(row);
  }
  if (report.rows.empty()) malformed(path, 0, "no ROI rows");
  return report;
}

std::string render_top_nodes(const TopKReport& top, const DisparityReport& report, int top_k,
                             std::optional<double> threshold) {
  std::string out = file_header(report_config_string(top_k, threshold));
  if (top.count_over_threshold)
    out += "# roi_count_over_threshold " + std::to_string(*top.count_over_threshold) + "\n";
  out += "roi,nss_healthy,nss_impaired,disparity_percent\n";
  for (const DisparityRow& row : top.rows) {
    out += report.labels[static_cast<size_t>(row.roi)].name;
    out += ',';
    out += format_double(row.nss_healthy);
    out += ',';
    out += format_double(row.nss_impaired);
    out += ',';
    out += format_double(row.disparity_percent);
    out += '\n';
  }
  return out;
}

std::string render_nss_comparison(const DisparityReport& report, int top_k,
                                  std::optional<double> threshold) {
  std::string out = file_header(report_config_string(top_k, threshold));
  out += "roi,nss_healthy,nss_impaired\n";
  std::vector<const DisparityRow*> rows;
  rows.reserve(report.rows.size());
  for (const DisparityRow& row : report.rows) rows.push_back(&row);
  std::sort(rows.begin(), rows.end(), [&](const DisparityRow* a, const DisparityRow* b) {
    return report.labels[static_cast<size_t>(a->roi)].name <
           report.labels[static_cast<size_t>(b->roi)].name;
  });
  for (const DisparityRow* row : rows) {
    out += report.labels[static_cast<size_t>(row->roi)].name;
    out += ',';
    out += format_double(row->nss_healthy);
    out += ',';
    out += format_double(row->nss_impaired);
    out += '\n';
  }
  return out;
}

// --- analysis ------------------------------------------------------------------

SubjectAnalysis analyze_subject(const std::string& subject_id,
                                const PartialCorrelationMatrix& rho,
                                const DetectionParams& params) {
  WeightedGraph g = build_weighted_graph(rho, params.edge);
  BinaryGraph b = binarize(g);

  SubjectAnalysis out;
  out.subject_id = subject_id;
  out.record.subject_id = subject_id;

  OverlappingCommunities oc = clique_percolation(b, params.cpm_k);
  out.communities[static_cast<size_t>(Method::cpm)] = oc.communities;
  out.record.largest[static_cast<size_t>(Method::cpm)] = largest_subcommunity(oc, g);

  Partition p_louvain = louvain(g, params.node_order_seed);
  out.communities[static_cast<size_t>(Method::louvain)] = community_members(p_louvain);
  out.record.largest[static_cast<size_t>(Method::louvain)] = largest_subcommunity(p_louvain, g);

  Partition p_greedy = greedy_modularity(g);
  out.communities[static_cast<size_t>(Method::greedy)] = community_members(p_greedy);
  out.record.largest[static_cast<size_t>(Method::greedy)] = largest_subcommunity(p_greedy, g);

  Partition p_eigen = leading_eigenvector(g, params.eigen_variant);
  out.communities[static_cast<size_t>(Method::eigen)] = community_members(p_eigen);
  out.record.largest[static_cast<size_t>(Method::eigen)] = largest_subcommunity(p_eigen, g);

  return out;
}

// --- stages ---------------------------------------------------------------------

namespace {

PartialCorrelationMatrix pcorr_from_timeseries(const TimeSeriesMatrix& ts, double rank_tolerance) {
  CovarianceMatrix cov = sample_covariance(ts);
  PrecisionMatrix prec = precision_via_pseudoinverse(cov, rank_tolerance);
  return partial_correlation(prec);
}

int exit_code_for(size_t failed, size_t total) {
  if (failed == 0) return 0;
  return failed == total ? 2 : 3;
}

void report_failures(const std::vector<SubjectFailure>& failures, std::ostream& diag) {
  for (const auto& f : failures) diag << "subject " << f.subject_id << " failed: " << f.message << "\n";
}

}  // namespace

int stage_pcorr_single(const std::filesystem::path& timeseries_csv,
                       const std::filesystem::path& out_file, double rank_tolerance,
                       std::ostream&) {
  TimeSeriesMatrix ts = load_timeseries(timeseries_csv, std::nullopt,
                                        timeseries_csv.stem().generic_string());
  PartialCorrelationMatrix rho = pcorr_from_timeseries(ts, rank_tolerance);
  if (out_file.has_parent_path()) std::filesystem::create_directories(out_file.parent_path());
  write_file(out_file, render_pcorr_file(rho, rank_tolerance));
  return 0;
}

int stage_pcorr_batch(const std::filesystem::path& manifest_path,
                      const std::filesystem::path& out_dir, double rank_tolerance,
                      std::ostream& diag) {
  CohortManifest manifest = load_manifest(manifest_path);
  std::filesystem::create_directories(out_dir);
  std::vector<SubjectFailure> failures;
  std::optional<std::vector<RoiLabel>> labels;
  for (const ManifestEntry& entry : manifest.entries) {
    try {
      TimeSeriesMatrix ts = load_timeseries(manifest.resolve(entry), labels, entry.subject_id);
      if (!labels) labels = ts.labels;
      PartialCorrelationMatrix rho = pcorr_from_timeseries(ts, rank_tolerance);
      write_file(out_dir / (entry.subject_id + ".csv"), render_pcorr_file(rho, rank_tolerance));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LabelMismatch)
        failures.push_back({entry.subject_id, "InconsistentRoiSet: " + e.detail()});
      else
        failures.push_back({entry.subject_id, e.what()});
    }
  }
  report_failures(failures, diag);
  return exit_code_for(failures.size(), manifest.entries.size());
}

int stage_communities(const std::filesystem::path& manifest_path,
                      const std::filesystem::path& pcorr_dir, const DetectionParams& params,
                      const std::filesystem::path& out_file,
                      const std::optional<std::filesystem::path>& graph_dump_dir,
                      std::ostream& diag) {
  CohortManifest manifest = load_manifest(manifest_path);
  std::vector<SubjectFailure> failures;
  std::optional<std::vector<RoiLabel>> labels;
  std::vector<SubjectAnalysis> analyses;
  if (graph_dump_dir) std::filesystem::create_directories(*graph_dump_dir);
  for (const ManifestEntry& entry : manifest.entries) {
    try {
      PartialCorrelationMatrix rho = parse_pcorr_file(pcorr_dir / (entry.subject_id + ".csv"));
      if (labels) {
        if (rho.labels != *labels)
          throw Error(ErrorCode::InconsistentRoiSet,
                      "ROI labels differ from the first subject's");
      } else {
        labels = rho.labels;
      }
      if (graph_dump_dir) {
        WeightedGraph g = build_weighted_graph(rho, params.edge);
        write_file(*graph_dump_dir / (entry.subject_id + "_edges.csv"), write_edge_list(g));
      }
      analyses.push_back(analyze_subject(entry.subject_id, rho, params));
    } catch (const Error& e) {
      failures.push_back({entry.subject_id, e.what()});
    }
  }
  report_failures(failures, diag);
  if (analyses.empty()) {
    diag << "fatal: no subject could be analyzed\n";
    return 2;
  }
  CommunityLogBuilder builder(*labels,
                              communities_config_string(params.edge, params.cpm_k,
                                                        params.eigen_variant,
                                                        params.node_order_seed));
  for (const SubjectAnalysis& a : analyses) builder.add_subject(a.subject_id, a.communities, a.record);
  if (out_file.has_parent_path()) std::filesystem::create_directories(out_file.parent_path());
  write_file(out_file, builder.finish());
  return exit_code_for(failures.size(), manifest.entries.size());
}

int stage_nss(const std::filesystem::path& manifest_path,
              const std::filesystem::path& communities_file, RankAggregation aggregation,
              const std::filesystem::path& out_dir, std::ostream& diag) {
  CohortManifest manifest = load_manifest(manifest_path);
  std::unordered_map<std::string, ClassLabel> classes;
  for (const ManifestEntry& entry : manifest.entries) classes.emplace(entry.subject_id, entry.label);

  CommunityLog log = parse_communities_log(communities_file);
  std::vector<SubjectDetectionRecord> healthy, impaired;
  for (const CommunityLogEntry& entry : log.entries) {
    auto it = classes.find(entry.subject_id);
    if (it == classes.end())
      throw Error(ErrorCode::MalformedManifest, communities_file.generic_string() + ": subject '" +
                                                    entry.subject_id + "' is not in the manifest");
    (it->second == ClassLabel::healthy ? healthy : impaired).push_back(entry.record);
  }
  if (healthy.empty() && impaired.empty()) {
    diag << "fatal: community log holds no subjects\n";
    return 2;
  }
  std::filesystem::create_directories(out_dir);
  if (healthy.empty() || impaired.empty())
    diag << "note: cohort '" << (healthy.empty() ? "healthy" : "impaired")
         << "' is empty; disparity is unavailable\n";
  if (!healthy.empty()) {
    NssTable table = nss_table(healthy, log.labels, "healthy", aggregation);
    write_file(out_dir / "nss_healthy.csv", render_nss_table(table, aggregation));
  }
  if (!impaired.empty()) {
    NssTable table = nss_table(impaired, log.labels, "impaired", aggregation);
    write_file(out_dir / "nss_impaired.csv", render_nss_table(table, aggregation));
  }
  return 0;
}

int stage_disparity(const std::filesystem::path& healthy_table,
                    const std::filesystem::path& impaired_table,
                    DisparityDenominator denominator, const std::filesystem::path& out_file,
                    std::ostream&) {
  NssTable healthy = parse_nss_table(healthy_table);
  NssTable impaired = parse_nss_table(impaired_table);
  DisparityReport report = disparity(healthy, impaired, denominator);
  if (out_file.has_parent_path()) std::filesystem::create_directories(out_file.parent_path());
  write_file(out_file, render_disparity_report(report, denominator));
  return 0;
}

int stage_report(const std::filesystem::path& disparity_file, int top_k,
                 std::optional<double> threshold, const std::filesystem::path& out_dir,
                 std::ostream&) {
  if (top_k < 1) throw Error(ErrorCode::InvalidSpec, "top_k must be at least 1");
  DisparityReport report = parse_disparity_report(disparity_file);
  TopKReport top = top_k_report(report, top_k, threshold);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "top_nodes.csv", render_top_nodes(top, report, top_k, threshold));
  write_file(out_dir / "nss_comparison.csv", render_nss_comparison(report, top_k, threshold));
  return 0;
}

// --- end-to-end run -------------------------------------------------------------

namespace {

void validate_run_config(const RunConfig& config) {
  if (config.cpm_k < 3) throw Error(ErrorCode::InvalidSpec, "cpm_k must be at least 3");
  if (config.workers < 0) throw Error(ErrorCode::InvalidSpec, "workers must be non-negative");
  if (config.edge.mode == EdgePolicy::Mode::threshold) {
    if (!(config.edge.tau >= 0.0 && config.edge.tau <= 1.0))
      throw Error(ErrorCode::InvalidSpec, "edge threshold must lie in [0, 1]");
  } else if (!(config.edge.density > 0.0 && config.edge.density <= 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "edge density must lie in (0, 1]");
  }
}

std::string render_run_metadata(const RunConfig& config, int roi_count, size_t healthy_ok,
                                size_t impaired_ok,
                                const std::vector<SubjectFailure>& failures) {
  std::string full_config = pcorr_config_string(config.rank_tolerance) + ";" +
                            communities_config_string(config.edge, config.cpm_k,
                                                      config.eigen_variant,
                                                      config.node_order_seed) +
                            ";" + nss_config_string(config.aggregation) + ";" +
                            disparity_config_string(config.denominator);
  std::string out = file_header(full_config);
  out += "key,value\n";
  auto kv = [&out](std::string_view key, std::string_view value) {
    out += key;
    out += ',';
    out += value;
    out += '\n';
  };
  kv("version", tool_version);
  kv("manifest", config.manifest_path.generic_string());
  kv("out_dir", config.out_dir.generic_string());
  kv("roi_count", std::to_string(roi_count));
  kv("subjects_healthy", std::to_string(healthy_ok));
  kv("subjects_impaired", std::to_string(impaired_ok));
  kv("subjects_failed", std::to_string(failures.size()));
  if (config.edge.mode == EdgePolicy::Mode::threshold) {
    kv("edge_mode", "threshold");
    kv("edge_threshold", format_double(config.edge.tau));
  } else {
    kv("edge_mode", "density");
    kv("edge_density", format_double(config.edge.density));
  }
  kv("cpm_k", std::to_string(config.cpm_k));
  kv("eigen_variant", eigen_variant_name(config.eigen_variant));
  kv("aggregation", rank_aggregation_name(config.aggregation));
  kv("denominator", disparity_denominator_name(config.denominator));
  kv("rank_tolerance",
     config.rank_tolerance < 0 ? std::string("auto") : format_double(config.rank_tolerance));
  kv("node_order_seed",
     config.node_order_seed ? std::to_string(*config.node_order_seed) : std::string("none"));
  kv("workers", config.workers == 0 ? std::string("auto") : std::to_string(config.workers));
  kv("strict", config.strict ? "true" : "false");
  for (const SubjectFailure& f : failures) kv("failed_subject", f.subject_id + ": " + f.message);
  return out;
}

}  // namespace

RunResult run_pipeline(const RunConfig& config, std::ostream& diag) {
  validate_run_config(config);
  CohortManifest manifest = load_manifest(config.manifest_path);
  const size_t n = manifest.entries.size();

  // Sequential load; the reference label list comes from the first subject
  // that loads cleanly.
  std::vector<std::optional<TimeSeriesMatrix>> loaded(n);
  std::vector<std::optional<std::string>> errors(n);
  std::vector<RoiLabel> labels;
  bool have_labels = false;
  for (size_t i = 0; i < n; ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      TimeSeriesMatrix ts = load_timeseries(
          manifest.resolve(entry),
          have_labels ? std::optional<std::vector<RoiLabel>>(labels) : std::nullopt,
          entry.subject_id);
      if (!have_labels) {
        labels = ts.labels;
        have_labels = true;
      }
      loaded[i] = std::move(ts);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LabelMismatch)
        errors[i] = "InconsistentRoiSet: " + e.detail();
      else
        errors[i] = e.what();
    }
  }

  // Parallel per-subject analysis. Results land in manifest-order slots, so
  // the reduction below is identical for any worker count.
  std::vector<std::optional<SubjectAnalysis>> analyses(n);
  {
    DetectionParams params{config.edge, config.cpm_k, config.eigen_variant,
                           config.node_order_seed};
    unsigned hw = std::thread::hardware_concurrency();
    size_t workers = config.workers > 0 ? static_cast<size_t>(config.workers)
                                        : static_cast<size_t>(hw ? hw : 1);
    workers = std::min(workers, std::max<size_t>(n, 1));
    std::atomic<size_t> next{0};
    auto work = [&]() {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        if (!loaded[i]) continue;
        try {
          PartialCorrelationMatrix rho =
              pcorr_from_timeseries(*loaded[i], config.rank_tolerance);
          analyses[i] = analyze_subject(manifest.entries[i].subject_id, rho, params);
        } catch (const Error& e) {
          errors[i] = e.what();
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
      for (std::thread& t : pool) t.join();
    }
  }

  RunResult result;
  for (size_t i = 0; i < n; ++i)
    if (errors[i]) result.failures.push_back({manifest.entries[i].subject_id, *errors[i]});
  report_failures(result.failures, diag);

  std::vector<SubjectDetectionRecord> healthy, impaired;
  for (size_t i = 0; i < n; ++i) {
    if (!analyses[i]) continue;
    (manifest.entries[i].label == ClassLabel::healthy ? healthy : impaired)
        .push_back(analyses[i]->record);
  }
  if (healthy.empty() || impaired.empty()) {
    diag << "fatal: cohort '" << (healthy.empty() ? "healthy" : "impaired")
         << "' has no analyzable subject\n";
    result.exit_code = 2;
    return result;
  }
  if (config.strict && !result.failures.empty()) {
    diag << "fatal: " << result.failures.size() << " subject(s) failed and strict mode is on\n";
    result.exit_code = 2;
    return result;
  }

  NssTable healthy_table = nss_table(healthy, labels, "healthy", config.aggregation);
  NssTable impaired_table = nss_table(impaired, labels, "impaired", config.aggregation);
  DisparityReport report = disparity(healthy_table, impaired_table, config.denominator);

  CommunityLogBuilder builder(labels,
                              communities_config_string(config.edge, config.cpm_k,
                                                        config.eigen_variant,
                                                        config.node_order_seed));
  for (size_t i = 0; i < n; ++i)
    if (analyses[i])
      builder.add_subject(analyses[i]->subject_id, analyses[i]->communities, analyses[i]->record);

  std::filesystem::create_directories(config.out_dir);
  write_file(config.out_dir / "communities.csv", builder.finish());
  write_file(config.out_dir / "nss_healthy.csv", render_nss_table(healthy_table, config.aggregation));
  write_file(config.out_dir / "nss_impaired.csv",
             render_nss_table(impaired_table, config.aggregation));
  write_file(config.out_dir / "disparity.csv", render_disparity_report(report, config.denominator));
  write_file(config.out_dir / "run_metadata.csv",
             render_run_metadata(config, static_cast<int>(labels.size()), healthy.size(),
                                 impaired.size(), result.failures));
  result.exit_code = result.failures.empty() ? 0 : 3;
  return result;
}

}  // namespace netsig
