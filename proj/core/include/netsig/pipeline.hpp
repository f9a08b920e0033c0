#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netsig/community.hpp"
#include "netsig/graph.hpp"
#include "netsig/ingest.hpp"
#include "netsig/nss.hpp"
#include "netsig/pcorr.hpp"

namespace netsig {

// Everything the end-to-end run needs. Defaults mirror the CLI defaults, so a
// default-constructed config plus a manifest path is a valid run.
struct RunConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path out_dir;
  EdgePolicy edge = EdgePolicy::by_density(0.3);
  int cpm_k = 3;
  EigenVariant eigen_variant = EigenVariant::modularity_matrix;
  RankAggregation aggregation = RankAggregation::mean;
  DisparityDenominator denominator = DisparityDenominator::healthy;
  // Negative means automatic (rank-scaled machine epsilon).
  double rank_tolerance = -1.0;
  // When set, Louvain visits nodes in a seeded shuffled order instead of
  // ascending index order.
  std::optional<std::uint64_t> node_order_seed;
  int workers = 0;  // 0 = one per hardware thread
  bool strict = false;
};

struct SubjectFailure {
  std::string subject_id;
  std::string message;
};

struct RunResult {
  int exit_code = 0;  // 0 clean, 2 fatal, 3 partial
  std::vector<SubjectFailure> failures;
};

// Canonical parameter strings; their FNV-1a hash is stamped into the matching
// output file so equal parameters always reproduce an identical header. Each
// file hashes only the parameters that influence its content.
std::string pcorr_config_string(double rank_tolerance);
std::string communities_config_string(const EdgePolicy& edge, int cpm_k,
                                      EigenVariant variant,
                                      std::optional<std::uint64_t> node_order_seed);
std::string nss_config_string(RankAggregation aggregation);
std::string disparity_config_string(DisparityDenominator denominator);
std::string report_config_string(int top_k, std::optional<double> threshold);

// "# netsig <version>\n# config <hash>\n" for the given parameter string.
std::string file_header(const std::string& config_string);

// --- serializers / parsers -------------------------------------------------
// Every render_* output starts with file_header. Parsers accept any comment
// lines but only interpret the ones they need; malformed content is reported
// as MalformedManifest (tabular shape) or MalformedMatrix (numeric cells) with
// file and 0-based data coordinates in the detail string.

std::string render_pcorr_file(const PartialCorrelationMatrix& matrix,
                              double rank_tolerance);
PartialCorrelationMatrix parse_pcorr_file(const std::filesystem::path& path);

// Detection log shared by the run and the stage path. One block of rows per
// subject in insertion order: for each method, every community as
// `subject,method,<index>,labels...` plus one `subject,method,largest,...`
// marker row naming the largest sub-community.
class CommunityLogBuilder {
 public:
  CommunityLogBuilder(const std::vector<RoiLabel>& labels,
                      const std::string& config_string);
  void add_subject(const std::string& subject_id,
                   const std::array<std::vector<std::vector<int>>, 4>& communities,
                   const SubjectDetectionRecord& record);
  std::string finish() const;

 private:
  std::vector<RoiLabel> labels_;
  std::string body_;
  std::string header_;
};

struct CommunityLogEntry {
  std::string subject_id;
  std::array<std::vector<std::vector<int>>, 4> communities;
  SubjectDetectionRecord record;
};

struct CommunityLog {
  std::vector<RoiLabel> labels;
  std::vector<CommunityLogEntry> entries;
};

CommunityLog parse_communities_log(const std::filesystem::path& path);

std::string render_nss_table(const NssTable& table, RankAggregation aggregation);
NssTable parse_nss_table(const std::filesystem::path& path);

std::string render_disparity_report(const DisparityReport& report,
                                    DisparityDenominator denominator);
DisparityReport parse_disparity_report(const std::filesystem::path& path);

std::string render_top_nodes(const TopKReport& top, const DisparityReport& report,
                             int top_k, std::optional<double> threshold);
std::string render_nss_comparison(const DisparityReport& report, int top_k,
                                  std::optional<double> threshold);

// --- per-subject analysis ----------------------------------------------------

struct DetectionParams {
  EdgePolicy edge = EdgePolicy::by_density(0.3);
  int cpm_k = 3;
  EigenVariant eigen_variant = EigenVariant::modularity_matrix;
  std::optional<std::uint64_t> node_order_seed;
};

struct SubjectAnalysis {
  std::string subject_id;
  std::array<std::vector<std::vector<int>>, 4> communities;
  SubjectDetectionRecord record;
};

// rho -> graph -> all four detection methods -> largest sub-communities.
// Throws EmptyGraph when no edge survives the policy.
SubjectAnalysis analyze_subject(const std::string& subject_id,
                                const PartialCorrelationMatrix& rho,
                                const DetectionParams& params);

// --- stage entry points ------------------------------------------------------
// Each writes its output files and reports per-subject problems to `diag`
// without aborting the whole stage. Returned exit code follows the run
// convention (0 clean, 2 fatal, 3 partial).

int stage_pcorr_single(const std::filesystem::path& timeseries_csv,
                       const std::filesystem::path& out_file,
                       double rank_tolerance, std::ostream& diag);

int stage_pcorr_batch(const std::filesystem::path& manifest_path,
                      const std::filesystem::path& out_dir,
                      double rank_tolerance, std::ostream& diag);

int stage_communities(const std::filesystem::path& manifest_path,
                      const std::filesystem::path& pcorr_dir,
                      const DetectionParams& params,
                      const std::filesystem::path& out_file,
                      const std::optional<std::filesystem::path>& graph_dump_dir,
                      std::ostream& diag);

int stage_nss(const std::filesystem::path& manifest_path,
              const std::filesystem::path& communities_file,
              RankAggregation aggregation,
              const std::filesystem::path& out_dir, std::ostream& diag);

int stage_disparity(const std::filesystem::path& healthy_table,
                    const std::filesystem::path& impaired_table,
                    DisparityDenominator denominator,
                    const std::filesystem::path& out_file, std::ostream& diag);

int stage_report(const std::filesystem::path& disparity_file, int top_k,
                 std::optional<double> threshold,
                 const std::filesystem::path& out_dir, std::ostream& diag);

// Full pipeline: ingest, per-subject analysis on a worker pool, NSS per class,
// disparity, report files. Identical parameters produce byte-identical
// outputs regardless of worker count.
RunResult run_pipeline(const RunConfig& config, std::ostream& diag);

}  // namespace netsig
