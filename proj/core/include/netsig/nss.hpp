#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netsig/community.hpp"

namespace netsig {

struct NodeRankVector {
  std::string subject_id;
  std::vector<int> ranks;  // per ROI, 0..4
};

enum class RankAggregation { mean, median, mode };

std::string_view rank_aggregation_name(RankAggregation a);
std::optional<RankAggregation> parse_rank_aggregation(std::string_view name);

// Per-ROI cohort summary. r_agg is the configured aggregate of per-subject
// ranks (mean by default); nss recomputes exactly as r_agg^2 + sqrt(h).
struct NssTable {
  std::string cohort_label;
  int subject_count = 0;
  std::vector<RoiLabel> labels;
  std::vector<double> h;      // in [0, 1]
  std::vector<double> r_agg;  // in [0, 4]
  std::vector<double> nss;    // in [0, 17]
};

// The score itself: r_agg^2 + sqrt(h). Monotone in both arguments; maps
// [0,4] x [0,1] onto [0,17]. nss_table uses exactly this function.
double nss_score(double r_agg, double h);

// rank[i] = number of methods whose largest sub-community contains ROI i.
NodeRankVector node_rank(const SubjectDetectionRecord& record, int roi_count);

// h[i] = fraction of subjects where ROI i lies in the union of the four
// largest sub-communities. Throws EmptyCohort on an empty record list.
std::vector<double> highest_occurrence(const std::vector<SubjectDetectionRecord>& records,
                                       int roi_count);

NssTable nss_table(const std::vector<SubjectDetectionRecord>& records,
                   const std::vector<RoiLabel>& labels, std::string cohort_label,
                   RankAggregation aggregation = RankAggregation::mean);

enum class DisparityDenominator { healthy, impaired, mean };

std::string_view disparity_denominator_name(DisparityDenominator d);
std::optional<DisparityDenominator> parse_disparity_denominator(std::string_view name);

struct DisparityRow {
  int roi = 0;
  double nss_healthy = 0.0;
  double nss_impaired = 0.0;
  double disparity_percent = 0.0;  // meaningful only when defined
  bool defined = false;
};

// Rows sorted by |disparity| descending (ties toward the smaller ROI
// index); rows whose denominator is not positive are flagged undefined and
// listed last in ROI order.
struct DisparityReport {
  std::vector<RoiLabel> labels;
  std::vector<DisparityRow> rows;
};

// disparity = 100 * (N_healthy - N_impaired) / denom, with denom chosen by
// the denominator policy (healthy NSS by default). Throws LabelMismatch
// when the two tables disagree on ROI labels.
DisparityReport disparity(const NssTable& healthy, const NssTable& impaired,
                          DisparityDenominator denominator = DisparityDenominator::healthy);

struct TopKReport {
  std::vector<DisparityRow> rows;  // top k by |disparity|, defined rows only
  std::optional<int> count_over_threshold;
};

TopKReport top_k_report(const DisparityReport& report, int k,
                        std::optional<double> threshold_percent = std::nullopt);

}  // namespace netsig
