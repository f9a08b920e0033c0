#include "netsig/nss.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "netsig/error.hpp"

namespace netsig {

std::string_view rank_aggregation_name(RankAggregation a) {
  switch (a) {
    case RankAggregation::mean: return "mean";
    case RankAggregation::median: return "median";
    case RankAggregation::mode: return "mode";
  }
  return "?";
}

std::optional<RankAggregation> parse_rank_aggregation(std::string_view name) {
  if (name == "mean") return RankAggregation::mean;
  if (name == "median") return RankAggregation::median;
  if (name == "mode") return RankAggregation::mode;
  return std::nullopt;
}

std::string_view disparity_denominator_name(DisparityDenominator d) {
  switch (d) {
    case DisparityDenominator::healthy: return "healthy";
    case DisparityDenominator::impaired: return "impaired";
    case DisparityDenominator::mean: return "mean";
  }
  return "?";
}

std::optional<DisparityDenominator> parse_disparity_denominator(std::string_view name) {
  if (name == "healthy") return DisparityDenominator::healthy;
  if (name == "impaired") return DisparityDenominator::impaired;
  if (name == "mean") return DisparityDenominator::mean;
  return std::nullopt;
}

NodeRankVector node_rank(const SubjectDetectionRecord& record, int roi_count) {
  NodeRankVector out;
  out.subject_id = record.subject_id;
  out.ranks.assign(static_cast<size_t>(roi_count), 0);
  for (const auto& members : record.largest) {
    for (int v : members) out.ranks[static_cast<size_t>(v)] += 1;
  }
  return out;
}

std::vector<double> highest_occurrence(const std::vector<SubjectDetectionRecord>& records,
                                       int roi_count) {
  if (records.empty()) throw Error(ErrorCode::EmptyCohort, "no subject records");
  std::vector<int> hits(static_cast<size_t>(roi_count), 0);
  for (const auto& record : records) {
    std::vector<char> seen(static_cast<size_t>(roi_count), 0);
    for (const auto& members : record.largest) {
      for (int v : members) seen[static_cast<size_t>(v)] = 1;
    }
    for (int i = 0; i < roi_count; ++i) hits[static_cast<size_t>(i)] += seen[static_cast<size_t>(i)];
  }
  std::vector<double> h(static_cast<size_t>(roi_count));
  for (int i = 0; i < roi_count; ++i) {
    h[static_cast<size_t>(i)] = static_cast<double>(hits[static_cast<size_t>(i)]) /
                                static_cast<double>(records.size());
  }
  return h;
}

namespace {

double aggregate_ranks(std::vector<int>& ranks, RankAggregation aggregation) {
  const auto n = ranks.size();
  switch (aggregation) {
    case RankAggregation::mean: {
      long sum = 0;
      for (int r : ranks) sum += r;
      return static_cast<double>(sum) / static_cast<double>(n);
    }
    case RankAggregation::median: {
      std::sort(ranks.begin(), ranks.end());
      if (n % 2 == 1) return ranks[n / 2];
      return (static_cast<double>(ranks[n / 2 - 1]) + static_cast<double>(ranks[n / 2])) / 2.0;
    }
    case RankAggregation::mode: {
      std::array<int, 5> freq{};
      for (int r : ranks) ++freq[static_cast<size_t>(r)];
      // Smallest rank wins frequency ties.
      int best = 0;
      for (int r = 1; r <= 4; ++r) {
        if (freq[static_cast<size_t>(r)] > freq[static_cast<size_t>(best)]) best = r;
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace

double nss_score(double r_agg, double h) { return r_agg * r_agg + std::sqrt(h); }

NssTable nss_table(const std::vector<SubjectDetectionRecord>& records,
                   const std::vector<RoiLabel>& labels, std::string cohort_label,
                   RankAggregation aggregation) {
  if (records.empty()) throw Error(ErrorCode::EmptyCohort, "cohort \"" + cohort_label + "\"");
  const int R = static_cast<int>(labels.size());

  NssTable table;
  table.cohort_label = std::move(cohort_label);
  table.subject_count = static_cast<int>(records.size());
  table.labels = labels;
  table.h = highest_occurrence(records, R);
  table.r_agg.resize(static_cast<size_t>(R));
  table.nss.resize(static_cast<size_t>(R));

  std::vector<std::vector<int>> per_roi(static_cast<size_t>(R));
  for (auto& v : per_roi) v.reserve(records.size());
  for (const auto& record : records) {
    NodeRankVector ranks = node_rank(record, R);
    for (int i = 0; i < R; ++i) {
      per_roi[static_cast<size_t>(i)].push_back(ranks.ranks[static_cast<size_t>(i)]);
    }
  }
  for (int i = 0; i < R; ++i) {
    double r = aggregate_ranks(per_roi[static_cast<size_t>(i)], aggregation);
    table.r_agg[static_cast<size_t>(i)] = r;
    table.nss[static_cast<size_t>(i)] = nss_score(r, table.h[static_cast<size_t>(i)]);
  }
  return table;
}

DisparityReport disparity(const NssTable& healthy, const NssTable& impaired,
                          DisparityDenominator denominator) {
  if (healthy.labels.size() != impaired.labels.size()) {
    throw Error(ErrorCode::LabelMismatch, "cohort tables have different ROI counts");
  }
  for (size_t i = 0; i < healthy.labels.size(); ++i) {
    if (!(healthy.labels[i] == impaired.labels[i])) {
      throw Error(ErrorCode::LabelMismatch, "position " + std::to_string(i));
    }
  }

  DisparityReport report;
  report.labels = healthy.labels;
  const int R = static_cast<int>(healthy.labels.size());
  for (int i = 0; i < R; ++i) {
    DisparityRow row;
    row.roi = i;
    row.nss_healthy = healthy.nss[static_cast<size_t>(i)];
    row.nss_impaired = impaired.nss[static_cast<size_t>(i)];
    double denom = 0.0;
    switch (denominator) {
      case DisparityDenominator::healthy: denom = row.nss_healthy; break;
      case DisparityDenominator::impaired: denom = row.nss_impaired; break;
      case DisparityDenominator::mean: denom = (row.nss_healthy + row.nss_impaired) / 2.0; break;
    }
    if (denom > 0.0) {
      row.defined = true;
      row.disparity_percent = 100.0 * (row.nss_healthy - row.nss_impaired) / denom;
    }
    report.rows.push_back(row);
  }

  std::sort(report.rows.begin(), report.rows.end(), [](const DisparityRow& a, const DisparityRow& b) {
    if (a.defined != b.defined) return a.defined;  // undefined rows last
    if (!a.defined) return a.roi < b.roi;
    double da = std::abs(a.disparity_percent);
    double db = std::abs(b.disparity_percent);
    if (da != db) return da > db;
    return a.roi < b.roi;
  });
  return report;
}

TopKReport top_k_report(const DisparityReport& report, int k,
                        std::optional<double> threshold_percent) {
  TopKReport out;
  for (const auto& row : report.rows) {
    if (!row.defined) break;
    if (static_cast<int>(out.rows.size()) < k) out.rows.push_back(row);
  }
  if (threshold_percent) {
    int count = 0;
    for (const auto& row : report.rows) {
      if (row.defined && std::abs(row.disparity_percent) > *threshold_percent) ++count;
    }
    out.count_over_threshold = count;
  }
  return out;
}

}  // namespace netsig
