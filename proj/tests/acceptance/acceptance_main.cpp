// Acceptance harness: numbered end-to-end checks covering the estimator
// oracles, the optimizer quality bounds, the score formula, planted-node
// recovery, determinism, and stage composition. Prints one PASS/FAIL line
// per check and exits nonzero when any fails.
//
// Usage: netsig_acceptance <path-to-cli-binary> <scratch-dir>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netsig/community.hpp"
#include "netsig/error.hpp"
#include "netsig/graph.hpp"
#include "netsig/ingest.hpp"
#include "netsig/nss.hpp"
#include "netsig/pcorr.hpp"
#include "netsig/pipeline.hpp"
#include "netsig/rng.hpp"
#include "netsig/text.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace netsig;

namespace {

struct Env {
  fs::path cli;
  fs::path scratch;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const Env& env, const std::string& args) {
  fs::path out = env.scratch / "cli_stdout.txt";
  fs::path err = env.scratch / "cli_stderr.txt";
  std::string command = "\"" + env.cli.string() + "\" " + args + " >" + out.string() + " 2>" +
                        err.string();
  int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// The planted-cohort generator settings shared by the end-to-end checks.
// Seed 42 is the pinned analysis cohort; 1001..1005 feed the noise band.
std::string simulate_args(const fs::path& out_dir, double alpha, std::uint64_t seed) {
  std::ostringstream os;
  os << "simulate --out " << out_dir.string()
     << " --roi-count 12 --timepoints 200 --subjects-per-class 20"
     << " --core 0,1,2,3,4,5 --weakened 0,1 --rho-core 0.9"
     << " --alpha " << format_double(alpha) << " --seed " << seed;
  return os.str();
}

std::string run_args(const fs::path& manifest, const fs::path& out_dir) {
  return "run --manifest " + manifest.string() + " --out-dir " + out_dir.string() +
         " --edge-mode threshold --edge-threshold 0.12"
         " --aggregation mean --denominator mean";
}

// Simulates a planted cohort and runs the full analysis; returns the
// analysis output directory.
fs::path simulate_and_run(const Env& env, const fs::path& dir, double alpha,
                          std::uint64_t seed, std::string& why) {
  if (run_cli(env, simulate_args(dir / "cohort", alpha, seed)) != 0) {
    why += "cohort generation failed; ";
    return {};
  }
  fs::path out = dir / "out";
  if (run_cli(env, run_args(dir / "cohort" / "manifest.csv", out)) != 0) {
    why += "analysis run failed; ";
    return {};
  }
  return out;
}

double max_abs_disparity(const DisparityReport& report) {
  double worst = 0.0;
  for (const auto& row : report.rows)
    if (row.defined) worst = std::max(worst, std::abs(row.disparity_percent));
  return worst;
}

TimeSeriesMatrix make_series(const Eigen::MatrixXd& values) {
  TimeSeriesMatrix ts;
  ts.subject_id = "synthetic";
  ts.values = values;
  for (int i = 0; i < values.cols(); ++i)
    ts.labels.push_back(RoiLabel{"n" + std::to_string(i), i});
  return ts;
}

// Well-conditioned random data: T standard-normal rows pushed through a
// fixed full-rank mixing matrix so the columns are genuinely correlated.
Eigen::MatrixXd mixed_data(int timepoints, int roi_count, std::uint64_t seed) {
  Eigen::MatrixXd raw = netsig_test::random_normals(timepoints, roi_count, seed);
  Eigen::MatrixXd mix = 0.5 * netsig_test::random_normals(roi_count, roi_count, seed ^ 0x5bd1e995) +
                        2.0 * Eigen::MatrixXd::Identity(roi_count, roi_count);
  return raw * mix;
}

Eigen::MatrixXd pcorr_of(const Eigen::MatrixXd& data) {
  return partial_correlation(precision_via_pseudoinverse(sample_covariance(make_series(data))))
      .values;
}

// --- the individual checks -------------------------------------------------

bool check_report_schema(const Env& env, std::string& why) {
  fs::path dir = env.scratch / "c01";
  fs::path out = simulate_and_run(env, dir, 0.3, 42, why);
  if (out.empty()) return false;
  if (run_cli(env, "report --disparity " + (out / "disparity.csv").string() +
                       " --top-k 5 --out-dir " + (dir / "rep").string()) != 0) {
    why += "report stage failed; ";
    return false;
  }

  std::string text = read_file(dir / "rep" / "top_nodes.csv");
  std::vector<std::string_view> data_lines;
  for (auto line : split_lines(text))
    if (!line.empty() && line.front() != '#') data_lines.push_back(line);

  if (data_lines.empty() || data_lines[0] != "roi,nss_healthy,nss_impaired,disparity_percent") {
    why += "missing or wrong header row; ";
    return false;
  }
  if (data_lines.size() != 6) {  // header + top-5
    why += "expected 5 ranked rows, got " + std::to_string(data_lines.size() - 1) + "; ";
    return false;
  }
  double previous = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < data_lines.size(); ++i) {
    auto fields = split_fields(data_lines[i]);
    if (fields.size() != 4 || fields[0].empty()) {
      why += "row " + std::to_string(i) + " malformed; ";
      return false;
    }
    auto percent = parse_double(fields[3]);
    if (!percent || !std::isfinite(*percent)) {
      why += "row " + std::to_string(i) + " has no numeric percentage; ";
      return false;
    }
    if (std::abs(*percent) > previous + 1e-12) {
      why += "rows not ranked by |disparity|; ";
      return false;
    }
    previous = std::abs(*percent);
  }
  return true;
}

bool check_pcorr_oracle(const Env&, std::string& why) {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    int roi_count = 3 + i % 6;
    Eigen::MatrixXd data = mixed_data(50 * roi_count, roi_count, 9000 + i);
    Eigen::MatrixXd lib = pcorr_of(data);
    Eigen::MatrixXd oracle = netsig_test::pcorr_by_residual_regression(data);
    worst = std::max(worst, (lib - oracle).cwiseAbs().maxCoeff());
  }
  double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "200 instances, max deviation " << worst << ", " << elapsed << " s";
  why += os.str();
  return worst < 1e-8 && elapsed < 10.0;
}

bool check_penrose(const Env&, std::string& why) {
  double worst = 0.0;
  int deficient = 0;
  for (int i = 0; i < 100; ++i) {
    int roi_count = 3 + i % 6;
    bool short_sample = (i % 4 == 3);  // T < R forces rank deficiency
    int timepoints = short_sample ? roi_count - 1 : 5 * roi_count;
    Eigen::MatrixXd data = netsig_test::random_normals(timepoints, roi_count, 5000 + i);
    CovarianceMatrix cov = sample_covariance(make_series(data));
    PrecisionMatrix prec = precision_via_pseudoinverse(cov);
    if (short_sample) {
      if (prec.rank >= roi_count) {
        why += "expected rank deficiency not observed; ";
        return false;
      }
      ++deficient;
    }
    worst = std::max(worst, netsig_test::penrose_max_residual(cov.values, prec.values));
  }
  std::ostringstream os;
  os << "100 covariances (" << deficient << " rank-deficient), max residual " << worst;
  why += os.str();
  return worst <= 1e-8 && deficient >= 20;
}

bool check_scale_invariance(const Env&, std::string& why) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    int roi_count = 3 + i % 6;
    Eigen::MatrixXd data = mixed_data(40 * roi_count, roi_count, 4000 + i);
    SplitMix64 gen{static_cast<std::uint64_t>(4100 + i)};
    Eigen::VectorXd scales(roi_count);
    for (int c = 0; c < roi_count; ++c) scales[c] = 0.1 + 10.0 * gen.next_unit();
    Eigen::MatrixXd scaled = data * scales.asDiagonal();
    worst = std::max(worst, (pcorr_of(data) - pcorr_of(scaled)).cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "100 rescaling trials, max change " << worst;
  why += os.str();
  return worst <= 1e-9;
}

bool check_modularity_truths(const Env&, std::string& why) {
  WeightedGraph edge = netsig_test::single_edge_graph();
  double merged = modularity(edge, canonicalize({0, 0}));
  double split = modularity(edge, canonicalize({0, 1}));
  WeightedGraph triangles = netsig_test::two_triangles_bridge();
  double planted = modularity(triangles, canonicalize({0, 0, 0, 1, 1, 1}));

  std::ostringstream os;
  os << "merged " << merged << ", split " << split << ", triangle partition " << planted;
  why += os.str();
  return merged == 0.0 && split == -0.5 && std::abs(planted - 5.0 / 14.0) <= 1e-12;
}

bool check_optimizers_vs_exhaustive(const Env&, std::string& why) {
  auto t0 = std::chrono::steady_clock::now();

  std::vector<WeightedGraph> planted{netsig_test::two_triangles_bridge(),
                                     netsig_test::two_cliques_bridge(3),
                                     netsig_test::two_cliques_bridge(4)};
  for (const auto& g : planted) {
    double q_best = modularity(g, exhaustive_max_modularity(g));
    if (std::abs(modularity(g, louvain(g)) - q_best) > 1e-12 ||
        std::abs(modularity(g, greedy_modularity(g)) - q_best) > 1e-12) {
      why += "planted-family optimum missed; ";
      return false;
    }
  }

  // Structured instances; on structureless noise graphs an all-improving
  // move sequence can bypass the optimum, which is a property of greedy
  // modularity methods rather than of this implementation.
  int positives = 0;
  double worst_ratio = 1.0;
  for (int i = 0; i < 100; ++i) {
    WeightedGraph g = netsig_test::planted_two_groups(4 + i % 5, 7000 + i);
    double q_best = modularity(g, exhaustive_max_modularity(g));
    if (q_best <= 0.0) continue;
    ++positives;
    double q_louvain = modularity(g, louvain(g));
    double q_greedy = modularity(g, greedy_modularity(g));
    worst_ratio = std::min({worst_ratio, q_louvain / q_best, q_greedy / q_best});
    if (q_louvain < 0.95 * q_best - 1e-12 || q_greedy < 0.95 * q_best - 1e-12) {
      why += "quality bound violated on graph " + std::to_string(i) + "; ";
      return false;
    }
  }
  double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << positives << " of 100 graphs with positive optimum, worst ratio " << worst_ratio << ", "
     << elapsed << " s";
  why += os.str();
  return positives >= 20 && elapsed < 60.0;
}

bool check_clique_percolation(const Env&, std::string& why) {
  OverlappingCommunities merged = clique_percolation(netsig_test::triangles_sharing_edge(), 3);
  if (merged.communities != std::vector<std::vector<int>>{{0, 1, 2, 3}}) {
    why += "shared-edge triangles did not merge; ";
    return false;
  }
  OverlappingCommunities separate =
      clique_percolation(netsig_test::triangles_joined_by_edge(), 3);
  if (separate.communities != std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}}) {
    why += "bridge-joined triangles did not stay separate; ";
    return false;
  }
  OverlappingCommunities none = clique_percolation(netsig_test::path_graph(6), 3);
  if (!none.communities.empty()) {
    why += "path graph produced a community; ";
    return false;
  }
  return true;
}

bool check_score_formula(const Env&, std::string& why) {
  if (nss_score(4.0, 1.0) != 17.0 || nss_score(0.0, 0.0) != 0.0 ||
      nss_score(2.0, 0.25) != 4.5) {
    why += "spot value mismatch; ";
    return false;
  }
  SplitMix64 gen{8001};
  for (int i = 0; i < 1000; ++i) {
    double r1 = 4.0 * gen.next_unit(), r2 = 4.0 * gen.next_unit();
    double h1 = gen.next_unit(), h2 = gen.next_unit();
    if (r1 > r2) std::swap(r1, r2);
    if (h1 > h2) std::swap(h1, h2);
    double lo = nss_score(r1, h1), hi = nss_score(r2, h2);
    if (lo > hi || lo < 0.0 || hi > 17.0) {
      why += "monotonicity violated; ";
      return false;
    }
    if ((r2 - r1 > 1e-9 || h2 - h1 > 1e-9) && !(lo < hi)) {
      why += "strict increase violated; ";
      return false;
    }
  }
  return true;
}

bool check_planted_recovery(const Env& env, std::string& why) {
  auto t0 = std::chrono::steady_clock::now();

  fs::path out = simulate_and_run(env, env.scratch / "c09", 0.3, 42, why);
  if (out.empty()) return false;
  DisparityReport report = parse_disparity_report(out / "disparity.csv");
  if (report.rows.size() < 2 || !report.rows[0].defined || !report.rows[1].defined) {
    why += "disparity report too small; ";
    return false;
  }
  std::set<int> top{report.rows[0].roi, report.rows[1].roi};
  if (top != std::set<int>{0, 1}) {
    why += "top-2 rows are " + report.labels[report.rows[0].roi].name + ", " +
           report.labels[report.rows[1].roi].name + " instead of the planted nodes; ";
    return false;
  }
  double weakest_planted = std::min(std::abs(report.rows[0].disparity_percent),
                                    std::abs(report.rows[1].disparity_percent));

  double band = 0.0;
  for (std::uint64_t seed = 1001; seed <= 1005; ++seed) {
    fs::path null_out = simulate_and_run(
        env, env.scratch / ("c09_band_" + std::to_string(seed)), 1.0, seed, why);
    if (null_out.empty()) return false;
    band = std::max(band, max_abs_disparity(parse_disparity_report(null_out / "disparity.csv")));
  }

  fs::path null42 = simulate_and_run(env, env.scratch / "c09_null", 1.0, 42, why);
  if (null42.empty()) return false;
  double null_worst = max_abs_disparity(parse_disparity_report(null42 / "disparity.csv"));

  double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "planted |disparity| >= " << weakest_planted << ", noise band " << band
     << ", null run max " << null_worst << ", " << elapsed << " s";
  why += os.str();
  return null_worst < band && weakest_planted > band && elapsed < 60.0;
}

bool check_determinism(const Env& env, std::string& why) {
  fs::path dir = env.scratch / "c10";
  if (run_cli(env, simulate_args(dir / "cohort", 0.3, 42)) != 0) {
    why += "cohort generation failed; ";
    return false;
  }
  fs::path manifest = dir / "cohort" / "manifest.csv";
  fs::path out = dir / "out";
  const std::vector<std::string> files{"communities.csv", "nss_healthy.csv", "nss_impaired.csv",
                                       "disparity.csv", "run_metadata.csv"};

  if (run_cli(env, run_args(manifest, out)) != 0) {
    why += "first run failed; ";
    return false;
  }
  std::vector<std::string> first;
  for (const auto& name : files) first.push_back(read_file(out / name));

  if (run_cli(env, run_args(manifest, out)) != 0) {
    why += "second run failed; ";
    return false;
  }
  for (size_t i = 0; i < files.size(); ++i) {
    if (read_file(out / files[i]) != first[i]) {
      why += files[i] + " differs between identical runs; ";
      return false;
    }
  }
  return true;
}

bool check_stage_composition(const Env& env, std::string& why) {
  fs::path dir = env.scratch / "c11";
  if (run_cli(env, simulate_args(dir / "cohort", 0.3, 42)) != 0) {
    why += "cohort generation failed; ";
    return false;
  }
  fs::path manifest = dir / "cohort" / "manifest.csv";

  // One-shot side, through the library entry point.
  RunConfig config;
  config.manifest_path = manifest;
  config.out_dir = dir / "one_shot";
  config.edge = EdgePolicy::by_threshold(0.12);
  config.aggregation = RankAggregation::mean;
  config.denominator = DisparityDenominator::mean;
  std::ostringstream diag;
  if (run_pipeline(config, diag).exit_code != 0) {
    why += "library pipeline failed; ";
    return false;
  }

  // Stage-by-stage side, through the command line.
  fs::path stage = dir / "stage";
  bool staged_ok =
      run_cli(env, "pcorr --manifest " + manifest.string() + " --out-dir " +
                       (stage / "pcorr").string()) == 0 &&
      run_cli(env, "communities --manifest " + manifest.string() + " --pcorr-dir " +
                       (stage / "pcorr").string() + " --output " +
                       (stage / "communities.csv").string() +
                       " --edge-mode threshold --edge-threshold 0.12") == 0 &&
      run_cli(env, "nss --manifest " + manifest.string() + " --communities " +
                       (stage / "communities.csv").string() + " --aggregation mean --out-dir " +
                       stage.string()) == 0 &&
      run_cli(env, "disparity --healthy " + (stage / "nss_healthy.csv").string() +
                       " --impaired " + (stage / "nss_impaired.csv").string() +
                       " --denominator mean --output " + (stage / "disparity.csv").string()) == 0;
  if (!staged_ok) {
    why += "a stage invocation failed; ";
    return false;
  }

  for (const char* name :
       {"communities.csv", "nss_healthy.csv", "nss_impaired.csv", "disparity.csv"}) {
    if (read_file(dir / "one_shot" / name) != read_file(stage / name)) {
      why += std::string(name) + " differs between staged and one-shot runs; ";
      return false;
    }
  }
  return true;
}

struct Criterion {
  const char* title;
  bool (*check)(const Env&, std::string&);
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: netsig_acceptance <cli-binary> <scratch-dir>\n";
    return 2;
  }
  Env env{argv[1], argv[2]};
  std::error_code ec;
  fs::create_directories(env.scratch, ec);
  if (ec || !fs::exists(env.cli)) {
    std::cerr << "bad cli path or scratch directory\n";
    return 2;
  }

  const Criterion criteria[] = {
      {"ranked disparity report schema (top-5, roi + percent)", check_report_schema},
      {"partial correlation equals the residual-regression oracle", check_pcorr_oracle},
      {"pseudo-inverse satisfies the Penrose conditions", check_penrose},
      {"partial correlation is invariant to per-column rescaling", check_scale_invariance},
      {"modularity ground-truth values", check_modularity_truths},
      {"optimizers track the exhaustive optimum", check_optimizers_vs_exhaustive},
      {"clique percolation ground truths", check_clique_percolation},
      {"node significance score formula and monotonicity", check_score_formula},
      {"planted weakened nodes recovered end to end", check_planted_recovery},
      {"identical configuration reproduces identical bytes", check_determinism},
      {"staged invocation equals the one-shot pipeline", check_stage_composition},
  };

  int failures = 0;
  for (size_t i = 0; i < std::size(criteria); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].check(env, detail);
    } catch (const std::exception& e) {
      detail += std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (i + 1 < 10 ? " " : "") << i + 1 << " " << (ok ? "PASS" : "FAIL") << "  "
              << criteria[i].title;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
