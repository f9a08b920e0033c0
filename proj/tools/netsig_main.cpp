// Command-line front end: one subcommand per pipeline stage plus an
// end-to-end `run`. Exit codes: 0 success, 1 usage error, 2 data or
// configuration error, 3 partial success (some subjects failed).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netsig/error.hpp"
#include "netsig/pipeline.hpp"
#include "netsig/synth.hpp"
#include "netsig/version.hpp"

namespace {

netsig::EdgePolicy make_edge_policy(const std::string& mode, double tau, double density,
                                    bool tau_given, bool density_given) {
  if (mode == "threshold") {
    if (density_given)
      throw CLI::ValidationError("--edge-density", "not valid in threshold mode");
    if (!tau_given)
      throw CLI::ValidationError("--edge-threshold", "required in threshold mode");
    return netsig::EdgePolicy::by_threshold(tau);
  }
  if (tau_given)
    throw CLI::ValidationError("--edge-threshold", "not valid in density mode");
  return netsig::EdgePolicy::by_density(density);
}

netsig::EigenVariant eigen_variant_of(const std::string& name) {
  return *netsig::parse_eigen_variant(name);
}

netsig::RankAggregation aggregation_of(const std::string& name) {
  return *netsig::parse_rank_aggregation(name);
}

netsig::DisparityDenominator denominator_of(const std::string& name) {
  return *netsig::parse_disparity_denominator(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohort connectivity pipeline: partial-correlation graphs, community "
               "detection, node significance scores, cross-cohort disparity"};
  app.set_version_flag("--version",
                       std::string(netsig::tool_name) + " " + std::string(netsig::tool_version));
  app.require_subcommand(1);

  const std::vector<std::string> edge_modes{"threshold", "density"};
  const std::vector<std::string> variants{"modularity_matrix", "laplacian_fiedler"};
  const std::vector<std::string> aggregations{"mean", "median", "mode"};
  const std::vector<std::string> denominators{"healthy", "impaired", "mean"};

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic two-class cohort");
  netsig::SynthSpec spec;
  spec.core = {0, 1, 2, 3, 4, 5};
  spec.weakened = {0, 1};
  std::string sim_out;
  sim->add_option("--out", sim_out, "Output directory for manifest.csv and time series")
      ->required();
  sim->add_option("--roi-count", spec.roi_count, "Number of ROIs")->capture_default_str();
  sim->add_option("--timepoints", spec.timepoints, "Timepoints per subject")
      ->capture_default_str();
  sim->add_option("--subjects-per-class", spec.subjects_per_class, "Subjects in each class")
      ->capture_default_str();
  sim->add_option("--core", spec.core, "Strongly coupled node indices (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--weakened", spec.weakened,
                  "Core nodes attenuated in the impaired class (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--rho-core", spec.rho_core, "Pairwise covariance inside the core")
      ->capture_default_str();
  sim->add_option("--alpha", spec.alpha,
                  "Attenuation factor for weakened nodes, in [0, 1]; 1 leaves the classes "
                  "statistically identical (null model)")
      ->capture_default_str();
  sim->add_option("--seed", spec.seed, "Base RNG seed")->capture_default_str();

  // pcorr
  auto* pc = app.add_subcommand("pcorr", "Partial-correlation matrices from time series");
  std::string pc_input, pc_output, pc_manifest, pc_out_dir;
  double rank_tolerance = -1.0;
  auto* pc_in_opt = pc->add_option("--input", pc_input, "One time-series CSV");
  auto* pc_out_opt = pc->add_option("--output", pc_output, "Output matrix CSV for --input");
  auto* pc_man_opt = pc->add_option("--manifest", pc_manifest, "Cohort manifest (batch mode)");
  auto* pc_dir_opt =
      pc->add_option("--out-dir", pc_out_dir, "Output directory for batch matrices");
  pc->add_option("--rank-tolerance", rank_tolerance,
                 "Relative eigenvalue cutoff for the pseudo-inverse; negative selects the "
                 "rank-scaled machine-epsilon default")
      ->capture_default_str();
  pc_in_opt->excludes(pc_man_opt)->excludes(pc_dir_opt)->needs(pc_out_opt);
  pc_out_opt->needs(pc_in_opt);
  pc_man_opt->needs(pc_dir_opt);
  pc_dir_opt->needs(pc_man_opt);

  // communities
  auto* com = app.add_subcommand("communities",
                                 "Graph construction and community detection per subject");
  std::string com_manifest, com_pcorr_dir, com_output, com_graph_dump;
  std::string com_edge_mode = "density";
  double com_tau = 0.0, com_density = 0.3;
  int cpm_k = 3;
  std::string com_variant = "modularity_matrix";
  std::uint64_t com_seed = 0;
  com->add_option("--manifest", com_manifest, "Cohort manifest")->required();
  com->add_option("--pcorr-dir", com_pcorr_dir, "Directory of per-subject matrices")->required();
  com->add_option("--output", com_output, "Community log CSV")->required();
  com->add_option("--edge-mode", com_edge_mode, "Edge selection policy")
      ->check(CLI::IsMember(edge_modes))
      ->capture_default_str();
  auto* com_tau_opt =
      com->add_option("--edge-threshold", com_tau, "Minimum |rho| kept (threshold mode)");
  auto* com_density_opt = com->add_option("--edge-density", com_density,
                                          "Fraction of strongest pairs kept (density mode)")
                              ->capture_default_str();
  com->add_option("--cpm-k", cpm_k, "Clique size for percolation")->capture_default_str();
  com->add_option("--eigen-variant", com_variant, "Spectral bisection variant")
      ->check(CLI::IsMember(variants))
      ->capture_default_str();
  auto* com_seed_opt =
      com->add_option("--seed", com_seed, "Shuffles the Louvain node visit order");
  auto* com_dump_opt =
      com->add_option("--graph-dump", com_graph_dump, "Also write per-subject edge lists here");

  // nss
  auto* nss = app.add_subcommand("nss", "Per-cohort node significance tables");
  std::string nss_manifest, nss_communities, nss_out_dir;
  std::string nss_aggregation = "mean";
  nss->add_option("--manifest", nss_manifest, "Cohort manifest (for class labels)")->required();
  nss->add_option("--communities", nss_communities, "Community log from `communities`")
      ->required();
  nss->add_option("--aggregation", nss_aggregation, "Rank aggregation across subjects")
      ->check(CLI::IsMember(aggregations))
      ->capture_default_str();
  nss->add_option("--out-dir", nss_out_dir, "Directory for nss_healthy.csv / nss_impaired.csv")
      ->required();

  // disparity
  auto* dis = app.add_subcommand("disparity", "Cross-cohort disparity ranking");
  std::string dis_healthy, dis_impaired, dis_output;
  std::string dis_denominator = "healthy";
  dis->add_option("--healthy", dis_healthy, "Healthy NSS table")->required();
  dis->add_option("--impaired", dis_impaired, "Impaired NSS table")->required();
  dis->add_option("--denominator", dis_denominator, "Denominator of the percentage")
      ->check(CLI::IsMember(denominators))
      ->capture_default_str();
  dis->add_option("--output", dis_output, "Disparity report CSV")->required();

  // report
  auto* rep = app.add_subcommand("report", "Top-node selection and plot-ready comparison");
  std::string rep_disparity, rep_out_dir;
  int top_k = 5;
  double rep_threshold = 0.0;
  rep->add_option("--disparity", rep_disparity, "Disparity report CSV")->required();
  rep->add_option("--top-k", top_k, "Rows in top_nodes.csv")->capture_default_str();
  auto* rep_thr_opt = rep->add_option("--threshold", rep_threshold,
                                      "Also count ROIs with |disparity| above this percentage");
  rep->add_option("--out-dir", rep_out_dir, "Directory for the report files")->required();

  // run
  auto* run = app.add_subcommand("run", "End-to-end pipeline from a manifest");
  netsig::RunConfig config;
  std::string run_manifest, run_out_dir;
  std::string run_edge_mode = "density";
  double run_tau = 0.0, run_density = 0.3;
  std::string run_variant = "modularity_matrix";
  std::string run_aggregation = "mean";
  std::string run_denominator = "healthy";
  std::uint64_t run_seed = 0;
  run->add_option("--manifest", run_manifest, "Cohort manifest")->required();
  run->add_option("--out-dir", run_out_dir, "Output directory")->required();
  run->add_option("--edge-mode", run_edge_mode, "Edge selection policy")
      ->check(CLI::IsMember(edge_modes))
      ->capture_default_str();
  auto* run_tau_opt =
      run->add_option("--edge-threshold", run_tau, "Minimum |rho| kept (threshold mode)");
  auto* run_density_opt = run->add_option("--edge-density", run_density,
                                          "Fraction of strongest pairs kept (density mode)")
                              ->capture_default_str();
  run->add_option("--cpm-k", config.cpm_k, "Clique size for percolation")->capture_default_str();
  run->add_option("--eigen-variant", run_variant, "Spectral bisection variant")
      ->check(CLI::IsMember(variants))
      ->capture_default_str();
  run->add_option("--aggregation", run_aggregation, "Rank aggregation across subjects")
      ->check(CLI::IsMember(aggregations))
      ->capture_default_str();
  run->add_option("--denominator", run_denominator, "Denominator of the disparity percentage")
      ->check(CLI::IsMember(denominators))
      ->capture_default_str();
  run->add_option("--rank-tolerance", config.rank_tolerance,
                  "Relative eigenvalue cutoff; negative selects the default")
      ->capture_default_str();
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Shuffles the Louvain node visit order");
  run->add_option("--workers", config.workers, "Analysis threads; 0 means one per hardware thread")
      ->capture_default_str();
  run->add_flag("--strict", config.strict, "Treat any per-subject failure as fatal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sim) {
      netsig::validate_spec(spec);
      std::filesystem::path manifest = netsig::write_cohort(spec, sim_out);
      std::cout << manifest.generic_string() << "\n";
      return 0;
    }
    if (*pc) {
      if (pc_in_opt->count() > 0)
        return netsig::stage_pcorr_single(pc_input, pc_output, rank_tolerance, std::cerr);
      if (pc_man_opt->count() > 0)
        return netsig::stage_pcorr_batch(pc_manifest, pc_out_dir, rank_tolerance, std::cerr);
      std::cerr << "error: pcorr needs either --input/--output or --manifest/--out-dir\n";
      return 1;
    }
    if (*com) {
      netsig::DetectionParams params;
      params.edge = make_edge_policy(com_edge_mode, com_tau, com_density,
                                     com_tau_opt->count() > 0, com_density_opt->count() > 0);
      if (cpm_k < 3) throw CLI::ValidationError("--cpm-k", "must be at least 3");
      params.cpm_k = cpm_k;
      params.eigen_variant = eigen_variant_of(com_variant);
      if (com_seed_opt->count() > 0) params.node_order_seed = com_seed;
      std::optional<std::filesystem::path> dump;
      if (com_dump_opt->count() > 0) dump = com_graph_dump;
      return netsig::stage_communities(com_manifest, com_pcorr_dir, params, com_output, dump,
                                       std::cerr);
    }
    if (*nss) {
      return netsig::stage_nss(nss_manifest, nss_communities, aggregation_of(nss_aggregation),
                               nss_out_dir, std::cerr);
    }
    if (*dis) {
      return netsig::stage_disparity(dis_healthy, dis_impaired, denominator_of(dis_denominator),
                                     dis_output, std::cerr);
    }
    if (*rep) {
      if (top_k < 1) throw CLI::ValidationError("--top-k", "must be at least 1");
      std::optional<double> threshold;
      if (rep_thr_opt->count() > 0) threshold = rep_threshold;
      return netsig::stage_report(rep_disparity, top_k, threshold, rep_out_dir, std::cerr);
    }
    if (*run) {
      config.manifest_path = run_manifest;
      config.out_dir = run_out_dir;
      config.edge = make_edge_policy(run_edge_mode, run_tau, run_density,
                                     run_tau_opt->count() > 0, run_density_opt->count() > 0);
      if (config.cpm_k < 3) throw CLI::ValidationError("--cpm-k", "must be at least 3");
      config.eigen_variant = eigen_variant_of(run_variant);
      config.aggregation = aggregation_of(run_aggregation);
      config.denominator = denominator_of(run_denominator);
      if (run_seed_opt->count() > 0) config.node_order_seed = run_seed;
      netsig::RunResult result = netsig::run_pipeline(config, std::cerr);
      if (result.exit_code == 0 || result.exit_code == 3)
        std::cerr << "wrote 5 files to " << config.out_dir.generic_string() << "\n";
      return result.exit_code;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const netsig::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == netsig::ErrorCode::InvalidSpec ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
