#include <CLI11.hpp>
#include <string>
#include <vector>

#include "blockbal/commands.hpp"

int main(int argc, char** argv) {
   CLI::App app{"Block workload estimation and dynamic load distribution toolkit"};
   app.require_subcommand(1);

   // calibrate
   std::string samples_csv, coefficients_out;
   auto* calibrate = app.add_subcommand(
      "calibrate", "Fit workload coefficients to a timing-sample CSV");
   calibrate->add_option("samples", samples_csv, "timing sample CSV")->required();
   calibrate->add_option("output", coefficients_out, "coefficients output file")->required();

   // replay
   std::string config_path;
   blockbal::ReplayOverrides overrides;
   std::uint64_t seed_override = 0;
   std::int64_t steps_override = 0, interval_override = 0;
   std::string strategy_override;
   auto* replay = app.add_subcommand(
      "replay", "Run a scenario with periodic load balancing and write a report CSV");
   replay->add_option("config", config_path, "run configuration file")->required();
   auto* seed_opt = replay->add_option("--seed", seed_override, "override scenario.seed");
   auto* steps_opt = replay->add_option("--steps", steps_override, "override scenario.steps");
   auto* strategy_opt =
      replay->add_option("--strategy", strategy_override,
                         "override run.strategy (none|morton|hilbert|diffusive|refine)");
   auto* interval_opt = replay->add_option("--interval", interval_override, "override run.interval");

   // partition
   std::string weights_csv, assignment_out = "assignment.csv", strategy = "hilbert";
   std::vector<int> dims;
   int block_size = 32, n_procs = 1;
   auto* partition =
      app.add_subcommand("partition", "One-shot partitioning of a block weight CSV");
   partition->add_option("weights", weights_csv, "weights CSV (block_id,weight)")->required();
   partition->add_option("--dims", dims, "blocks per axis, e.g. --dims 4 4 5")
      ->expected(3)
      ->required();
   partition->add_option("--block-size", block_size, "cells per block axis")->required();
   partition->add_option("--procs", n_procs, "process count")->required();
   partition->add_option("--strategy", strategy, "none|morton|hilbert|diffusive|refine");
   partition->add_option("-o,--output", assignment_out, "assignment CSV output path");

   // report
   std::vector<std::string> report_paths;
   auto* report = app.add_subcommand("report", "Compare replay report CSVs");
   report->add_option("reports", report_paths, "report CSV files")->required();

   try {
      app.parse(argc, argv);
   } catch (const CLI::ParseError& e) {
      return app.exit(e) == 0 ? blockbal::kExitOk : blockbal::kExitUsage;
   }

   if (*calibrate)
      return blockbal::cmd_calibrate(samples_csv, coefficients_out);
   if (*replay) {
      if (*seed_opt)
         overrides.seed = seed_override;
      if (*steps_opt)
         overrides.steps = steps_override;
      if (*strategy_opt)
         overrides.strategy = strategy_override;
      if (*interval_opt)
         overrides.interval = interval_override;
      return blockbal::cmd_replay(config_path, overrides);
   }
   if (*partition)
      return blockbal::cmd_partition(weights_csv, {dims[0], dims[1], dims[2]}, block_size, n_procs,
                                     strategy, assignment_out);
   if (*report)
      return blockbal::cmd_report(report_paths);
   return blockbal::kExitUsage;
}
