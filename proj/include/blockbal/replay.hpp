#pragma once

#include "blockbal/config.hpp"
#include "blockbal/io.hpp"
#include "blockbal/scenario.hpp"

namespace blockbal {

struct ReplaySummary {
   double mean_load_imbalance = 0.0;
   double median_load_imbalance = 0.0;
   double makespan = 0.0;
   double mean_edge_cut = 0.0;
};

struct ReplayResult {
   ReportFile report;
   std::vector<TimingSampleRow> samples;  // filled when sample output is requested
   ReplaySummary summary;
};

ReplaySummary summarize_report(const ReportFile& report);

/// Runs the configured scenario, rebalancing and reporting at step 0, every
/// `interval` steps, and at the final step. All strategies start from the
/// Hilbert partition on uniform weights; strategy "none" never rebalances.
ReplayResult run_replay(const RunConfig& config);

}  // namespace blockbal
