#include "blockbal/replay.hpp"

#include <algorithm>

#include "blockbal/distribution.hpp"
#include "blockbal/metrics.hpp"

namespace blockbal {

ReplaySummary summarize_report(const ReportFile& report) {
   ReplaySummary summary;
   if (report.rows.empty())
      return summary;
   std::vector<double> imbalances;
   imbalances.reserve(report.rows.size());
   double cut_sum = 0.0;
   for (const IntervalReport& r : report.rows) {
      summary.mean_load_imbalance += r.load_imbalance;
      imbalances.push_back(r.load_imbalance);
      cut_sum += static_cast<double>(r.edge_cut);
   }
   summary.mean_load_imbalance /= static_cast<double>(report.rows.size());
   summary.median_load_imbalance = summary_stats(imbalances).median;
   summary.makespan = simulated_makespan(report.rows);
   summary.mean_edge_cut = cut_sum / static_cast<double>(report.rows.size());
   return summary;
}

ReplayResult run_replay(const RunConfig& config) {
   config.validate();

   ScenarioConfig scenario = config.block_size
                                ? make_preset(config.preset, config.scale, *config.block_size)
                                : make_preset(config.preset, config.scale);
   scenario.seed = config.seed;
   if (config.steps)
      scenario.duration = *config.steps;
   validate_config(scenario);

   const BlockGrid grid = build_grid(scenario.dims, scenario.block_size);
   if (config.processes > grid.block_count())
      throw ConfigError("run.processes exceeds the block count of the scenario grid");

   const EstimatorCoefficients coefficients =
      config.coefficient_source == "builtin-table"
         ? EstimatorCoefficients::builtin_profile()
         : read_coefficients_file(config.coefficient_file);

   const QuantityExtractor extractor(grid, scenario);
   ParticleScene scene = init_scene(scenario);

   // Static starting point shared by every strategy: curve partition over
   // uniform weights, i.e. plain block-count balancing.
   const WeightMap uniform(static_cast<std::size_t>(grid.block_count()), 1.0);
   Assignment assignment =
      sfc_partition(grid, uniform, config.processes, CurveKind::Hilbert);

   ReplayResult result;
   result.report.dims = grid.dims();
   result.report.block_size = grid.block_size();

   const bool keep_samples = !config.output_samples.empty();
   std::uint64_t sample_seed = config.samples_seed;

   std::int64_t step = 0;
   while (true) {
      const std::vector<BlockQuantities> quantities = extractor.extract(scene);
      WeightMap weights(quantities.size());
      for (std::size_t b = 0; b < quantities.size(); ++b)
         weights[b] = std::max(wl_total(quantities[b], coefficients), config.weight_floor);

      switch (config.strategy) {
         case Strategy::None:
            break;
         case Strategy::Morton:
            assignment = sfc_partition(grid, weights, config.processes, CurveKind::Morton);
            break;
         case Strategy::Hilbert:
            assignment = sfc_partition(grid, weights, config.processes, CurveKind::Hilbert);
            break;
         case Strategy::Diffusive:
            assignment =
               diffusive_balance(grid, weights, assignment, config.diffusive_max_iterations)
                  .assignment;
            break;
         case Strategy::Refine:
            assignment = refine_partition(grid, weights, assignment, config.refine_tolerance);
            break;
      }

      const std::vector<double> loads = process_loads(grid, assignment, weights);
      IntervalReport row;
      row.step = step;
      row.strategy = to_string(config.strategy);
      row.n_procs = config.processes;
      row.load_imbalance = load_imbalance(loads);
      row.edge_cut = edge_cut(grid, assignment, grid.block_size());
      row.max_load = *std::max_element(loads.begin(), loads.end());
      double total = 0.0;
      for (double l : loads)
         total += l;
      row.total_load = total;
      result.report.rows.push_back(row);

      if (keep_samples) {
         const auto samples =
            synthesize_timings(quantities, coefficients, config.samples_noise_sigma, sample_seed);
         sample_seed = sample_seed * 6364136223846793005ull + 1442695040888963407ull;
         for (std::size_t b = 0; b < samples.size(); ++b)
            result.samples.push_back(
               TimingSampleRow{static_cast<BlockId>(b), step, samples[b]});
      }

      if (step >= scenario.duration)
         break;
      const std::int64_t advance = std::min(config.interval, scenario.duration - step);
      scene = step_scene(scene, advance);
      step += advance;
   }

   result.summary = summarize_report(result.report);
   return result;
}

}  // namespace blockbal
