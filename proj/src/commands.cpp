#include "blockbal/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>

#include "blockbal/distribution.hpp"
#include "blockbal/io.hpp"
#include "blockbal/metrics.hpp"
#include "blockbal/replay.hpp"
#include "blockbal/scenario.hpp"

namespace blockbal {

namespace {

int report_failure(std::ostream& err, const std::exception& e, int code) {
   err << "error: " << e.what() << "\n";
   return code;
}

}  // namespace

int cmd_calibrate(const std::string& samples_csv_path, const std::string& output_path,
                  std::ostream& out, std::ostream& err) {
   try {
      const std::vector<TimingSampleRow> rows = read_timing_csv(samples_csv_path);
      std::vector<TimingSample> samples;
      samples.reserve(rows.size());
      for (const TimingSampleRow& r : rows)
         samples.push_back(r.sample);

      const EstimatorCoefficients coefficients = fit_coefficients(samples);
      const RelativeErrors errors = relative_errors(samples, coefficients);

      CalibrationStats stats;
      stats.lbm = summary_stats(errors.lbm);
      stats.bh = summary_stats(errors.bh);
      stats.coup1 = summary_stats(errors.coup1);
      stats.coup2 = summary_stats(errors.coup2);
      stats.rb = summary_stats(errors.rb);
      stats.total = summary_stats(errors.total);
      const auto within =
         std::count_if(errors.total.begin(), errors.total.end(),
                       [](double e) { return std::abs(e) < 0.10; });
      stats.fraction_within_10pct =
         static_cast<double>(within) / static_cast<double>(errors.total.size());

      write_coefficients_file(output_path, coefficients, &stats);

      out << "fitted " << samples.size() << " samples -> " << output_path << "\n";
      auto line = [&](const char* name, const SummaryStats& s) {
         char buf[128];
         std::snprintf(buf, sizeof(buf), "  %-6s median E = %+.4e  MAD = %.4e", name, s.median,
                       s.mad);
         out << buf << "\n";
      };
      line("lbm", stats.lbm);
      line("bh", stats.bh);
      line("coup1", stats.coup1);
      line("coup2", stats.coup2);
      line("rb", stats.rb);
      line("tot", stats.total);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "fraction of samples with |E_tot| < 0.10: %.1f%%",
                    100.0 * stats.fraction_within_10pct);
      out << buf << "\n";
      return kExitOk;
   } catch (const CsvError& e) {
      return report_failure(err, e, kExitData);
   } catch (const std::invalid_argument& e) {
      return report_failure(err, e, kExitData);
   }
}

int cmd_replay(const std::string& config_path, const ReplayOverrides& overrides, std::ostream& out,
               std::ostream& err) {
   try {
      RunConfig config = load_run_config(config_path);
      if (overrides.seed)
         config.seed = *overrides.seed;
      if (overrides.steps)
         config.steps = *overrides.steps;
      if (overrides.strategy)
         config.strategy = parse_strategy(*overrides.strategy);
      if (overrides.interval)
         config.interval = *overrides.interval;
      config.validate();

      const ReplayResult result = run_replay(config);
      write_report_csv(config.output_report, result.report);
      if (!config.output_samples.empty())
         write_timing_csv(config.output_samples, result.samples);

      out << "strategy " << to_string(config.strategy) << ", " << result.report.rows.size()
          << " intervals -> " << config.output_report << "\n";
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "mean LI = %.4f  median LI = %.4f  makespan = %.4f ms  mean edge cut = %.1f",
                    result.summary.mean_load_imbalance, result.summary.median_load_imbalance,
                    result.summary.makespan, result.summary.mean_edge_cut);
      out << buf << "\n";
      return kExitOk;
   } catch (const ConfigError& e) {
      return report_failure(err, e, kExitUsage);
   } catch (const InfeasibleConfiguration& e) {
      return report_failure(err, e, kExitUsage);
   } catch (const CsvError& e) {
      return report_failure(err, e, kExitData);
   } catch (const std::invalid_argument& e) {
      return report_failure(err, e, kExitUsage);
   }
}

int cmd_partition(const std::string& weights_csv_path, GridDims dims, int block_size, int n_procs,
                  const std::string& strategy, const std::string& output_path, std::ostream& out,
                  std::ostream& err) {
   try {
      const Strategy kind = parse_strategy(strategy);
      const BlockGrid grid = build_grid(dims, block_size);
      const WeightMap weights = read_weights_csv(weights_csv_path, grid);

      // Curve strategies partition directly; diffusive and refine improve the
      // static Hilbert partition over uniform weights, as in a replay.
      const WeightMap uniform(static_cast<std::size_t>(grid.block_count()), 1.0);
      Assignment assignment;
      switch (kind) {
         case Strategy::None:
            assignment = sfc_partition(grid, uniform, n_procs, CurveKind::Hilbert);
            break;
         case Strategy::Morton:
            assignment = sfc_partition(grid, weights, n_procs, CurveKind::Morton);
            break;
         case Strategy::Hilbert:
            assignment = sfc_partition(grid, weights, n_procs, CurveKind::Hilbert);
            break;
         case Strategy::Diffusive:
            assignment = diffusive_balance(
                            grid, weights,
                            sfc_partition(grid, uniform, n_procs, CurveKind::Hilbert), 100)
                            .assignment;
            break;
         case Strategy::Refine:
            assignment = refine_partition(
               grid, weights, sfc_partition(grid, uniform, n_procs, CurveKind::Hilbert), 1.05);
            break;
      }

      write_assignment_csv(output_path, grid, assignment);
      const std::vector<double> loads = process_loads(grid, assignment, weights);
      char buf[128];
      std::snprintf(buf, sizeof(buf), "LI = %.6f  edge cut = %lld", load_imbalance(loads),
                    static_cast<long long>(edge_cut(grid, assignment, block_size)));
      out << buf << "\n";
      out << "assignment -> " << output_path << "\n";
      return kExitOk;
   } catch (const ConfigError& e) {
      return report_failure(err, e, kExitUsage);
   } catch (const CsvError& e) {
      return report_failure(err, e, kExitData);
   } catch (const std::invalid_argument& e) {
      return report_failure(err, e, kExitUsage);
   }
}

int cmd_report(const std::vector<std::string>& report_paths, std::ostream& out,
               std::ostream& err) {
   try {
      if (report_paths.empty())
         throw ConfigError("at least one report file is required");

      std::vector<ReportFile> reports;
      reports.reserve(report_paths.size());
      for (const std::string& path : report_paths)
         reports.push_back(read_report_csv(path));

      for (std::size_t i = 1; i < reports.size(); ++i) {
         if (!(reports[i].dims == reports[0].dims) ||
             reports[i].block_size != reports[0].block_size)
            throw CsvError(report_paths[i], 0,
                           "incomparable reports: grid differs from " + report_paths[0]);
      }

      const double base_makespan = summarize_report(reports[0]).makespan;
      if (!(base_makespan > 0.0))
         throw CsvError(report_paths[0], 0, "first report has no positive makespan");

      out << "strategy     intervals  mean LI   median LI  makespan(ms)  relative  mean edge cut\n";
      for (std::size_t i = 0; i < reports.size(); ++i) {
         const ReplaySummary s = summarize_report(reports[i]);
         const std::string label = reports[i].rows.empty() ? "?" : reports[i].rows.front().strategy;
         char buf[192];
         std::snprintf(buf, sizeof(buf), "%-12s %9zu  %8.4f  %9.4f  %12.4f  %7.1f%%  %13.1f",
                       label.c_str(), reports[i].rows.size(), s.mean_load_imbalance,
                       s.median_load_imbalance, s.makespan, 100.0 * s.makespan / base_makespan,
                       s.mean_edge_cut);
         out << buf << "\n";
      }
      return kExitOk;
   } catch (const ConfigError& e) {
      return report_failure(err, e, kExitUsage);
   } catch (const CsvError& e) {
      return report_failure(err, e, kExitData);
   } catch (const std::invalid_argument& e) {
      return report_failure(err, e, kExitData);
   }
}

}  // namespace blockbal
