#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockbal/estimator.hpp"
#include "blockbal/grid.hpp"
#include "blockbal/metrics.hpp"

namespace blockbal {

/// Data/schema failure in a structured file; carries the 1-based line.
struct CsvError : std::runtime_error {
   CsvError(const std::string& path, std::size_t line_number, const std::string& message);
   std::size_t line = 0;
};

// Timing sample CSV: block_id,step,C,F,B,P_L,P_S,K,S,m_lbm,m_bh,m_coup1,m_coup2,m_rb
extern const char* const kTimingCsvHeader;

struct TimingSampleRow {
   BlockId block_id = 0;
   std::int64_t step = 0;
   TimingSample sample;
};

std::vector<TimingSampleRow> read_timing_csv(const std::string& path);
void write_timing_csv(const std::string& path, const std::vector<TimingSampleRow>& rows);

// Report CSV: step,strategy,n_procs,LI,edge_cut,max_load,total_load, with a
// leading "# grid=IxJxK block_size=N" comment recording the lattice.
extern const char* const kReportCsvHeader;

struct ReportFile {
   GridDims dims;
   int block_size = 0;
   std::vector<IntervalReport> rows;
};

ReportFile read_report_csv(const std::string& path);
void write_report_csv(const std::string& path, const ReportFile& report);

// Assignment CSV: block_id,i,j,k,owner
extern const char* const kAssignmentCsvHeader;

void write_assignment_csv(const std::string& path, const BlockGrid& grid,
                          const Assignment& assignment);
Assignment read_assignment_csv(const std::string& path, const BlockGrid& grid, int n_procs);

// Weights CSV: block_id,weight; must cover every block of the grid.
extern const char* const kWeightsCsvHeader;

WeightMap read_weights_csv(const std::string& path, const BlockGrid& grid);
void write_weights_csv(const std::string& path, const WeightMap& weights);

// Coefficients file: flat key = value lines (lbm.a1 ... rb.a5), optionally
// followed by stats.* lines from calibration.
struct CalibrationStats {
   SummaryStats lbm, bh, coup1, coup2, rb, total;
   double fraction_within_10pct = 0.0;
};

void write_coefficients_file(const std::string& path, const EstimatorCoefficients& coefficients,
                             const CalibrationStats* stats = nullptr);
EstimatorCoefficients read_coefficients_file(const std::string& path);

}  // namespace blockbal
