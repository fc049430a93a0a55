#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "blockbal/config.hpp"
#include "blockbal/grid.hpp"

namespace blockbal {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // usage / config errors
inline constexpr int kExitData = 2;   // data / schema errors

/// Fits coefficients to a timing-sample CSV, writes them (plus per-part
/// median/MAD of the relative errors) to `output_path`, and prints the
/// fraction of samples predicted within 10% of the total runtime.
int cmd_calibrate(const std::string& samples_csv_path, const std::string& output_path,
                  std::ostream& out = std::cout, std::ostream& err = std::cerr);

/// Command-line overrides on top of the config file.
struct ReplayOverrides {
   std::optional<std::uint64_t> seed;
   std::optional<std::int64_t> steps;
   std::optional<std::string> strategy;
   std::optional<std::int64_t> interval;
};

int cmd_replay(const std::string& config_path, const ReplayOverrides& overrides = {},
               std::ostream& out = std::cout, std::ostream& err = std::cerr);

/// One-shot partitioning of externally supplied block weights.
int cmd_partition(const std::string& weights_csv_path, GridDims dims, int block_size, int n_procs,
                  const std::string& strategy, const std::string& output_path,
                  std::ostream& out = std::cout, std::ostream& err = std::cerr);

/// Comparison table across replay reports; makespans are shown relative to
/// the first input.
int cmd_report(const std::vector<std::string>& report_paths, std::ostream& out = std::cout,
               std::ostream& err = std::cerr);

}  // namespace blockbal
