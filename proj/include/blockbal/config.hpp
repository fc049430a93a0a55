#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace blockbal {

struct ConfigError : std::runtime_error {
   using std::runtime_error::runtime_error;
};

/// Flat `key = value` document with dotted section keys; '#' starts a
/// comment. Duplicate keys are errors.
std::map<std::string, std::string> parse_key_value_file(const std::string& path);

enum class Strategy { None, Morton, Hilbert, Diffusive, Refine };

Strategy parse_strategy(const std::string& name);
const char* to_string(Strategy strategy);

/// Replay run description. Every key has a default; unknown keys in the
/// config file are rejected.
struct RunConfig {
   std::string preset = "settling-box";            // scenario.preset
   double scale = 1.0;                             // scenario.scale
   std::uint64_t seed = 1;                         // scenario.seed
   std::optional<int> block_size;                  // scenario.block_size
   std::optional<std::int64_t> steps;              // scenario.steps (overrides preset duration)
   Strategy strategy = Strategy::None;             // run.strategy
   std::int64_t interval = 100;                    // run.interval
   int processes = 8;                              // run.processes
   std::string coefficient_source = "builtin-table";  // coefficients.source
   std::string coefficient_file;                   // coefficients.file
   double weight_floor = 1e-6;                     // weights.floor (ms)
   double refine_tolerance = 1.05;                 // refine.tolerance
   int diffusive_max_iterations = 100;             // diffusive.max_iterations
   std::string output_report = "report.csv";       // output.report
   std::string output_samples;                     // output.samples ("" = off)
   double samples_noise_sigma = 0.0;               // samples.noise_sigma
   std::uint64_t samples_seed = 12345;             // samples.seed

   void validate() const;
};

RunConfig load_run_config(const std::string& path);

}  // namespace blockbal
