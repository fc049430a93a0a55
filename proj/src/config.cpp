#include "blockbal/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace blockbal {

namespace {

std::string trim(const std::string& s) {
   const auto begin = s.find_first_not_of(" \t");
   if (begin == std::string::npos)
      return "";
   const auto end = s.find_last_not_of(" \t");
   return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
   T parsed{};
   const std::string t = trim(value);
   const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), parsed);
   if (ec != std::errc{} || ptr != t.data() + t.size())
      throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
   return parsed;
}

}  // namespace

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
   std::ifstream in(path);
   if (!in)
      throw ConfigError("cannot open config file '" + path + "'");
   std::map<std::string, std::string> entries;
   std::string line;
   std::size_t line_no = 0;
   while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos)
         line = line.substr(0, hash);
      const std::string t = trim(line);
      if (t.empty())
         continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
         throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty())
         throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
      if (!entries.emplace(key, value).second)
         throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
   }
   return entries;
}

Strategy parse_strategy(const std::string& name) {
   if (name == "none")
      return Strategy::None;
   if (name == "morton")
      return Strategy::Morton;
   if (name == "hilbert")
      return Strategy::Hilbert;
   if (name == "diffusive")
      return Strategy::Diffusive;
   if (name == "refine")
      return Strategy::Refine;
   throw ConfigError("unknown strategy '" + name +
                     "' (expected none|morton|hilbert|diffusive|refine)");
}

const char* to_string(Strategy strategy) {
   switch (strategy) {
      case Strategy::None: return "none";
      case Strategy::Morton: return "morton";
      case Strategy::Hilbert: return "hilbert";
      case Strategy::Diffusive: return "diffusive";
      case Strategy::Refine: return "refine";
   }
   return "?";
}

void RunConfig::validate() const {
   if (interval < 1)
      throw ConfigError("run.interval must be >= 1");
   if (processes < 1)
      throw ConfigError("run.processes must be >= 1");
   if (!(scale > 0.0 && scale <= 1.0))
      throw ConfigError("scenario.scale must lie in (0, 1]");
   if (steps && *steps < 0)
      throw ConfigError("scenario.steps must be >= 0");
   if (block_size && *block_size < 1)
      throw ConfigError("scenario.block_size must be >= 1");
   if (coefficient_source != "builtin-table" && coefficient_source != "fitted-from-file")
      throw ConfigError("coefficients.source must be builtin-table or fitted-from-file");
   if (coefficient_source == "fitted-from-file" && coefficient_file.empty())
      throw ConfigError("coefficients.file is required with coefficients.source = fitted-from-file");
   if (!(weight_floor > 0.0))
      throw ConfigError("weights.floor must be positive");
   if (!(refine_tolerance >= 1.0))
      throw ConfigError("refine.tolerance must be >= 1");
   if (diffusive_max_iterations < 0)
      throw ConfigError("diffusive.max_iterations must be >= 0");
   if (output_report.empty())
      throw ConfigError("output.report must not be empty");
   if (!(samples_noise_sigma >= 0.0))
      throw ConfigError("samples.noise_sigma must be >= 0");
}

RunConfig load_run_config(const std::string& path) {
   const auto entries = parse_key_value_file(path);
   static const std::set<std::string> known = {
      "scenario.preset",      "scenario.scale",          "scenario.seed",
      "scenario.block_size",  "scenario.steps",          "run.strategy",
      "run.interval",         "run.processes",           "coefficients.source",
      "coefficients.file",    "weights.floor",           "refine.tolerance",
      "diffusive.max_iterations", "output.report",       "output.samples",
      "samples.noise_sigma",  "samples.seed",
   };
   for (const auto& [key, value] : entries)
      if (!known.count(key))
         throw ConfigError(path + ": unknown config key '" + key + "'");

   RunConfig config;
   auto get = [&](const char* key) -> const std::string* {
      const auto it = entries.find(key);
      return it == entries.end() ? nullptr : &it->second;
   };
   if (const auto* v = get("scenario.preset"))
      config.preset = *v;
   if (const auto* v = get("scenario.scale"))
      config.scale = parse_number<double>("scenario.scale", *v);
   if (const auto* v = get("scenario.seed"))
      config.seed = parse_number<std::uint64_t>("scenario.seed", *v);
   if (const auto* v = get("scenario.block_size"))
      config.block_size = parse_number<int>("scenario.block_size", *v);
   if (const auto* v = get("scenario.steps"))
      config.steps = parse_number<std::int64_t>("scenario.steps", *v);
   if (const auto* v = get("run.strategy"))
      config.strategy = parse_strategy(*v);
   if (const auto* v = get("run.interval"))
      config.interval = parse_number<std::int64_t>("run.interval", *v);
   if (const auto* v = get("run.processes"))
      config.processes = parse_number<int>("run.processes", *v);
   if (const auto* v = get("coefficients.source"))
      config.coefficient_source = *v;
   if (const auto* v = get("coefficients.file"))
      config.coefficient_file = *v;
   if (const auto* v = get("weights.floor"))
      config.weight_floor = parse_number<double>("weights.floor", *v);
   if (const auto* v = get("refine.tolerance"))
      config.refine_tolerance = parse_number<double>("refine.tolerance", *v);
   if (const auto* v = get("diffusive.max_iterations"))
      config.diffusive_max_iterations = parse_number<int>("diffusive.max_iterations", *v);
   if (const auto* v = get("output.report"))
      config.output_report = *v;
   if (const auto* v = get("output.samples"))
      config.output_samples = *v;
   if (const auto* v = get("samples.noise_sigma"))
      config.samples_noise_sigma = parse_number<double>("samples.noise_sigma", *v);
   if (const auto* v = get("samples.seed"))
      config.samples_seed = parse_number<std::uint64_t>("samples.seed", *v);

   config.validate();
   return config;
}

}  // namespace blockbal
