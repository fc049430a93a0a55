#include "blockbal/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace blockbal {

namespace {

std::string csv_context(const std::string& path, std::size_t line) {
   return path + ":" + std::to_string(line);
}

std::vector<std::string> split_fields(const std::string& line) {
   std::vector<std::string> fields;
   std::string current;
   for (char ch : line) {
      if (ch == ',') {
         fields.push_back(current);
         current.clear();
      } else if (ch != '\r') {
         current += ch;
      }
   }
   fields.push_back(current);
   return fields;
}

std::string trim(const std::string& s) {
   const auto begin = s.find_first_not_of(" \t");
   if (begin == std::string::npos)
      return "";
   const auto end = s.find_last_not_of(" \t");
   return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& field, const std::string& path, std::size_t line) {
   const std::string t = trim(field);
   double value = 0.0;
   const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
   if (ec != std::errc{} || ptr != t.data() + t.size())
      throw CsvError(path, line, "not a number: '" + field + "'");
   return value;
}

std::int64_t parse_int(const std::string& field, const std::string& path, std::size_t line) {
   const std::string t = trim(field);
   std::int64_t value = 0;
   const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
   if (ec != std::errc{} || ptr != t.data() + t.size())
      throw CsvError(path, line, "not an integer: '" + field + "'");
   return value;
}

std::ifstream open_input(const std::string& path) {
   std::ifstream in(path);
   if (!in)
      throw CsvError(path, 0, "cannot open file");
   return in;
}

std::ofstream open_output(const std::string& path) {
   std::ofstream out(path);
   if (!out)
      throw CsvError(path, 0, "cannot open file for writing");
   return out;
}

std::string format_double(double v, const char* fmt = "%.12g") {
   char buf[64];
   std::snprintf(buf, sizeof(buf), fmt, v);
   return buf;
}

}  // namespace

CsvError::CsvError(const std::string& path, std::size_t line_number, const std::string& message)
   : std::runtime_error(csv_context(path, line_number) + ": " + message), line(line_number) {}

const char* const kTimingCsvHeader =
   "block_id,step,C,F,B,P_L,P_S,K,S,m_lbm,m_bh,m_coup1,m_coup2,m_rb";
const char* const kReportCsvHeader = "step,strategy,n_procs,LI,edge_cut,max_load,total_load";
const char* const kAssignmentCsvHeader = "block_id,i,j,k,owner";
const char* const kWeightsCsvHeader = "block_id,weight";

std::vector<TimingSampleRow> read_timing_csv(const std::string& path) {
   std::ifstream in = open_input(path);
   std::string line;
   std::size_t line_no = 0;
   if (!std::getline(in, line))
      throw CsvError(path, 1, "empty file, expected header '" + std::string(kTimingCsvHeader) + "'");
   ++line_no;
   if (trim(line) != kTimingCsvHeader)
      throw CsvError(path, 1, "bad header, expected '" + std::string(kTimingCsvHeader) + "'");

   std::vector<TimingSampleRow> rows;
   while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty())
         continue;
      const auto fields = split_fields(line);
      if (fields.size() != 14)
         throw CsvError(path, line_no, "expected 14 fields, got " + std::to_string(fields.size()));
      TimingSampleRow row;
      row.block_id = parse_int(fields[0], path, line_no);
      row.step = parse_int(fields[1], path, line_no);
      auto& q = row.sample.quantities;
      q.cells = parse_int(fields[2], path, line_no);
      q.fluid_cells = parse_int(fields[3], path, line_no);
      q.near_boundary_cells = parse_int(fields[4], path, line_no);
      q.local_particles = parse_int(fields[5], path, line_no);
      q.shadow_particles = parse_int(fields[6], path, line_no);
      q.contacts = parse_int(fields[7], path, line_no);
      q.sub_cycles = parse_int(fields[8], path, line_no);
      for (std::int64_t v : {q.cells, q.fluid_cells, q.near_boundary_cells, q.local_particles,
                             q.shadow_particles, q.contacts})
         if (v < 0)
            throw CsvError(path, line_no, "block quantities must be non-negative");
      if (q.sub_cycles < 1)
         throw CsvError(path, line_no, "sub cycle count must be >= 1");
      double* const parts[5] = {&row.sample.m_lbm, &row.sample.m_bh, &row.sample.m_coup1,
                                &row.sample.m_coup2, &row.sample.m_rb};
      for (int i = 0; i < 5; ++i) {
         *parts[i] = parse_double(fields[static_cast<std::size_t>(9 + i)], path, line_no);
         if (!std::isfinite(*parts[i]) || *parts[i] < 0.0)
            throw CsvError(path, line_no, "timing values must be finite and non-negative");
      }
      rows.push_back(row);
   }
   return rows;
}

void write_timing_csv(const std::string& path, const std::vector<TimingSampleRow>& rows) {
   std::ofstream out = open_output(path);
   out << kTimingCsvHeader << "\n";
   for (const TimingSampleRow& r : rows) {
      const auto& q = r.sample.quantities;
      out << r.block_id << ',' << r.step << ',' << q.cells << ',' << q.fluid_cells << ','
          << q.near_boundary_cells << ',' << q.local_particles << ',' << q.shadow_particles << ','
          << q.contacts << ',' << q.sub_cycles << ',' << format_double(r.sample.m_lbm) << ','
          << format_double(r.sample.m_bh) << ',' << format_double(r.sample.m_coup1) << ','
          << format_double(r.sample.m_coup2) << ',' << format_double(r.sample.m_rb) << "\n";
   }
}

ReportFile read_report_csv(const std::string& path) {
   std::ifstream in = open_input(path);
   ReportFile report;
   std::string line;
   std::size_t line_no = 0;
   bool have_grid = false;
   bool have_header = false;
   std::vector<IntervalReport>& rows = report.rows;
   while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(line);
      if (t.empty())
         continue;
      if (t[0] == '#') {
         int i = 0, j = 0, k = 0, bs = 0;
         if (std::sscanf(t.c_str(), "# grid=%dx%dx%d block_size=%d", &i, &j, &k, &bs) == 4) {
            report.dims = {i, j, k};
            report.block_size = bs;
            have_grid = true;
         }
         continue;
      }
      if (!have_header) {
         if (t != kReportCsvHeader)
            throw CsvError(path, line_no,
                           "bad header, expected '" + std::string(kReportCsvHeader) + "'");
         have_header = true;
         continue;
      }
      const auto fields = split_fields(line);
      if (fields.size() != 7)
         throw CsvError(path, line_no, "expected 7 fields, got " + std::to_string(fields.size()));
      IntervalReport row;
      row.step = parse_int(fields[0], path, line_no);
      row.strategy = trim(fields[1]);
      row.n_procs = static_cast<int>(parse_int(fields[2], path, line_no));
      row.load_imbalance = parse_double(fields[3], path, line_no);
      row.edge_cut = parse_int(fields[4], path, line_no);
      row.max_load = parse_double(fields[5], path, line_no);
      row.total_load = parse_double(fields[6], path, line_no);
      rows.push_back(row);
   }
   if (!have_header)
      throw CsvError(path, line_no, "missing header '" + std::string(kReportCsvHeader) + "'");
   if (!have_grid)
      throw CsvError(path, line_no, "missing '# grid=IxJxK block_size=N' metadata line");
   return report;
}

void write_report_csv(const std::string& path, const ReportFile& report) {
   std::ofstream out = open_output(path);
   out << "# grid=" << report.dims.x << 'x' << report.dims.y << 'x' << report.dims.z
       << " block_size=" << report.block_size << "\n";
   out << kReportCsvHeader << "\n";
   for (const IntervalReport& r : report.rows) {
      out << r.step << ',' << r.strategy << ',' << r.n_procs << ','
          << format_double(r.load_imbalance) << ',' << r.edge_cut << ','
          << format_double(r.max_load) << ',' << format_double(r.total_load) << "\n";
   }
}

void write_assignment_csv(const std::string& path, const BlockGrid& grid,
                          const Assignment& assignment) {
   std::ofstream out = open_output(path);
   out << kAssignmentCsvHeader << "\n";
   for (BlockId b = 0; b < grid.block_count(); ++b) {
      const auto [i, j, k] = grid.block_coords(b);
      out << b << ',' << i << ',' << j << ',' << k << ','
          << assignment.owner[static_cast<std::size_t>(b)] << "\n";
   }
}

Assignment read_assignment_csv(const std::string& path, const BlockGrid& grid, int n_procs) {
   std::ifstream in = open_input(path);
   std::string line;
   std::size_t line_no = 0;
   if (!std::getline(in, line) || trim(line) != kAssignmentCsvHeader)
      throw CsvError(path, 1, "bad header, expected '" + std::string(kAssignmentCsvHeader) + "'");
   ++line_no;

   Assignment assignment;
   assignment.process_count = n_procs;
   assignment.owner.assign(static_cast<std::size_t>(grid.block_count()), Assignment::kUnassigned);
   while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty())
         continue;
      const auto fields = split_fields(line);
      if (fields.size() != 5)
         throw CsvError(path, line_no, "expected 5 fields, got " + std::to_string(fields.size()));
      const std::int64_t id = parse_int(fields[0], path, line_no);
      if (id < 0 || id >= grid.block_count())
         throw CsvError(path, line_no, "block id out of range: " + std::to_string(id));
      const auto [i, j, k] = grid.block_coords(id);
      if (i != parse_int(fields[1], path, line_no) || j != parse_int(fields[2], path, line_no) ||
          k != parse_int(fields[3], path, line_no))
         throw CsvError(path, line_no, "coordinates do not match block id " + std::to_string(id));
      assignment.owner[static_cast<std::size_t>(id)] =
         static_cast<int>(parse_int(fields[4], path, line_no));
   }
   return assignment;
}

WeightMap read_weights_csv(const std::string& path, const BlockGrid& grid) {
   std::ifstream in = open_input(path);
   std::string line;
   std::size_t line_no = 0;
   if (!std::getline(in, line) || trim(line) != kWeightsCsvHeader)
      throw CsvError(path, 1, "bad header, expected '" + std::string(kWeightsCsvHeader) + "'");
   ++line_no;

   WeightMap weights(static_cast<std::size_t>(grid.block_count()),
                     std::numeric_limits<double>::quiet_NaN());
   while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty())
         continue;
      const auto fields = split_fields(line);
      if (fields.size() != 2)
         throw CsvError(path, line_no, "expected 2 fields, got " + std::to_string(fields.size()));
      const std::int64_t id = parse_int(fields[0], path, line_no);
      if (id < 0 || id >= grid.block_count())
         throw CsvError(path, line_no, "block id out of range: " + std::to_string(id));
      const double w = parse_double(fields[1], path, line_no);
      if (!(w > 0.0) || !std::isfinite(w))
         throw CsvError(path, line_no, "weights must be positive and finite");
      weights[static_cast<std::size_t>(id)] = w;
   }
   for (BlockId b = 0; b < grid.block_count(); ++b)
      if (std::isnan(weights[static_cast<std::size_t>(b)]))
         throw CsvError(path, line_no, "missing weight for block " + std::to_string(b));
   return weights;
}

void write_weights_csv(const std::string& path, const WeightMap& weights) {
   std::ofstream out = open_output(path);
   out << kWeightsCsvHeader << "\n";
   for (std::size_t b = 0; b < weights.size(); ++b)
      out << b << ',' << format_double(weights[b]) << "\n";
}

namespace {

void write_coefficient_group(std::ofstream& out, const char* name, const double* values,
                             std::size_t count) {
   for (std::size_t i = 0; i < count; ++i)
      out << name << ".a" << (i + 1) << " = " << format_double(values[i], "%.17g") << "\n";
}

}  // namespace

void write_coefficients_file(const std::string& path, const EstimatorCoefficients& coefficients,
                             const CalibrationStats* stats) {
   std::ofstream out = open_output(path);
   write_coefficient_group(out, "lbm", coefficients.lbm.data(), 3);
   write_coefficient_group(out, "bh", coefficients.bh.data(), 3);
   write_coefficient_group(out, "coup1", coefficients.coup1.data(), 5);
   write_coefficient_group(out, "coup2", coefficients.coup2.data(), 5);
   write_coefficient_group(out, "rb", coefficients.rb.data(), 5);
   if (stats) {
      auto emit = [&](const char* name, const SummaryStats& s) {
         out << "stats." << name << ".median_e = " << format_double(s.median) << "\n";
         out << "stats." << name << ".mad_e = " << format_double(s.mad) << "\n";
      };
      emit("lbm", stats->lbm);
      emit("bh", stats->bh);
      emit("coup1", stats->coup1);
      emit("coup2", stats->coup2);
      emit("rb", stats->rb);
      emit("tot", stats->total);
      out << "stats.tot.fraction_within_10pct = " << format_double(stats->fraction_within_10pct)
          << "\n";
   }
}

EstimatorCoefficients read_coefficients_file(const std::string& path) {
   std::ifstream in = open_input(path);
   EstimatorCoefficients c;
   struct Slot {
      std::string key;
      double* target;
      bool seen = false;
   };
   std::vector<Slot> slots;
   auto add_group = [&](const char* name, double* values, std::size_t count) {
      for (std::size_t i = 0; i < count; ++i)
         slots.push_back({std::string(name) + ".a" + std::to_string(i + 1), values + i});
   };
   add_group("lbm", c.lbm.data(), 3);
   add_group("bh", c.bh.data(), 3);
   add_group("coup1", c.coup1.data(), 5);
   add_group("coup2", c.coup2.data(), 5);
   add_group("rb", c.rb.data(), 5);

   std::string line;
   std::size_t line_no = 0;
   while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#')
         continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
         throw CsvError(path, line_no, "expected 'key = value'");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.rfind("stats.", 0) == 0)
         continue;
      bool matched = false;
      for (Slot& slot : slots) {
         if (slot.key == key) {
            *slot.target = parse_double(value, path, line_no);
            slot.seen = true;
            matched = true;
            break;
         }
      }
      if (!matched)
         throw CsvError(path, line_no, "unknown coefficient key '" + key + "'");
   }
   for (const Slot& slot : slots)
      if (!slot.seen)
         throw CsvError(path, line_no, "missing coefficient '" + slot.key + "'");
   if (!c.finite())
      throw CsvError(path, line_no, "coefficients must be finite");
   return c;
}

}  // namespace blockbal
