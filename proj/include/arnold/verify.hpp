#pragma once

// The acceptance suite shared by the acceptance test binary and the
// `verify-all` subcommand. Criteria are numbered 1..11.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "arnold/csv.hpp"

namespace arnold {

struct Metric {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "<", ">", "=="
  double limit = 0.0;
  bool ok = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<Metric> metrics;
  std::vector<std::pair<std::string, CsvTable>> tables;  // file stem, table
  std::string note;
  double seconds = 0.0;  // wall time, never written to CSV
};

struct AcceptanceOptions {
  bool quick = false;  // criterion 11 re-runs only the static criteria 1..8
  std::uint64_t seed = 20240607;
  std::vector<int> only;  // empty = all
};

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
// Runs the selected criteria in order; criterion 11 re-runs 1..10 and compares
// every CSV byte for byte. Progress lines go to `log` when given.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream* log = nullptr);

std::string result_line(const CriterionResult& r);  // "PASS 3 Stream solve: ..." style
CsvTable summary_table(const std::vector<CriterionResult>& results);
CsvTable metrics_table(const CriterionResult& r);

}  // namespace arnold
