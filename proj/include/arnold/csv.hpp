#pragma once

// Minimal CSV tables; numbers are written with %.17g so files round-trip.

#include <string>
#include <vector>

namespace arnold {

std::string fmt17(double v);

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t column(const std::string& name) const;  // throws when absent
  std::vector<double> numeric_column(const std::string& name) const;

  std::string to_string() const;
  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);
  static CsvTable parse(const std::string& text);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace arnold
