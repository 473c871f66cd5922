#pragma once

#include <string>
#include <vector>

namespace obslab {

// Decimal rendering with 17 significant digits; round-trips binary64.
std::string format_real(double x);

// Minimal CSV assembly: comma separator, LF line endings, header row, no
// quoting (no field may contain a comma).
class CsvReport {
  public:
    explicit CsvReport(std::vector<std::string> columns);

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace obslab
