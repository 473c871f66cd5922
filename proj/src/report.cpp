#include "obslab/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace obslab {

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvReport::CsvReport(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvReport::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::logic_error("CSV row width does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvReport::to_string() const {
    std::string out;
    const auto join = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    join(columns_);
    for (const auto& row : rows_) join(row);
    return out;
}

} // namespace obslab
