#include "credinet/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace credinet {

std::string format_sci(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", value);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> columns)
    : os_(os), columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("CsvWriter: empty schema");
}

void CsvWriter::comment(const std::string& line) {
    if (header_written_)
        throw std::logic_error("CsvWriter: comments must precede the header");
    os_ << "# " << line << '\n';
}

void CsvWriter::flush_header() {
    if (header_written_) return;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os_ << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
    header_written_ = true;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("CsvWriter: row width does not match schema");
    flush_header();
    for (std::size_t i = 0; i < cells.size(); ++i)
        os_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

}  // namespace credinet
