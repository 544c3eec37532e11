#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace credinet {

/// Scientific notation with 12 significant digits; used everywhere a real
/// lands in a CSV so output bytes are reproducible.
std::string format_sci(double value);

/// CSV writer: `#` comment lines first (resolved config, tool version),
/// then the header, then rows. Cell counts are checked against the schema.
class CsvWriter {
  public:
    CsvWriter(std::ostream& os, std::vector<std::string> columns);
    ~CsvWriter() { flush_header(); }  // header appears even for empty row sets

    void comment(const std::string& line);
    void row(const std::vector<std::string>& cells);

  private:
    void flush_header();

    std::ostream& os_;
    std::vector<std::string> columns_;
    bool header_written_ = false;
};

}  // namespace credinet
