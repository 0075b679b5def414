// Minimal RFC-4180 CSV: comma separated, CRLF line endings, header row,
// quotes only where required. Numeric cells use %.17g so doubles round-trip.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dcfw {

std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  // Cell count must match the header; throws std::invalid_argument otherwise.
  void add_row(std::vector<std::string> cells);

  std::string str() const;
  void write_file(const std::string& path) const;
  std::size_t row_count() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Parses CSV text (quoted cells, embedded separators and newlines) into rows
// of cells; the header row is returned like any other. Throws
// std::invalid_argument on malformed quoting.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace dcfw
