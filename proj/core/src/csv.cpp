#include "dcfw/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace dcfw {

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\r\n") != std::string::npos;
}

std::string escape(const std::string& cell) {
  if (!needs_quoting(cell)) return cell;
  std::string out;
  out.reserve(cell.size() + 2);
  out.push_back('"');
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += escape(cells[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvWriter: header must be nonempty");
}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CsvWriter: expected " + std::to_string(header_.size()) +
                                " cells, got " + std::to_string(cells.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
  std::string out;
  append_row(out, header_);
  for (const auto& row : rows_) append_row(out, row);
  return out;
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
  const std::string text = str();
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("CsvWriter: write failed for " + path);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool cell_started = false;

  const auto end_cell = [&]() {
    row.push_back(std::move(cell));
    cell.clear();
    cell_started = false;
  };
  const auto end_row = [&]() {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (cell_started && !cell.empty()) {
        throw std::invalid_argument("parse_csv: quote inside unquoted cell");
      }
      in_quotes = true;
      cell_started = true;
    } else if (c == ',') {
      end_cell();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      cell.push_back(c);
      cell_started = true;
    }
  }
  if (in_quotes) throw std::invalid_argument("parse_csv: unterminated quoted cell");
  if (cell_started || !cell.empty() || !row.empty()) end_row();
  return rows;
}

}  // namespace dcfw
