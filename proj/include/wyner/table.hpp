#pragma once

// Tabular experiment output with a stable, named column schema.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wyner/errors.hpp"

namespace wyner {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Shortest round-trip decimal form, '.' separator, locale independent.
inline std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, end);
}

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw ShapeError("row width does not match the header");
    for (const auto& c : row) {
      if (const auto* d = std::get_if<double>(&c); d && !std::isfinite(*d)) {
        throw Error("non-finite value in result table");
      }
    }
    rows_.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i] == name) return i;
    throw ShapeError("no column named '" + name + "'");
  }

  double number(std::size_t row, const std::string& name) const {
    const Cell& c = rows_.at(row).at(column(name));
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    return std::get<double>(c);
  }

  const std::string& text(std::size_t row, const std::string& name) const {
    return std::get<std::string>(rows_.at(row).at(column(name)));
  }

  /// Header row plus one line per row, LF endings.
  std::string to_csv() const {
    std::string out;
    append_line(out, columns_);
    for (const auto& row : rows_) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const auto& c : row) cells.push_back(format_cell(c));
      append_line(out, cells);
    }
    return out;
  }

  /// Array of row objects keyed by column name.
  nlohmann::ordered_json rows_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit([&](const auto& v) { obj[columns_[i]] = v; }, row[i]);
      }
      arr.push_back(std::move(obj));
    }
    return arr;
  }

 private:
  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace wyner
