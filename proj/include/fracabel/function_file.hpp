#pragma once

// Tabular I/O for the command-line tools.
//
// CSV layout: optional `# <command> key=value ...` comment line, a header
// row, then data rows with 17 significant digits. A FunctionFile is a
// table with columns `x` and `f` over a uniform grid starting at 0; extra
// columns are carried along and ignored on input.

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fracabel/error.hpp"
#include "fracabel/fracops.hpp"

namespace fracabel {

using Cell = std::variant<double, std::string>;

struct Table {
  std::string command;
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    throw DomainError("table: missing column '" + std::string(name) + "'");
  }

  std::vector<double> numeric_column(std::string_view name) const {
    const std::size_t k = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      detail::require(k < row.size(), "table: short row");
      const double* v = std::get_if<double>(&row[k]);
      detail::require(v != nullptr, "table: column '" + std::string(name) + "' is not numeric");
      out.push_back(*v);
    }
    return out;
  }
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const double* v = std::get_if<double>(&c)) return format_number(*v);
  return std::get<std::string>(c);
}

inline void write_csv(std::ostream& out, const Table& table) {
  if (!table.command.empty() || !table.meta.empty()) {
    out << '#';
    if (!table.command.empty()) out << ' ' << table.command;
    for (const auto& [key, value] : table.meta) out << ' ' << key << '=' << format_cell(value);
    out << '\n';
  }
  for (std::size_t k = 0; k < table.header.size(); ++k) out << (k ? "," : "") << table.header[k];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_cell(row[k]);
    out << '\n';
  }
}

namespace detail {

inline nlohmann::ordered_json cell_to_json(const Cell& c) {
  if (const double* v = std::get_if<double>(&c)) {
    // round-trips through the same 17-digit text as the CSV writer
    return nlohmann::ordered_json::parse(format_number(*v));
  }
  return std::get<std::string>(c);
}

inline Cell json_to_cell(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw DomainError("table: unsupported JSON cell");
}

inline std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  return text;
}

inline Cell parse_cell(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) return v;
  return std::string(text);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    parts.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace detail

inline void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["command"] = table.command;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta) meta[key] = detail::cell_to_json(value);
  doc["meta"] = meta;
  doc["columns"] = table.header;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(detail::cell_to_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(1) << '\n';
}

/// Reads either layout; JSON is recognised by a leading '{'.
inline Table read_table(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  detail::require(first != std::string::npos, "table: empty input");

  Table table;
  if (text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DomainError(std::string("table: invalid JSON: ") + e.what());
    }
    table.command = doc.value("command", "");
    if (doc.contains("meta")) {
      for (const auto& [key, value] : doc["meta"].items()) table.meta.emplace_back(key, detail::json_to_cell(value));
    }
    detail::require(doc.contains("columns") && doc.contains("rows"), "table: JSON needs 'columns' and 'rows'");
    table.header = doc["columns"].get<std::vector<std::string>>();
    for (const auto& r : doc["rows"]) {
      std::vector<Cell> row;
      for (const auto& c : r) row.push_back(detail::json_to_cell(c));
      detail::require(row.size() == table.header.size(), "table: row width differs from header");
      table.rows.push_back(std::move(row));
    }
    return table;
  }

  std::istringstream lines(text);
  std::string line;
  bool have_header = false;
  bool have_meta = false;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      // the first comment before the header carries the command and key=value metadata
      if (!have_header && !have_meta) {
        have_meta = true;
        std::istringstream words(line.substr(1));
        std::string word;
        while (words >> word) {
          const auto eq = word.find('=');
          if (eq == std::string::npos) {
            table.command += (table.command.empty() ? "" : " ") + word;
          } else {
            table.meta.emplace_back(word.substr(0, eq), detail::parse_cell(std::string_view(word).substr(eq + 1)));
          }
        }
      }
      continue;
    }
    const auto parts = detail::split_commas(line);
    if (!have_header) {
      for (auto p : parts) table.header.emplace_back(detail::trim(p));
      have_header = true;
      continue;
    }
    detail::require(parts.size() == table.header.size(), "table: row width differs from header");
    std::vector<Cell> row;
    for (auto p : parts) row.push_back(detail::parse_cell(p));
    table.rows.push_back(std::move(row));
  }
  detail::require(have_header, "table: missing header row");
  return table;
}

/// FunctionFile -> SampledFunction; x must be uniform from 0.
inline SampledFunction to_function(const Table& table) {
  const std::vector<double> xs = table.numeric_column("x");
  std::vector<double> fs = table.numeric_column("f");
  const Grid grid = Grid::from_nodes(xs);
  return SampledFunction(grid, std::move(fs));
}

/// SampledFunction -> FunctionFile, with optional extra columns on the same grid.
inline Table from_function(const SampledFunction& f, std::string command = {},
                           std::vector<std::pair<std::string, Cell>> meta = {},
                           std::vector<std::pair<std::string, const SampledFunction*>> extra = {}) {
  Table table;
  table.command = std::move(command);
  table.meta = std::move(meta);
  table.header = {"x", "f"};
  for (const auto& [name, column] : extra) {
    detail::require(column->grid() == f.grid(), "table: extra column on a different grid");
    table.header.push_back(name);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<Cell> row{f.x(i), f[i]};
    for (const auto& [name, column] : extra) row.emplace_back((*column)[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fracabel
