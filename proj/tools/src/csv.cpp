#include "dlcpriv/cli/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dlcpriv/error.hpp"

namespace dlcpriv::cli {

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_count(std::uint64_t value) { return std::to_string(value); }

std::string format_optional(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string{};
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      std::ostringstream os;
      os << "CSV line " << line_no << " has " << cells.size() << " cells, header has "
         << t.header.size();
      throw ConfigError(os.str());
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw ConfigError("CSV has no header row");
  return t;
}

CsvTable inner_join(const CsvTable& left, const CsvTable& right, std::string_view key,
                    std::vector<std::string>& warnings) {
  const auto lk = left.column(key);
  const auto rk = right.column(key);
  if (!lk || !rk) throw ConfigError("join key '" + std::string(key) + "' missing from an input");

  auto same_key = [](const std::string& a, const std::string& b) {
    return std::stod(a) == std::stod(b);
  };

  CsvTable out;
  out.header = left.header;
  for (std::size_t c = 0; c < right.header.size(); ++c) {
    if (c != *rk) out.header.push_back(right.header[c]);
  }
  for (const auto& lrow : left.rows) {
    const auto match = std::find_if(right.rows.begin(), right.rows.end(), [&](const auto& rrow) {
      return same_key(lrow[*lk], rrow[*rk]);
    });
    if (match == right.rows.end()) {
      warnings.push_back(std::string(key) + "=" + lrow[*lk] + " only present on the left; row dropped");
      continue;
    }
    std::vector<std::string> row = lrow;
    for (std::size_t c = 0; c < match->size(); ++c) {
      if (c != *rk) row.push_back((*match)[c]);
    }
    out.rows.push_back(std::move(row));
  }
  for (const auto& rrow : right.rows) {
    const bool found = std::any_of(left.rows.begin(), left.rows.end(), [&](const auto& lrow) {
      return same_key(lrow[*lk], rrow[*rk]);
    });
    if (!found) {
      warnings.push_back(std::string(key) + "=" + rrow[*rk] + " only present on the right; row dropped");
    }
  }
  return out;
}

}  // namespace dlcpriv::cli
