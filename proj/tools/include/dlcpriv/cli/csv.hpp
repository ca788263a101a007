#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dlcpriv::cli {

/// Fixed CSV dialect: header row always present, ',' separator, '\n' line
/// endings, no quoting (cells never contain separators), numbers with six
/// significant digits and '.' as decimal point. Empty cells mean "not
/// computed" and are never written as zero.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

std::string format_number(double value);
std::string format_count(std::uint64_t value);
std::string format_optional(const std::optional<double>& value);

std::string to_csv(const CsvTable& table);
/// Throws ConfigError on ragged rows or a missing header.
CsvTable parse_csv(std::string_view text);

/// Inner join on a numeric key column. Rows whose key appears on one side
/// only are dropped and reported in `warnings`. Output columns: the left
/// table's, then the right table's minus its key. Row order follows left.
CsvTable inner_join(const CsvTable& left, const CsvTable& right, std::string_view key,
                    std::vector<std::string>& warnings);

}  // namespace dlcpriv::cli
