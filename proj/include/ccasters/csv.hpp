#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ccasters::csv {

// Fixed-precision formatting so output bytes never depend on locale or stream state.
std::string fmt(double v, int decimals = 4);

std::string join(const std::vector<std::string>& fields);

// Minimal reader for the files this project writes: comma separated, no quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view name) const;  // throws when missing
};

Table parse(std::string_view text);
Table read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ccasters::csv
