#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drillsim::csv {

// Strict, schema-first CSV: comma separated, no quoting, header required.
// All tabular I/O in the project goes through these helpers so outputs are
// byte-stable and reload to the exact same values.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Throws std::runtime_error naming the line on structural problems.
Table parse(std::string_view text, const std::vector<std::string>& expected_header);

std::vector<std::string> split_line(std::string_view line);

// Shortest round-trip representation (via std::to_chars).
std::string format_double(double v);

// Strict full-string parse; nullopt on failure.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace drillsim::csv
