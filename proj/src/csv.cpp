#include "drillsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drillsim::csv {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

Table parse(std::string_view text, const std::vector<std::string>& expected_header) {
  Table t;
  size_t pos = 0;
  size_t line_no = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.empty() && end == text.size()) break;  // trailing newline
    auto fields = split_line(line);
    if (line_no == 1) {
      t.header.assign(fields.begin(), fields.end());
      if (!expected_header.empty() && t.header != expected_header) {
        std::ostringstream msg;
        msg << "line 1: bad header, expected \"";
        for (size_t i = 0; i < expected_header.size(); ++i)
          msg << (i ? "," : "") << expected_header[i];
        msg << "\" got \"" << line << "\"";
        throw std::runtime_error(msg.str());
      }
    } else {
      if (fields.size() != t.header.size()) {
        std::ostringstream msg;
        msg << "line " << line_no << ": expected " << t.header.size() << " fields, got "
            << fields.size();
        throw std::runtime_error(msg.str());
      }
      t.rows.push_back(std::move(fields));
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (t.header.empty() && !expected_header.empty())
    throw std::runtime_error("line 1: missing header");
  return t;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace drillsim::csv
