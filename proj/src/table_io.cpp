#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pfexpm/rootgen.hpp"

namespace pfexpm {

namespace {

constexpr std::string_view kMagic = "pfexpm-table";
constexpr int kVersion = 1;
// 36 significant digits per binary64 component.
constexpr int kPrecision = 35;

void append_number(std::string& out, double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, kPrecision);
  out += ' ';
  out.append(buf.data(), res.ptr);
}

void append_value(std::string& out, std::string_view tag, const ExtComplex& z) {
  out += tag;
  append_number(out, z.re.hi);
  append_number(out, z.re.lo);
  append_number(out, z.im.hi);
  append_number(out, z.im.lo);
  out += '\n';
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto pos = text.find('\n');
    auto line = text.substr(0, pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

ExtComplex parse_value(std::string_view line, std::string_view tag, std::size_t line_no) {
  const auto f = split_fields(line);
  if (f.size() != 5 || f[0] != tag) {
    throw ParseError("line " + std::to_string(line_no) + ": expected '" + std::string(tag) + "' and 4 numbers");
  }
  return {ExtReal::raw(parse_double(f[1], line_no), parse_double(f[2], line_no)),
          ExtReal::raw(parse_double(f[3], line_no), parse_double(f[4], line_no))};
}

std::string_view expect_key(std::string_view line, std::string_view key, std::size_t line_no) {
  if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != '=') {
    throw ParseError("line " + std::to_string(line_no) + ": expected '" + std::string(key) + "=<value>'");
  }
  return line.substr(key.size() + 1);
}

}  // namespace

std::string format_table(const RootTable& table) {
  std::string out;
  out += std::string(kMagic) + " v" + std::to_string(kVersion) + "\n";
  out += "n=" + std::to_string(table.order()) + "\n";
  out += "method=" + std::string(to_string(table.method())) + "\n";
  for (const auto& z : table.roots()) append_value(out, "theta", z);
  for (const auto& a : table.coeffs()) append_value(out, "a", a);
  return out;
}

RootTable parse_table(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < 3) throw ParseError("truncated table header");

  const auto header = split_fields(lines[0]);
  if (header.size() != 2 || header[0] != kMagic || header[1].size() < 2 || header[1][0] != 'v') {
    throw ParseError("line 1: expected 'pfexpm-table v1'");
  }
  if (header[1] != "v1") throw ParseError("unsupported table version '" + std::string(header[1]) + "'");

  int n = 0;
  const auto n_text = expect_key(lines[1], "n", 2);
  auto res = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (res.ec != std::errc() || res.ptr != n_text.data() + n_text.size() || n <= 0 || n > 4096) {
    throw ParseError("line 2: bad order '" + std::string(n_text) + "'");
  }
  const CoeffMethod method = parse_coeff_method(expect_key(lines[2], "method", 3));

  if (lines.size() != 3 + 2 * static_cast<std::size_t>(n)) {
    throw ParseError("expected " + std::to_string(2 * n) + " value lines, found " + std::to_string(lines.size() - 3));
  }
  std::vector<ExtComplex> roots, coeffs;
  for (int k = 0; k < n; ++k) roots.push_back(parse_value(lines[3 + k], "theta", 4 + k));
  for (int k = 0; k < n; ++k) coeffs.push_back(parse_value(lines[3 + n + k], "a", 4 + n + k));
  return RootTable::validated(n, std::move(roots), std::move(coeffs), method);
}

void save_table(const RootTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << format_table(table);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

RootTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return parse_table(ss.str());
}

}  // namespace pfexpm
