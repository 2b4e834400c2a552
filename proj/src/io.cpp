#include "gevstat/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "gevstat/errors.hpp"

namespace gevstat {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"'");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"'");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, bool csv) {
  std::vector<std::string> out;
  if (csv) {
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
  } else {
    std::istringstream is(line);
    std::string cell;
    while (is >> cell) out.push_back(trim(cell));
  }
  return out;
}

bool is_missing(const std::string& cell) {
  const auto l = lower(cell);
  return l.empty() || l == "na" || l == "nan" || l == "-" || l == "null";
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_int(const std::string& s) {
  const auto v = parse_double(s);
  if (!v || *v != std::floor(*v) || std::abs(*v) > 1e9) return std::nullopt;
  return static_cast<int>(*v);
}

}  // namespace

IngestResult ingest_text(std::string_view text, const IngestOptions& options) {
  std::vector<std::string> lines;
  {
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      lines.push_back(line);
    }
  }
  if (lines.empty()) throw InputError("ingest: input is empty");

  bool csv = options.format == TableFormat::Csv;
  if (options.format == TableFormat::Auto) csv = lines.front().find(',') != std::string::npos;

  const auto header = split(lines.front(), csv);
  std::optional<std::size_t> year_col;
  std::optional<std::size_t> value_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto h = lower(header[i]);
    if (h == lower(options.year_column)) year_col = i;
    if (h == lower(options.value_column)) value_col = i;
  }
  if (!year_col) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(header[i]).find("year") != std::string::npos && i != value_col) {
        year_col = i;
        break;
      }
    }
  }
  if (!value_col) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i != year_col && !parse_double(header[i])) {
        value_col = i;
        break;
      }
    }
  }
  if (!value_col) {
    throw InputError("ingest: header row has no value column (expected '" + options.value_column +
                     "')");
  }

  IngestResult out;
  std::vector<double> values;
  std::vector<int> years;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = split(lines[li], csv);
    const auto row = std::to_string(li + 1);
    const std::size_t need = std::max(*value_col, year_col.value_or(0)) + 1;
    if (cells.size() < need) {
      ++out.skipped_bad;
      out.warnings.push_back("line " + row + ": too few columns");
      continue;
    }
    if (is_missing(cells[*value_col])) {
      ++out.skipped_missing;
      out.warnings.push_back("line " + row + ": missing value skipped");
      continue;
    }
    const auto v = parse_double(cells[*value_col]);
    std::optional<int> y;
    if (year_col) y = parse_int(cells[*year_col]);
    if (!v || (year_col && !y)) {
      ++out.skipped_bad;
      out.warnings.push_back("line " + row + ": unparseable row skipped");
      continue;
    }
    values.push_back(*v);
    if (y) years.push_back(*y);
  }
  if (out.skipped_bad > options.max_bad) {
    throw InputError("ingest: " + std::to_string(out.skipped_bad) +
                     " malformed rows exceed --max-bad=" + std::to_string(options.max_bad));
  }
  if (values.empty()) throw InputError("ingest: no data rows");
  out.sample = MaximaSample(std::move(values),
                            year_col ? std::optional<std::vector<int>>(std::move(years))
                                     : std::nullopt);
  out.sample.validate();
  return out;
}

IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("ingest: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ingest_text(ss.str(), options);
}

std::string write_table(const MaximaSample& sample, int first_year) {
  std::ostringstream os;
  os << "Year data\n";
  char buf[32];
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const int year = sample.years ? (*sample.years)[i] : first_year + static_cast<int>(i);
    std::snprintf(buf, sizeof buf, "%.10g", sample.values[i]);
    os << year << ' ' << buf << '\n';
  }
  return os.str();
}

}  // namespace gevstat
