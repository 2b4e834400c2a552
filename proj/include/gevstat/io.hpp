#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gevstat/distributions.hpp"

namespace gevstat {

enum class TableFormat { Auto, Whitespace, Csv };

struct IngestOptions {
  TableFormat format = TableFormat::Auto;
  // Header names (case-insensitive). When not found, any header containing
  // "year" is taken as the year column and the first other column as values.
  std::string year_column = "Year";
  std::string value_column = "data";
  // Malformed rows tolerated before the file is rejected.
  std::size_t max_bad = 5;
};

struct IngestResult {
  MaximaSample sample;
  std::size_t skipped_missing = 0;  // NA / empty value cells
  std::size_t skipped_bad = 0;      // unparseable rows
  std::vector<std::string> warnings;
};

// Parses a header table of block maxima. Throws InputError on a missing header,
// too many malformed rows, an empty result, or non-increasing years.
[[nodiscard]] IngestResult ingest_text(std::string_view text, const IngestOptions& options = {});
[[nodiscard]] IngestResult ingest(const std::filesystem::path& path,
                                  const IngestOptions& options = {});

// Two-column whitespace table "Year data" (years start at first_year when the
// sample has none).
[[nodiscard]] std::string write_table(const MaximaSample& sample, int first_year = 1);

}  // namespace gevstat
