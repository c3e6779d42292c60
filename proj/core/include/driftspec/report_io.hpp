#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace driftspec {

/// Numeric table; one CSV row per entry of `rows`.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

using MetaValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>,
                               std::vector<std::string>>;
using MetaList = std::vector<std::pair<std::string, MetaValue>>;

/// Everything a job writes: the table plus metadata, the config echo and
/// the list of failed checks. Key order is preserved in the JSON output.
struct JobReport {
  std::string kind;
  std::string version;
  MetaList config;
  Table table;
  MetaList metadata;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Header line plus one line per row, numbers as %.17g.
std::string format_csv(const Table& t);

/// Pretty-printed JSON (2-space indent, trailing newline). Doubles use the
/// shortest representation that parses back to the same value.
std::string format_json(const JobReport& r);

/// Inverse of format_json; throws IoError on malformed input.
JobReport parse_json_report(std::string_view text);

/// Throw IoError when the file cannot be written.
void write_csv(const Table& t, const std::filesystem::path& path);
void write_json(const JobReport& r, const std::filesystem::path& path);

}  // namespace driftspec
