#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nsx {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);
/// format_double, or "NA" when absent.
std::string format_cell(const std::optional<double>& v);

using Provenance = std::vector<std::pair<std::string, std::string>>;

/// CSV file with a leading block of "# key=value" comment lines. The body
/// (everything after the comments) is a pure function of the rows written.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Provenance& provenance,
            const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Lines of a CSV file after dropping "# " comment lines.
std::vector<std::string> csv_body(const std::filesystem::path& path);

}  // namespace nsx
