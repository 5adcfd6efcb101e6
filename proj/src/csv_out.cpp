#include "nsx/csv_out.hpp"

#include <charconv>
#include <cmath>

#include "nsx/errors.hpp"

namespace nsx {

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_cell(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

CsvWriter::CsvWriter(const std::filesystem::path& path, const Provenance& provenance,
                     const std::vector<std::string>& header)
    : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw FormatError("cannot write " + path.string());
  for (const auto& [k, v] : provenance) out_ << "# " << k << '=' << v << '\n';
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  out_ << line;
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw FormatError("write failed: " + path_.string());
}

std::vector<std::string> csv_body(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace nsx
