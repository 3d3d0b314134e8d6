#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace netcompress::cli {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

/// Writes a header row then comma-separated rows. Throws std::runtime_error
/// when the file cannot be opened or written.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

/// Reads a numeric CSV written by CsvWriter.
CsvTable read_csv(const std::string& path);

}  // namespace netcompress::cli
