#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "maxstab/domain.hpp"

namespace maxstab {

/// Floats are written with 17 significant digits so round trips and
/// byte-comparisons are exact.
std::string format_double(double x);

/// Grid CSV: header "x1,...,xd", one point per row.
void write_grid_csv(const Grid& grid, const std::filesystem::path& path);
Grid read_grid_csv(const std::filesystem::path& path);

/// Minimal rectangular CSV writer used for all emitted tables.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);

 private:
  std::string buffer_;
  std::filesystem::path path_;
  std::size_t columns_;
};

}  // namespace maxstab
