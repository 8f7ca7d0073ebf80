#include "maxstab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "maxstab/errors.hpp"

namespace maxstab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_grid_csv(const Grid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw numeric_error("write_grid_csv: cannot open " + path.string());
  for (int a = 0; a < grid.dim(); ++a) out << (a ? "," : "") << "x" << (a + 1);
  out << "\n";
  for (int i = 0; i < grid.size(); ++i) {
    for (int a = 0; a < grid.dim(); ++a)
      out << (a ? "," : "") << format_double(grid.points()(i, a));
    out << "\n";
  }
  if (!out) throw numeric_error("write_grid_csv: write failed for " + path.string());
}

Grid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw numeric_error("read_grid_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw contract_error("read_grid_csv: empty file");
  int dim = 1;
  for (char c : line)
    if (c == ',') ++dim;
  std::vector<double> values;
  long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    int got = 0;
    while (std::getline(ls, cell, ',')) {
      values.push_back(std::stod(cell));
      ++got;
    }
    if (got != dim) throw contract_error("read_grid_csv: ragged row in " + path.string());
    ++rows;
  }
  if (rows == 0) throw contract_error("read_grid_csv: no points in " + path.string());
  Eigen::MatrixXd points(rows, dim);
  for (long i = 0; i < rows; ++i)
    for (int a = 0; a < dim; ++a) points(i, a) = values[static_cast<std::size_t>(i * dim + a)];
  return Grid(std::move(points), path.stem().string());
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw contract_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  std::ofstream out(path_);
  if (out) out << buffer_;
}

}  // namespace maxstab
