#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace mottlab {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  // flagged rows and warnings, as comments

  std::size_t flagged = 0;
};

std::string format_number(double v);

/// Writes the provenance comment, the header, the rows, then any notes.
void write_csv(std::ostream& os, const CsvTable& table,
               const std::string& config_hash);

/// Evaluates kernel(point) for every point of the Cartesian product of the
/// axes (first axis outermost). Rows stay in grid order whatever the
/// parallelism; a kernel error leaves a NaN row and a note.
using SweepKernel = std::function<std::vector<double>(const std::vector<double>&)>;

CsvTable sweep(const std::vector<std::vector<double>>& axes,
               const std::vector<std::string>& header, int jobs,
               const SweepKernel& kernel);

}  // namespace mottlab
