#include "mottlab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "mottlab/errors.hpp"
#include "mottlab/parallel.hpp"

namespace mottlab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_csv(std::ostream& os, const CsvTable& table,
               const std::string& config_hash) {
  os << "# mottlab " << MOTTLAB_VERSION << " config_hash=" << config_hash << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << format_number(row[i]);
    }
    os << "\n";
  }
  for (const auto& n : table.notes) os << "# " << n << "\n";
}

CsvTable sweep(const std::vector<std::vector<double>>& axes,
               const std::vector<std::string>& header, int jobs,
               const SweepKernel& kernel) {
  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& a : axes) total *= a.size();
  CsvTable t;
  t.header = header;
  t.rows.assign(total, {});
  std::vector<std::string> errors(total);

  parallel_for(total, jobs, [&](std::size_t flat) {
    std::vector<double> point(axes.size());
    std::size_t rem = flat;
    for (std::size_t a = axes.size(); a-- > 0;) {
      point[a] = axes[a][rem % axes[a].size()];
      rem /= axes[a].size();
    }
    try {
      t.rows[flat] = kernel(point);
    } catch (const Error& e) {
      std::vector<double> row(header.size(), std::numeric_limits<double>::quiet_NaN());
      for (std::size_t a = 0; a < point.size() && a < row.size(); ++a) row[a] = point[a];
      t.rows[flat] = row;
      errors[flat] = e.what();
    }
  });
  for (std::size_t i = 0; i < total; ++i) {
    if (!errors[i].empty()) {
      t.notes.push_back("flagged row " + std::to_string(i) + ": " + errors[i]);
      ++t.flagged;
    }
  }
  return t;
}

}  // namespace mottlab
