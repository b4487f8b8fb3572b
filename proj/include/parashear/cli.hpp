#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace parashear::cli {

/// Named numeric columns written as CSV with a header row.
struct PlotSeries {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes `series` to `path` with 17 significant digits. Throws Error on I/O failure.
void emit_plot_data(const PlotSeries& series, const std::filesystem::path& path);

/// Runs one experiment. `args` excludes the program name.
/// Returns 0 on pass, 1 on an experiment failure, 2 on a config error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parashear::cli
