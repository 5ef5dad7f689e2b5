#pragma once

#include <string>

#include "onegan/harness/csv.hpp"

namespace onegan {

struct PlotOptions {
  int width = 760;
  int height = 500;
  std::string x_label = "n (observations)";
  std::string y_label = "‖AAᵀ − Z*‖_F";
};

// Renders a sweep summary (columns d, n, mean_rec_err, std_rec_err) as a
// deterministic SVG: one polyline per distinct d and one +/-1 std band
// polygon per line, log-scaled n axis. No timestamps or environment state
// enter the output, so identical input gives identical bytes.
void write_sweep_plot(const CsvTable& summary, const std::string& path,
                      const PlotOptions& opts = {});

}  // namespace onegan
