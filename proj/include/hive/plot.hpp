#pragma once

#include "hive/regime.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace hive {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static SVG line chart with auto-scaled axes.
void write_line_plot_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<Series>& series);

/// Colored cell map of a regime sweep.
void write_regime_svg(std::ostream& out, const RegimeGrid& grid);

} // namespace hive
