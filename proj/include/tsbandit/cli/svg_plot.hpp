#pragma once

#include <string>
#include <vector>

#include "tsbandit/cli/csv.hpp"

namespace tsb::cli {

// Regret curves, one series per experiment_id in order of first appearance:
// mean cumulative regret against t (log-scaled when the checkpoints span a
// decade or more) with a shaded 95% band and a legend. Self-contained SVG.
std::string render_regret_svg(const std::vector<OutputRecord>& records,
                              const std::string& title = "Mean cumulative regret");

}  // namespace tsb::cli
