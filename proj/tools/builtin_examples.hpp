#pragma once

#include <string>
#include <vector>

#include "classeq/report.hpp"

namespace classeq::tools {

std::vector<std::string> builtin_example_names();

/// Runs one bundled reproduction, filling the report with computed-vs-reference
/// cells. Optionally writes the shaded-density CSV (x, pdf, comply flag per
/// panel) for the fixed-reward examples and the outcome table CSV otherwise.
/// Returns the process exit status (0 ok, 4 when a reference cell fails).
int run_builtin_example(const std::string& name, RunReport& report,
                        const std::string& csv_path);

}  // namespace classeq::tools
