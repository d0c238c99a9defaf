#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "consensus/types.hpp"

namespace consensus::cli {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,         ///< bad flags or out-of-domain values
    kExitUnattainable = 3,  ///< plan target cannot be met
};

/// Parses "count@p[,count@p...]", e.g. "3@0.9,2@0.6".
Ensemble parse_classes(std::string_view text);

/// Runs the command line and writes the report to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace consensus::cli
