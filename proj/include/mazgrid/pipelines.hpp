#pragma once

#include <map>
#include <string>

#include "mazgrid/io.hpp"

namespace mazgrid {

struct RunConfig {
    std::string example;
    std::map<std::string, double> overrides; // schema-checked per pipeline
    std::string recipe;                      // optional recipe override by name
    std::string out_dir = ".";
    uint64_t seed = 1;
    int threads = 0;
};

struct RunReport {
    json doc;
    bool all_pass = true;
    int exit_code = 0; // 0 pass, 1 assertion failed
};

const std::vector<std::string>& example_names();

/// Executes one named pipeline, writes <out_dir>/<name>.report.json plus any
/// CSV/PGM artifacts, and returns the in-memory report. Unknown names raise
/// Errc::UnknownExample; failed in-pipeline assertions set exit_code = 1 (the
/// report is still written).
RunReport run_example(const RunConfig& cfg);

} // namespace mazgrid
