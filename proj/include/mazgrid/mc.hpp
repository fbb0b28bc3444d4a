#pragma once

#include <map>

#include "mazgrid/field.hpp"
#include "mazgrid/grid.hpp"
#include "mazgrid/metric.hpp"

namespace mazgrid {

struct WalkConfig {
    long long n_walks = 100000;
    uint64_t rng_seed = 1;
    long long max_steps = 10000000;
    int threads = 0; // 0: hardware default
};

struct MCEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long n_absorbed = 0;
    long long n_timeout = 0;
    std::map<int, long long> anchor_hits;     // absorption anchor -> count
    std::map<int, long long> maz_point_hits;  // split-boundary side -> count (Maz data only)
};

/// Boundary data for the walk: either one value per boundary vertex, or
/// one value per Mazurkiewicz point (the side is picked by the local
/// component of the walk's last open cell).
struct WalkData {
    const std::map<int, double>* anchor_values = nullptr;
    const MazBoundary* maz = nullptr;
    const std::vector<double>* point_values = nullptr;
};

/// Simple symmetric 4-neighbor walk; the first attempted step into a closed
/// cell absorbs at that boundary vertex.
MCEstimate harmonic_measure_mc(const GridDomain& dom, int start, const WalkData& data,
                               const WalkConfig& cfg);

struct CrosscheckRow {
    int probe;
    double solver_value;
    double mc_mean;
    double mc_stderr;
    bool pass;
};

struct CrosscheckReport {
    std::vector<CrosscheckRow> rows;
    bool all_pass = true;
};

/// |solution(probe) - MC mean| <= 3 stderr + slack at every probe (p = 2).
CrosscheckReport mc_crosscheck(const GridDomain& dom, const WalkData& data, const ScalarField& solution,
                               const std::vector<int>& probes, const WalkConfig& cfg,
                               double slack = 0.02);

} // namespace mazgrid
