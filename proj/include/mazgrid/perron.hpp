#pragma once

#include "mazgrid/metric.hpp"
#include "mazgrid/solver.hpp"

namespace mazgrid {

/// One value per Mazurkiewicz boundary point (split anchors may carry a
/// different value on each side).
struct MazBoundaryData {
    std::vector<double> values; // indexed like MazBoundary::points

    static MazBoundaryData from_function(const GridDomain& dom, const MazBoundary& maz,
                                         const std::function<double(Vec2)>& f);
};

struct BoundaryLimitRow {
    int point = -1;
    double approach_value = 0.0;
    double data_value = 0.0;
    double gap = 0.0;
    bool pass = false;
};

struct PerronResult {
    ScalarField solution;
    SolveReport report;
    std::string method_note;
    std::vector<BoundaryLimitRow> diagnostics; // sampled points
};

/// Dirichlet solution with one-sided boundary values: each boundary point's
/// data is imposed on the open cells of its own local component. Resolutive
/// data makes this the common value of the Perron envelopes.
PerronResult perron_solve(const GridDomain& dom, const MazBoundary& maz, const MazBoundaryData& data,
                          double p, SolveOptions opts = {});

struct BoundaryLimitReport {
    std::vector<BoundaryLimitRow> rows;
    double pass_fraction = 0.0;
};

/// Approach values at dyadic distances 2h/4h/8h inside each point's local
/// component, linearly extrapolated to the boundary; a point passes when the
/// extrapolation lands within eps of its datum.
BoundaryLimitReport boundary_limit_report(const GridDomain& dom, const MazBoundary& maz,
                                          const PerronResult& result, const MazBoundaryData& data,
                                          const std::vector<int>& exceptional_points, double eps);

struct InvarianceReport {
    std::vector<double> resolutions;   // h values, strictly decreasing
    std::vector<double> sup_differences;
    bool decreasing = false;
};

/// Perturbation region given independently of resolution: anchors whose
/// centers satisfy the predicate get `perturb_value` added to their data.
InvarianceReport invariance_experiment(const DomainRecipe& recipe,
                                       const std::function<double(Vec2)>& f,
                                       const std::function<bool(Vec2)>& perturb_region,
                                       double perturb_value, double p,
                                       const std::vector<double>& resolutions,
                                       double exclusion_distance = 0.1, SolveOptions opts = {});

/// Boundary of `omega` seen inside the ambient domain G: anchors that are
/// also walls of G split according to G's local components; anchors interior
/// to G stay single points (both sides of an omega-only slit share a value).
MazBoundary build_generalized_boundary(const GridDomain& omega, const GridDomain& G,
                                       std::vector<double> radius_schedule = {});

PerronResult generalized_perron_solve(const GridDomain& omega, const GridDomain& G,
                                      const MazBoundaryData& data, double p, SolveOptions opts = {});

struct StabilityRow {
    double data_sup_diff = 0.0;
    double solution_sup_diff = 0.0;
    bool pass = false;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    bool all_pass = true;
};

/// Discrete contraction: sup|H f_j - H f| <= sup|f_j - f| + 1e-6.
StabilityReport uniform_stability_check(const GridDomain& dom, const MazBoundary& maz,
                                        const std::vector<MazBoundaryData>& f_seq,
                                        const MazBoundaryData& f_limit, double p,
                                        SolveOptions opts = {});

struct ComparisonCheck {
    bool boundary_ok = false;
    bool interior_ok = false;
    bool pass = false;
    double worst_boundary_margin = 0.0;
    double worst_interior_margin = 0.0;
};

/// Comparison principle test: u superharmonic, v subharmonic (certificates
/// checked on sample boxes), boundary ordering sampled at Maz points, then
/// v <= u + 1e-6 everywhere.
ComparisonCheck comparison_check(const GridDomain& dom, const ScalarField& u_super,
                                 const ScalarField& v_sub, const MazBoundary& maz, double p,
                                 const std::vector<Box2>& certificate_boxes, double margin = 1e-6);

} // namespace mazgrid
