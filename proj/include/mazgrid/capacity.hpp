#pragma once

#include <optional>

#include "mazgrid/field.hpp"
#include "mazgrid/grid.hpp"
#include "mazgrid/metric.hpp"
#include "mazgrid/rational.hpp"

namespace mazgrid {

/// The five capacity variants: Sobolev capacity w.r.t. an ambient box, the
/// two closure capacities (full measure / measure vanishing on the boundary),
/// and the relative capacity seen from inside the open set, with or without
/// Mazurkiewicz side selection.
enum class CapTag { AMBIENT, CLOSURE_MU, CLOSURE_MU0, BAR, BAR_MAZ };

const char* cap_tag_name(CapTag t);

struct CapacityVariant {
    CapTag tag = CapTag::BAR;
    double ambient_pad = 0.5; // padding (in length units) of the ambient box
};

/// E in the closed domain: interior open cells, boundary vertices, and (for
/// BAR_MAZ with side selection) Mazurkiewicz point indices.
struct TargetSet {
    std::vector<int> interior;   // open cells
    std::vector<int> anchors;    // boundary vertices
    std::vector<int> maz_points; // indices into a MazBoundary (BAR_MAZ only)

    bool empty() const { return interior.empty() && anchors.empty() && maz_points.empty(); }
};

struct CapacityOptions {
    double tol = 1e-8;  // relative objective decrement
    int max_iter = 20000;
    std::optional<std::vector<double>> init; // warm start over the variant's graph vertices
};

struct CapacityEstimate {
    CapTag tag = CapTag::BAR;
    double value = 0.0;
    int iterations = 0;
    double final_rel_decrement = 0.0;
    bool converged = false;
    // minimizer over the variant's ground graph
    std::vector<int> graph_cells;     // grid cell ids (ambient graph uses its own spec)
    std::vector<double> minimizer;    // one value per graph cell
    GridSpec graph_spec;
    /// restriction of the minimizer to the domain's open cells
    ScalarField restrict_to(const GridDomain& dom) const;
};

CapacityEstimate estimate_capacity(const GridDomain& dom, const TargetSet& E, double p,
                                   const CapacityVariant& variant, const CapacityOptions& opts = {},
                                   const MazBoundary* maz = nullptr);

struct CapacityChainReport {
    double ambient = 0.0, closure_mu = 0.0, closure_mu0 = 0.0, bar = 0.0, bar_maz = 0.0;
    bool ok_barmaz_le_bar = false;
    bool ok_bar_le_mu0 = false;
    bool ok_mu0_le_mu = false;
    bool ok_mu_le_ambient = false;
    bool ok_bar_le_ambient = false;
    double fiber_equality_rel = 0.0; // |bar_maz - bar| / max(bar, eps)
    bool ok_fiber_equality = false;
};

/// Runs all five variants on E (warm-starting each from the previous one so
/// the reported values inherit the nesting of the admissible classes) and
/// checks the comparison chain.
CapacityChainReport compare_capacities(const GridDomain& dom, const TargetSet& E, double p,
                                       const MazBoundary* maz = nullptr,
                                       const CapacityOptions& opts = {});

enum class WitnessName { CuspUR, CombHk, CantorUn, CantorVk };

WitnessName witness_from_name(const std::string& s);

struct WitnessResult {
    double closed_form = 0.0; // analytic value or bound
    double grid_value = 0.0;  // discrete evaluation
};

/// Closed-form witness energies/bounds and their grid evaluations:
///  - cusp_uR: gradient energy of max{1-x/R,0}; closed form R^(beta+1-p)/(beta+1)
///  - comb_hk: gradient energy of the comb tail witness; closed form 3(2/3)^k
///    (each tooth strip is evaluated on its own proportionally refined local
///    grid so the series tail is resolved at fixed cost)
///  - cantor_un / cantor_vk: Newtonian-norm bounds 16 2^n c_n^(1/p) and their
///    tail sums; grid value is the sampled witness norm
WitnessResult evaluate_witness(WitnessName name, const std::map<std::string, double>& params, double p);

/// Exact area bookkeeping for the deep Cantor set: partial sums of
/// (3/4)^(m-k) * 1/4 for m = k..M, which telescope to 1 as M grows.
Rational lambda2_partial_sum(int k, int M);

/// Witness-norm bound table 16 * 2^(n - n^2/p) for c_n = 2^(-n^2).
std::vector<double> cantor_witness_bounds(int n_max, double p);

} // namespace mazgrid
