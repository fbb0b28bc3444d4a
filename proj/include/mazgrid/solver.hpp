#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "mazgrid/field.hpp"
#include "mazgrid/grid.hpp"

namespace mazgrid {

struct SolveOptions {
    double tol = 1e-8;       // relative energy decrement per sweep
    double du_tol = 1e-13;   // max coordinate update, relative to data range
    int max_iter = 50000;    // sweeps
    std::string algorithm;   // "", "gs", "sor"
    int threads = 0;         // 0 = library default
    std::vector<double> init; // optional warm start (compact open indexing)
};

struct SolveReport {
    double final_energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double max_constraint_violation = 0.0;
    bool monotone_energy = true;
    double complementarity_residual = 0.0; // max 1-d stationarity residual off the active set
};

/// Dirichlet data indexed by boundary vertex (closed cell adjacent to the
/// open set). Values are imposed on the open cells 4-adjacent to each vertex;
/// a cell adjacent to several vertices gets their mean.
struct DirichletProblem {
    const GridDomain* dom = nullptr;
    double p = 2.0;
    std::map<int, double> boundary_data;
    SolveOptions opts;
};

struct ObstacleProblem {
    DirichletProblem base;
    std::optional<ScalarField> psi; // empty = no obstacle
};

/// Discrete p-energy used by the solver: sum over 4-neighbor edges (a,b) of
/// (w(a)+w(b))/2 * |u(a)-u(b)|^p / h^p. Its minimizers satisfy exact
/// discrete comparison and maximum principles (edgewise truncation argument).
double solver_energy(const GridDomain& dom, const ScalarField& u, double p);
void solver_energy_gradient(const GridDomain& dom, const ScalarField& u, double p,
                            std::vector<double>& grad);

std::pair<ScalarField, SolveReport> solve_dirichlet(const DirichletProblem& prob);
std::pair<ScalarField, SolveReport> solve_obstacle(const ObstacleProblem& prob);

/// Core solver: minimize the p-energy over fields with the given cells fixed
/// (fixed_mask/fixed_values by compact open index), optionally above an
/// obstacle. Used by the Dirichlet/obstacle wrappers and the Perron module.
std::pair<ScalarField, SolveReport> solve_with_fixed(const GridDomain& dom, double p,
                                                     const std::vector<uint8_t>& fixed_mask,
                                                     const std::vector<double>& fixed_values,
                                                     const std::optional<ScalarField>& psi,
                                                     const SolveOptions& opts);

/// Convenience: Dirichlet data from a function evaluated at anchor centers.
std::map<int, double> boundary_data_from(const GridDomain& dom, const std::function<double(Vec2)>& f);

struct PerturbationCheck {
    bool pass = false;
    double worst_margin = 0.0; // min over trials of E(u+phi)-E(u) (restricted)
    int trials = 0;
    uint64_t seed = 0;
};

/// Randomized superminimizer certificate: draws compactly supported
/// nonnegative cone bumps and checks the energy cannot be lowered.
/// both_signs additionally tests -phi (minimizer certificate).
PerturbationCheck check_superminimizer(const GridDomain& dom, const ScalarField& u, double p,
                                       int trials, uint64_t rng_seed, bool both_signs = false);

struct SuperharmonicCheck {
    bool pass = false;
    double worst_excess = 0.0; // max over boxes of max(solution - u)
    int boxes = 0;
};

/// For each box V compactly inside the open set, solves the Dirichlet problem
/// on V with data u on V's boundary ring and checks solution <= u + 1e-6.
SuperharmonicCheck check_superharmonic(const GridDomain& dom, const ScalarField& u, double p,
                                       const std::vector<Box2>& boxes, double slack = 1e-6);

} // namespace mazgrid
