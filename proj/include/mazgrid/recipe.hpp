#pragma once

#include "mazgrid/grid.hpp"

namespace mazgrid {

/// Discretize a recipe at cell size h. Open cells are the cells whose closed
/// square lies inside the closure of the recipe's outer region and which do
/// not meet a wall; measure-zero slits become one-cell-thick closed walls
/// centered on the slit line. Countable slit/arc families are truncated at a
/// finite depth (explicit parameter or resolution-dependent default); the
/// realized truncation is recorded in GridDomain::truncation_note().
GridDomain gen_domain(const DomainRecipe& recipe, double h);

/// Re-run the generator at h/2 (defaults for truncation depths are
/// re-derived; explicitly given parameters are kept).
GridDomain refine(const GridDomain& dom);

/// Resolution-dependent default truncation depths.
int default_comb_depth(double h);          // slits 2^-j, j = 0..J
int default_cantor_generation(double h, int c_rule, double c0);
int default_arc_generation(double h);      // nested arc families n = 1..N

/// Cantor interval bookkeeping: c_n sequence and interval length alpha_n.
double cantor_cn(int n, int c_rule, double c0);
double cantor_alpha(int n, int c_rule, double c0);

/// Intervals of the n-th Cantor generation (each of length alpha_n).
std::vector<double> cantor_interval_starts(int n, int c_rule, double c0);

} // namespace mazgrid
