#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mazgrid/errors.hpp"
#include "mazgrid/geometry.hpp"

namespace mazgrid {

/// Uniform cell grid covering a rectangle. Cell (i,j) is the square
/// [x0+i*h, x0+(i+1)*h] x [y0+j*h, y0+(j+1)*h]; its center is
/// (x0+(i+1/2)h, y0+(j+1/2)h).
struct GridSpec {
    double x0 = 0.0, y0 = 0.0;
    double h = 1.0;
    int nx = 1, ny = 1;

    int cell(int i, int j) const { return j * nx + i; }
    int ci(int c) const { return c % nx; }
    int cj(int c) const { return c / nx; }
    Vec2 center(int c) const { return {x0 + (ci(c) + 0.5) * h, y0 + (cj(c) + 0.5) * h}; }
    Box2 cell_box(int c) const {
        double x = x0 + ci(c) * h, y = y0 + cj(c) * h;
        return {{x, y}, {x + h, y + h}};
    }
    bool valid(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    long long ncells() const { return (long long)nx * ny; }
    // cell containing point p; points on a grid line go to the right/upper cell
    int locate(Vec2 p) const {
        int i = (int)std::floor((p.x - x0) / h);
        int j = (int)std::floor((p.y - y0) / h);
        i = std::max(0, std::min(nx - 1, i));
        j = std::max(0, std::min(ny - 1, j));
        return cell(i, j);
    }
};

enum class WeightMode { Lebesgue, RadialInv };

enum class RecipeKind {
    Square,
    Rectangle,
    SlitDisc,
    Cusp,
    Comb,
    ThickComb,
    DoubleComb,
    CountableComb,
    CantorArcs,
    CantorThick,
    CantorSquare,
    CustomMask,
};

const char* recipe_name(RecipeKind k);
RecipeKind recipe_from_name(const std::string& name);

/// Named domain generator plus its parameters. Parameters not set fall back
/// to resolution-dependent defaults recorded in GridDomain::truncation_note().
struct DomainRecipe {
    RecipeKind kind = RecipeKind::Square;
    std::map<std::string, double> params; // beta, depth, generation, arc_generation, c_rule, c0, ...
    WeightMode weight = WeightMode::Lebesgue;

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
    bool has(const std::string& key) const { return params.count(key) > 0; }
};

/// Sorted set of cell ids of one owning domain. `anchors` optionally lists
/// boundary vertices (closed cells adjacent to the open set).
struct CellSet {
    std::vector<int> cells;   // open cells, sorted, unique
    std::vector<int> anchors; // boundary vertices, sorted, unique

    bool empty() const { return cells.empty() && anchors.empty(); }
    size_t size() const { return cells.size(); }
};

/// Immutable grid discretization of a bounded planar open set.
/// Open cells carry a strictly positive measure weight; closed cells separate.
/// 4-neighbor adjacency is used for topology, 8-neighbor (with corner-cut
/// protection) for distances and gradients.
class GridDomain {
public:
    GridDomain(GridSpec spec, std::vector<uint8_t> open, WeightMode wmode,
               std::optional<DomainRecipe> recipe = std::nullopt,
               std::string truncation_note = "");

    const GridSpec& spec() const { return spec_; }
    double h() const { return spec_.h; }
    int nx() const { return spec_.nx; }
    int ny() const { return spec_.ny; }
    long long ncells() const { return spec_.ncells(); }

    bool is_open(int c) const { return open_[c] != 0; }
    bool is_open(int i, int j) const { return spec_.valid(i, j) && open_[spec_.cell(i, j)] != 0; }
    double weight(int c) const { return weight_[c]; }
    Vec2 center(int c) const { return spec_.center(c); }

    const std::vector<int>& open_cells() const { return open_list_; }
    int n_open() const { return (int)open_list_.size(); }
    /// compact index of an open cell (-1 for closed cells)
    int compact(int c) const { return compact_[c]; }

    /// 4-neighbors that are open; returns count, fills nb[0..3]
    int neighbors4(int c, int nb[4]) const;
    /// 8-neighbors that are open. Diagonal steps are admitted only when at
    /// least one of the two shared orthogonal cells is open (no corner
    /// cutting through wall corners). Fills nb[] and edge lengths len[].
    int neighbors8(int c, int nb[8], double len[8]) const;

    /// closed cells 4-adjacent to at least one open cell
    const std::vector<int>& boundary_vertices() const;
    bool is_boundary_vertex(int c) const;

    /// open cell nearest to p (error if none within one cell of p... searches globally)
    int nearest_open(Vec2 p) const;

    const std::optional<DomainRecipe>& recipe() const { return recipe_; }
    const std::string& truncation_note() const { return trunc_note_; }
    WeightMode weight_mode() const { return wmode_; }

    double total_measure() const { return total_measure_; }

private:
    GridSpec spec_;
    std::vector<uint8_t> open_;
    std::vector<double> weight_;
    std::vector<int> open_list_;
    std::vector<int> compact_;
    WeightMode wmode_;
    std::optional<DomainRecipe> recipe_;
    std::string trunc_note_;
    double total_measure_ = 0.0;
    mutable std::vector<int> boundary_cache_;
    mutable std::vector<uint8_t> boundary_mask_;
    void build_boundary() const;
};

/// Measure of a cell subset (all open cells when `cells` is null).
double domain_measure(const GridDomain& dom, const CellSet* cells = nullptr);

/// 4-connected components of the open set (restricted to `restrict` if given),
/// largest first.
std::vector<CellSet> components(const GridDomain& dom, const CellSet* restrict_to = nullptr);

/// Component labels for all open cells; returns number of components.
int label_components(const GridDomain& dom, std::vector<int>& label);

} // namespace mazgrid
