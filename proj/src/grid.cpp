#include "mazgrid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace mazgrid {

const char* recipe_name(RecipeKind k) {
    switch (k) {
        case RecipeKind::Square: return "square";
        case RecipeKind::Rectangle: return "rectangle";
        case RecipeKind::SlitDisc: return "slit_disc";
        case RecipeKind::Cusp: return "cusp";
        case RecipeKind::Comb: return "comb";
        case RecipeKind::ThickComb: return "thick_comb";
        case RecipeKind::DoubleComb: return "double_comb";
        case RecipeKind::CountableComb: return "countable_comb";
        case RecipeKind::CantorArcs: return "cantor_arcs";
        case RecipeKind::CantorThick: return "cantor_thick";
        case RecipeKind::CantorSquare: return "cantor_square";
        case RecipeKind::CustomMask: return "custom_mask";
    }
    return "unknown";
}

RecipeKind recipe_from_name(const std::string& name) {
    static const std::map<std::string, RecipeKind> table = {
        {"square", RecipeKind::Square},
        {"rectangle", RecipeKind::Rectangle},
        {"slit_disc", RecipeKind::SlitDisc},
        {"cusp", RecipeKind::Cusp},
        {"comb", RecipeKind::Comb},
        {"thick_comb", RecipeKind::ThickComb},
        {"double_comb", RecipeKind::DoubleComb},
        {"countable_comb", RecipeKind::CountableComb},
        {"cantor_arcs", RecipeKind::CantorArcs},
        {"cantor_thick", RecipeKind::CantorThick},
        {"cantor_square", RecipeKind::CantorSquare},
        {"custom_mask", RecipeKind::CustomMask},
    };
    auto it = table.find(name);
    if (it == table.end()) raise(Errc::BadParams, "unknown recipe name '" + name + "'");
    return it->second;
}

GridDomain::GridDomain(GridSpec spec, std::vector<uint8_t> open, WeightMode wmode,
                       std::optional<DomainRecipe> recipe, std::string truncation_note)
    : spec_(spec),
      open_(std::move(open)),
      wmode_(wmode),
      recipe_(std::move(recipe)),
      trunc_note_(std::move(truncation_note)) {
    if ((long long)open_.size() != spec_.ncells()) raise(Errc::BadParams, "mask size mismatch");
    if (spec_.h <= 0.0) raise(Errc::BadParams, "cell size must be positive");
    compact_.assign(open_.size(), -1);
    weight_.assign(open_.size(), 0.0);
    double h2 = spec_.h * spec_.h;
    for (int c = 0; c < (int)open_.size(); ++c) {
        if (!open_[c]) continue;
        compact_[c] = (int)open_list_.size();
        open_list_.push_back(c);
        double w = h2;
        if (wmode_ == WeightMode::RadialInv) {
            double r = norm(spec_.center(c));
            w = h2 / std::max(r, 0.5 * spec_.h);
        }
        weight_[c] = w;
        total_measure_ += w;
    }
    if (open_list_.empty()) raise(Errc::BadParams, "domain has no open cells");
}

int GridDomain::neighbors4(int c, int nb[4]) const {
    int i = spec_.ci(c), j = spec_.cj(c);
    int n = 0;
    if (is_open(i - 1, j)) nb[n++] = c - 1;
    if (is_open(i + 1, j)) nb[n++] = c + 1;
    if (is_open(i, j - 1)) nb[n++] = c - spec_.nx;
    if (is_open(i, j + 1)) nb[n++] = c + spec_.nx;
    return n;
}

int GridDomain::neighbors8(int c, int nb[8], double len[8]) const {
    int i = spec_.ci(c), j = spec_.cj(c);
    int n = 0;
    const double h = spec_.h, hd = spec_.h * M_SQRT2;
    if (is_open(i - 1, j)) { nb[n] = c - 1; len[n++] = h; }
    if (is_open(i + 1, j)) { nb[n] = c + 1; len[n++] = h; }
    if (is_open(i, j - 1)) { nb[n] = c - spec_.nx; len[n++] = h; }
    if (is_open(i, j + 1)) { nb[n] = c + spec_.nx; len[n++] = h; }
    auto diag = [&](int di, int dj) {
        if (!is_open(i + di, j + dj)) return;
        if (!is_open(i + di, j) && !is_open(i, j + dj)) return; // corner cut
        nb[n] = c + dj * spec_.nx + di;
        len[n++] = hd;
    };
    diag(-1, -1);
    diag(1, -1);
    diag(-1, 1);
    diag(1, 1);
    return n;
}

void GridDomain::build_boundary() const {
    if (!boundary_mask_.empty()) return;
    boundary_mask_.assign(open_.size(), 0);
    for (int c : open_list_) {
        int i = spec_.ci(c), j = spec_.cj(c);
        const int di[4] = {-1, 1, 0, 0};
        const int dj[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
            int ii = i + di[k], jj = j + dj[k];
            if (!spec_.valid(ii, jj)) continue;
            int cc = spec_.cell(ii, jj);
            if (!open_[cc]) boundary_mask_[cc] = 1;
        }
    }
    for (int c = 0; c < (int)open_.size(); ++c)
        if (boundary_mask_[c]) boundary_cache_.push_back(c);
}

const std::vector<int>& GridDomain::boundary_vertices() const {
    build_boundary();
    return boundary_cache_;
}

bool GridDomain::is_boundary_vertex(int c) const {
    build_boundary();
    return boundary_mask_[c] != 0;
}

int GridDomain::nearest_open(Vec2 p) const {
    int c0 = spec_.locate(p);
    if (is_open(c0)) return c0;
    // spiral out
    int i0 = spec_.ci(c0), j0 = spec_.cj(c0);
    int best = -1;
    double bestd = 0.0;
    for (int ring = 1; ring < std::max(spec_.nx, spec_.ny); ++ring) {
        for (int dj = -ring; dj <= ring; ++dj)
            for (int di = -ring; di <= ring; ++di) {
                if (std::max(std::abs(di), std::abs(dj)) != ring) continue;
                if (!is_open(i0 + di, j0 + dj)) continue;
                int c = spec_.cell(i0 + di, j0 + dj);
                double d = dist(spec_.center(c), p);
                if (best < 0 || d < bestd) { best = c; bestd = d; }
            }
        if (best >= 0) return best;
    }
    raise(Errc::InvalidCell, "no open cell near requested point");
}

double domain_measure(const GridDomain& dom, const CellSet* cells) {
    if (!cells) return dom.total_measure();
    double s = 0.0;
    for (int c : cells->cells) {
        if (!dom.is_open(c)) raise(Errc::InvalidCell, "cell not in open set");
        s += dom.weight(c);
    }
    return s;
}

int label_components(const GridDomain& dom, std::vector<int>& label) {
    label.assign(dom.ncells(), -1);
    int ncomp = 0;
    std::deque<int> q;
    for (int seed : dom.open_cells()) {
        if (label[seed] >= 0) continue;
        label[seed] = ncomp;
        q.push_back(seed);
        while (!q.empty()) {
            int c = q.front();
            q.pop_front();
            int nb[4];
            int n = dom.neighbors4(c, nb);
            for (int k = 0; k < n; ++k)
                if (label[nb[k]] < 0) {
                    label[nb[k]] = ncomp;
                    q.push_back(nb[k]);
                }
        }
        ++ncomp;
    }
    return ncomp;
}

std::vector<CellSet> components(const GridDomain& dom, const CellSet* restrict_to) {
    std::vector<uint8_t> in(dom.ncells(), 0);
    std::vector<int> universe;
    if (restrict_to) {
        for (int c : restrict_to->cells) {
            if (!dom.is_open(c)) raise(Errc::InvalidCell, "restricted cell not open");
            in[c] = 1;
        }
        universe = restrict_to->cells;
    } else {
        universe = dom.open_cells();
        for (int c : universe) in[c] = 1;
    }
    std::vector<int> label(dom.ncells(), -1);
    std::vector<CellSet> out;
    std::deque<int> q;
    for (int seed : universe) {
        if (label[seed] >= 0) continue;
        CellSet comp;
        label[seed] = (int)out.size();
        q.push_back(seed);
        while (!q.empty()) {
            int c = q.front();
            q.pop_front();
            comp.cells.push_back(c);
            int nb[4];
            int n = dom.neighbors4(c, nb);
            for (int k = 0; k < n; ++k) {
                int m = nb[k];
                if (in[m] && label[m] < 0) {
                    label[m] = (int)out.size();
                    q.push_back(m);
                }
            }
        }
        std::sort(comp.cells.begin(), comp.cells.end());
        out.push_back(std::move(comp));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const CellSet& a, const CellSet& b) { return a.cells.size() > b.cells.size(); });
    return out;
}

} // namespace mazgrid
