#pragma once

#include "mazgrid/grid.hpp"

namespace mazgrid {

/// Certified bracket for the Mazurkiewicz distance between two open cells.
/// lo: largest probed radius at which the target stays unreachable inside the
/// ball around the source (any connected set containing the source with
/// diameter <= r lies in that ball). hi: smallest Euclidean diameter of an
/// explicit connecting path found so far.
struct DistInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct MazDistOptions {
    double tol = 0.0;   // stop when hi - lo <= max(tol, 4h)
    int max_probes = 48;
};

/// Shortest path length in the 8-neighbor weighted graph (h / h*sqrt2 edges).
double inner_distance(const GridDomain& dom, int a, int b);

/// Same, also returning one shortest path (cell ids from a to b).
double inner_distance_path(const GridDomain& dom, int a, int b, std::vector<int>& path);

DistInterval mazurkiewicz_distance(const GridDomain& dom, int a, int b, MazDistOptions opts = {});

/// Largest pairwise Euclidean distance of cell centers (convex hull based).
double set_diameter(const GridDomain& dom, const CellSet& cells);

struct LocalComponents {
    int total_count = 0;                 // all 4-components of open set in the closed ball
    std::vector<CellSet> at_anchor;      // those containing a cell 4-adjacent to the anchor
};

/// 4-components of { open cells with |center - anchor center| <= r }.
LocalComponents local_boundary_components(const GridDomain& dom, int anchor, double r);

/// One element of the split boundary: a local side of the domain at `anchor`.
struct MazBoundaryPoint {
    int anchor = -1;        // boundary vertex (closed cell adjacent to the open set)
    int component_id = 0;   // index within the anchor's fiber
    int representative = -1; // an open cell of the local component, 4-adjacent to anchor
    std::vector<int> adjacent_cells; // all open cells 4-adjacent to anchor in this component
};

struct MazAnchorInfo {
    bool stable = false;
    double stabilized_radius = 0.0;
    int resolved_components = 0; // max component count seen over the probe schedule
    std::vector<int> counts;     // total component count per schedule radius
};

/// Split boundary with the projection Phi (point -> anchor) realized by the
/// fiber map. Anchors whose local component counts never agree at two
/// consecutive probe radii are flagged unstable (the finite-connectedness
/// indicator at this resolution).
class MazBoundary {
public:
    std::vector<MazBoundaryPoint> points;
    std::vector<double> probe_radii; // decreasing
    // anchor cell -> point indices (fiber of Phi over that anchor)
    std::map<int, std::vector<int>> fibers;
    std::map<int, MazAnchorInfo> info;

    int phi(int point_index) const { return points[point_index].anchor; }
    const std::vector<int>& fiber(int anchor) const;
    bool stable(int anchor) const { return info.at(anchor).stable; }
    /// point of this anchor whose component contains `open_cell`, or -1
    int point_of_side(int anchor, int open_cell) const;
};

std::vector<double> default_probe_schedule(const GridDomain& dom);

MazBoundary build_maz_boundary(const GridDomain& dom, std::vector<double> radius_schedule = {});

} // namespace mazgrid
