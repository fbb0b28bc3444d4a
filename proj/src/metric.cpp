#include "mazgrid/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace mazgrid {

namespace {

struct DijkstraItem {
    double d;
    int c;
    bool operator>(const DijkstraItem& o) const { return d > o.d; }
};

double dijkstra(const GridDomain& dom, int a, int b, std::vector<int>* parent_out) {
    if (!dom.is_open(a) || !dom.is_open(b)) raise(Errc::InvalidCell, "endpoints must be open cells");
    std::vector<double> dist_(dom.n_open(), std::numeric_limits<double>::infinity());
    std::vector<int> parent(parent_out ? dom.n_open() : 0, -1);
    std::priority_queue<DijkstraItem, std::vector<DijkstraItem>, std::greater<DijkstraItem>> pq;
    dist_[dom.compact(a)] = 0.0;
    pq.push({0.0, a});
    int nb[8];
    double len[8];
    while (!pq.empty()) {
        auto [d, c] = pq.top();
        pq.pop();
        int kc = dom.compact(c);
        if (d > dist_[kc] + 1e-15) continue;
        if (c == b) return d;
        int n = dom.neighbors8(c, nb, len);
        for (int t = 0; t < n; ++t) {
            int m = nb[t], km = dom.compact(m);
            double nd = d + len[t];
            if (nd < dist_[km] - 1e-15) {
                dist_[km] = nd;
                if (parent_out) parent[km] = c;
                pq.push({nd, m});
            }
        }
    }
    raise(Errc::Disconnected, "cells lie in different components");
}

} // namespace

double inner_distance(const GridDomain& dom, int a, int b) { return dijkstra(dom, a, b, nullptr); }

double inner_distance_path(const GridDomain& dom, int a, int b, std::vector<int>& path) {
    std::vector<int> parent(dom.n_open(), -1);
    // rerun with parents
    if (!dom.is_open(a) || !dom.is_open(b)) raise(Errc::InvalidCell, "endpoints must be open cells");
    std::vector<double> dist_(dom.n_open(), std::numeric_limits<double>::infinity());
    std::priority_queue<DijkstraItem, std::vector<DijkstraItem>, std::greater<DijkstraItem>> pq;
    dist_[dom.compact(a)] = 0.0;
    pq.push({0.0, a});
    int nb[8];
    double len[8];
    double result = -1.0;
    while (!pq.empty()) {
        auto [d, c] = pq.top();
        pq.pop();
        int kc = dom.compact(c);
        if (d > dist_[kc] + 1e-15) continue;
        if (c == b) {
            result = d;
            break;
        }
        int n = dom.neighbors8(c, nb, len);
        for (int t = 0; t < n; ++t) {
            int m = nb[t], km = dom.compact(m);
            double nd = d + len[t];
            if (nd < dist_[km] - 1e-15) {
                dist_[km] = nd;
                parent[km] = c;
                pq.push({nd, m});
            }
        }
    }
    if (result < 0) raise(Errc::Disconnected, "cells lie in different components");
    path.clear();
    for (int c = b; c != -1; c = parent[dom.compact(c)]) path.push_back(c);
    std::reverse(path.begin(), path.end());
    return result;
}

namespace {

// BFS restricted to the closed Euclidean ball around `center`; returns true if
// b was reached; fills the path (via parents) when asked.
bool ball_reach(const GridDomain& dom, int a, int b, Vec2 center, double r,
                std::vector<int>* path_out) {
    std::vector<int> parent(dom.n_open(), -2); // -2 unvisited, -1 root
    std::deque<int> q;
    if (dist(dom.center(a), center) > r || dist(dom.center(b), center) > r) return false;
    parent[dom.compact(a)] = -1;
    q.push_back(a);
    int nb[8];
    double len[8];
    while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        if (c == b) {
            if (path_out) {
                path_out->clear();
                for (int x = b; x != -1; x = parent[dom.compact(x)]) path_out->push_back(x);
                std::reverse(path_out->begin(), path_out->end());
            }
            return true;
        }
        int n = dom.neighbors8(c, nb, len);
        for (int t = 0; t < n; ++t) {
            int m = nb[t], km = dom.compact(m);
            if (parent[km] != -2) continue;
            if (dist(dom.center(m), center) > r) continue;
            parent[km] = c;
            q.push_back(m);
        }
    }
    return false;
}

double path_diameter(const GridDomain& dom, const std::vector<int>& path) {
    CellSet cs;
    cs.cells = path;
    std::sort(cs.cells.begin(), cs.cells.end());
    cs.cells.erase(std::unique(cs.cells.begin(), cs.cells.end()), cs.cells.end());
    return set_diameter(dom, cs);
}

} // namespace

DistInterval mazurkiewicz_distance(const GridDomain& dom, int a, int b, MazDistOptions opts) {
    if (!dom.is_open(a) || !dom.is_open(b)) raise(Errc::InvalidCell, "endpoints must be open cells");
    const double h = dom.h();
    Vec2 pa = dom.center(a);
    std::vector<int> path;
    inner_distance_path(dom, a, b, path); // throws Disconnected if needed
    double hi = path_diameter(dom, path);
    double lo = dist(pa, dom.center(b)); // diam E >= d(a,b) for any connected E containing both
    if (hi <= lo + 1e-15) return {lo, std::max(lo, hi)};
    // bisect the reachability threshold: unreachable inside B(a,r) certifies
    // d_M >= r, a connecting path certifies d_M <= its diameter
    double r_lo = lo, r_hi = hi;
    double gap_target = std::max(opts.tol, 4.0 * h);
    for (int it = 0; it < opts.max_probes && std::min(r_hi, hi) - r_lo > gap_target; ++it) {
        double r = 0.5 * (r_lo + std::min(r_hi, hi));
        std::vector<int> p;
        if (ball_reach(dom, a, b, pa, r, &p)) {
            r_hi = r;
            hi = std::min(hi, path_diameter(dom, p));
        } else {
            r_lo = r;
        }
    }
    lo = std::max(lo, r_lo);
    if (hi < lo) hi = lo;
    return {lo, hi};
}

double set_diameter(const GridDomain& dom, const CellSet& cells) {
    if (cells.cells.empty()) raise(Errc::EmptySet, "diameter of empty set");
    std::vector<Vec2> pts;
    pts.reserve(cells.cells.size());
    for (int c : cells.cells) pts.push_back(dom.center(c));
    if (pts.size() == 1) return 0.0;
    // monotone chain convex hull, then all hull pairs (hulls here are small)
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    auto cross = [](Vec2 o, Vec2 a, Vec2 b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Vec2> hull(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    double best = 0.0;
    for (size_t i = 0; i < hull.size(); ++i)
        for (size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, dist(hull[i], hull[j]));
    return best;
}

LocalComponents local_boundary_components(const GridDomain& dom, int anchor, double r) {
    if (r < 2.0 * dom.h() - 1e-12) raise(Errc::RadiusTooSmall, "probe radius under 2h");
    if (dom.is_open(anchor)) raise(Errc::InvalidCell, "anchor must be a closed cell");
    Vec2 pc = dom.center(anchor);
    const GridSpec& sp = dom.spec();
    int rad = (int)std::ceil(r / dom.h()) + 1;
    int i0 = sp.ci(anchor), j0 = sp.cj(anchor);
    // collect ball cells
    std::vector<int> ball;
    for (int dj = -rad; dj <= rad; ++dj)
        for (int di = -rad; di <= rad; ++di) {
            int i = i0 + di, j = j0 + dj;
            if (!dom.is_open(i, j)) continue;
            int c = sp.cell(i, j);
            if (dist(dom.center(c), pc) <= r + 1e-12) ball.push_back(c);
        }
    LocalComponents out;
    if (ball.empty()) return out;
    std::map<int, int> label; // cell -> component
    std::deque<int> q;
    std::vector<std::vector<int>> comps;
    for (int seed : ball) {
        if (label.count(seed)) continue;
        int id = (int)comps.size();
        comps.emplace_back();
        label[seed] = id;
        q.push_back(seed);
        while (!q.empty()) {
            int c = q.front();
            q.pop_front();
            comps[id].push_back(c);
            int nb[4];
            int n = dom.neighbors4(c, nb);
            for (int t = 0; t < n; ++t) {
                int m = nb[t];
                if (label.count(m)) continue;
                if (dist(dom.center(m), pc) > r + 1e-12) continue;
                label[m] = id;
                q.push_back(m);
            }
        }
    }
    out.total_count = (int)comps.size();
    // components adjacent to the anchor
    const int di4[4] = {-1, 1, 0, 0};
    const int dj4[4] = {0, 0, -1, 1};
    std::vector<int> adj_ids;
    for (int t = 0; t < 4; ++t) {
        int i = i0 + di4[t], j = j0 + dj4[t];
        if (!dom.is_open(i, j)) continue;
        auto it = label.find(sp.cell(i, j));
        if (it != label.end()) adj_ids.push_back(it->second);
    }
    std::sort(adj_ids.begin(), adj_ids.end());
    adj_ids.erase(std::unique(adj_ids.begin(), adj_ids.end()), adj_ids.end());
    for (int id : adj_ids) {
        CellSet cs;
        cs.cells = comps[id];
        std::sort(cs.cells.begin(), cs.cells.end());
        out.at_anchor.push_back(std::move(cs));
    }
    return out;
}

std::vector<double> default_probe_schedule(const GridDomain& dom) {
    double h = dom.h();
    return {32 * h, 16 * h, 8 * h, 4 * h};
}

const std::vector<int>& MazBoundary::fiber(int anchor) const {
    static const std::vector<int> empty;
    auto it = fibers.find(anchor);
    return it == fibers.end() ? empty : it->second;
}

int MazBoundary::point_of_side(int anchor, int open_cell) const {
    auto it = fibers.find(anchor);
    if (it == fibers.end()) return -1;
    for (int pi : it->second) {
        const auto& adj = points[pi].adjacent_cells;
        if (std::find(adj.begin(), adj.end(), open_cell) != adj.end()) return pi;
    }
    return -1;
}

MazBoundary build_maz_boundary(const GridDomain& dom, std::vector<double> radius_schedule) {
    if (radius_schedule.empty()) radius_schedule = default_probe_schedule(dom);
    std::sort(radius_schedule.begin(), radius_schedule.end(), std::greater<double>());
    if (radius_schedule.back() < 2.0 * dom.h() - 1e-12)
        raise(Errc::RadiusTooSmall, "schedule minimum under 2h");
    MazBoundary mb;
    mb.probe_radii = radius_schedule;
    const int R = (int)radius_schedule.size();
    const int di4[4] = {-1, 1, 0, 0};
    const int dj4[4] = {0, 0, -1, 1};
    for (int anchor : dom.boundary_vertices()) {
        MazAnchorInfo ai;
        ai.counts.resize(R);
        std::vector<LocalComponents> lc(R);
        for (int r = 0; r < R; ++r) {
            lc[r] = local_boundary_components(dom, anchor, radius_schedule[r]);
            ai.counts[r] = lc[r].total_count;
            ai.resolved_components = std::max(ai.resolved_components, lc[r].total_count);
        }
        // smallest radius whose count agrees with the next-smaller one
        // (schedule is descending, so scan pairs from the tail)
        int stab = -1;
        for (int r = R - 2; r >= 0; --r)
            if (ai.counts[r] == ai.counts[r + 1]) {
                stab = r + 1;
                break;
            }
        ai.stable = stab >= 0;
        int use = ai.stable ? stab : R - 1;
        ai.stabilized_radius = radius_schedule[use];
        const auto& sides = lc[use].at_anchor;
        std::vector<int> fiber_ids;
        int i0 = dom.spec().ci(anchor), j0 = dom.spec().cj(anchor);
        for (int s = 0; s < (int)sides.size(); ++s) {
            MazBoundaryPoint pt;
            pt.anchor = anchor;
            pt.component_id = s;
            for (int t = 0; t < 4; ++t) {
                int i = i0 + di4[t], j = j0 + dj4[t];
                if (!dom.is_open(i, j)) continue;
                int c = dom.spec().cell(i, j);
                if (std::binary_search(sides[s].cells.begin(), sides[s].cells.end(), c)) {
                    pt.adjacent_cells.push_back(c);
                    if (pt.representative < 0) pt.representative = c;
                }
            }
            fiber_ids.push_back((int)mb.points.size());
            mb.points.push_back(std::move(pt));
        }
        mb.fibers[anchor] = std::move(fiber_ids);
        mb.info[anchor] = std::move(ai);
    }
    return mb;
}

} // namespace mazgrid
