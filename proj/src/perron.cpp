#include "mazgrid/perron.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mazgrid/recipe.hpp"

namespace mazgrid {

MazBoundaryData MazBoundaryData::from_function(const GridDomain& dom, const MazBoundary& maz,
                                               const std::function<double(Vec2)>& f) {
    MazBoundaryData d;
    d.values.resize(maz.points.size());
    for (size_t i = 0; i < maz.points.size(); ++i) d.values[i] = f(dom.center(maz.points[i].anchor));
    return d;
}

namespace {

void fixed_from_maz(const GridDomain& dom, const MazBoundary& maz, const MazBoundaryData& data,
                    std::vector<uint8_t>& fixed, std::vector<double>& fval) {
    if (data.values.size() != maz.points.size())
        raise(Errc::BadParams, "boundary data must value every Mazurkiewicz point");
    const int N = dom.n_open();
    fixed.assign(N, 0);
    fval.assign(N, 0.0);
    std::vector<int> hits(N, 0);
    for (size_t i = 0; i < maz.points.size(); ++i) {
        double v = data.values[i];
        if (!std::isfinite(v)) raise(Errc::BadParams, "boundary data must be finite");
        for (int c : maz.points[i].adjacent_cells) {
            int k = dom.compact(c);
            fixed[k] = 1;
            fval[k] += v;
            hits[k] += 1;
        }
    }
    for (int k = 0; k < N; ++k)
        if (hits[k] > 1) fval[k] /= hits[k];
}

// cells of the point's own side within the probe ball, found by flooding from
// the point's adjacent cells without leaving the ball
std::vector<std::pair<int, double>> side_cells(const GridDomain& dom, const MazBoundaryPoint& pt,
                                               double radius) {
    Vec2 pa = dom.center(pt.anchor);
    std::vector<std::pair<int, double>> out;
    std::map<int, double> dist_to_anchor;
    std::deque<int> q;
    for (int c : pt.adjacent_cells) {
        dist_to_anchor[c] = dist(dom.center(c), pa);
        q.push_back(c);
    }
    int nb[4];
    while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        out.emplace_back(c, dist_to_anchor[c]);
        int n = dom.neighbors4(c, nb);
        for (int t = 0; t < n; ++t) {
            int m = nb[t];
            if (dist_to_anchor.count(m)) continue;
            double d = dist(dom.center(m), pa);
            if (d > radius) continue;
            dist_to_anchor[m] = d;
            q.push_back(m);
        }
    }
    return out;
}

BoundaryLimitRow limit_row(const GridDomain& dom, const MazBoundary& maz, const ScalarField& sol,
                           int point_index, double datum, double eps) {
    const MazBoundaryPoint& pt = maz.points[point_index];
    double h = dom.h();
    double radius = std::min(9.0 * h, maz.info.at(pt.anchor).stabilized_radius + h);
    auto cells = side_cells(dom, pt, radius);
    // bin averages at distances 2h, 4h, 8h
    const double targets[3] = {2 * h, 4 * h, 8 * h};
    double avg[3] = {0, 0, 0};
    int cnt[3] = {0, 0, 0};
    for (auto& [c, d] : cells)
        for (int b = 0; b < 3; ++b)
            if (std::abs(d - targets[b]) <= 0.75 * h) {
                avg[b] += sol.at_cell(c);
                cnt[b] += 1;
            }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int b = 0; b < 3; ++b) {
        if (!cnt[b]) continue;
        double x = targets[b], y = avg[b] / cnt[b];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    BoundaryLimitRow row;
    row.point = point_index;
    row.data_value = datum;
    if (n >= 2) {
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        row.approach_value = (sy - slope * sx) / n;
    } else if (n == 1) {
        row.approach_value = sy;
    } else {
        row.approach_value = sol.at_cell(pt.representative);
    }
    row.gap = std::abs(row.approach_value - datum);
    row.pass = row.gap <= eps;
    return row;
}

} // namespace

PerronResult perron_solve(const GridDomain& dom, const MazBoundary& maz, const MazBoundaryData& data,
                          double p, SolveOptions opts) {
    std::vector<uint8_t> fixed;
    std::vector<double> fval;
    fixed_from_maz(dom, maz, data, fixed, fval);
    auto [sol, rep] = solve_with_fixed(dom, p, fixed, fval, std::nullopt, opts);
    PerronResult out{std::move(sol), rep, "resolutive data: Perron solution computed as the Sobolev solution", {}};
    size_t stride = std::max<size_t>(1, maz.points.size() / 64);
    for (size_t i = 0; i < maz.points.size(); i += stride)
        out.diagnostics.push_back(limit_row(dom, maz, out.solution, (int)i, data.values[i], 0.05));
    return out;
}

BoundaryLimitReport boundary_limit_report(const GridDomain& dom, const MazBoundary& maz,
                                          const PerronResult& result, const MazBoundaryData& data,
                                          const std::vector<int>& exceptional_points, double eps) {
    BoundaryLimitReport rep;
    std::vector<uint8_t> skip(maz.points.size(), 0);
    for (int e : exceptional_points) skip[e] = 1;
    int pass = 0, total = 0;
    for (size_t i = 0; i < maz.points.size(); ++i) {
        if (skip[i]) continue;
        auto row = limit_row(dom, maz, result.solution, (int)i, data.values[i], eps);
        pass += row.pass ? 1 : 0;
        ++total;
        rep.rows.push_back(row);
    }
    rep.pass_fraction = total ? (double)pass / total : 1.0;
    return rep;
}

namespace {

// position-based prolongation between recipe grids at h and h/2
std::vector<double> prolong_field(const GridDomain& coarse, const std::vector<double>& uc,
                                  const GridDomain& fine) {
    std::vector<double> out(fine.n_open(), 0.0);
    for (int k = 0; k < fine.n_open(); ++k) {
        int c = fine.open_cells()[k];
        Vec2 q = fine.center(c);
        int cc = coarse.spec().locate(q);
        if (coarse.is_open(cc)) {
            out[k] = uc[coarse.compact(cc)];
            continue;
        }
        // fall back to the nearest open coarse cell in a 5x5 patch
        int i0 = coarse.spec().ci(cc), j0 = coarse.spec().cj(cc);
        double best = -1.0, val = 0.0;
        for (int dj = -2; dj <= 2; ++dj)
            for (int di = -2; di <= 2; ++di) {
                if (!coarse.is_open(i0 + di, j0 + dj)) continue;
                int m = coarse.spec().cell(i0 + di, j0 + dj);
                double d = dist(coarse.center(m), q);
                if (best < 0 || d < best) {
                    best = d;
                    val = uc[coarse.compact(m)];
                }
            }
        out[k] = val;
    }
    return out;
}

} // namespace

InvarianceReport invariance_experiment(const DomainRecipe& recipe,
                                       const std::function<double(Vec2)>& f,
                                       const std::function<bool(Vec2)>& perturb_region,
                                       double perturb_value, double p,
                                       const std::vector<double>& resolutions,
                                       double exclusion_distance, SolveOptions opts) {
    InvarianceReport rep;
    rep.resolutions = resolutions;
    std::unique_ptr<GridDomain> prev;
    std::vector<double> prev0, prev1; // solutions at the previous level
    for (double h : resolutions) {
        GridDomain dom = gen_domain(recipe, h);
        MazBoundary maz = build_maz_boundary(dom);
        MazBoundaryData base = MazBoundaryData::from_function(dom, maz, f);
        MazBoundaryData pert = base;
        std::vector<Vec2> pert_anchors;
        for (size_t i = 0; i < maz.points.size(); ++i) {
            Vec2 a = dom.center(maz.points[i].anchor);
            if (perturb_region(a)) {
                pert.values[i] += perturb_value;
                pert_anchors.push_back(a);
            }
        }
        SolveOptions o0 = opts, o1 = opts;
        if (prev) {
            o0.init = prolong_field(*prev, prev0, dom);
            o1.init = prolong_field(*prev, prev1, dom);
        }
        PerronResult r0 = perron_solve(dom, maz, base, p, o0);
        PerronResult r1 = perron_solve(dom, maz, pert, p, o1);
        // mask out the exclusion discs around the perturbed anchors
        std::vector<uint8_t> near(dom.ncells(), 0);
        int rad = (int)std::ceil(exclusion_distance / h) + 1;
        for (const Vec2& a : pert_anchors) {
            int ci = (int)std::floor((a.x - dom.spec().x0) / h);
            int cj = (int)std::floor((a.y - dom.spec().y0) / h);
            for (int dj = -rad; dj <= rad; ++dj)
                for (int di = -rad; di <= rad; ++di) {
                    int i = ci + di, j = cj + dj;
                    if (!dom.spec().valid(i, j)) continue;
                    int cc = dom.spec().cell(i, j);
                    if (!near[cc] && dist(dom.center(cc), a) < exclusion_distance) near[cc] = 1;
                }
        }
        double sup = 0.0;
        for (int c : dom.open_cells())
            if (!near[c]) sup = std::max(sup, std::abs(r0.solution.at_cell(c) - r1.solution.at_cell(c)));
        rep.sup_differences.push_back(sup);
        prev0 = r0.solution.values();
        prev1 = r1.solution.values();
        prev = std::make_unique<GridDomain>(std::move(dom));
    }
    rep.decreasing = true;
    for (size_t i = 1; i < rep.sup_differences.size(); ++i)
        if (rep.sup_differences[i] >= rep.sup_differences[i - 1]) rep.decreasing = false;
    return rep;
}

MazBoundary build_generalized_boundary(const GridDomain& omega, const GridDomain& G,
                                       std::vector<double> radius_schedule) {
    const GridSpec& so = omega.spec();
    const GridSpec& sg = G.spec();
    if (std::abs(so.h - sg.h) > 1e-15 || std::abs(so.x0 - sg.x0) > 1e-12 ||
        std::abs(so.y0 - sg.y0) > 1e-12 || so.nx != sg.nx || so.ny != sg.ny)
        raise(Errc::NotNested, "ambient grid must share the subdomain's grid");
    for (int c : omega.open_cells())
        if (!G.is_open(c)) raise(Errc::NotNested, "subdomain leaves the ambient domain");

    MazBoundary gm = build_maz_boundary(G, radius_schedule);
    MazBoundary out;
    out.probe_radii = gm.probe_radii;
    const int di4[4] = {-1, 1, 0, 0};
    const int dj4[4] = {0, 0, -1, 1};
    for (int anchor : omega.boundary_vertices()) {
        int i0 = so.ci(anchor), j0 = so.cj(anchor);
        std::vector<int> adj;
        for (int t = 0; t < 4; ++t)
            if (omega.is_open(i0 + di4[t], j0 + dj4[t])) adj.push_back(so.cell(i0 + di4[t], j0 + dj4[t]));
        std::vector<int> fiber_ids;
        if (!G.is_open(anchor)) {
            // anchor is a wall of G too: split by G's fibers
            if (!gm.stable(anchor))
                raise(Errc::UnstableAmbient, "ambient boundary unstable at a shared anchor");
            MazAnchorInfo info = gm.info.at(anchor);
            for (int gpi : gm.fiber(anchor)) {
                const auto& gpt = gm.points[gpi];
                MazBoundaryPoint pt;
                pt.anchor = anchor;
                pt.component_id = gpt.component_id;
                for (int c : adj)
                    if (std::find(gpt.adjacent_cells.begin(), gpt.adjacent_cells.end(), c) !=
                        gpt.adjacent_cells.end())
                        pt.adjacent_cells.push_back(c);
                if (pt.adjacent_cells.empty()) continue;
                pt.representative = pt.adjacent_cells.front();
                fiber_ids.push_back((int)out.points.size());
                out.points.push_back(std::move(pt));
            }
            out.info[anchor] = info;
        } else {
            // interior of G: one boundary point carrying both sides
            MazBoundaryPoint pt;
            pt.anchor = anchor;
            pt.component_id = 0;
            pt.adjacent_cells = adj;
            pt.representative = adj.empty() ? -1 : adj.front();
            MazAnchorInfo info;
            info.stable = true;
            info.resolved_components = 1;
            info.stabilized_radius = out.probe_radii.empty() ? 0.0 : out.probe_radii.back();
            out.info[anchor] = info;
            if (!adj.empty()) {
                fiber_ids.push_back((int)out.points.size());
                out.points.push_back(std::move(pt));
            }
        }
        out.fibers[anchor] = std::move(fiber_ids);
    }
    return out;
}

PerronResult generalized_perron_solve(const GridDomain& omega, const GridDomain& G,
                                      const MazBoundaryData& data, double p, SolveOptions opts) {
    MazBoundary gen = build_generalized_boundary(omega, G);
    return perron_solve(omega, gen, data, p, opts);
}

StabilityReport uniform_stability_check(const GridDomain& dom, const MazBoundary& maz,
                                        const std::vector<MazBoundaryData>& f_seq,
                                        const MazBoundaryData& f_limit, double p, SolveOptions opts) {
    StabilityReport rep;
    PerronResult lim = perron_solve(dom, maz, f_limit, p, opts);
    for (const auto& fj : f_seq) {
        PerronResult rj = perron_solve(dom, maz, fj, p, opts);
        StabilityRow row;
        for (size_t i = 0; i < fj.values.size(); ++i)
            row.data_sup_diff = std::max(row.data_sup_diff, std::abs(fj.values[i] - f_limit.values[i]));
        for (int k = 0; k < dom.n_open(); ++k)
            row.solution_sup_diff =
                std::max(row.solution_sup_diff, std::abs(rj.solution[k] - lim.solution[k]));
        row.pass = row.solution_sup_diff <= row.data_sup_diff + 1e-6;
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

ComparisonCheck comparison_check(const GridDomain& dom, const ScalarField& u_super,
                                 const ScalarField& v_sub, const MazBoundary& maz, double p,
                                 const std::vector<Box2>& certificate_boxes, double margin) {
    ComparisonCheck out;
    auto cert_u = check_superharmonic(dom, u_super, p, certificate_boxes);
    ScalarField neg_v(dom, v_sub.values());
    for (auto& x : neg_v.values()) x = -x;
    auto cert_v = check_superharmonic(dom, neg_v, p, certificate_boxes);
    if (!cert_u.pass || !cert_v.pass)
        raise(Errc::CertificateMissing, "super/subharmonicity certificate failed");
    out.worst_boundary_margin = std::numeric_limits<double>::infinity();
    for (const auto& pt : maz.points) {
        double uv = u_super.at_cell(pt.representative);
        double vv = v_sub.at_cell(pt.representative);
        out.worst_boundary_margin = std::min(out.worst_boundary_margin, uv - vv);
    }
    out.boundary_ok = out.worst_boundary_margin >= -margin;
    out.worst_interior_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dom.n_open(); ++k)
        out.worst_interior_margin = std::min(out.worst_interior_margin, u_super[k] - v_sub[k]);
    out.interior_ok = out.worst_interior_margin >= -margin;
    out.pass = out.boundary_ok && out.interior_ok;
    return out;
}

} // namespace mazgrid
