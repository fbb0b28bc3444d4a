#include "mazgrid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mazgrid {

namespace {

struct EdgeView {
    // 4-neighbor edge stencil of one open cell, by compact index
    int nb[4];
    double kappa[4];
    int n = 0;
};

// per-cell stencils; kappa = (w(a)+w(b))/2 / h^p
std::vector<EdgeView> build_stencils(const GridDomain& dom, double p) {
    const auto& cells = dom.open_cells();
    std::vector<EdgeView> st(cells.size());
    const double hp = std::pow(dom.h(), p);
    int nb4[4];
    for (int k = 0; k < (int)cells.size(); ++k) {
        int c = cells[k];
        int n = dom.neighbors4(c, nb4);
        EdgeView& e = st[k];
        for (int t = 0; t < n; ++t) {
            e.nb[e.n] = dom.compact(nb4[t]);
            e.kappa[e.n] = 0.5 * (dom.weight(c) + dom.weight(nb4[t])) / hp;
            ++e.n;
        }
    }
    return st;
}

double cell_energy_half(const EdgeView& e, double uc, const std::vector<double>& u, double p) {
    double s = 0.0;
    for (int t = 0; t < e.n; ++t) s += e.kappa[t] * pow_abs(uc - u[e.nb[t]], p);
    return s; // each edge counted from both ends; halve when summing
}

// exact 1-d minimizer of sum_t kappa_t |t - u_nb|^p over t
double line_min(const EdgeView& e, const std::vector<double>& u, double p) {
    if (e.n == 0) return 0.0;
    if (p == 2.0) {
        double num = 0.0, den = 0.0;
        for (int t = 0; t < e.n; ++t) {
            num += e.kappa[t] * u[e.nb[t]];
            den += e.kappa[t];
        }
        return num / den;
    }
    double lo = u[e.nb[0]], hi = lo;
    for (int t = 1; t < e.n; ++t) {
        lo = std::min(lo, u[e.nb[t]]);
        hi = std::max(hi, u[e.nb[t]]);
    }
    if (hi - lo < 1e-300) return lo;
    auto dpsi = [&](double t) {
        double s = 0.0;
        for (int q = 0; q < e.n; ++q) s += e.kappa[q] * dpow_abs(t - u[e.nb[q]], p);
        return s;
    };
    double a = lo, b = hi, m = 0.5 * (lo + hi);
    for (int it = 0; it < 60 && b - a > 1e-15 * (1.0 + std::abs(m)); ++it) {
        m = 0.5 * (a + b);
        (dpsi(m) > 0.0 ? b : a) = m;
    }
    return 0.5 * (a + b);
}

} // namespace

double solver_energy(const GridDomain& dom, const ScalarField& u, double p) {
    if (!(p > 1.0)) raise(Errc::BadExponent, "solver needs p > 1");
    const auto& cells = dom.open_cells();
    const double hp = std::pow(dom.h(), p);
    double s = 0.0;
    for (int k = 0; k < (int)cells.size(); ++k) {
        int c = cells[k];
        int i = dom.spec().ci(c), j = dom.spec().cj(c);
        // count each edge once: right and up
        if (dom.is_open(i + 1, j)) {
            int m = dom.compact(c + 1);
            s += 0.5 * (dom.weight(c) + dom.weight(c + 1)) / hp * pow_abs(u[k] - u[m], p);
        }
        if (dom.is_open(i, j + 1)) {
            int m = dom.compact(c + dom.nx());
            s += 0.5 * (dom.weight(c) + dom.weight(c + dom.nx())) / hp * pow_abs(u[k] - u[m], p);
        }
    }
    return s;
}

void solver_energy_gradient(const GridDomain& dom, const ScalarField& u, double p,
                            std::vector<double>& grad) {
    if (!(p > 1.0)) raise(Errc::BadExponent, "solver needs p > 1");
    grad.assign(dom.n_open(), 0.0);
    const auto& cells = dom.open_cells();
    const double hp = std::pow(dom.h(), p);
    for (int k = 0; k < (int)cells.size(); ++k) {
        int c = cells[k];
        int i = dom.spec().ci(c), j = dom.spec().cj(c);
        auto edge = [&](int cn) {
            int m = dom.compact(cn);
            double kap = 0.5 * (dom.weight(c) + dom.weight(cn)) / hp;
            double d = kap * dpow_abs(u[k] - u[m], p);
            grad[k] += d;
            grad[m] -= d;
        };
        if (dom.is_open(i + 1, j)) edge(c + 1);
        if (dom.is_open(i, j + 1)) edge(c + dom.nx());
    }
}

std::map<int, double> boundary_data_from(const GridDomain& dom, const std::function<double(Vec2)>& f) {
    std::map<int, double> data;
    for (int a : dom.boundary_vertices()) data[a] = f(dom.center(a));
    return data;
}

std::pair<ScalarField, SolveReport> solve_with_fixed(const GridDomain& dom, double p,
                                                     const std::vector<uint8_t>& fixed_mask,
                                                     const std::vector<double>& fixed_values,
                                                     const std::optional<ScalarField>& psi,
                                                     const SolveOptions& opts) {
    if (!(p >= 1.1 && p <= 16.0)) raise(Errc::BadExponent, "p must lie in [1.1, 16]");
    const int N = dom.n_open();
    if ((int)fixed_mask.size() != N || (int)fixed_values.size() != N)
        raise(Errc::BadParams, "fixed arrays must cover all open cells");

    // every component needs at least one fixed cell
    {
        std::vector<int> label;
        int ncomp = label_components(dom, label);
        std::vector<uint8_t> seen(ncomp, 0);
        const auto& cells = dom.open_cells();
        for (int k = 0; k < N; ++k)
            if (fixed_mask[k]) seen[label[cells[k]]] = 1;
        for (int g = 0; g < ncomp; ++g)
            if (!seen[g]) raise(Errc::NoBoundary, "a component carries no boundary value");
    }

    SolveReport rep;
    if (psi) {
        for (int k = 0; k < N; ++k)
            if (fixed_mask[k] && fixed_values[k] < (*psi)[k] - 1e-12)
                raise(Errc::KEmpty, "obstacle exceeds boundary data at a fixed cell");
    }

    auto st = build_stencils(dom, p);
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (int k = 0; k < N; ++k)
        if (fixed_mask[k]) {
            double v = fixed_values[k];
            vmin = first ? v : std::min(vmin, v);
            vmax = first ? v : std::max(vmax, v);
            first = false;
        }
    double mid = 0.5 * (vmin + vmax);

    ScalarField u(dom, mid);
    if ((int)opts.init.size() == N) u.values() = opts.init;
    for (int k = 0; k < N; ++k)
        if (fixed_mask[k]) u[k] = fixed_values[k];
    if (psi)
        for (int k = 0; k < N; ++k)
            if (!fixed_mask[k]) u[k] = std::max(u[k], (*psi)[k]);

    std::vector<double>& uv = u.values();
    double range = std::max(vmax - vmin, 1e-30);
    double du_stop = opts.du_tol * range;
    double prev_energy = solver_energy(dom, u, p);
    const double e_scale = std::max(prev_energy, 1e-300);
    rep.monotone_energy = true;

    bool use_sor = (p == 2.0) && opts.algorithm != "gs";
    double omega = 1.0;
    if (use_sor) {
        double hbar = 1.0 / std::max(dom.nx(), dom.ny());
        omega = 2.0 / (1.0 + std::sin(M_PI * hbar));
        omega = std::min(omega, 1.95);
    }

    int sweep = 0;
    double rel_dec = 1.0;
    for (; sweep < opts.max_iter; ++sweep) {
        double max_du = 0.0;
        for (int k = 0; k < N; ++k) {
            if (fixed_mask[k]) continue;
            const EdgeView& e = st[k];
            if (e.n == 0) continue;
            double t = line_min(e, uv, p);
            if (use_sor) t = uv[k] + omega * (t - uv[k]);
            if (psi) t = std::max(t, (*psi)[k]);
            max_du = std::max(max_du, std::abs(t - uv[k]));
            uv[k] = t;
        }
        double energy = solver_energy(dom, u, p);
        rel_dec = (prev_energy - energy) / e_scale;
        if (energy > prev_energy + 1e-12 * e_scale) {
            if (use_sor && omega > 1.0) {
                omega = 1.0; // drop over-relaxation rather than accept an increase
            } else {
                rep.monotone_energy = false;
            }
        }
        prev_energy = energy;
        if (max_du <= du_stop || (sweep > 2 && std::abs(rel_dec) < opts.tol && max_du <= 1e-9 * range)) {
            ++sweep;
            break;
        }
    }
    rep.iterations = sweep;
    rep.final_energy = prev_energy;
    rep.converged = std::abs(rel_dec) < opts.tol;

    if (psi) {
        double viol = 0.0, comp = 0.0;
        for (int k = 0; k < N; ++k) {
            viol = std::max(viol, (*psi)[k] - uv[k]);
            if (!fixed_mask[k] && uv[k] > (*psi)[k] + 1e-9 * (1.0 + std::abs(uv[k]))) {
                const EdgeView& e = st[k];
                if (e.n) comp = std::max(comp, std::abs(line_min(e, uv, p) - uv[k]));
            }
        }
        rep.max_constraint_violation = std::max(0.0, viol);
        rep.complementarity_residual = comp;
    }
    return {std::move(u), rep};
}

namespace {

void fixed_from_anchor_data(const GridDomain& dom, const std::map<int, double>& data,
                            std::vector<uint8_t>& fixed, std::vector<double>& fval) {
    const int N = dom.n_open();
    fixed.assign(N, 0);
    fval.assign(N, 0.0);
    std::vector<int> hits(N, 0);
    const int nx = dom.nx();
    for (const auto& [a, v] : data) {
        if (dom.is_open(a)) raise(Errc::BadParams, "boundary datum on an open cell");
        if (!std::isfinite(v)) raise(Errc::BadParams, "boundary data must be finite");
        int i = dom.spec().ci(a), j = dom.spec().cj(a);
        const int di[4] = {-1, 1, 0, 0};
        const int dj[4] = {0, 0, -1, 1};
        for (int t = 0; t < 4; ++t) {
            if (!dom.is_open(i + di[t], j + dj[t])) continue;
            int k = dom.compact(a + di[t] + dj[t] * nx);
            fixed[k] = 1;
            fval[k] += v;
            hits[k] += 1;
        }
    }
    for (int k = 0; k < N; ++k)
        if (hits[k] > 1) fval[k] /= hits[k];
}

} // namespace

std::pair<ScalarField, SolveReport> solve_dirichlet(const DirichletProblem& prob) {
    const GridDomain& dom = *prob.dom;
    std::vector<uint8_t> fixed;
    std::vector<double> fval;
    fixed_from_anchor_data(dom, prob.boundary_data, fixed, fval);
    return solve_with_fixed(dom, prob.p, fixed, fval, std::nullopt, prob.opts);
}

std::pair<ScalarField, SolveReport> solve_obstacle(const ObstacleProblem& prob) {
    const GridDomain& dom = *prob.base.dom;
    std::vector<uint8_t> fixed;
    std::vector<double> fval;
    fixed_from_anchor_data(dom, prob.base.boundary_data, fixed, fval);
    return solve_with_fixed(dom, prob.base.p, fixed, fval, prob.psi, prob.base.opts);
}

PerturbationCheck check_superminimizer(const GridDomain& dom, const ScalarField& u, double p,
                                       int trials, uint64_t rng_seed, bool both_signs) {
    u.check_finite();
    PerturbationCheck out;
    out.trials = trials;
    out.seed = rng_seed;
    out.worst_margin = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(rng_seed);
    const auto& cells = dom.open_cells();
    std::uniform_int_distribution<int> pick(0, (int)cells.size() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double extent = std::max(dom.nx(), dom.ny()) * dom.h();
    // collar: zero on cells adjacent to closed cells, to stay in the
    // zero-boundary class
    std::vector<uint8_t> collar(dom.n_open(), 0);
    int nb4[4];
    for (int k = 0; k < (int)cells.size(); ++k)
        if (dom.neighbors4(cells[k], nb4) < 4) collar[k] = 1;

    out.pass = true;
    for (int t = 0; t < trials; ++t) {
        int c0 = cells[pick(rng)];
        Vec2 pc = dom.center(c0);
        double radius = (3.0 + unif(rng) * (0.25 * extent / dom.h() - 3.0)) * dom.h();
        double height = 0.05 + 0.95 * unif(rng);
        // touched cells
        std::vector<std::pair<int, double>> bump; // compact idx -> phi
        int rad = (int)std::ceil(radius / dom.h());
        int i0 = dom.spec().ci(c0), j0 = dom.spec().cj(c0);
        for (int dj = -rad; dj <= rad; ++dj)
            for (int di = -rad; di <= rad; ++di) {
                if (!dom.is_open(i0 + di, j0 + dj)) continue;
                int c = dom.spec().cell(i0 + di, j0 + dj);
                int k = dom.compact(c);
                if (collar[k]) continue;
                double v = height * std::max(0.0, 1.0 - dist(dom.center(c), pc) / radius);
                if (v > 0.0) bump.emplace_back(k, v);
            }
        if (bump.empty()) continue;
        auto delta_for = [&](double sign) {
            // energy difference restricted to edges touching the support
            double before = 0.0, after = 0.0;
            const double hp = std::pow(dom.h(), p);
            std::vector<double> phi(dom.n_open(), 0.0);
            for (auto& [k, v] : bump) phi[k] = sign * v;
            for (auto& [k, v] : bump) {
                (void)v;
                int c = cells[k];
                int i = dom.spec().ci(c), j = dom.spec().cj(c);
                const int di[4] = {-1, 1, 0, 0};
                const int dj[4] = {0, 0, -1, 1};
                for (int q = 0; q < 4; ++q) {
                    if (!dom.is_open(i + di[q], j + dj[q])) continue;
                    int cn = c + di[q] + dj[q] * dom.nx();
                    if (cn < c && phi[dom.compact(cn)] != 0.0) continue; // edge counted once
                    int m = dom.compact(cn);
                    double kap = 0.5 * (dom.weight(c) + dom.weight(cn)) / hp;
                    before += kap * pow_abs(u[k] - u[m], p);
                    after += kap * pow_abs(u[k] + phi[k] - (u[m] + phi[m]), p);
                }
            }
            return after - before;
        };
        double d1 = delta_for(+1.0);
        out.worst_margin = std::min(out.worst_margin, d1);
        if (d1 < -1e-10) out.pass = false;
        if (both_signs) {
            double d2 = delta_for(-1.0);
            out.worst_margin = std::min(out.worst_margin, d2);
            if (d2 < -1e-10) out.pass = false;
        }
    }
    return out;
}

SuperharmonicCheck check_superharmonic(const GridDomain& dom, const ScalarField& u, double p,
                                       const std::vector<Box2>& boxes, double slack) {
    SuperharmonicCheck out;
    out.boxes = (int)boxes.size();
    out.pass = true;
    const int N = dom.n_open();
    for (const Box2& box : boxes) {
        std::vector<uint8_t> inV(N, 0);
        std::vector<int> vcells;
        const auto& cells = dom.open_cells();
        for (int k = 0; k < N; ++k) {
            Vec2 c = dom.center(cells[k]);
            if (c.x > box.lo.x && c.x < box.hi.x && c.y > box.lo.y && c.y < box.hi.y) {
                inV[k] = 1;
                vcells.push_back(k);
            }
        }
        if (vcells.empty()) raise(Errc::BoxNotInterior, "box contains no open cells");
        // compactly inside: every 4-neighbor of a V cell must be open in the domain
        int nb4[4];
        for (int k : vcells)
            if (dom.neighbors4(cells[k], nb4) < 4)
                raise(Errc::BoxNotInterior, "box touches the domain boundary");
        // sub-solve on V: ring cells fixed at u
        std::vector<uint8_t> sub_open(dom.ncells(), 0);
        for (int k : vcells) sub_open[cells[k]] = 1;
        GridDomain sub(dom.spec(), sub_open, dom.weight_mode());
        std::vector<uint8_t> fixed(sub.n_open(), 0);
        std::vector<double> fval(sub.n_open(), 0.0);
        int snb[4];
        for (int c : sub.open_cells()) {
            int sk = sub.compact(c);
            fval[sk] = u[dom.compact(c)];
            if (sub.neighbors4(c, snb) < 4) fixed[sk] = 1; // ring
        }
        SolveOptions so;
        auto [sol, rep] = solve_with_fixed(sub, p, fixed, fval, std::nullopt, so);
        (void)rep;
        for (int c : sub.open_cells()) {
            double excess = sol[sub.compact(c)] - u[dom.compact(c)];
            out.worst_excess = std::max(out.worst_excess, excess);
        }
    }
    out.pass = out.worst_excess <= slack;
    return out;
}

} // namespace mazgrid
