#include "mazgrid/field.hpp"

#include <cmath>

namespace mazgrid {

void ScalarField::check_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) raise(Errc::BadParams, "field has non-finite values");
}

ScalarField ScalarField::sample(const GridDomain& dom, const std::function<double(Vec2)>& f) {
    ScalarField u(dom);
    const auto& cells = dom.open_cells();
    for (int k = 0; k < (int)cells.size(); ++k) u[k] = f(dom.center(cells[k]));
    return u;
}

double pow_abs(double x, double p) {
    double a = std::abs(x);
    if (p == 2.0) return a * a;
    if (p == 3.0) return a * a * a;
    if (p == 1.5) return a * std::sqrt(a);
    return std::pow(a, p);
}

double dpow_abs(double x, double p) {
    double a = std::abs(x);
    double m;
    if (p == 2.0) m = 2.0 * a;
    else if (p == 3.0) m = 3.0 * a * a;
    else if (p == 1.5) m = 1.5 * std::sqrt(a);
    else m = a > 0 ? p * std::pow(a, p - 1.0) : 0.0;
    return x >= 0 ? m : -m;
}

GradientField upper_gradient(const GridDomain& dom, const ScalarField& u) {
    u.check_finite();
    GradientField g(dom, 0.0);
    const auto& cells = dom.open_cells();
    int nb[8];
    double len[8];
    for (int k = 0; k < (int)cells.size(); ++k) {
        int c = cells[k];
        int n = dom.neighbors8(c, nb, len);
        double uc = u[k], best = 0.0;
        for (int t = 0; t < n; ++t) {
            double d = std::abs(uc - u[dom.compact(nb[t])]) / len[t];
            if (d > best) best = d;
        }
        g[k] = best;
    }
    return g;
}

NewtonianNorm newtonian_norm(const GridDomain& dom, const ScalarField& u, double p) {
    if (!(p > 1.0)) raise(Errc::BadExponent, "newtonian norm needs p > 1");
    GradientField g = upper_gradient(dom, u);
    NewtonianNorm out;
    const auto& cells = dom.open_cells();
    for (int k = 0; k < (int)cells.size(); ++k) {
        double w = dom.weight(cells[k]);
        out.lp_part += w * pow_abs(u[k], p);
        out.energy_part += w * pow_abs(g[k], p);
    }
    out.total = std::pow(out.lp_part + out.energy_part, 1.0 / p);
    return out;
}

PathCheck verify_upper_gradient_along_path(const GridDomain& dom, const ScalarField& u,
                                           const GradientField& g, const std::vector<int>& path) {
    if (path.size() < 2) raise(Errc::BrokenPath, "path needs at least two cells");
    int nb[8];
    double len[8];
    double integral = 0.0;
    for (size_t s = 0; s + 1 < path.size(); ++s) {
        int a = path[s], b = path[s + 1];
        if (!dom.is_open(a) || !dom.is_open(b)) raise(Errc::BrokenPath, "path leaves the open set");
        int n = dom.neighbors8(a, nb, len);
        double d = -1.0;
        for (int t = 0; t < n; ++t)
            if (nb[t] == b) d = len[t];
        if (d < 0) raise(Errc::BrokenPath, "consecutive path cells not adjacent");
        integral += std::max(g.at_cell(a), g.at_cell(b)) * d;
    }
    double jump = std::abs(u.at_cell(path.front()) - u.at_cell(path.back()));
    PathCheck out;
    out.worst_slack = integral - jump;
    out.pass = out.worst_slack >= -1e-12;
    return out;
}

} // namespace mazgrid
