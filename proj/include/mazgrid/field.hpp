#pragma once

#include <functional>

#include "mazgrid/grid.hpp"

namespace mazgrid {

/// Real values on the open cells of a domain, indexed by compact open index.
class ScalarField {
public:
    explicit ScalarField(const GridDomain& dom, double fill = 0.0)
        : dom_(&dom), v_((size_t)dom.n_open(), fill) {}
    ScalarField(const GridDomain& dom, std::vector<double> values) : dom_(&dom), v_(std::move(values)) {
        if ((int)v_.size() != dom.n_open()) raise(Errc::BadParams, "field size mismatch");
    }

    const GridDomain& domain() const { return *dom_; }
    double& operator[](int k) { return v_[k]; }
    double operator[](int k) const { return v_[k]; }
    double at_cell(int c) const { return v_[dom_->compact(c)]; }
    double& at_cell(int c) { return v_[dom_->compact(c)]; }
    int size() const { return (int)v_.size(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    void check_finite() const;

    static ScalarField sample(const GridDomain& dom, const std::function<double(Vec2)>& f);

private:
    const GridDomain* dom_;
    std::vector<double> v_;
};

using GradientField = ScalarField; // nonnegative values, same storage

struct NewtonianNorm {
    double total = 0.0;    // (lp_part + energy_part)^(1/p)
    double lp_part = 0.0;  // sum w |u|^p
    double energy_part = 0.0; // sum w g^p
};

/// Discrete upper gradient: g(c) = max over admissible 8-neighbors n of
/// |u(c)-u(n)| / dist(c,n). Telescoping along any admissible grid path gives
/// the upper-gradient inequality exactly.
GradientField upper_gradient(const GridDomain& dom, const ScalarField& u);

NewtonianNorm newtonian_norm(const GridDomain& dom, const ScalarField& u, double p);

struct PathCheck {
    bool pass = false;
    double worst_slack = 0.0; // min over prefixes of (sum g ds - |du|); negative => fail
};

/// Checks |u(first)-u(last)| <= sum over path edges of max(g(a),g(b)) * len.
PathCheck verify_upper_gradient_along_path(const GridDomain& dom, const ScalarField& u,
                                           const GradientField& g, const std::vector<int>& path);

/// |x|^p and its derivative with fast paths for the exponents used in tests.
double pow_abs(double x, double p);
double dpow_abs(double x, double p); // d/dx |x|^p = p |x|^{p-1} sign(x)

} // namespace mazgrid
