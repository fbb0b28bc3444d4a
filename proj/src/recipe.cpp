#include "mazgrid/recipe.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace mazgrid {

namespace {

constexpr int kPad = 2; // closed ring around the bounding box, in cells

struct MaskBuilder {
    GridSpec spec;
    std::vector<uint8_t> open;   // candidate open cells (outer region test)
    std::vector<uint8_t> wall;

    // Grid covering [X0,X1]x[Y0,Y1] plus pad. shift_x/y place cell centers on
    // multiples of h (so slit lines through dyadic coordinates run along cell
    // centerlines instead of cell edges).
    MaskBuilder(double X0, double X1, double Y0, double Y1, double h, bool shift_x, bool shift_y) {
        spec.h = h;
        double sx = shift_x ? 0.5 * h : 0.0;
        double sy = shift_y ? 0.5 * h : 0.0;
        spec.x0 = X0 - kPad * h - sx;
        spec.y0 = Y0 - kPad * h - sy;
        spec.nx = (int)std::llround((X1 - X0) / h) + 2 * kPad + (shift_x ? 1 : 0);
        spec.ny = (int)std::llround((Y1 - Y0) / h) + 2 * kPad + (shift_y ? 1 : 0);
        open.assign(spec.ncells(), 0);
        wall.assign(spec.ncells(), 0);
    }

    void mark_outer(const std::function<bool(const Box2&)>& inside_closure) {
        for (int c = 0; c < (int)open.size(); ++c)
            if (inside_closure(spec.cell_box(c))) open[c] = 1;
    }

    // vertical slit {x = xs} x [ya, yb]; blocks cells whose closed square
    // meets the slit with positive length (xs must be a cell centerline)
    void wall_vslit(double xs, double ya, double yb) {
        int i = (int)std::llround((xs - spec.x0) / spec.h - 0.5);
        if (i < 0 || i >= spec.nx) return;
        for (int j = 0; j < spec.ny; ++j) {
            double lo = spec.y0 + j * spec.h, hi = lo + spec.h;
            if (lo < yb - 1e-12 && hi > ya + 1e-12) wall[spec.cell(i, j)] = 1;
        }
    }

    void wall_hslit(double ys, double xa, double xb) {
        int j = (int)std::llround((ys - spec.y0) / spec.h - 0.5);
        if (j < 0 || j >= spec.ny) return;
        for (int i = 0; i < spec.nx; ++i) {
            double lo = spec.x0 + i * spec.h, hi = lo + spec.h;
            if (lo < xb - 1e-12 && hi > xa + 1e-12) wall[spec.cell(i, j)] = 1;
        }
    }

    // solid obstacle: blocks cells whose open interior meets the box interior
    void wall_box(const Box2& b) {
        int i0 = std::max(0, (int)std::floor((b.lo.x - spec.x0) / spec.h - 1e-9));
        int i1 = std::min(spec.nx - 1, (int)std::ceil((b.hi.x - spec.x0) / spec.h + 1e-9));
        int j0 = std::max(0, (int)std::floor((b.lo.y - spec.y0) / spec.h - 1e-9));
        int j1 = std::min(spec.ny - 1, (int)std::ceil((b.hi.y - spec.y0) / spec.h + 1e-9));
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                Box2 cb = spec.cell_box(spec.cell(i, j));
                if (cb.interior_overlaps(b)) wall[spec.cell(i, j)] = 1;
            }
    }

    void stamp(int i, int j) {
        if (i >= 0 && i < spec.nx && j >= 0 && j < spec.ny) wall[spec.cell(i, j)] = 1;
    }

    // thin curved wall: supercover of the sampled curve (4-connected chain,
    // so diagonally adjacent open cells never see each other across it)
    void wall_curve(const Curve& curve) {
        double step = spec.h / 8.0;
        int pi = -1, pj = -1;
        for (const auto& piece : curve) {
            int nsub = std::max(2, (int)std::ceil(piece.length() / step));
            for (int s = 0; s <= nsub; ++s) {
                Vec2 p = piece.at((double)s / nsub);
                int i = (int)std::floor((p.x - spec.x0) / spec.h);
                int j = (int)std::floor((p.y - spec.y0) / spec.h);
                if (pi >= 0 && std::abs(i - pi) == 1 && std::abs(j - pj) == 1) {
                    stamp(pi, j);
                    stamp(i, pj);
                }
                stamp(i, j);
                pi = i;
                pj = j;
            }
        }
    }

    // fat curved wall: blocks cells whose center is within radius + h/2
    void wall_fat_curve(const Curve& curve, double radius) {
        double reach = radius + 0.5 * spec.h;
        int rc = (int)std::ceil(reach / spec.h) + 1;
        double step = spec.h / 4.0;
        for (const auto& piece : curve) {
            int nsub = std::max(2, (int)std::ceil(piece.length() / step));
            for (int s = 0; s <= nsub; ++s) {
                Vec2 p = piece.at((double)s / nsub);
                int i0 = (int)std::floor((p.x - spec.x0) / spec.h);
                int j0 = (int)std::floor((p.y - spec.y0) / spec.h);
                for (int dj = -rc; dj <= rc; ++dj)
                    for (int di = -rc; di <= rc; ++di) {
                        int i = i0 + di, j = j0 + dj;
                        if (i < 0 || i >= spec.nx || j < 0 || j >= spec.ny) continue;
                        int c = spec.cell(i, j);
                        if (wall[c]) continue;
                        if (dist(spec.center(c), p) <= reach) wall[c] = 1;
                    }
            }
        }
    }

    std::vector<uint8_t> finish() {
        std::vector<uint8_t> out(open.size(), 0);
        for (size_t c = 0; c < open.size(); ++c) out[c] = open[c] && !wall[c];
        return out;
    }
};

int depth_param(const DomainRecipe& r, const char* key, int fallback, int cap, const char* what) {
    int v = (int)std::llround(r.param(key, (double)fallback));
    if (v < 0) raise(Errc::BadParams, std::string(what) + " must be nonnegative");
    if (v > cap)
        raise(Errc::ResolutionTooCoarse,
              std::string(what) + "=" + std::to_string(v) + " needs gaps under 2 cells at this h (max " +
                  std::to_string(cap) + ")");
    return v;
}

std::string note(const std::string& s) { return s; }

} // namespace

double cantor_cn(int n, int c_rule, double c0) {
    if (n == 0) return c0;
    if (c_rule == 0) return std::ldexp(1.0, -n);            // 2^-n
    return std::ldexp(1.0, -std::min(1000, n * n));         // 2^-n^2
}

double cantor_alpha(int n, int c_rule, double c0) {
    return std::ldexp(1.0 + cantor_cn(n, c_rule, c0), -n);  // 2^-n (1 + c_n)
}

std::vector<double> cantor_interval_starts(int n, int c_rule, double c0) {
    std::vector<double> starts = {0.0};
    for (int g = 1; g <= n; ++g) {
        double ap = cantor_alpha(g - 1, c_rule, c0), a = cantor_alpha(g, c_rule, c0);
        if (ap - 2.0 * a <= 0.0) raise(Errc::BadParams, "c_n not strictly decreasing: empty middle gap");
        std::vector<double> next;
        next.reserve(starts.size() * 2);
        for (double s : starts) {
            next.push_back(s);
            next.push_back(s + ap - a);
        }
        starts = std::move(next);
    }
    return starts;
}

int default_comb_depth(double h) { return std::max(0, (int)std::floor(std::log2(1.0 / h)) - 2); }

int default_cantor_generation(double h, int c_rule, double c0) {
    int m = 0;
    while (cantor_alpha(m + 1, c_rule, c0) >= 8.0 * h && m < 20) ++m;
    return m;
}

int default_arc_generation(double h) {
    // inter-arc gap at depth n is 2^-n * theta_n / 6 = 2^(1-3n)/6 for c_n = 2^-n
    int n = 0;
    while (std::ldexp(1.0, 1 - 3 * (n + 1)) / 6.0 >= 2.5 * h && n < 8) ++n;
    return n;
}

GridDomain gen_domain(const DomainRecipe& recipe, double h) {
    if (h <= 0.0) raise(Errc::BadParams, "h must be positive");
    std::ostringstream tn;

    switch (recipe.kind) {
        case RecipeKind::Square:
        case RecipeKind::Rectangle: {
            double W = recipe.kind == RecipeKind::Square ? 1.0 : recipe.param("width", 2.0);
            double H = recipe.kind == RecipeKind::Square ? 1.0 : recipe.param("height", 1.0);
            if (W <= 0 || H <= 0) raise(Errc::BadParams, "rectangle sides must be positive");
            if (W < 2 * h || H < 2 * h) raise(Errc::ResolutionTooCoarse, "rectangle under 2 cells");
            MaskBuilder mb(0, W, 0, H, h, false, false);
            Box2 closure{{0, 0}, {W, H}};
            mb.mark_outer([&](const Box2& b) { return closure.contains_box(b); });
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, "");
        }

        case RecipeKind::SlitDisc: {
            MaskBuilder mb(-1, 1, -1, 1, h, false, true);
            mb.mark_outer([&](const Box2& b) {
                return norm(b.lo) <= 1 + 1e-12 && norm(b.hi) <= 1 + 1e-12 &&
                       norm(Vec2{b.lo.x, b.hi.y}) <= 1 + 1e-12 && norm(Vec2{b.hi.x, b.lo.y}) <= 1 + 1e-12;
            });
            mb.wall_hslit(0.0, 0.0, 1.0);
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, "");
        }

        case RecipeKind::Cusp: {
            double beta = recipe.param("beta", 3.0);
            if (beta <= 0) raise(Errc::BadParams, "cusp exponent must be positive");
            MaskBuilder mb(0, 1, 0, 1, h, false, false);
            mb.mark_outer([&](const Box2& b) {
                if (b.lo.x < -1e-12 || b.hi.x > 1 + 1e-12 || b.lo.y < -1e-12) return false;
                return b.hi.y <= std::pow(b.lo.x, beta) + 1e-12;
            });
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, "");
        }

        case RecipeKind::Comb: {
            int cap = (int)std::floor(std::log2(1.0 / h)) - 2;
            int J = depth_param(recipe, "depth", default_comb_depth(h), cap, "comb depth");
            MaskBuilder mb(0, 2, -1, 1, h, true, false);
            Box2 closure{{0, -1}, {2, 1}};
            mb.mark_outer([&](const Box2& b) { return closure.contains_box(b); });
            for (int j = 0; j <= J; ++j) mb.wall_vslit(std::ldexp(1.0, -j), 0.0, 1.0);
            tn << "slits j=0.." << J;
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, note(tn.str()));
        }

        case RecipeKind::ThickComb: {
            int cap = (int)std::floor(std::log2(1.0 / h)) - 4;
            int J = depth_param(recipe, "depth", std::max(0, default_comb_depth(h) - 2), cap, "thick comb depth");
            MaskBuilder mb(0, 2, -1, 1, h, false, false);
            Box2 closure{{0, -1}, {2, 1}};
            mb.mark_outer([&](const Box2& b) { return closure.contains_box(b); });
            for (int j = 0; j <= J; ++j) {
                double x = std::ldexp(1.0, -j), w = std::ldexp(1.0, -j - 2);
                mb.wall_box({{x - w, 0.0}, {x + w, 1.0}});
            }
            tn << "rects j=0.." << J;
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, note(tn.str()));
        }

        case RecipeKind::DoubleComb: {
            int cap = (int)std::floor(std::log2(1.0 / h)) - 2;
            int J = depth_param(recipe, "depth", default_comb_depth(h), cap, "double comb depth");
            MaskBuilder mb(-1, 1, -1, 1, h, true, false);
            Box2 closure{{-1, -1}, {1, 1}};
            mb.mark_outer([&](const Box2& b) { return closure.contains_box(b); });
            mb.wall_vslit(0.0, 0.0, 1.0);
            for (int j = 1; j <= J; ++j) {
                mb.wall_vslit(std::ldexp(1.0, -j), 0.0, 1.0);
                mb.wall_vslit(-std::ldexp(1.0, -j), 0.0, 1.0);
            }
            tn << "slits j=1.." << J << " plus center";
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, note(tn.str()));
        }

        case RecipeKind::CountableComb: {
            int cap = (int)std::floor(std::log2(1.0 / h)) - 2;
            int J = depth_param(recipe, "depth", default_comb_depth(h), cap, "countable comb depth");
            MaskBuilder mb(0, 2, -1, 1, h, true, false);
            Box2 closure{{0, -1}, {2, 1}};
            mb.mark_outer([&](const Box2& b) { return closure.contains_box(b); });
            int ksum = 0;
            int kbits = (int)std::floor(std::log2(1.0 / h));
            for (int j = 0; j <= J; ++j) {
                double xj = std::ldexp(1.0, -j);
                mb.wall_vslit(xj, 0.0, 1.0);
                int kmax = kbits - j - 2; // secondary gaps 2^-(j+k+1) stay >= 2h
                for (int k = 3; k <= kmax; ++k) {
                    double d = std::ldexp(1.0, -j - k);
                    mb.wall_vslit(xj + d, 0.0, 1.0);
                    mb.wall_vslit(xj - d, 0.0, 1.0);
                    ksum += 2;
                }
            }
            tn << "main j=0.." << J << ", " << ksum << " secondary slits";
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, note(tn.str()));
        }

        case RecipeKind::CantorArcs:
        case RecipeKind::CantorThick: {
            int c_rule = (int)recipe.param("c_rule", 0);
            double c0 = recipe.param("c0", cantor_cn(0, c_rule, 1.0));
            int mcap = default_cantor_generation(h, c_rule, c0) + 2;
            int m = depth_param(recipe, "generation", default_cantor_generation(h, c_rule, c0), mcap,
                                "cantor generation");
            int acap = default_arc_generation(h);
            int na = depth_param(recipe, "arc_generation", std::min(m, acap), std::min(m, acap),
                                 "arc generation");
            bool fat = recipe.kind == RecipeKind::CantorThick;
            MaskBuilder mb(-1, 3, -1, 3, h, false, false);
            Box2 closure{{-1, -1}, {3, 3}};
            mb.mark_outer([&](const Box2& b) { return closure.contains_box(b); });
            auto starts_m = cantor_interval_starts(m, c_rule, c0);
            double am = cantor_alpha(m, c_rule, c0);
            for (double sx : starts_m)
                for (double sy : starts_m) mb.wall_box({{sx, sy}, {sx + am, sy + am}});
            for (int n = 1; n <= na; ++n) {
                double an = cantor_alpha(n, c_rule, c0);
                double theta = cantor_alpha(n - 1, c_rule, c0) - 2.0 * an;
                auto starts = cantor_interval_starts(n, c_rule, c0);
                int nk = 1 << n;
                for (double sx : starts)
                    for (double sy : starts) {
                        Box2 q{{sx, sy}, {sx + an, sy + an}};
                        for (int k = 0; k <= nk; ++k) {
                            double t = theta / 6.0 * (1.0 + (double)k / nk);
                            Curve cv = offset_square_arc(q, t, k % 2 == 0);
                            if (fat)
                                mb.wall_fat_curve(cv, std::ldexp(theta / 24.0, -n));
                            else
                                mb.wall_curve(cv);
                        }
                    }
            }
            tn << "K generation " << m << ", arcs n=1.." << na;
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, note(tn.str()));
        }

        case RecipeKind::CantorSquare: {
            int c_rule = (int)recipe.param("c_rule", 0);
            double c0 = cantor_cn(0, c_rule, 1.0);
            if (recipe.has("c0")) {
                c0 = recipe.param("c0", c0);
                if (c0 > 1.0 / 3.0 + 1e-15 || c0 <= 0.0)
                    raise(Errc::BadParams, "cantor_square needs 0 < c0 <= 1/3");
            }
            int mcap = default_cantor_generation(h, c_rule, c0) + 2;
            int m = depth_param(recipe, "generation", default_cantor_generation(h, c_rule, c0), mcap,
                                "cantor generation");
            MaskBuilder mb(-1, 3, -1, 3, h, false, false);
            Box2 closure{{-1, -1}, {3, 3}};
            mb.mark_outer([&](const Box2& b) { return closure.contains_box(b); });
            auto starts = cantor_interval_starts(m, c_rule, c0);
            double am = cantor_alpha(m, c_rule, c0);
            for (double sx : starts)
                for (double sy : starts) mb.wall_box({{sx, sy}, {sx + am, sy + am}});
            tn << "K generation " << m;
            return GridDomain(mb.spec, mb.finish(), recipe.weight, recipe, note(tn.str()));
        }

        case RecipeKind::CustomMask:
            raise(Errc::BadParams, "custom_mask domains are built from an explicit mask");
    }
    raise(Errc::BadParams, "unhandled recipe");
}

GridDomain refine(const GridDomain& dom) {
    if (!dom.recipe() || dom.recipe()->kind == RecipeKind::CustomMask)
        raise(Errc::NotRefinable, "domain was not built from a refinable recipe");
    return gen_domain(*dom.recipe(), dom.h() / 2.0);
}

} // namespace mazgrid
