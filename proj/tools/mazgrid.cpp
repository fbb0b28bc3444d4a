#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mazgrid/mc.hpp"
#include "mazgrid/perron.hpp"
#include "mazgrid/pipelines.hpp"
#include "mazgrid/recipe.hpp"
#include "mazgrid/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mazgrid;

namespace {

struct Common {
    std::string recipe = "square";
    double h = 1.0 / 128.0;
    double p = 2.0;
    std::string out = ".";
    uint64_t seed = 1;
    double tol = 1e-8;
    int max_iter = 50000;
    int threads = 0;
    std::string weight = "lebesgue";
    std::vector<std::string> sets;       // -s key=value overrides
    std::string config_file;
};

void add_common(CLI::App* app, Common& c) {
    app->set_help_flag("--help", "print help"); // frees -h/--h for the cell size
    app->add_option("--recipe", c.recipe, "domain recipe name");
    app->add_option("--h", c.h, "cell size");
    app->add_option("--p", c.p, "exponent p in (1,16]");
    app->add_option("--out", c.out, "output directory (default from MAZGRID_OUT)");
    app->add_option("--seed", c.seed, "root RNG seed");
    app->add_option("--tol", c.tol, "solver/optimizer tolerance");
    app->add_option("--max-iter", c.max_iter, "iteration cap");
    app->add_option("--threads", c.threads, "worker cap (0 = auto)");
    app->add_option("--weight", c.weight, "measure weight: lebesgue | radial_inv");
    app->add_option("--config", c.config_file, "flat key=value config file");
    app->add_option("--set,-s", c.sets, "recipe/pipeline parameter key=value (repeatable)");
}

std::map<std::string, double> parse_sets(const Common& c) {
    std::map<std::string, double> out;
    auto take = [&](const std::string& kv, const std::string& where) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) raise(Errc::BadInput, "expected key=value in " + where);
        std::string key = kv.substr(0, eq);
        try {
            out[key] = std::stod(kv.substr(eq + 1));
        } catch (...) {
            raise(Errc::BadInput, "non-numeric value for key '" + key + "' in " + where);
        }
    };
    if (!c.config_file.empty()) {
        std::ifstream in(c.config_file);
        if (!in) raise(Errc::BadInput, "cannot read config '" + c.config_file + "'");
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
            if (line.empty()) continue;
            take(line, c.config_file);
        }
    }
    for (const auto& kv : c.sets) take(kv, "--set"); // command line wins
    return out;
}

GridDomain make_domain(const Common& c, const std::map<std::string, double>& params) {
    DomainRecipe rec;
    rec.kind = recipe_from_name(c.recipe);
    rec.params = params;
    if (c.weight == "radial_inv") rec.weight = WeightMode::RadialInv;
    else if (c.weight != "lebesgue") raise(Errc::BadInput, "unknown weight mode " + c.weight);
    return gen_domain(rec, c.h);
}

std::function<double(Vec2)> named_data(const std::string& name) {
    if (name == "linear-x") return [](Vec2 q) { return q.x; };
    if (name == "linear-y") return [](Vec2 q) { return q.y; };
    if (name == "zero") return [](Vec2) { return 0.0; };
    if (name == "one") return [](Vec2) { return 1.0; };
    if (name == "upper-one") return [](Vec2 q) { return q.y > 0.0 ? 1.0 : 0.0; };
    raise(Errc::BadInput, "unknown data preset '" + name + "' (linear-x, linear-y, zero, one, upper-one)");
}

int dispatch(int argc, char** argv) {
    CLI::App app{"grid potential theory toolkit: Mazurkiewicz boundaries, relative capacities, p-harmonic solvers"};
    app.require_subcommand(1);
    const char* env_out = std::getenv("MAZGRID_OUT");

    Common c;
    if (env_out) c.out = env_out;

    auto* gen = app.add_subcommand("gen", "generate a domain, export mask and summary");
    add_common(gen, c);

    auto* metric = app.add_subcommand("metric", "distances between two points");
    add_common(metric, c);
    std::vector<double> pt_a{0.2, 0.2}, pt_b{0.8, 0.8};
    metric->add_option("--a", pt_a, "first point x y")->expected(2);
    metric->add_option("--b", pt_b, "second point x y")->expected(2);

    auto* boundary = app.add_subcommand("boundary", "build the split boundary and export it");
    add_common(boundary, c);

    auto* capacity = app.add_subcommand("capacity", "estimate a capacity variant");
    add_common(capacity, c);
    std::string variant = "BAR";
    std::vector<double> target_rect;
    double anchors_x = std::nan("");
    capacity->add_option("--variant", variant, "AMBIENT | CLOSURE_MU | CLOSURE_MU0 | BAR | BAR_MAZ");
    capacity->add_option("--target-rect", target_rect, "x0 y0 x1 y1 (open cells + anchors inside)")
        ->expected(4);
    capacity->add_option("--target-anchors-x", anchors_x, "anchors on the vertical line x = value");

    auto* solve = app.add_subcommand("solve", "p-harmonic Dirichlet solve");
    add_common(solve, c);
    std::string data = "linear-x";
    double obstacle = std::nan("");
    solve->add_option("--data", data, "boundary data preset");
    solve->add_option("--obstacle", obstacle, "constant obstacle value");

    auto* perron = app.add_subcommand("perron", "Perron solution with split boundary data");
    add_common(perron, c);
    std::string pdata = "linear-y";
    perron->add_option("--data", pdata, "boundary data preset (one-sided: upper-one)");

    auto* mc = app.add_subcommand("mc", "harmonic-measure random walk estimate");
    add_common(mc, c);
    std::vector<double> start{0.5, 0.5};
    long long walks = 100000;
    std::string mdata = "linear-x";
    mc->add_option("--start", start, "start point x y")->expected(2);
    mc->add_option("--walks", walks, "number of walks");
    mc->add_option("--data", mdata, "boundary data preset");

    auto* runex = app.add_subcommand("run-example", "run a named end-to-end pipeline");
    add_common(runex, c);
    std::string example;
    runex->add_option("name", example, "example name")->required();

    auto* render = app.add_subcommand("render", "render a field CSV to PGM");
    std::string in_csv, out_pgm;
    std::vector<double> range;
    render->add_option("input", in_csv, "field CSV path")->required();
    render->add_option("output", out_pgm, "PGM path")->required();
    render->add_option("--range", range, "fixed lo hi (default auto)")->expected(2);

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
    auto params = parse_sets(c);
    std::filesystem::create_directories(c.out);
    auto opath = [&](const std::string& f) { return (std::filesystem::path(c.out) / f).string(); };

    if (gen->parsed()) {
        GridDomain dom = make_domain(c, params);
        mask_to_pgm(dom, opath(c.recipe + "_mask.pgm"));
        json j = domain_to_json(dom);
        j["components"] = (int)components(dom).size();
        write_json(j, opath(c.recipe + "_domain.json"));
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (metric->parsed()) {
        GridDomain dom = make_domain(c, params);
        int a = dom.nearest_open({pt_a[0], pt_a[1]});
        int b = dom.nearest_open({pt_b[0], pt_b[1]});
        DistInterval dm = mazurkiewicz_distance(dom, a, b);
        json j{{"euclid", dist(dom.center(a), dom.center(b))},
               {"inner", inner_distance(dom, a, b)},
               {"maz_lo", dm.lo},
               {"maz_hi", dm.hi}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (boundary->parsed()) {
        GridDomain dom = make_domain(c, params);
        MazBoundary maz = build_maz_boundary(dom);
        json j = maz_boundary_to_json(dom, maz);
        write_json(j, opath(c.recipe + "_boundary.json"));
        std::cout << "points: " << maz.points.size() << ", anchors: " << maz.fibers.size() << "\n";
        return 0;
    }
    if (capacity->parsed()) {
        GridDomain dom = make_domain(c, params);
        TargetSet E;
        if (!target_rect.empty()) {
            Box2 box{{target_rect[0], target_rect[1]}, {target_rect[2], target_rect[3]}};
            for (int cc : dom.open_cells())
                if (box.contains(dom.center(cc))) E.interior.push_back(cc);
            for (int a : dom.boundary_vertices())
                if (box.contains(dom.center(a))) E.anchors.push_back(a);
        }
        if (!std::isnan(anchors_x)) {
            for (int a : dom.boundary_vertices())
                if (std::abs(dom.center(a).x - anchors_x) <= 0.51 * dom.h()) E.anchors.push_back(a);
        }
        CapacityVariant v;
        if (variant == "AMBIENT") v.tag = CapTag::AMBIENT;
        else if (variant == "CLOSURE_MU") v.tag = CapTag::CLOSURE_MU;
        else if (variant == "CLOSURE_MU0") v.tag = CapTag::CLOSURE_MU0;
        else if (variant == "BAR") v.tag = CapTag::BAR;
        else if (variant == "BAR_MAZ") v.tag = CapTag::BAR_MAZ;
        else raise(Errc::BadInput, "unknown variant " + variant);
        CapacityOptions co;
        co.tol = c.tol;
        co.max_iter = c.max_iter;
        MazBoundary maz;
        const MazBoundary* mz = nullptr;
        if (v.tag == CapTag::BAR_MAZ) {
            maz = build_maz_boundary(dom);
            mz = &maz;
        }
        auto est = estimate_capacity(dom, E, c.p, v, co, mz);
        json j = capacity_to_json(est);
        write_json(j, opath("capacity.json"));
        field_to_csv(dom, est.restrict_to(dom), opath("capacity_minimizer.csv"));
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (solve->parsed()) {
        GridDomain dom = make_domain(c, params);
        DirichletProblem prob;
        prob.dom = &dom;
        prob.p = c.p;
        prob.opts.tol = c.tol;
        prob.opts.max_iter = c.max_iter;
        prob.boundary_data = boundary_data_from(dom, named_data(data));
        ScalarField sol(dom);
        SolveReport rep;
        if (std::isnan(obstacle)) {
            std::tie(sol, rep) = solve_dirichlet(prob);
        } else {
            ObstacleProblem op{prob, ScalarField(dom, obstacle)};
            std::tie(sol, rep) = solve_obstacle(op);
        }
        field_to_csv(dom, sol, opath("solution.csv"));
        field_to_pgm(dom, sol, opath("solution.pgm"));
        json j{{"energy", rep.final_energy},
               {"iterations", rep.iterations},
               {"converged", rep.converged},
               {"constraint_violation", rep.max_constraint_violation}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (perron->parsed()) {
        GridDomain dom = make_domain(c, params);
        MazBoundary maz = build_maz_boundary(dom);
        auto f = named_data(pdata);
        MazBoundaryData bd = MazBoundaryData::from_function(dom, maz, f);
        PerronResult r = perron_solve(dom, maz, bd, c.p, {c.tol, 1e-13, c.max_iter, "", c.threads});
        field_to_csv(dom, r.solution, opath("perron_solution.csv"));
        field_to_pgm(dom, r.solution, opath("perron_solution.pgm"));
        json diag = json::array();
        for (auto& row : r.diagnostics)
            diag.push_back({{"point", row.point},
                            {"approach", row.approach_value},
                            {"data", row.data_value},
                            {"gap", row.gap}});
        json j{{"converged", r.report.converged},
               {"energy", r.report.final_energy},
               {"points", maz.points.size()},
               {"diagnostics", diag}};
        write_json(j, opath("perron.json"));
        std::cout << "converged: " << r.report.converged << ", points: " << maz.points.size() << "\n";
        return 0;
    }
    if (mc->parsed()) {
        GridDomain dom = make_domain(c, params);
        auto bdata = boundary_data_from(dom, named_data(mdata));
        WalkConfig wc;
        wc.n_walks = walks;
        wc.rng_seed = c.seed;
        wc.threads = c.threads;
        WalkData wd;
        wd.anchor_values = &bdata;
        MCEstimate est = harmonic_measure_mc(dom, dom.nearest_open({start[0], start[1]}), wd, wc);
        json j{{"mean", est.mean},
               {"stderr", est.stderr_},
               {"absorbed", est.n_absorbed},
               {"timeout", est.n_timeout}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (runex->parsed()) {
        RunConfig rc;
        rc.example = example;
        rc.overrides = params;
        rc.recipe = c.recipe == "square" ? "" : c.recipe;
        rc.out_dir = c.out;
        rc.seed = c.seed;
        rc.threads = c.threads;
        RunReport rep = run_example(rc);
        std::cout << (rep.all_pass ? "PASS " : "FAIL ") << example << " ("
                  << rep.doc["steps"].size() << " steps)\n";
        return rep.exit_code;
    }
    if (render->parsed()) {
        double lo = 0.0, hi = -1.0;
        if (range.size() == 2) {
            lo = range[0];
            hi = range[1];
        }
        render_csv_to_pgm(in_csv, out_pgm, lo, hi);
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == Errc::UnknownExample || e.code() == Errc::BadInput ||
            e.code() == Errc::BadParams)
            return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
