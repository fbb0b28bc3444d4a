#include "mazgrid/io.hpp"

#include <fstream>
#include <sstream>

namespace mazgrid {

namespace {

void write_pgm(const std::string& path, int w, int h, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::BadInput, "cannot open '" + path + "' for writing");
    out << "P5\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), (std::streamsize)bytes.size());
}

} // namespace

void mask_to_pgm(const GridDomain& dom, const std::string& path) {
    int w = dom.nx(), h = dom.ny();
    std::vector<uint8_t> img((size_t)w * h, 0);
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i)
            img[(size_t)(h - 1 - j) * w + i] = dom.is_open(i, j) ? 255 : 0; // top row first
    write_pgm(path, w, h, img);
}

void field_to_pgm(const GridDomain& dom, const ScalarField& u, const std::string& path, double lo,
                  double hi) {
    if (lo >= hi) {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (int k = 0; k < u.size(); ++k) {
            lo = std::min(lo, u[k]);
            hi = std::max(hi, u[k]);
        }
        if (!(hi > lo)) hi = lo + 1.0;
    }
    int w = dom.nx(), h = dom.ny();
    std::vector<uint8_t> img((size_t)w * h, 0);
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            if (!dom.is_open(i, j)) continue;
            double v = (u.at_cell(dom.spec().cell(i, j)) - lo) / (hi - lo);
            v = std::clamp(v, 0.0, 1.0);
            img[(size_t)(h - 1 - j) * w + i] = (uint8_t)(45 + 210 * v); // keep walls distinct
        }
    write_pgm(path, w, h, img);
}

void field_to_csv(const GridDomain& dom, const ScalarField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::BadInput, "cannot open '" + path + "' for writing");
    out << "i,j,x,y,value\n";
    out.precision(17);
    for (int c : dom.open_cells()) {
        Vec2 q = dom.center(c);
        out << dom.spec().ci(c) << "," << dom.spec().cj(c) << "," << q.x << "," << q.y << ","
            << u.at_cell(c) << "\n";
    }
}

void render_csv_to_pgm(const std::string& csv_path, const std::string& pgm_path, double lo, double hi) {
    std::ifstream in(csv_path);
    if (!in) raise(Errc::BadInput, "cannot open '" + csv_path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("i,j,x,y,value", 0) != 0)
        raise(Errc::BadInput, "expected header i,j,x,y,value");
    struct Row {
        int i, j;
        double v;
    };
    std::vector<Row> rows;
    int maxi = 0, maxj = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row r;
        double x, y;
        char c;
        std::istringstream ss(line);
        if (!(ss >> r.i >> c >> r.j >> c >> x >> c >> y >> c >> r.v))
            raise(Errc::BadInput, "malformed CSV row: " + line);
        rows.push_back(r);
        maxi = std::max(maxi, r.i);
        maxj = std::max(maxj, r.j);
    }
    if (rows.empty()) raise(Errc::BadInput, "empty field CSV");
    if (lo >= hi) {
        lo = rows.front().v;
        hi = rows.front().v;
        for (auto& r : rows) {
            lo = std::min(lo, r.v);
            hi = std::max(hi, r.v);
        }
        if (!(hi > lo)) hi = lo + 1.0;
    }
    int w = maxi + 1, h = maxj + 1;
    std::vector<uint8_t> img((size_t)w * h, 0);
    for (auto& r : rows) {
        double v = std::clamp((r.v - lo) / (hi - lo), 0.0, 1.0);
        img[(size_t)(h - 1 - r.j) * w + r.i] = (uint8_t)(45 + 210 * v);
    }
    write_pgm(pgm_path, w, h, img);
}

json domain_to_json(const GridDomain& dom) {
    json j;
    j["h"] = dom.h();
    j["nx"] = dom.nx();
    j["ny"] = dom.ny();
    j["origin"] = {dom.spec().x0, dom.spec().y0};
    j["open_cells"] = dom.n_open();
    j["measure"] = dom.total_measure();
    j["weight_mode"] = dom.weight_mode() == WeightMode::Lebesgue ? "lebesgue" : "radial_inv";
    if (dom.recipe()) {
        j["recipe"] = recipe_name(dom.recipe()->kind);
        j["params"] = dom.recipe()->params;
    }
    if (!dom.truncation_note().empty()) j["truncation"] = dom.truncation_note();
    return j;
}

json cellset_to_json(const CellSet& cs) {
    json j;
    j["cells"] = cs.cells;
    j["anchors"] = cs.anchors;
    return j;
}

json maz_boundary_to_json(const GridDomain& dom, const MazBoundary& maz) {
    json j;
    j["probe_radii"] = maz.probe_radii;
    json pts = json::array();
    for (const auto& pt : maz.points) {
        Vec2 a = dom.center(pt.anchor);
        pts.push_back({{"anchor", pt.anchor},
                       {"anchor_xy", {a.x, a.y}},
                       {"component", pt.component_id},
                       {"representative", pt.representative},
                       {"adjacent_cells", pt.adjacent_cells}});
    }
    j["points"] = std::move(pts);
    json fibers = json::array();
    for (const auto& [anchor, ids] : maz.fibers) {
        const auto& info = maz.info.at(anchor);
        fibers.push_back({{"anchor", anchor},
                          {"points", ids},
                          {"stable", info.stable},
                          {"stabilized_radius", info.stabilized_radius},
                          {"resolved_components", info.resolved_components},
                          {"counts", info.counts}});
    }
    j["fibers"] = std::move(fibers);
    return j;
}

json capacity_to_json(const CapacityEstimate& est) {
    json j;
    j["variant"] = cap_tag_name(est.tag);
    j["value"] = est.value;
    j["iterations"] = est.iterations;
    j["final_rel_decrement"] = est.final_rel_decrement;
    j["converged"] = est.converged;
    size_t hash = 0;
    for (int c : est.graph_cells) hash = hash * 1000003ULL + (size_t)c;
    j["graph_hash"] = hash;
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::BadInput, "cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

} // namespace mazgrid
