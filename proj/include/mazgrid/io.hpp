#pragma once

#include <string>

#include <json.hpp>

#include "mazgrid/capacity.hpp"
#include "mazgrid/field.hpp"
#include "mazgrid/grid.hpp"
#include "mazgrid/metric.hpp"

namespace mazgrid {

using json = nlohmann::json;

/// P5 mask export: 0 = closed, 255 = open.
void mask_to_pgm(const GridDomain& dom, const std::string& path);

/// Grayscale field render; closed cells black. Range auto when lo >= hi.
void field_to_pgm(const GridDomain& dom, const ScalarField& u, const std::string& path,
                  double lo = 0.0, double hi = -1.0);

/// CSV with header i,j,x,y,value (open cells only).
void field_to_csv(const GridDomain& dom, const ScalarField& u, const std::string& path);

/// Render a field CSV (i,j,x,y,value rows) to a PGM image. Cells absent from
/// the CSV render black.
void render_csv_to_pgm(const std::string& csv_path, const std::string& pgm_path, double lo = 0.0,
                       double hi = -1.0);

json domain_to_json(const GridDomain& dom);
json cellset_to_json(const CellSet& cs);
json maz_boundary_to_json(const GridDomain& dom, const MazBoundary& maz);
json capacity_to_json(const CapacityEstimate& est);

void write_json(const json& j, const std::string& path);

} // namespace mazgrid
