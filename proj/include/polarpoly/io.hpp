#pragma once

#include "polarpoly/fit.hpp"
#include "polarpoly/polygon.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polarpoly {

struct PolygonRecord {
  std::string id;
  CartesianPolygon polygon;
  std::optional<Vec2d> origin;
};

// Reads a schema_version 1 polygon document:
//   {"schema_version": 1,
//    "polygons": [{"id": "...", "vertices": [[x, y], ...], "origin": [x, y]}]}
// with origin optional per entry. Violations are rejected with an error
// naming the offending polygon id; nothing is repaired.
std::vector<PolygonRecord> read_polygons(const std::string& path);

// Inverse of read_polygons. Values survive a round trip exactly because
// numbers are written with shortest round-trip precision.
void write_polygons(const std::string& path, const std::vector<PolygonRecord>& records);

// Header iter,origin_loss,iou_loss,smooth_loss,total then one row per
// iteration record, 12 significant digits, LF line endings.
void write_trace_csv(const FitTrace& trace, const std::string& path);

struct SvgStyle {
  std::string stroke = "#000000";
  double stroke_width = 0.02;
  std::string fill = "none";
  double opacity = 1.0;
};

// Renders closed paths into a standalone SVG. The viewBox covers the union
// bounding box plus a 5% margin per side; the y axis is flipped so larger y
// is drawn upward. Output bytes are a pure function of the input.
void render_svg(const std::vector<std::pair<CartesianPolygon, SvgStyle>>& shapes,
                const std::string& path);

}  // namespace polarpoly
