#include "polarpoly/io.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>

namespace polarpoly {

namespace {

Vec2d parse_point(const nlohmann::json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number())
    throw std::invalid_argument(where + ": point must be [x, y]");
  return Vec2d(node[0].get<double>(), node[1].get<double>());
}

std::ofstream open_out(const std::string& path, const char* who) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument(std::string(who) + ": cannot open " + path);
  return out;
}

}  // namespace

std::vector<PolygonRecord> read_polygons(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("read_polygons: cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("read_polygons: " + path + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("schema_version", -1) != 1)
    throw std::invalid_argument("read_polygons: " + path + ": schema_version 1 required");
  if (!doc.contains("polygons") || !doc["polygons"].is_array())
    throw std::invalid_argument("read_polygons: " + path + ": polygons array required");

  std::vector<PolygonRecord> records;
  records.reserve(doc["polygons"].size());
  for (std::size_t idx = 0; idx < doc["polygons"].size(); ++idx) {
    const nlohmann::json& entry = doc["polygons"][idx];
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string())
      throw std::invalid_argument("read_polygons: polygon entry " + std::to_string(idx) +
                                  ": string id required");
    const std::string id = entry["id"].get<std::string>();
    const std::string where = "read_polygons: polygon '" + id + "'";
    if (!entry.contains("vertices") || !entry["vertices"].is_array())
      throw std::invalid_argument(where + ": vertices array required");
    std::vector<Vec2d> vertices;
    vertices.reserve(entry["vertices"].size());
    for (const nlohmann::json& v : entry["vertices"]) vertices.push_back(parse_point(v, where));
    try {
      PolygonRecord rec{id, CartesianPolygon(std::move(vertices)), std::nullopt};
      if (entry.contains("origin")) rec.origin = parse_point(entry["origin"], where);
      records.push_back(std::move(rec));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  return records;
}

void write_polygons(const std::string& path, const std::vector<PolygonRecord>& records) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const PolygonRecord& rec : records) {
    nlohmann::ordered_json entry;
    entry["id"] = rec.id;
    nlohmann::ordered_json verts = nlohmann::ordered_json::array();
    for (const Vec2d& v : rec.polygon.vertices()) verts.push_back({v.x(), v.y()});
    entry["vertices"] = std::move(verts);
    if (rec.origin) entry["origin"] = {rec.origin->x(), rec.origin->y()};
    arr.push_back(std::move(entry));
  }
  doc["polygons"] = std::move(arr);
  std::ofstream out = open_out(path, "write_polygons");
  out << doc.dump(2) << '\n';
  if (!out) throw std::invalid_argument("write_polygons: write failure on " + path);
}

void write_trace_csv(const FitTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path, "write_trace_csv");
  out << "iter,origin_loss,iou_loss,smooth_loss,total\n";
  char buf[160];
  for (const FitIterationRecord& rec : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g\n", rec.iter, rec.losses.origin,
                  rec.losses.polar_iou, rec.losses.smoothness, rec.losses.total);
    out << buf;
  }
  if (!out) throw std::invalid_argument("write_trace_csv: write failure on " + path);
}

void render_svg(const std::vector<std::pair<CartesianPolygon, SvgStyle>>& shapes,
                const std::string& path) {
  double vx = 0.0;
  double vy = 0.0;
  double vw = 1.0;
  double vh = 1.0;
  if (!shapes.empty()) {
    BoundingBox bb = bounding_box(shapes.front().first);
    for (const auto& [poly, style] : shapes) {
      const BoundingBox pb = bounding_box(poly);
      bb.min = bb.min.cwiseMin(pb.min);
      bb.max = bb.max.cwiseMax(pb.max);
    }
    const double mx = 0.05 * bb.width();
    const double my = 0.05 * bb.height();
    vx = bb.min.x() - mx;
    vw = bb.width() + 2.0 * mx;
    // The y axis is flipped by emitting -y, so the box top is -max.y).
    vy = -(bb.max.y() + my);
    vh = bb.height() + 2.0 * my;
  }

  std::ofstream out = open_out(path, "render_svg");
  char buf[256];
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.9g %.9g %.9g %.9g\">\n",
                vx, vy, vw, vh);
  out << buf;
  for (const auto& [poly, style] : shapes) {
    out << "  <path d=\"";
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.9g %.9g", i == 0 ? "M " : " L ", v[i].x(), -v[i].y());
      out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  " Z\" fill=\"%s\" stroke=\"%s\" stroke-width=\"%.9g\" opacity=\"%.9g\"/>\n",
                  style.fill.c_str(), style.stroke.c_str(), style.stroke_width, style.opacity);
    out << buf;
  }
  out << "</svg>\n";
  if (!out) throw std::invalid_argument("render_svg: write failure on " + path);
}

}  // namespace polarpoly
