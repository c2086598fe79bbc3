#include "shadowtrack/geojson.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shadowtrack/log.hpp"

namespace shadowtrack::geojson {

using geometry::BuildingRecord;
using geometry::GeodeticCoord;
using geometry::GeoModel;
using geometry::Point2D;
using geometry::Polygon2D;
using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
}

double number_property(const json& props, const char* key, std::size_t feature) {
  if (!props.is_object() || !props.contains(key) || !props[key].is_number()) {
    throw ParseError("feature " + std::to_string(feature) + ": missing numeric property '" + key + "'");
  }
  return props[key].get<double>();
}

void append_ring(const json& ring, bool enu, const GeodeticCoord& ref, std::size_t feature,
                 std::vector<Point2D>& out) {
  if (!ring.is_array()) {
    throw ParseError("feature " + std::to_string(feature) + ": ring is not an array");
  }
  for (const json& c : ring) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ParseError("feature " + std::to_string(feature) + ": bad coordinate");
    }
    const double x = c[0].get<double>();
    const double y = c[1].get<double>();
    if (enu) {
      out.push_back({x, y});
    } else {
      const double alt = c.size() >= 3 && c[2].is_number() ? c[2].get<double>() : ref.altitude;
      try {
        out.push_back(geometry::geodetic_to_enu({x, y, alt}, ref).horizontal);
      } catch (const geometry::GeometryError& e) {
        throw ParseError("feature " + std::to_string(feature) + ": " + e.what());
      }
    }
  }
}

json ring_to_json(std::span<const Point2D> ring) {
  json out = json::array();
  for (const Point2D& p : ring) {
    out.push_back({p.east, p.north});
  }
  return out;
}

Polygon2D ring_from_json(const json& ring, const char* what) {
  if (!ring.is_array()) {
    throw ParseError(std::string(what) + " is not a vertex array");
  }
  std::vector<Point2D> pts;
  for (const json& c : ring) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ParseError(std::string(what) + " has a malformed vertex");
    }
    pts.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return Polygon2D(std::move(pts));
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<BuildingRecord> parse_buildings(std::string_view text, const GeodeticCoord& ref) {
  const json doc = parse_json(text);
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw ParseError("expected a GeoJSON FeatureCollection");
  }
  std::vector<BuildingRecord> out;
  const json& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    if (!f.is_object() || !f.contains("geometry") || !f["geometry"].is_object()) {
      throw ParseError("feature " + std::to_string(i) + ": missing geometry");
    }
    const json& g = f["geometry"];
    const std::string type = g.value("type", "");
    const json props = f.value("properties", json::object());
    const bool enu = props.is_object() && props.value("crs", "") == "enu";

    BuildingRecord rec;
    rec.ground_height = number_property(props, "ground_elev", i);
    rec.roof_height = number_property(props, "roof_height", i);
    if (!g.contains("coordinates") || !g["coordinates"].is_array()) {
      throw ParseError("feature " + std::to_string(i) + ": missing coordinates");
    }
    const json& coords = g["coordinates"];
    if (type == "Polygon") {
      if (coords.empty()) {
        throw ParseError("feature " + std::to_string(i) + ": empty polygon");
      }
      append_ring(coords[0], enu, ref, i, rec.footprint);
    } else if (type == "MultiPolygon") {
      for (const json& part : coords) {
        if (!part.is_array() || part.empty()) {
          throw ParseError("feature " + std::to_string(i) + ": empty polygon part");
        }
        append_ring(part[0], enu, ref, i, rec.footprint);
      }
    } else {
      log::debug("skipping feature " + std::to_string(i) + " with geometry type '" + type + "'");
      continue;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<BuildingRecord> load_buildings(const std::filesystem::path& path, const GeodeticCoord& ref) {
  return parse_buildings(read_file(path), ref);
}

std::string export_geo_model(const GeoModel& model) {
  json doc;
  doc["sensor"] = {model.sensor().east, model.sensor().north};
  doc["sensor_height"] = model.sensor_height();
  doc["obstacles"] = json::array();
  for (const Polygon2D& p : model.obstacles()) doc["obstacles"].push_back(ring_to_json(p.vertices()));
  doc["shadows"] = json::array();
  for (const Polygon2D& p : model.shadows()) doc["shadows"].push_back(ring_to_json(p.vertices()));
  doc["boundary"] = ring_to_json(model.boundary().vertices());
  return doc.dump(1) + "\n";
}

GeoModel import_geo_model(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) {
    throw ParseError("geo model must be a JSON object");
  }
  for (const char* key : {"sensor", "obstacles", "shadows", "boundary"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw ParseError(std::string("geo model is missing array '") + key + "'");
    }
  }
  const json& s = doc["sensor"];
  if (s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
    throw ParseError("geo model 'sensor' must be [east, north]");
  }
  std::vector<Polygon2D> obstacles, shadows;
  for (const json& r : doc["obstacles"]) obstacles.push_back(ring_from_json(r, "obstacle"));
  for (const json& r : doc["shadows"]) shadows.push_back(ring_from_json(r, "shadow"));
  const double height = doc.contains("sensor_height") && doc["sensor_height"].is_number()
                            ? doc["sensor_height"].get<double>()
                            : 0.0;
  return GeoModel({s[0].get<double>(), s[1].get<double>()}, height, std::move(obstacles), std::move(shadows),
                  ring_from_json(doc["boundary"], "boundary"));
}

void save_geo_model(const std::filesystem::path& path, const GeoModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << export_geo_model(model);
}

GeoModel load_geo_model(const std::filesystem::path& path) { return import_geo_model(read_file(path)); }

}  // namespace shadowtrack::geojson
