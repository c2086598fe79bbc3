#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shadowtrack/geometry.hpp"

namespace shadowtrack::geojson {

/// Malformed input. `byte_offset` is set for syntax errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::optional<std::size_t> byte_offset = std::nullopt)
      : std::runtime_error(what), byte_offset_(byte_offset) {}

  [[nodiscard]] std::optional<std::size_t> byte_offset() const { return byte_offset_; }

 private:
  std::optional<std::size_t> byte_offset_;
};

/// Parses a GeoJSON FeatureCollection of Polygon / MultiPolygon building
/// footprints carrying numeric `ground_elev` and `roof_height` properties.
/// Coordinates are longitude/latitude degrees converted to ENU about `ref`,
/// unless the feature sets property `crs` to "enu" (meters, used as-is).
std::vector<geometry::BuildingRecord> parse_buildings(std::string_view text,
                                                      const geometry::GeodeticCoord& ref);

std::vector<geometry::BuildingRecord> load_buildings(const std::filesystem::path& path,
                                                     const geometry::GeodeticCoord& ref);

/// GeoModel <-> JSON document with `sensor`, `sensor_height`, `obstacles`,
/// `shadows` and `boundary`, every polygon an array of [east, north] pairs.
std::string export_geo_model(const geometry::GeoModel& model);
geometry::GeoModel import_geo_model(std::string_view text);

void save_geo_model(const std::filesystem::path& path, const geometry::GeoModel& model);
geometry::GeoModel load_geo_model(const std::filesystem::path& path);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace shadowtrack::geojson
