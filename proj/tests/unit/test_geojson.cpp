#include <doctest.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "shadowtrack/geojson.hpp"

using namespace shadowtrack;
using namespace shadowtrack::geojson;

namespace {
const geometry::GeodeticCoord kRef{-73.9675, 40.781, 200.0};
}

TEST_SUITE("geojson") {
  TEST_CASE("polygons and multipolygons in lon/lat") {
    const std::string text = R"({
      "type": "FeatureCollection",
      "features": [
        {"type": "Feature", "properties": {"ground_elev": 10, "roof_height": 250},
         "geometry": {"type": "Polygon", "coordinates": [[[-73.9675, 40.781], [-73.9670, 40.781], [-73.9670, 40.7815], [-73.9675, 40.781]]]}},
        {"type": "Feature", "properties": {"ground_elev": 5, "roof_height": 90},
         "geometry": {"type": "MultiPolygon", "coordinates": [
            [[[-73.960, 40.780], [-73.959, 40.780], [-73.959, 40.781]]],
            [[[-73.958, 40.780], [-73.957, 40.780], [-73.957, 40.781]]]]}},
        {"type": "Feature", "properties": {"ground_elev": 0, "roof_height": 1},
         "geometry": {"type": "Point", "coordinates": [-73.96, 40.78]}}
      ]})";
    const auto b = parse_buildings(text, kRef);
    REQUIRE(b.size() == 2);  // parts of a MultiPolygon form one building; the Point is skipped
    CHECK(b[0].roof_height == 250);
    CHECK(b[0].ground_height == 10);
    REQUIRE(b[0].footprint.size() >= 3);
    CHECK(std::abs(b[0].footprint[0].east) < 1e-6);
    CHECK(b[0].footprint[1].east == doctest::Approx(0.0005 * 111320 * std::cos(40.781 * 3.141592653589793 / 180)).epsilon(0.005));
    CHECK(b[1].roof_height == 90);
    CHECK(b[1].footprint.size() == 6);
  }

  TEST_CASE("enu coordinates pass through") {
    const std::string text = R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "properties": {"crs": "enu", "ground_elev": 0, "roof_height": 150},
       "geometry": {"type": "Polygon", "coordinates": [[[100, 100], [150, 100], [150, 150], [100, 100]]]}}]})";
    const auto b = parse_buildings(text, kRef);
    REQUIRE(b.size() == 1);
    CHECK(b[0].footprint[1].east == 150);
    CHECK(b[0].footprint[1].north == 100);
  }

  TEST_CASE("empty collection") {
    CHECK(parse_buildings(R"({"type": "FeatureCollection", "features": []})", kRef).empty());
  }

  TEST_CASE("malformed input reports the byte offset") {
    const std::string good = fixtures::slurp(fixtures::data_dir() / "nyc_buildings.geojson");
    const std::string truncated = good.substr(0, good.size() / 2);
    try {
      (void)parse_buildings(truncated, kRef);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      REQUIRE(e.byte_offset().has_value());
      CHECK(*e.byte_offset() <= truncated.size() + 1);
      CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_buildings(R"({"type": "Feature"})", kRef), ParseError);
    CHECK_THROWS_AS(parse_buildings(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "properties": {"roof_height": 150},
       "geometry": {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1]]]}}]})", kRef), ParseError);
    CHECK_THROWS_AS(parse_buildings(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "properties": {"ground_elev": "x", "roof_height": 150},
       "geometry": {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1]]]}}]})", kRef), ParseError);
  }

  TEST_CASE("shipped fixture") {
    const auto b = load_buildings(fixtures::data_dir() / "nyc_buildings.geojson", kRef);
    CHECK(b.size() >= 8);
    const auto doc = nlohmann::json::parse(fixtures::slurp(fixtures::data_dir() / "nyc_buildings.geojson"));
    CHECK(doc["features"].size() == b.size());
    CHECK_THROWS(load_buildings(fixtures::data_dir() / "missing.geojson", kRef));
  }

  TEST_CASE("geo model import rejects broken documents") {
    CHECK_THROWS(import_geo_model("{"));
    CHECK_THROWS(import_geo_model(R"({"sensor": [0, 0]})"));
  }
}
