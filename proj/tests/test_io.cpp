#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "kdvcm/constants.hpp"
#include "kdvcm/io.hpp"

using namespace kdv;

TEST_CASE("exptrig JSON round trip is exact") {
  const auto p = build_eigen_pair().phi1;
  const Json j = to_json(p);
  REQUIRE(j["terms"].is_array());
  auto it = j["terms"][0].begin();
  CHECK(it.key() == "sigma");
  CHECK((++it).key() == "omega");
  CHECK((++it).key() == "coefCos");
  CHECK((++it).key() == "coefSin");
  const ExpTrigPoly back = exptrig_from_json(Json::parse(dump_json(j)));
  REQUIRE(back.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(back.terms()[i].coef_cos == p.terms()[i].coef_cos);
    CHECK(back.terms()[i].coef_sin == p.terms()[i].coef_sin);
    CHECK(back.terms()[i].omega == p.terms()[i].omega);
  }
}

TEST_CASE("floats are printed with 17 significant digits") {
  const Json j = {{"x", 0.1}, {"n", 3}, {"s", "a\"b"}, {"v", Json::array({1.5, -2.0})}, {"e", Json::object()},
                  {"bad", std::nan("")}};
  CHECK(dump_json(j) ==
        "{\n"
        "  \"x\": 0.10000000000000001,\n"
        "  \"n\": 3,\n"
        "  \"s\": \"a\\\"b\",\n"
        "  \"v\": [\n"
        "    1.5,\n"
        "    -2\n"
        "  ],\n"
        "  \"e\": {},\n"
        "  \"bad\": null\n"
        "}\n");
}

TEST_CASE("spectrum and scan layouts") {
  SpectrumReport s;
  s.grid_size = 64;
  s.eigenvalues = {{-1.0, 2.0}};
  const Json js = to_json(s);
  CHECK(js.begin().key() == "gridSize");
  CHECK(js["eigenvalues"][0]["im"] == 2.0);
  ScanReport r;
  r.argmax = {0.1, 0.2};
  const Json jr = to_json(r);
  CHECK(jr["argmin"]["m2"] == 0.2);
}

TEST_CASE("write_json_file reports failures") {
  CHECK_THROWS_AS(write_json_file("/nonexistent-dir/x.json", Json::object()), std::runtime_error);
  const auto path = std::filesystem::temp_directory_path() / "kdvcm_io_test.json";
  write_json_file(path.string(), Json{{"a", 1.25}});
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str() == "{\n  \"a\": 1.25\n}\n");
  std::filesystem::remove(path);
}
