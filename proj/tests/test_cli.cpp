// Copyright 2026 The qgyro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgyro/cli.hpp"
#include "qgyro/io.hpp"

using namespace qgyro;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qgyro");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("17-digit formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(3.0) == "3");
    CHECK(format_double(1e-20) == "9.9999999999999995e-21");
  }

  TEST_CASE("field spec JSON round trip") {
    const FieldSpec specs[] = {RotatingFieldParams{0.7, 1.3, 1.1, 0.4}, NonrotatingFieldParams{1.0, 1.5, 3.0},
                               ConstantField{Vec3(1.0, 2.0, 3.0)}, MeanOfNonrotating{{0.2, 0.2, 10.0}}};
    for (const auto& s : specs) {
      const FieldSpec back = field_spec_from_json(to_json(s));
      CHECK(variant_name(back) == variant_name(s));
      CHECK((field_at(back, 0.3) - field_at(s, 0.3)).norm() == 0.0);
    }
    CHECK_THROWS(field_spec_from_json(nlohmann::json{{"variant", "spiral"}}));
    CHECK_THROWS(field_spec_from_json(nlohmann::json{{"variant", "rotating"}, {"b0", 1.0}}));
  }

  TEST_CASE("simulate writes the trajectory table") {
    const Result r = run({"simulate", "--field", "nr", "--b0", "1", "--b3", "1.5", "--omega", "3", "--q0", "0.5",
                          "--p0", "1", "--periods", "2", "--samples-per-period", "5"});
    REQUIRE(r.code == kExitOk);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,s1,s2,s3,q,p,H");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 11);
  }

  TEST_CASE("missing parameters and bad values exit with code 1") {
    CHECK(run({"simulate", "--b0", "1", "--b3", "1.5"}).code == kExitInvalid);
    CHECK(run({"simulate", "--b0", "1", "--b3", "1.5", "--omega", "-3"}).code == kExitInvalid);
    CHECK(run({"simulate", "--field", "spiral"}).code == kExitInvalid);
    CHECK(run({"frobnicate"}).code == kExitInvalid);
    CHECK(run({}).code == kExitInvalid);
    CHECK(run({"--help"}).code == kExitOk);
  }

  TEST_CASE("numerical failures exit with code 2") {
    // A fixed-point orbit has no q variance to fit.
    const Result r = run({"contour", "--field", "nr", "--b0", "0", "--b3", "1", "--omega", "3", "--q0", "1"});
    CHECK(r.code == kExitNumerical);
  }

  TEST_CASE("fit-gamma JSON summary") {
    const Result r = run({"fit-gamma", "--b0", "1", "--b3", "1.5", "--omega", "3", "--periods", "200", "--json"});
    REQUIRE(r.code == kExitOk);
    CHECK(json_of(r)["gamma"].get<double>() == doctest::Approx(4.9559).epsilon(5e-3));
  }

  TEST_CASE("output is byte-identical across runs") {
    const std::vector<std::string> args{"strobe", "--field", "nr", "--b0", "1", "--b3", "1.5", "--omega", "3",
                                        "--random", "3", "--seed", "4", "--periods", "10"};
    CHECK(run(args).out == run(args).out);
    auto more = args;
    more.push_back("--jobs");
    more.push_back("3");
    CHECK(run(args).out == run(more).out);
  }

  TEST_CASE("config file fills unset options; flags win") {
    const std::string path = "qgyro_cli_test_config.json";
    {
      std::ofstream f(path);
      f << R"({"b0": 1, "b3": 1.5, "omega": 3, "periods": 50, "json": true})";
    }
    const Result r = run({"--config", path, "fit-gamma", "--periods", "20"});
    REQUIRE(r.code == kExitOk);
    CHECK(json_of(r)["n_points"].get<int>() == 21);
    {
      std::ofstream f(path);
      f << R"({"b0": 1, "nonsense": 2})";
    }
    CHECK(run({"--config", path, "fit-gamma"}).code == kExitInvalid);
    std::remove(path.c_str());
  }

  TEST_CASE("not predict lists verified regimes") {
    const Result r = run({"not", "predict", "--b0", "1", "--b3", "0.5", "--omega", "1", "--json"});
    REQUIRE(r.code == kExitOk);
    const auto j = json_of(r);
    REQUIRE(j["regimes"].size() == 2);
    for (const auto& reg : j["regimes"]) CHECK(reg["verified"].get<bool>());
  }

  TEST_CASE("not predict table quotes class labels") {
    const Result r = run({"not", "predict", "--b0", "1", "--b3", "0.5", "--omega", "1"});
    REQUIRE(r.code == kExitOk);
    std::istringstream in(r.out);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      // Count separators outside double quotes.
      int fields = 1;
      bool quoted = false;
      for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) ++fields;
      }
      CHECK(fields == 6);
      ++rows;
    }
    CHECK(rows == 5);
  }

  TEST_CASE("not detect on the mean-field example") {
    const Result r = run({"not", "detect", "--field", "nr", "--b0", "0.2", "--b3", "0.2", "--omega", "10", "--p0",
                          "4.712389", "--q0", "0.3", "--json"});
    REQUIRE(r.code == kExitOk);
    CHECK(json_of(r)["t_star"].get<double>() == doctest::Approx(7.854).epsilon(0.02));
  }

  TEST_CASE("geometry summary") {
    const Result r = run({"geometry", "--b0", "1", "--b3", "1", "--omega", "1", "--q0", "0", "--p0", "0", "--json"});
    REQUIRE(r.code == kExitOk);
    const auto j = json_of(r);
    CHECK(j["separatrix"]["passes_poles"].get<bool>());
    CHECK(j["not_rule"]["satisfied"].get<bool>());
  }

  TEST_CASE("avg, rwa, localize and lyapunov run") {
    CHECK(run({"avg", "--b0", "0.3", "--b3", "1", "--omega", "10", "--periods", "10", "--json"}).code == kExitOk);
    CHECK(run({"rwa", "--b0", "1", "--b3", "0.1", "--omega", "2", "--samples", "100"}).code == kExitOk);
    CHECK(run({"rwa", "--b0", "1", "--b3", "0.1", "--omega", "3"}).code == kExitInvalid);
    CHECK(run({"localize", "--b0", "0.01", "--b3", "24.04825557695773", "--omega", "20", "--json"}).code ==
          kExitOk);
    CHECK(run({"lyapunov", "--field", "nr", "--b0", "1", "--b3", "1.5", "--omega", "3", "--periods", "10"}).code ==
          kExitOk);
  }
}
