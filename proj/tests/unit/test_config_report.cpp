#include <doctest.h>

#include <cmath>

#include "tori/config.hpp"
#include "tori/report.hpp"
#include "tori/suite.hpp"

using namespace tori;

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(
      "[torus]\nresolution = 32\n[time]\nsteps = 80\n[run]\nseed = 7\n[verify]\ngroups = flux, hofer\n"
      "[scenario]\ntranslation = 0.5, -0.25\npairs = 3\n[tolerance]\nfloor = 1e-7\nflux.cocycle.max = 0.1\n");
  CHECK(c.resolution == 32);
  CHECK(c.steps == 80);
  CHECK(c.seed == 7);
  CHECK(c.groups == std::vector<std::string>{"flux", "hofer"});
  CHECK(c.translation[0] == 0.5);
  CHECK(c.translation[1] == -0.25);
  CHECK(c.pairs == 3);
  CHECK(c.tolerance_floor == 1e-7);
  CHECK(c.tol("flux.cocycle.max", 1e-5) == 0.1);
  CHECK(c.tol("hofer.length.identity", 1e-12) == 1e-7);
  CHECK(c.tol("hofer.length.identity", 1e-3) == 1e-3);

  const ExperimentConfig d = parse_config("");
  CHECK(d.resolution == 64);
  CHECK(d.steps == 200);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config("[torus]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[time]\nsteps = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[time]\nsteps = 20\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("[torus]\nresolution = 33\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("[torus]\ndim = 3\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("[verify]\ngroups = flux, nonsense\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("[tolerance]\nfloor = -1\n").validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/tori.ini"), ConfigError);
  CHECK_NOTHROW(ExperimentConfig{}.validate());
  CHECK(describe_config_keys().find("cocycle_steps") != std::string::npos);
}

TEST_CASE("row evaluation") {
  CHECK(make_row("a", "", 1.0, Comparison::le, 1.0, 0.0).pass);
  CHECK_FALSE(make_row("a", "", 1.1, Comparison::le, 1.0, 0.05).pass);
  CHECK(make_row("a", "", 0.96, Comparison::ge, 1.0, 0.05).pass);
  CHECK(make_row("a", "", -0.5, Comparison::within, -0.5, 0.0).pass);
  CHECK_FALSE(make_row("a", "", -0.49, Comparison::within, -0.5, 1e-3).pass);
  CHECK(make_row("a", "", 1.0, Comparison::flag, 0.0, 0.0).pass);
  CHECK_FALSE(make_row("a", "", 0.0, Comparison::flag, 0.0, 0.0).pass);
  for (Comparison c : {Comparison::le, Comparison::ge, Comparison::within, Comparison::flag})
    CHECK_FALSE(make_row("a", "", std::nan(""), c, 0.0, 1.0).pass);
}

TEST_CASE("report formats") {
  std::vector<ReportRow> rows = {make_row("z.last", "x, y", 0.25, Comparison::le, 1.0, 0.0, "say \"hi\""),
                                 make_row("a.first", "plain", std::nan(""), Comparison::ge, 0.0, 1e-6)};
  rows[0].runtime_ms = 3.5;
  sort_rows(rows);
  CHECK(rows[0].check_id == "a.first");
  const std::string csv = report_csv(rows);
  CHECK(csv ==
        "check_id,anchor,value,bound,tolerance,comparison,pass,note\n"
        "a.first,plain,nan,0,9.9999999999999995e-07,ge,false,\n"
        "z.last,\"x, y\",0.25,1,0,le,true,\"say \"\"hi\"\"\"\n");
  CHECK(csv.find("3.5") == std::string::npos);
  CHECK(timing_csv(rows) == "check_id,runtime_ms\na.first,0\nz.last,3.5\n");
  const std::string json = report_json(rows, RunInfo{"verify", 7, 2, 64, 200});
  CHECK(json.find("\"schema\": \"tori-report/1\"") != std::string::npos);
  CHECK(json.find("\"value\": \"nan\"") != std::string::npos);
  CHECK(json.find("\"failed\": 1") != std::string::npos);
  CHECK(json == report_json(rows, RunInfo{"verify", 7, 2, 64, 200}));
  CHECK(plotdata_csv({{"t", {"a", "b"}, {{1.0, 2.0}}}}) == "table,column,row,value\nt,a,0,1\nt,b,0,2\n");
}

TEST_CASE("scenario registry") {
  const auto names = scenario_names();
  CHECK(names.size() == 8);
  CHECK_THROWS_AS(run_scenario("no-such-scenario", ExperimentConfig{}), ConfigError);
  ExperimentConfig four;
  four.dim = 4;
  four.resolution = 8;
  CHECK_THROWS_AS(run_verify(four), ConfigError);
}
