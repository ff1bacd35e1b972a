#include "commands.hpp"
#include "generators.hpp"
#include "io.hpp"

#include <doctest.h>

using namespace catmin;

namespace {

std::string fixture(const std::string& name) { return std::string(CATMIN_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("fixtures validate") {
    for (const char* name : {"cone_3pi2.json", "cone_5pi2.json", "cone_five.json", "counterexample.json",
                             "flat.json", "saddle_grid.json", "square_star.json"}) {
      CAPTURE(name);
      CHECK(validate_instance(load_json_file(fixture(name))).empty());
    }
  }

  TEST_CASE("diagnostics name the offending fields") {
    const auto d = validate_instance(load_json_file(fixture("bad_index.json")));
    REQUIRE(d.size() == 2);
    CHECK(std::is_sorted(d.begin(), d.end()));
    CHECK(d[0].find("triangles[3][2]") != std::string::npos);
    CHECK(d[1].find("tolerances.zero") != std::string::npos);
    CHECK_THROWS_AS(parse_instance(load_json_file(fixture("bad_index.json"))), Error);
  }

  TEST_CASE("schema errors") {
    CHECK_FALSE(validate_instance(Json::parse(R"({"version":1})")).empty());
    CHECK_FALSE(validate_instance(Json::parse(R"({"version":1,"target":{"kind":"sphere"},"graph":{}})")).empty());
    CHECK_FALSE(validate_instance(Json::array()).empty());
    CHECK_THROWS_AS(parse_json_text("{\"a\": [1, 2,}"), Error);
  }

  TEST_CASE("round trip of a random disc") {
    std::mt19937_64 rng(4);
    Instance inst;
    inst.disc = testgen::random_grid_disc(rng, 4, 5, 3);
    inst.dimension = 3;
    inst.F = {0, 3, 7};
    inst.tol.angle = 1e-5;
    const Json j = to_json(inst);
    CHECK(validate_instance(j).empty());
    const Instance back = parse_instance(Json::parse(dump(j)));
    REQUIRE(back.disc);
    CHECK(back.F == inst.F);
    CHECK(back.tol.angle == inst.tol.angle);
    for (std::size_t i = 0; i < inst.disc->size(); ++i) {
      CHECK(back.disc->images[i] == inst.disc->images[i]);
      CHECK(back.disc->vertices[i] == inst.disc->vertices[i]);
    }
    CHECK(dump(to_json(back)) == dump(j));
  }

  TEST_CASE("round trip of graphs and polyhedral discs") {
    for (const char* name : {"square_star.json", "cone_5pi2.json"}) {
      const Json j = load_json_file(fixture(name));
      const Json again = to_json(parse_instance(j));
      CHECK(dump(to_json(parse_instance(again))) == dump(again));
    }
  }

  TEST_CASE("infinite values survive serialization") {
    CHECK(std::isinf(as_number(number(kInf))));
    CHECK(as_number(number(2.5)) == 2.5);
  }

  TEST_CASE("reports are deterministic for a fixed seed") {
    CommandOptions opt;
    opt.seed = 7;
    opt.samples = 200;
    for (const char* cmd : {"check-cat0", "metrics"}) {
      const Json in = load_json_file(fixture(std::string(cmd) == "metrics" ? "flat.json" : "cone_5pi2.json"));
      const auto a = run_command(cmd, in, opt), b = run_command(cmd, in, opt);
      CHECK(a.exit_code == 0);
      CHECK(dump(a.report) == dump(b.report));
    }
  }

  TEST_CASE("command exit codes") {
    CommandOptions opt;
    CHECK(run_command("no-such-command", std::nullopt, opt).exit_code == 2);
    CHECK(run_command("check-cat0", load_json_file(fixture("bad_index.json")), opt).exit_code == 2);
    CHECK(run_command("check-cat0", load_json_file(fixture("cone_five.json")), opt).exit_code == 1);
    CHECK(run_command("validate", load_json_file(fixture("flat.json")), opt).exit_code == 0);
  }
}
