#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "sesf/config.hpp"
#include "sesf/errors.hpp"
#include "sesf/report.hpp"

using namespace sesf;

namespace {

const nlohmann::ordered_json& result_of(const nlohmann::ordered_json& j, std::size_t i) {
    return j["results"][i]["result"];
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("a minimal config gets every default") {
    const auto c = parse_config("system=exp-sin task=classify");
    CHECK(c.system == "exp-sin");
    CHECK(c.horizon == 200.0);
    CHECK(c.log_points == 96);
    CHECK(c.n_max == 40);
    CHECK(c.s_grid.size() == 21);
    REQUIRE(c.tasks.size() == 1);
    CHECK(c.tasks[0].name == "classify");
    const auto g = build_system(c);
    const auto grid = build_grid(c, g);
    CHECK(grid.pairs().size() > 96);
    const auto echo = echo_config(c);
    CHECK(echo.find("horizon=200\n") != std::string::npos);
    CHECK(echo.find("task=classify") != std::string::npos);
}

TEST_CASE("task parameters and their defaults") {
    const auto c = parse_config("system=pure-decay:2\ntask=datko d=1\ntask=check:BVES alpha=2\ntask=bv-datko a=0.5");
    REQUIRE(c.tasks.size() == 3);
    CHECK(c.tasks[0].number("d") == 1.0);
    CHECK(c.tasks[1].number("beta") == 2.0);
    CHECK(c.tasks[1].param("cert") == "explicit");
    CHECK(c.tasks[2].number("b") == 0.5);
    const auto r = parse_config("system=spike task=rolewicz");
    CHECK(r.tasks[0].param("F") == "power:2");
}

TEST_CASE("config errors name the line and the field") {
    CHECK(error_of("system=exp-sin\ntask=check:UES alpha=0") ==
          "config line 2, field 'alpha': alpha must be > 0 (decay rate of the bound)");
    CHECK(error_of("system=exp-sin\nhorizon=-1").find("config line 2, field 'horizon'") == 0);
    CHECK(error_of("system=exp-sin task=frobnicate").find("unknown task 'frobnicate'") != std::string::npos);
    CHECK(error_of("colour=blue").find("field 'colour'") != std::string::npos);
    CHECK(error_of("seed=1\nseed=2").find("config line 2") == 0);
    CHECK(error_of("d=1").find("must follow a task") != std::string::npos);
    CHECK(error_of("task=classify d=1").find("does not apply") != std::string::npos);
    CHECK(error_of("task=bv-datko a=2 b=1").find("b must be >= a") != std::string::npos);
    CHECK(error_of("horizon").find("config line 1") == 0);
    CHECK(error_of("s_grid=0:x:2").find("field 's_grid'") != std::string::npos);
    CHECK_NOTHROW(parse_config("# just a comment\n\n"));
}

TEST_CASE("the config echo parses back to the same config") {
    const std::string texts[] = {
        "system=exp-sin task=classify",
        "system=spike horizon=50 s_grid=0:0.5:3 x_samples=0,1.5 task=check:BVES N=1 alpha=1 beta=2 task=datko d=0.25",
        "system=inline logu=nodes:0:0;1:-1;3:2 form=decay task=fit:ES task=rolewicz F=saturating d=0.5",
        "seed=42 rel_tol=1e-10 formats=json",
        "",
    };
    for (const auto& text : texts) {
        CAPTURE(text);
        const auto c = parse_config(text);
        const auto again = parse_config(echo_config(c));
        CHECK(again == c);
        CHECK(echo_config(again) == echo_config(c));
    }
}

TEST_CASE("number formatting round-trips") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numbers::pi) == "3.141592653589793");
    CHECK(format_double(INFINITY) == "inf");
    CHECK(format_double(-INFINITY) == "-inf");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("inline systems") {
    auto c = parse_config("system=inline logu=expsin:2,-1,1 task=classify");
    const auto g = build_system(c);
    CHECK(g.system.log_gain(std::numbers::pi / 2, 0.0, 0.0) == doctest::Approx(-std::numbers::pi / 2));
    CHECK_THROWS_AS(parse_config("system=inline task=classify"), ConfigError);
    CHECK_THROWS_AS(parse_config("system=inline logu=nodes:0:0;0:1 task=classify"), ConfigError);
}

TEST_CASE("running a datko task reports the closed-form profile") {
    auto c = parse_config("system=pure-decay:2 s_grid=0,1,2 task=datko d=1");
    const auto r = run(c);
    CHECK(r.all_completed());
    const auto j = results_json(r);
    for (const auto& p : result_of(j, 0)["profile"]) CHECK(p["value"].get<double>() == doctest::Approx(1.0));
    CHECK(j["results"][0]["status"] == "completed");
}

TEST_CASE("exp-sin classifies as BVES with a UES witness on the peak family") {
    const auto j = results_json(run(parse_config("system=exp-sin task=classify")));
    const auto& res = result_of(j, 0);
    CHECK(res["strongest"] == "BVES");
    const auto& ues = res["classes"][0];
    CHECK(ues["outcome"] == "refuted");
    REQUIRE(!ues["witness"].is_null());
    const double t = ues["witness"]["t"].get<double>();
    const double k = (t - std::numbers::pi / 2) / (2 * std::numbers::pi);
    CHECK(std::abs(k - std::round(k)) < 1e-9);
}

TEST_CASE("a spike BV check completes with a witness") {
    const auto r = run(parse_config("system=spike task=check:BVES N=1 alpha=1 beta=2"));
    CHECK(r.all_completed());
    const auto j = results_json(r);
    const auto& res = result_of(j, 0);
    CHECK(res["passed"] == false);
    CHECK(!res["witness"].is_null());
}

TEST_CASE("failing tasks are recorded, empty task lists echo the config only") {
    const auto r = run(parse_config("system=pure-decay:2 task=check:S cert=known task=datko"));
    CHECK_FALSE(r.all_completed());
    REQUIRE(r.tasks.size() == 2);
    CHECK_FALSE(r.tasks[0].error.empty());
    CHECK(r.tasks[1].completed);
    const auto empty = run(parse_config("system=spike"));
    CHECK(empty.tasks.empty());
    CHECK(empty.all_completed());
    CHECK(results_json(empty)["results"].empty());
}

TEST_CASE("runs are deterministic, also in parallel") {
    const auto c = parse_config("system=subexp horizon=60 task=classify task=datko task=barbashin task=fit:EG");
    const auto a = results_json(run(c)).dump();
    CHECK(a == results_json(run(c)).dump());
    CHECK(a == results_json(run(c, true)).dump());
    CHECK(to_json(run(c)).contains("timing"));
}

TEST_CASE("emit writes the selected formats") {
    const auto dir = std::filesystem::temp_directory_path() / "sesf-emit-test";
    std::filesystem::remove_all(dir);
    const auto r = run(parse_config("system=pure-decay:1 s_grid=0,1 task=datko"));
    const auto files = emit(r, dir);
    REQUIRE(files.size() == 3);
    CHECK(files[0].filename() == "report.json");
    CHECK(files[1].filename() == "report.txt");
    std::ifstream in(files[2]);
    std::string header;
    std::getline(in, header);
    CHECK(header == "# s D(s)");
    std::filesystem::remove_all(dir);
}
