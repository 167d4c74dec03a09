#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nqent/errors.hpp"
#include "nqent/runner.hpp"

using namespace nqent;
using nlohmann::json;

namespace {

RunConfig simulate_config()
{
    RunConfig c;
    c.mode = Mode::Simulate;
    c.n = 4;
    c.ratio = 10.0;
    c.s = 0.2;
    c.phi = 0.3;
    c.tau_max = 5.0;
    c.samples = 201;
    c.pair_classes = {PairClass::KL, PairClass::KJ, PairClass::JM};
    c.survival = true;
    c.threads = 3;
    return c;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("double formatting round-trips")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(INFINITY) == "inf");
    for (double v : {1.0 / 3.0, 2.0 / 7.0, 1e-300, 6.02214076e23}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("simulate table layout")
{
    const RunOutput out = run(simulate_config());
    CHECK(out.table.columns == std::vector<std::string>{"tau", "C_KL", "C_KJ", "C_JM", "P0"});
    REQUIRE(out.table.rows.size() == 201);
    CHECK(std::get<double>(out.table.rows.back()[0]) == 5.0);
    CHECK(std::abs(std::get<double>(out.table.rows[0][4]) - 1.0) < 1e-15);
    CHECK(!out.events);
}

TEST_CASE("thread count does not change results")
{
    RunConfig a = simulate_config();
    RunConfig b = a;
    a.threads = 1;
    b.threads = 8;
    CHECK(render_csv(run(a).table) == render_csv(run(b).table));
}

TEST_CASE("simulate validation")
{
    RunConfig c = simulate_config();
    c.pair_classes.clear();
    c.survival = false;
    CHECK_THROWS_AS(run(c), ValidationError);

    c = simulate_config();
    c.n = 3;
    CHECK_THROWS_AS(run(c), ValidationError); // JM needs four qubits

    c = simulate_config();
    c.samples = 1;
    CHECK_THROWS_AS(run(c), ValidationError);
}

TEST_CASE("sudden-death events table")
{
    RunConfig c = simulate_config();
    c.n = 2;
    c.s = 0.0;
    c.phi = 0.0;
    c.pair_classes = {PairClass::KL};
    c.tau_max = 1.0;
    c.samples = 2001;
    c.esd = true;
    const RunOutput out = run(c);
    REQUIRE(out.events);
    CHECK(out.events->columns == std::vector<std::string>{"pair", "death_tau", "revival_tau"});
    // nodes of E at 0.11, 0.34, 0.56, 0.78
    CHECK(out.events->rows.size() == 4);
    CHECK(std::get<std::string>(out.events->rows[0][0]) == "KL");
}

TEST_CASE("sweep single point equals simulate")
{
    RunConfig single = simulate_config();
    RunConfig sw = single;
    sw.mode = Mode::Sweep;
    sw.sweep.n = {single.n};
    sw.sweep.ratio = {single.ratio};
    sw.sweep.s = {single.s};
    sw.sweep.phi = {single.phi};
    const RunOutput a = run(single);
    const std::size_t picks[] = {0, 37, 200};
    for (std::size_t k : picks) {
        sw.sweep.tau.push_back(std::get<double>(a.table.rows[k][0]));
    }
    const RunOutput b = run(sw);
    REQUIRE(b.table.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t c = 1; c < a.table.columns.size(); ++c) {
            CHECK(std::get<double>(b.table.rows[i][4 + c]) == std::get<double>(a.table.rows[picks[i]][c]));
        }
    }
}

TEST_CASE("sweep order, stationary limit and n/a cells")
{
    RunConfig c;
    c.mode = Mode::Sweep;
    c.pair_classes = {PairClass::KL, PairClass::KJ, PairClass::JM};
    c.sweep.n = {2, 3, 4, 5};
    c.sweep.ratio = {0.1, 10.0};
    c.sweep.s = {0.0};
    c.sweep.phi = {0.0};
    c.sweep.tau = {1.0, INFINITY};
    c.threads = 4;
    const RunOutput out = run(c);
    REQUIRE(out.table.rows.size() == 16);
    // tau runs fastest, n slowest
    CHECK(std::get<long long>(out.table.rows[0][0]) == 2);
    CHECK(std::get<double>(out.table.rows[1][4]) == INFINITY);
    CHECK(std::get<double>(out.table.rows[2][1]) == 10.0);
    CHECK(std::get<long long>(out.table.rows[15][0]) == 5);
    CHECK(std::get<std::string>(out.table.rows[0][6]) == "n/a");
    CHECK(std::get<std::string>(out.table.rows[4][7]) == "n/a");
    // stationary KJ for n = 4 is the maximum 0.25
    CHECK(std::abs(std::get<double>(out.table.rows[9][6]) - 0.25) < 1e-15);

    const std::string text = render_json(out);
    const json doc = json::parse(text);
    CHECK(doc["rows"][1][4] == "inf");
    CHECK(doc["passed"] == true);
}

TEST_CASE("sweep with zeno columns")
{
    RunConfig c;
    c.mode = Mode::Sweep;
    c.kind = InitialKind::WState;
    c.pair_classes = {PairClass::PairW};
    c.sweep.n = {4};
    c.sweep.ratio = {0.1};
    c.sweep.s = {0.0};
    c.sweep.phi = {0.0};
    c.sweep.tau = {25.0};
    c.sweep.interval_T = {5.0, 1.0, 0.1};
    const RunOutput out = run(c);
    REQUIRE(out.table.rows.size() == 3);
    const auto& cols = out.table.columns;
    const auto pn = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), "P0_N") - cols.begin());
    REQUIRE(pn < cols.size());
    CHECK(std::get<double>(out.table.rows[0][pn]) < std::get<double>(out.table.rows[1][pn]));
    CHECK(std::get<double>(out.table.rows[1][pn]) < std::get<double>(out.table.rows[2][pn]));
}

TEST_CASE("sweep refuses oversized grids with the row count")
{
    RunConfig c;
    c.mode = Mode::Sweep;
    c.pair_classes = {PairClass::KL};
    c.sweep.n = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    c.sweep.ratio = std::vector<double>(100, 0.1);
    c.sweep.s = std::vector<double>(100, 0.0);
    c.sweep.phi = std::vector<double>(10, 0.0);
    c.sweep.tau = std::vector<double>(11, 1.0);
    try {
        run(c);
        FAIL("expected refusal");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("11000000") != std::string::npos);
    }
}

TEST_CASE("zeno summary")
{
    RunConfig c;
    c.mode = Mode::Zeno;
    c.n = 4;
    c.ratio = 0.1;
    c.tau_max = 25.0;
    c.zeno_intervals = {5.0, 1.0, 0.1};
    const RunOutput out = run(c);
    REQUIRE(out.table.rows.size() == 3);
    CHECK(std::get<long long>(out.table.rows[2][1]) == 250);
    c.zeno_intervals = {30.0};
    CHECK_THROWS_AS(run(c), ValidationError);
}

TEST_CASE("stationary graph output")
{
    RunConfig c;
    c.mode = Mode::Stationary;
    c.n = 4;
    const RunOutput out = run(c);
    CHECK(out.table.rows.size() == 6);
    c.kind = InitialKind::WState;
    CHECK_THROWS_AS(run(c), ValidationError);
}

TEST_CASE("config documents")
{
    const json doc = json::parse(R"({"mode": "sweep", "pair_classes": ["KL"],
        "sweep": {"n": [4], "R": [0.1], "s": [0], "phi": [0], "tau": [1, "inf"]}})");
    const RunConfig c = merge_config_json({}, doc);
    CHECK(c.mode == Mode::Sweep);
    CHECK(std::isinf(c.sweep.tau[1]));
    // round trip through the canonical form
    const RunConfig back = merge_config_json({}, config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));

    CHECK_THROWS_AS(merge_config_json({}, json::parse(R"({"nn": 3})")), ValidationError);
    CHECK_THROWS_AS(merge_config_json({}, json::parse(R"({"n": "four"})")), ValidationError);
    CHECK_THROWS_AS(merge_config_json({}, json::parse(R"({"sweep": {"x": [1]}})")), ValidationError);
    CHECK_THROWS_AS(merge_config_json({}, json::parse(R"({"pair_classes": ["AB"]})")), ValidationError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), IoError);
}

TEST_CASE("output files")
{
    const auto dir = std::filesystem::temp_directory_path() / "nqent_runner_test";
    std::filesystem::create_directories(dir);
    RunConfig c = simulate_config();
    c.esd = true;
    c.samples = 2001;
    c.output_path = (dir / "sim.csv").string();
    const RunOutput out = run(c);
    write_output(c, out);
    const std::string first = read_file(dir / "sim.csv");
    CHECK(first.rfind("tau,C_KL,C_KJ,C_JM,P0\n", 0) == 0);
    CHECK(std::filesystem::exists(dir / "sim.csv.esd.csv"));
    write_output(c, run(c));
    CHECK(read_file(dir / "sim.csv") == first);

    c.output_path = (dir / "missing" / "sim.csv").string();
    CHECK_THROWS_AS(write_output(c, out), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("verify report")
{
    RunConfig c;
    c.mode = Mode::Verify;
    const RunOutput ok = run(c);
    CHECK(ok.passed);
    bool saw_ratio = false;
    for (const auto& row : ok.table.rows) {
        if (std::get<std::string>(row[0]) == "rk4_order") {
            saw_ratio = true;
            CHECK(std::abs(std::get<double>(row[2]) - 16.0) < 1.0);
        }
    }
    CHECK(saw_ratio);

    c.verify_tolerances["ode_oracle"] = 1e-20;
    CHECK_FALSE(run(c).passed);
    c.verify_tolerances = {{"no_such_check", 1.0}};
    CHECK_THROWS_AS(run(c), ValidationError);
}

TEST_CASE("thread resolution")
{
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}
