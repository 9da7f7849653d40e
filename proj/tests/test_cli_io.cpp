#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "rediv/fixtures.hpp"
#include "rediv/instance_io.hpp"
#include "rediv/metrics.hpp"
#include "rediv/svg.hpp"

using namespace rediv;

namespace {

bool have_cli() {
    std::ifstream f("./rediv");
    return f.good();
}

int run_cli(const std::string& args) {
    int status = std::system(("./rediv " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("piece JSON round trip") {
    std::vector<PieceRegion> pieces = {
        Interval{0, q(2, 3)},
        IntervalUnion::of({{0, q(1, 4)}, {q(1, 2), 1}}),
        Rect{0, 1, q(1, 3), 2},
        ConvexPolygon::of({{0, 0}, {2, 0}, {1, 2}}),
        RectilinearPolygon::of({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),
    };
    for (const PieceRegion& p : pieces) {
        Json j = piece_to_json(p);
        PieceRegion back = piece_from_json(j);
        CHECK(piece_to_json(back).dump() == j.dump());
        CHECK(area(back) == area(p));
    }
}

TEST_CASE("instance round trip preserves every byte") {
    for (Mode mode : {Mode::interval, Mode::rectangle, Mode::rectilinear, Mode::convex}) {
        Instance inst = random_instance(mode, 3, 2, 11, 6);
        Json j = instance_to_json(inst);
        Instance back = instance_from_json(j);
        CHECK(instance_to_json(back).dump() == j.dump());
    }
}

TEST_CASE("allocation round trip keeps the report identical") {
    Instance inst = random_instance(Mode::interval, 4, 2, 19, 8);
    auto rr = redivide(inst);
    Json aj = allocation_to_json(inst, rr.allocation);
    Allocation back = allocation_from_json(aj);
    validate_allocation(inst, back);
    FairnessReport r1 = fairness_report(inst, rr.allocation, rr.b, rr.log);
    FairnessReport r2 = fairness_report(inst, back, rr.b, rr.log);
    CHECK(report_to_json(r1).dump() == report_to_json(r2).dump());
}

TEST_CASE("schema errors are typed") {
    CHECK_THROWS_AS(piece_from_json(Json{{"type", "sphere"}}), SchemaError);
    CHECK_THROWS_AS(piece_from_json(Json{{"type", "interval"}, {"lo", "1"}, {"hi", "x"}}),
                    SchemaError);
    Json j = instance_to_json(random_instance(Mode::interval, 2, 1, 3, 6));
    j["agents"][0]["role"] = "ancient";
    CHECK_THROWS_AS(instance_from_json(j), SchemaError);
}

TEST_CASE("svg rendering is deterministic") {
    Instance inst = random_instance(Mode::rectangle, 3, 2, 5, 6);
    auto rr = redivide(inst);
    std::vector<SvgLayer> layers;
    for (const Agent& a : inst.agents) {
        const PieceRegion* p = rr.allocation.piece_of(a.id);
        if (p) layers.push_back({*p, "a" + std::to_string(a.id), false});
    }
    std::string one = render_svg(inst.cake, layers);
    std::string two = render_svg(inst.cake, layers);
    CHECK(one == two);
    CHECK(one.find("<svg") == 0);
    CHECK(one.find("polygon") != std::string::npos);
}

TEST_CASE("cli end to end") {
    if (!have_cli()) return;  // tests may run outside the build directory

    // fixture -> redivide -> render pipeline, exit code 0 throughout
    CHECK(run_cli("fixture --kind gaps --n 4 --k 2 --out gaps.json") == 0);
    CHECK(run_cli("redivide --instance gaps.json --out gaps_alloc.json "
                  "--report gaps_report.json --svg gaps.svg") == 0);
    CHECK(run_cli("render --instance gaps.json --alloc gaps_alloc.json --svg gaps2.svg") == 0);

    Json rep = read_json("gaps_report.json");
    CHECK(rep.contains("gradual_retention"));
    // 1/(3n) proportionality visible in the report
    for (const Json& row : rep["normalized"])
        CHECK(row["normalized_float"].get<double>() >= 1.0 / 12 - 1e-12);

    // pinwheel completion reports b=1
    CHECK(run_cli("fixture --kind pinwheel --out pin.json") == 0);
    CHECK(run_cli("complete --instance pin.json --out pin_completion.json") == 0);
    CHECK(read_json("pin_completion.json")["b"].get<int>() == 1);
    // redividing the pinwheel instance carries the same blank count in the report
    CHECK(run_cli("redivide --instance pin.json --report pin_report.json") == 0);
    CHECK(read_json("pin_report.json")["blanks"].get<int>() == 1);

    // exchange on an unrestricted fixture
    CHECK(run_cli("fixture --kind random --mode unrestricted --n 3 --m 2 --seed 9 "
                  "--out ex.json") == 0);
    CHECK(run_cli("exchange --instance ex.json --r 1/3 --out ex_alloc.json "
                  "--report ex_report.json") == 0);
    CHECK(run_cli("exchange --instance ex.json --r 0/1") == 1);  // r outside (0,1)

    // malformed instance file: exit 2
    std::ofstream bad("bad.json");
    bad << "{\"version\": 1, \"mode\": \"interval\"}\n";
    bad.close();
    CHECK(run_cli("redivide --instance bad.json") == 2);
    CHECK(run_cli("redivide --instance missing.json") == 2);

    // pof batch writes a csv
    CHECK(run_cli("pof --mode interval --welfare nash --n 3 --count 2 --grid 6 "
                  "--out pof.csv") == 0);
    std::ifstream csv("pof.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "n,mode,welfare,U,W,ratio,bound,within_bound");

    // byte-identical SVG on repeated renders
    CHECK(run_cli("render --instance pin.json --svg pin_a.svg") == 0);
    CHECK(run_cli("render --instance pin.json --svg pin_b.svg") == 0);
    std::ifstream fa("pin_a.svg"), fb("pin_b.svg");
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
}
