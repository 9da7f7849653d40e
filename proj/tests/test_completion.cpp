#include <doctest.h>

#include <cmath>

#include "rediv/completion.hpp"
#include "rediv/fixtures.hpp"

using namespace rediv;

namespace {

Q total_area(const std::vector<PieceRegion>& ps) {
    Q s = 0;
    for (const auto& p : ps) s += area(p);
    return s;
}

void check_conservation(const PieceRegion& cake, const CompletionResult& res) {
    CHECK(total_area(res.expanded) + total_area(res.blanks) == area(cake));
}

void check_containment(const std::vector<PieceRegion>& inputs, const CompletionResult& res) {
    REQUIRE(inputs.size() == res.expanded.size());
    for (size_t i = 0; i < inputs.size(); ++i) {
        auto inter = intersect_pieces(res.expanded[i], inputs[i]);
        REQUIRE(inter.has_value());
        CHECK(area(*inter) == area(inputs[i]));
    }
}

}  // namespace

TEST_CASE("complete_interval attaches gaps deterministically") {
    CompletionResult full =
        complete_interval({0, 1}, {{0, q(1, 2)}, {q(1, 2), 1}});
    CHECK(full.b == 0);
    CHECK(std::get<Interval>(full.expanded[0]).lo == 0);
    CHECK(std::get<Interval>(full.expanded[0]).hi == q(1, 2));

    // leading gap attaches right, inner gaps attach left
    CompletionResult res = complete_interval(
        {0, 1}, {{q(1, 5), q(2, 5)}, {q(3, 5), q(7, 10)}});
    CHECK(res.b == 0);
    CHECK(std::get<Interval>(res.expanded[0]).lo == 0);
    CHECK(std::get<Interval>(res.expanded[0]).hi == q(3, 5));
    CHECK(std::get<Interval>(res.expanded[1]).lo == q(3, 5));
    CHECK(std::get<Interval>(res.expanded[1]).hi == 1);

    CompletionResult single = complete_interval({0, 1}, {{q(1, 3), q(1, 2)}});
    CHECK(std::get<Interval>(single.expanded[0]).lo == 0);
    CHECK(std::get<Interval>(single.expanded[0]).hi == 1);

    CHECK_THROWS(complete_interval({0, 1}, {{0, q(1, 2)}, {q(1, 3), 1}}));
}

TEST_CASE("expand_maximal_rect: single piece fills the cake") {
    auto grown = expand_maximal_rect({Rect{0, 4, 0, 3}}, {Rect{1, 2, 1, 2}});
    REQUIRE(grown.size() == 1);
    CHECK(grown[0].area() == 12);
}

TEST_CASE("expand_maximal_rect reaches the maximal pinwheel") {
    Tiling t = tiling_pinwheel();
    std::vector<Rect> pieces;
    for (const auto& p : t.pieces) pieces.push_back(std::get<Rect>(p));
    auto grown = expand_maximal_rect({std::get<Rect>(t.cake)}, pieces);
    Q covered = 0;
    for (const Rect& r : grown) covered += r.area();
    CHECK(covered == 24);  // cake 25 minus the central unit blank
    // idempotence: expanding a maximal configuration changes nothing
    auto again = expand_maximal_rect({std::get<Rect>(t.cake)}, grown);
    for (size_t i = 0; i < grown.size(); ++i) {
        CHECK(again[i].xlo == grown[i].xlo);
        CHECK(again[i].xhi == grown[i].xhi);
        CHECK(again[i].ylo == grown[i].ylo);
        CHECK(again[i].yhi == grown[i].yhi);
    }
}

TEST_CASE("complete_rectangle on the pinwheel leaves one blank") {
    Tiling t = tiling_pinwheel();
    std::vector<Rect> pieces;
    for (const auto& p : t.pieces) pieces.push_back(std::get<Rect>(p));
    CompletionResult res = complete_rectangle(std::get<Rect>(t.cake), pieces);
    CHECK(res.b == 1);
    const Rect& blank = std::get<Rect>(res.blanks[0]);
    CHECK(blank.xlo == 2);
    CHECK(blank.xhi == 3);
    check_conservation(t.cake, res);
    check_containment(t.pieces, res);
}

TEST_CASE("complete_rectangle: m=1 leaves no blanks") {
    CompletionResult res = complete_rectangle({0, 5, 0, 4}, {Rect{2, 3, 1, 2}});
    CHECK(res.b == 0);
    CHECK(area(res.expanded[0]) == 20);
}

TEST_CASE("diagonal squares: maximal, rectangular holes, tight-ish blank count") {
    for (int k = 2; k <= 5; ++k) {
        Tiling t = tiling_diagonal_squares(k);
        int m = k * k;
        REQUIRE(static_cast<int>(t.pieces.size()) == m);
        std::vector<Rect> pieces;
        for (const auto& p : t.pieces) pieces.push_back(std::get<Rect>(p));
        CompletionResult res = complete_rectangle(std::get<Rect>(t.cake), pieces);
        check_conservation(t.cake, res);
        for (const auto& blank : res.blanks) CHECK(std::holds_alternative<Rect>(blank));
        if (m >= 4) CHECK(res.b <= m - 3);
        CHECK(res.b >= static_cast<int>(m - 5 * std::sqrt(m)));
        CHECK(is_maximal(t.cake, t.pieces, ShapeFamily::rectangle).maximal);
    }
}

TEST_CASE("edge-exposure sanity on maximal rectangle configurations") {
    // no hole edge may be the full side of a single topping, or that topping
    // could stretch over it
    for (const Tiling& t : {tiling_diagonal_squares(3)}) {
        std::vector<Rect> pieces;
        for (const auto& p : t.pieces) pieces.push_back(std::get<Rect>(p));
        pieces = expand_maximal_rect({std::get<Rect>(t.cake)}, pieces);
        for (const RectilinearHole& h : rectilinear_holes({std::get<Rect>(t.cake)}, pieces)) {
            size_t ne = h.outline.size();
            for (size_t e = 0; e < ne; ++e) {
                int owner = h.edge_owner[e];
                if (owner < 0) continue;
                const Rect& r = pieces[owner];
                const Pt& a = h.outline[e];
                const Pt& b = h.outline[(e + 1) % ne];
                auto is_corner = [&](const Pt& p) {
                    return (p.x == r.xlo || p.x == r.xhi) && (p.y == r.ylo || p.y == r.yhi);
                };
                CHECK(!(is_corner(a) && is_corner(b)));
            }
        }
    }
}

TEST_CASE("maximality oracle: pinwheel input is not maximal, with witness") {
    Tiling t = tiling_pinwheel();
    MaximalityResult res = is_maximal(t.cake, t.pieces, ShapeFamily::rectangle);
    CHECK(!res.maximal);
    REQUIRE(res.witness.has_value());
    // the witness strictly grows its piece and stays disjoint from the rest
    const Rect& grown = std::get<Rect>(res.witness->grown);
    const Rect& orig = std::get<Rect>(t.pieces[res.witness->piece]);
    CHECK(grown.area() > orig.area());
    CHECK(grown.contains(orig));
    for (size_t j = 0; j < t.pieces.size(); ++j) {
        if (j == res.witness->piece) continue;
        CHECK(!intersect_rect(grown, std::get<Rect>(t.pieces[j])).has_value());
    }
}

TEST_CASE("maximality oracle: rectilinear figure configuration") {
    Tiling t = tiling_nonmaximal_rectilinear();
    MaximalityResult res = is_maximal(t.cake, t.pieces, ShapeFamily::rectilinear_container);
    CHECK(!res.maximal);
    REQUIRE(res.witness.has_value());
}

TEST_CASE("complete_rectilinear: rectangle cake degenerates to the rectangle case") {
    Tiling t = tiling_pinwheel();
    Rect cake = std::get<Rect>(t.cake);
    RectilinearPolygon rp = rect_to_rectilinear(cake);
    std::vector<Rect> pieces;
    for (const auto& p : t.pieces) pieces.push_back(std::get<Rect>(p));
    CompletionResult res = complete_rectilinear(rp, pieces);
    CHECK(res.b == 1);
    check_conservation(PieceRegion{rp}, res);
}

TEST_CASE("complete_rectilinear: L-shaped cake with one topping") {
    RectilinearPolygon cake =
        RectilinearPolygon::of({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CompletionResult res = complete_rectilinear(cake, {Rect{0, q(1, 2), 0, q(1, 2)}});
    check_conservation(PieceRegion{cake}, res);
    CHECK(res.b <= 2);  // boundary hole splits into at most R(hole)+1 rectangles
    for (const auto& blank : res.blanks) CHECK(std::holds_alternative<Rect>(blank));
}

TEST_CASE("rectilinear pipe construction respects the m+R-3 bound") {
    for (int k : {2, 3}) {
        Tiling t = tiling_rectilinear_pipe(k, 5);
        const RectilinearPolygon& cake = std::get<RectilinearPolygon>(t.cake);
        int R = cake.reflex_count();
        CHECK(R == 5);
        std::vector<Rect> pieces;
        for (const auto& p : t.pieces) pieces.push_back(std::get<Rect>(p));
        CompletionResult res = complete_rectilinear(cake, pieces);
        check_conservation(t.cake, res);
        int m = static_cast<int>(pieces.size());
        CHECK(res.b <= m + R - 3);
        CHECK(res.b >= 1);
    }
}

TEST_CASE("expand_maximal_convex: single piece fills a convex cake") {
    ConvexPolygon cake = ConvexPolygon::of({{0, 0}, {4, 0}, {5, 3}, {2, 5}, {0, 3}});
    auto grown = expand_maximal_convex(cake, {ConvexPolygon::of({{1, 1}, {2, 1}, {1, 2}})});
    REQUIRE(grown.size() == 1);
    CHECK(grown[0].area() == cake.area());
}

TEST_CASE("complete_convex on pinwheel rectangles") {
    Tiling t = tiling_pinwheel();
    std::vector<ConvexPolygon> pieces;
    for (const auto& p : t.pieces) pieces.push_back(rect_to_polygon(std::get<Rect>(p)));
    ConvexPolygon cake = rect_to_polygon(std::get<Rect>(t.cake));
    CompletionResult res = complete_convex(cake, pieces);
    CHECK(res.b == 1);
    CHECK(res.b <= 2 * 4 - 5);
    check_conservation(PieceRegion{cake}, res);
}

TEST_CASE("honeycomb: maximal, convex holes, blank count near 2m") {
    Tiling t = tiling_honeycomb(3);
    int m = static_cast<int>(t.pieces.size());
    REQUIRE(m == 9);
    std::vector<ConvexPolygon> pieces;
    for (const auto& p : t.pieces) pieces.push_back(std::get<ConvexPolygon>(p));
    const ConvexPolygon& cake = std::get<ConvexPolygon>(t.cake);
    CompletionResult res = complete_convex(cake, pieces);
    check_conservation(t.cake, res);
    CHECK(res.b <= 2 * m - 5);
    CHECK(res.b >= m / 2);  // asymptotically ~2 per hexagon; boundary eats some
    for (const auto& blank : res.blanks)
        CHECK_NOTHROW(ConvexPolygon::of(std::get<ConvexPolygon>(blank).v));
    CHECK(is_maximal(t.cake, t.pieces, ShapeFamily::convex).maximal);
}

TEST_CASE("diagonal squares stay maximal as convex pieces") {
    Tiling t = tiling_diagonal_squares(2);
    std::vector<PieceRegion> pieces;
    for (const auto& p : t.pieces) pieces.push_back(rect_to_polygon(std::get<Rect>(p)));
    PieceRegion cake{rect_to_polygon(std::get<Rect>(t.cake))};
    CHECK(is_maximal(cake, pieces, ShapeFamily::convex).maximal);
}

TEST_CASE("completion rejects overlapping input") {
    CHECK_THROWS(expand_maximal_rect({Rect{0, 4, 0, 4}},
                                     {Rect{0, 2, 0, 2}, Rect{1, 3, 1, 3}}));
    ConvexPolygon cake = rect_to_polygon({0, 4, 0, 4});
    CHECK_THROWS(expand_maximal_convex(
        cake, {rect_to_polygon({0, 2, 0, 2}), rect_to_polygon({1, 3, 1, 3})}));
}
