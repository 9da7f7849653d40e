#include <doctest.h>

#include <random>
#include <set>

#include "rediv/geometry.hpp"

using namespace rediv;

TEST_CASE("area of basic pieces") {
    CHECK(area(PieceRegion{Interval{0, 1}}) == 1);
    CHECK(area(PieceRegion{Rect{0, 2, 0, 3}}) == 6);
    ConvexPolygon tri = ConvexPolygon::of({{0, 0}, {1, 0}, {0, 1}});
    CHECK(area(PieceRegion{tri}) == q(1, 2));
    CHECK(area(PieceRegion{IntervalUnion::of({{0, q(1, 4)}, {q(1, 2), 1}})}) == q(3, 4));
}

TEST_CASE("rect intersection") {
    auto r = intersect_rect({0, 2, 0, 2}, {1, 3, 1, 3});
    REQUIRE(r.has_value());
    CHECK(r->xlo == 1);
    CHECK(r->xhi == 2);
    CHECK(r->ylo == 1);
    CHECK(r->yhi == 2);
    CHECK(!intersect_rect({0, 1, 0, 1}, {2, 3, 2, 3}));
    // boundary contact has zero area and counts as disjoint
    CHECK(!intersect_rect({0, 1, 0, 1}, {1, 2, 1, 2}));
    CHECK(!intersect_rect({0, 1, 0, 1}, {1, 2, 0, 1}));
}

TEST_CASE("half-plane clipping") {
    ConvexPolygon sq = ConvexPolygon::of({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    auto half = clip_convex(sq, {{1, 0}, q(1, 2)});
    REQUIRE(half.has_value());
    CHECK(half->area() == q(1, 2));

    auto all = clip_convex(sq, {{1, 0}, 2});
    REQUIRE(all.has_value());
    CHECK(all->v == sq.v);  // containment leaves the polygon unchanged

    ConvexPolygon tri = ConvexPolygon::of({{0, 0}, {2, 0}, {0, 2}});
    auto quad = clip_convex(tri, {{1, 0}, 1});
    REQUIRE(quad.has_value());
    CHECK(quad->area() == q(3, 2));  // shoelace on (0,0),(1,0),(1,1),(0,2)

    CHECK(!clip_convex(sq, {{1, 0}, 0}).has_value());  // zero-area result
}

TEST_CASE("clip stays inside and convex (property)") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 50; ++it) {
        std::vector<Pt> pts;
        for (int i = 0; i < 6; ++i) pts.push_back({q(rng() % 17, 4), q(rng() % 17, 4)});
        ConvexPolygon p;
        try {
            p = convex_hull(pts);
        } catch (const Error&) {
            continue;
        }
        Pt n{q((long)(rng() % 5) - 2), q((long)(rng() % 5) - 2)};
        if (n.x == 0 && n.y == 0) n.x = 1;
        Q c = q((long)(rng() % 21) - 10, 2);
        auto clipped = clip_convex(p, {n, c});
        auto other = clip_convex(p, {{-n.x, -n.y}, -c});
        // the two sides partition the polygon exactly
        Q total = (clipped ? clipped->area() : Q(0)) + (other ? other->area() : Q(0));
        CHECK(total == p.area());
        if (!clipped) continue;
        CHECK(clipped->area() <= p.area());
        for (const Pt& v : clipped->v) CHECK(p.contains(v));
        CHECK_NOTHROW(ConvexPolygon::of(clipped->v));  // re-validates convexity
    }
}

TEST_CASE("rectilinear validation") {
    CHECK_THROWS(RectilinearPolygon::of({{0, 0}, {1, 1}, {0, 2}, {-1, 1}}));  // not axis-parallel
    // self-touching boundary
    CHECK_THROWS(RectilinearPolygon::of(
        {{0, 0}, {2, 0}, {2, 2}, {1, 2}, {1, 1}, {3, 1}, {3, 3}, {0, 3}}));
    // clockwise input rejected
    CHECK_THROWS(RectilinearPolygon::of({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
    RectilinearPolygon l =
        RectilinearPolygon::of({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(l.reflex_count() == 1);
    CHECK(l.area() == 3);
}

TEST_CASE("rectilinear decomposition examples") {
    RectilinearPolygon rect = RectilinearPolygon::of({{0, 0}, {3, 0}, {3, 2}, {0, 2}});
    auto rs = rectilinear_decompose(rect);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].area() == 6);

    RectilinearPolygon l =
        RectilinearPolygon::of({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    auto ls = rectilinear_decompose(l);
    CHECK(ls.size() == 2);
    Q total = 0;
    for (const Rect& r : ls) total += r.area();
    CHECK(total == l.area());

    // staircase with R=4
    std::vector<Pt> pts{{0, 0}, {5, 0}};
    for (int t = 0; t <= 4; ++t) {
        pts.push_back({Q(5 - t), Q(t + 1)});
        pts.push_back({Q(4 - t), Q(t + 1)});
    }
    RectilinearPolygon stair = RectilinearPolygon::of(pts);
    CHECK(stair.reflex_count() == 4);
    auto ss = rectilinear_decompose(stair);
    CHECK(ss.size() <= 5);
    Q st = 0;
    for (const Rect& r : ss) st += r.area();
    CHECK(st == stair.area());
}

TEST_CASE("decomposition conservation and count on hand shapes") {
    std::vector<std::vector<Pt>> shapes = {
        // plus sign, R=4
        {{1, 0}, {2, 0}, {2, 1}, {3, 1}, {3, 2}, {2, 2}, {2, 3}, {1, 3}, {1, 2}, {0, 2},
         {0, 1}, {1, 1}},
        // T shape, R=2
        {{1, 0}, {2, 0}, {2, 2}, {3, 2}, {3, 3}, {0, 3}, {0, 2}, {1, 2}},
        // U shape, R=2
        {{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}},
    };
    int expected_reflex[] = {4, 2, 2};
    for (size_t s = 0; s < shapes.size(); ++s) {
        RectilinearPolygon poly = RectilinearPolygon::of(shapes[s]);
        CHECK(poly.reflex_count() == expected_reflex[s]);
        auto rs = rectilinear_decompose(poly);
        CHECK(static_cast<int>(rs.size()) <= poly.reflex_count() + 1);
        Q total = 0;
        for (const Rect& r : rs) total += r.area();
        CHECK(total == poly.area());
        for (size_t i = 0; i < rs.size(); ++i)
            for (size_t j = i + 1; j < rs.size(); ++j)
                CHECK(!intersect_rect(rs[i], rs[j]).has_value());
    }
}

TEST_CASE("hole extraction on rectangles") {
    // cake fully covered: no holes
    Rect cake{0, 2, 0, 2};
    CHECK(extract_holes(PieceRegion{cake},
                        {PieceRegion{Rect{0, 1, 0, 2}}, PieceRegion{Rect{1, 2, 0, 2}}})
              .empty());

    // maximal pinwheel leaves the single central blank
    std::vector<PieceRegion> pin = {PieceRegion{Rect{0, 2, 0, 3}}, PieceRegion{Rect{2, 5, 0, 2}},
                                    PieceRegion{Rect{3, 5, 2, 5}}, PieceRegion{Rect{0, 3, 3, 5}}};
    auto holes = extract_holes(PieceRegion{Rect{0, 5, 0, 5}}, pin);
    REQUIRE(holes.size() == 1);
    const Rect* hr = std::get_if<Rect>(&holes[0]);
    REQUIRE(hr);
    CHECK(hr->xlo == 2);
    CHECK(hr->xhi == 3);
    CHECK(hr->ylo == 2);
    CHECK(hr->yhi == 3);

    // conservation: holes + pieces = cake, exactly
    Q covered = 0;
    for (const auto& p : pin) covered += area(p);
    for (const auto& h : holes) covered += area(h);
    CHECK(covered == area(PieceRegion{Rect{0, 5, 0, 5}}));
}

TEST_CASE("hole owners identify the surrounding pieces") {
    // 2x2 diagonal-squares pattern after expansion: the interior hole touches
    // all four pieces
    std::vector<Rect> pieces = {{-1, 2, 0, 2}, {2, 4, 0, 3}, {-1, 1, 2, 5}, {1, 4, 3, 5}};
    auto holes = rectilinear_holes({Rect{-1, 4, 0, 5}}, pieces);
    REQUIRE(holes.size() == 1);
    CHECK(holes[0].corners.v.size() == 4);
    CHECK(!holes[0].boundary);
    std::set<int> owners(holes[0].edge_owner.begin(), holes[0].edge_owner.end());
    CHECK(owners == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("free components merge across shared edges but not corners") {
    // two free unit cells touching only at a corner stay separate components
    std::vector<Rect> pieces = {{0, 1, 1, 2}, {1, 2, 0, 1}};
    auto holes = rectilinear_holes({Rect{0, 2, 0, 2}}, pieces);
    CHECK(holes.size() == 2);
}

TEST_CASE("convex free components") {
    ConvexPolygon cake = ConvexPolygon::of({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
    std::vector<ConvexPolygon> pieces = {
        ConvexPolygon::of({{0, 0}, {4, 0}, {4, 1}, {0, 1}}),
        ConvexPolygon::of({{0, 3}, {4, 3}, {4, 4}, {0, 4}}),
    };
    auto comps = convex_free_components(cake, pieces);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].total_area == 8);
    CHECK(comps[0].convex);
    CHECK(comps[0].hull->area() == 8);
    // conservation
    Q total = comps[0].total_area;
    for (const auto& p : pieces) total += p.area();
    CHECK(total == cake.area());
}

TEST_CASE("interval union algebra") {
    IntervalUnion a = IntervalUnion::of({{0, 1}, {2, 3}});
    IntervalUnion b = IntervalUnion::of({{q(1, 2), q(5, 2)}});
    IntervalUnion i = intersect(a, b);
    CHECK(i.length() == 1);
    IntervalUnion u = union_of(a, b);
    CHECK(u.length() == 3);
    CHECK(u.parts.size() == 1);  // merged into [0,3]
    CHECK_THROWS(IntervalUnion::of({{0, 2}, {1, 3}}));           // overlap
    CHECK(IntervalUnion::of({{0, 1}, {1, 2}}).parts.size() == 1);  // adjacent parts merge
}

TEST_CASE("area additivity for disjoint pieces (property)") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 40; ++it) {
        Q split = q(1 + (long)(rng() % 18), 20);
        Rect a{0, split, 0, 1}, b{split, 1, 0, 1};
        CHECK(a.area() + b.area() == Q(1));
        Interval ia{0, split}, ib{split, 1};
        CHECK(ia.length() + ib.length() == Q(1));
    }
}
