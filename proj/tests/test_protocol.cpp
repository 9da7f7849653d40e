#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "rediv/fixtures.hpp"
#include "rediv/protocol.hpp"

using namespace rediv;

namespace {

Valuation uniform_on(const PieceRegion& cake) {
    if (is_1d(cake)) {
        IntervalUnion u = to_interval_union(cake);
        return Valuation::over(
            Density1D{{u.parts.front().lo, u.parts.back().hi}, {Q(1)}}, cake);
    }
    Rect bb = piece_bbox(cake);
    return Valuation::over(Density2D{{bb.xlo, bb.xhi}, {bb.ylo, bb.yhi}, {{Q(1)}}}, cake);
}

std::vector<AgentRef> uniform_agents(int n, std::vector<Valuation>& keep,
                                     const PieceRegion& cake) {
    keep.clear();
    keep.reserve(n);
    std::vector<AgentRef> refs;
    for (int i = 0; i < n; ++i) keep.push_back(uniform_on(cake));
    for (int i = 0; i < n; ++i) refs.push_back({i, ValuationView{&keep[i]}});
    return refs;
}

long mark_budget(long n) {
    return static_cast<long>(2.0 * n * std::log2(std::max<long>(n, 2)) + n);
}

}  // namespace

TEST_CASE("even_paz splits uniform agents evenly") {
    std::vector<Valuation> keep;
    QueryLog log;
    auto two = even_paz(uniform_agents(2, keep, PieceRegion{Interval{0, 1}}),
                        PieceRegion{Interval{0, 1}}, Axis::X, log);
    CHECK(std::get<Interval>(two[0]).hi == q(1, 2));
    CHECK(eval_raw(keep[0], two[0]) == q(1, 2));
    CHECK(eval_raw(keep[1], two[1]) == q(1, 2));

    auto three = even_paz(uniform_agents(3, keep, PieceRegion{Interval{0, 1}}),
                          PieceRegion{Interval{0, 1}}, Axis::X, log);
    CHECK(std::get<Interval>(three[0]).lo == 0);
    CHECK(std::get<Interval>(three[0]).hi == q(1, 3));
    CHECK(std::get<Interval>(three[1]).lo == q(1, 3));
    CHECK(std::get<Interval>(three[1]).hi == q(2, 3));
    CHECK(std::get<Interval>(three[2]).hi == 1);

    // n=4 on the unit square with vertical cuts: four quarter slabs
    auto four = even_paz(uniform_agents(4, keep, PieceRegion{Rect{0, 1, 0, 1}}),
                         PieceRegion{Rect{0, 1, 0, 1}}, Axis::X, log);
    for (int i = 0; i < 4; ++i) {
        const Rect& r = std::get<Rect>(four[i]);
        CHECK(r.xhi - r.xlo == q(1, 4));
        CHECK(r.ylo == 0);
        CHECK(r.yhi == 1);
    }
}

TEST_CASE("even_paz proportionality is exact (property)") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 25; ++it) {
        int n = 1 + static_cast<int>(rng() % 9);
        std::vector<Valuation> vals;
        std::vector<AgentRef> refs;
        for (int i = 0; i < n; ++i) {
            Density1D d;
            int cells = 3 + static_cast<int>(rng() % 4);
            for (int c = 0; c <= cells; ++c) d.breaks.push_back(q(c, cells));
            bool pos = false;
            for (int c = 0; c < cells; ++c) {
                long v = static_cast<long>(rng() % 8);
                pos |= v > 0;
                d.values.push_back(Q(v));
            }
            if (!pos) d.values[cells / 2] = 2;
            vals.push_back(Valuation::over(std::move(d), PieceRegion{Interval{0, 1}}));
        }
        for (int i = 0; i < n; ++i) refs.push_back({i, ValuationView{&vals[i]}});
        QueryLog log;
        auto alloc = even_paz(refs, PieceRegion{Interval{0, 1}}, Axis::X, log);
        for (int i = 0; i < n; ++i) {
            Q v = alloc.count(i) ? eval_raw(vals[i], alloc[i]) : Q(0);
            CHECK(v * n >= vals[i].total);  // exact 1/n each
        }
        CHECK(log.marks <= mark_budget(n));
        // the pieces tile the cake
        Q covered = 0;
        for (auto& [id, piece] : alloc) covered += area(piece);
        CHECK(covered == 1);
    }
}

TEST_CASE("archipelago base case and guarantee") {
    // m=1 reduces to Even-Paz
    std::vector<Valuation> keep;
    QueryLog log;
    auto res = archipelago(uniform_agents(2, keep, PieceRegion{Interval{0, 1}}),
                           {PieceRegion{Interval{0, 1}}}, Axis::X, log);
    CHECK(res.pieces.size() == 2);
    CHECK(res.island_of[0] == 0);
    CHECK(eval_raw(keep[0], res.pieces[0]) == q(1, 2));
}

TEST_CASE("archipelago hand example: two identical agents, islands worth 1 and 2") {
    // tightness construction with island values (1, n=2): both agents go to the last
    // island and each receives exactly 1 = total/(n+m-1)
    Density1D d{{Q(0), Q(1), Q(2), Q(3)}, {Q(1), Q(0), Q(2)}};
    PieceRegion cake{Interval{0, 3}};
    Valuation v0 = Valuation::over(d, cake);
    Valuation v1 = Valuation::over(d, cake);
    std::vector<AgentRef> refs{{0, ValuationView{&v0}}, {1, ValuationView{&v1}}};
    std::vector<PieceRegion> islands{PieceRegion{Interval{0, 1}}, PieceRegion{Interval{2, 3}}};
    QueryLog log;
    auto res = archipelago(refs, islands, Axis::X, log);
    CHECK(res.island_of[0] == 1);
    CHECK(res.island_of[1] == 1);
    CHECK(eval_raw(v0, res.pieces[0]) == 1);
    CHECK(eval_raw(v1, res.pieces[1]) == 1);
}

TEST_CASE("archipelago guarantee on random island instances (property)") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 20; ++it) {
        int n = 1 + static_cast<int>(rng() % 6);
        int m = 1 + static_cast<int>(rng() % 4);
        // islands: split [0,1] at 2m sorted cuts
        std::set<long> cutset;
        while (static_cast<int>(cutset.size()) < 2 * m) cutset.insert(rng() % 33);
        std::vector<long> cuts(cutset.begin(), cutset.end());
        std::vector<PieceRegion> islands;
        for (int j = 0; j < m; ++j)
            islands.push_back(Interval{q(cuts[2 * j], 33), q(cuts[2 * j + 1] + 1, 33)});
        std::vector<Valuation> vals;
        for (int i = 0; i < n; ++i) {
            Density1D d;
            for (int c = 0; c <= 8; ++c) d.breaks.push_back(q(c, 8));
            for (int c = 0; c < 8; ++c) d.values.push_back(Q(static_cast<long>(rng() % 6)));
            Valuation v = Valuation::over(std::move(d), PieceRegion{Interval{0, 1}});
            vals.push_back(std::move(v));
        }
        std::vector<AgentRef> refs;
        std::vector<Q> totals(n, Q(0));
        bool degenerate = false;
        for (int i = 0; i < n; ++i) {
            for (const auto& isl : islands) totals[i] += eval_raw(vals[i], isl);
            if (sign(totals[i]) == 0) degenerate = true;
            refs.push_back({i, ValuationView{&vals[i]}});
        }
        if (degenerate) continue;
        QueryLog log;
        auto res = archipelago(refs, islands, Axis::X, log);
        for (int i = 0; i < n; ++i) {
            Q v = res.pieces.count(i) ? eval_raw(vals[i], res.pieces[i]) : Q(0);
            CHECK(v * (n + m - 1) >= totals[i]);  // exact 1/(n+m-1)
            // piece inside a single island
            if (res.pieces.count(i)) {
                const PieceRegion& isl = islands[res.island_of[i]];
                auto inter = intersect_pieces(res.pieces[i], isl);
                REQUIRE(inter.has_value());
                CHECK(area(*inter) == area(res.pieces[i]));
            }
        }
        CHECK(log.marks + log.evals <=
              6 * m * n * (static_cast<long>(std::log2(std::max(n, 2))) + 2));
    }
}

TEST_CASE("redivide: single agent keeps the whole cake") {
    Instance inst;
    inst.mode = Mode::interval;
    inst.cake = Interval{0, 1};
    Agent a;
    a.id = 0;
    a.is_old = true;
    a.old_piece = Interval{0, 1};
    a.valuation = uniform_on(inst.cake);
    inst.agents.push_back(std::move(a));
    auto rr = redivide(inst);
    CHECK(eval_raw(inst.agents[0].valuation, *rr.allocation.piece_of(0)) ==
          inst.agents[0].valuation.total);
}

TEST_CASE("redivide: interval example with one old and one young agent") {
    Instance inst;
    inst.mode = Mode::interval;
    inst.cake = Interval{0, 1};
    for (int i = 0; i < 2; ++i) {
        Agent a;
        a.id = i;
        a.is_old = i == 0;
        if (i == 0) a.old_piece = Interval{0, 1};
        a.valuation = uniform_on(inst.cake);
        inst.agents.push_back(std::move(a));
    }
    auto rr = redivide(inst);
    CHECK(rr.b == 0);
    validate_allocation(inst, rr.allocation);
    // guarantee 1/(n+2m+b-1) = 1/3 for both, which implies 1/(3n)
    for (int i = 0; i < 2; ++i) {
        Q v = eval_raw(inst.agents[i].valuation, *rr.allocation.piece_of(i));
        CHECK(v * 3 >= inst.agents[i].valuation.total);
        CHECK(v * 6 >= inst.agents[i].valuation.total);
    }
}

TEST_CASE("redivide guarantees on random interval instances") {
    for (int it = 0; it < 10; ++it) {
        Instance inst = random_instance(Mode::interval, 2 + it % 5, 1 + it % 2, 100 + it, 8);
        auto rr = redivide(inst);
        validate_allocation(inst, rr.allocation);
        int n = inst.n(), m = inst.m();
        Q bound = q(1, n + 2 * m + rr.b - 1);
        for (const Agent& a : inst.agents) {
            const PieceRegion* p = rr.allocation.piece_of(a.id);
            Q v = p ? eval_raw(a.valuation, *p) : Q(0);
            CHECK(v >= bound * a.valuation.total);
        }
        // gradual retention: for every k, at least m-k old agents keep
        // >= 1/ceil(n/k) of their old value
        for (int k = 1; k <= m; ++k) {
            long ceil_nk = (n + k - 1) / k;
            int satisfied = 0;
            for (const Agent& a : inst.agents) {
                if (!a.is_old) continue;
                Q v = eval_raw(a.valuation, *rr.allocation.piece_of(a.id));
                Q zv = eval_raw(a.valuation, *a.old_piece);
                if (v * ceil_nk >= zv) ++satisfied;
            }
            CHECK(satisfied >= m - k);
        }
    }
}

TEST_CASE("equal_partition produces exactly equal parts") {
    Valuation u = uniform_on(PieceRegion{Interval{0, 1}});
    ValuationView view{&u};
    QueryLog log;
    IntervalUnion whole = IntervalUnion::of({{0, 1}});
    auto one = equal_partition(view, whole, 1, log);
    REQUIRE(one.size() == 1);
    CHECK(one[0].length() == 1);

    auto quarters = equal_partition(view, whole, 4, log);
    REQUIRE(quarters.size() == 4);
    for (const auto& part : quarters) CHECK(eval_raw(u, PieceRegion{part}) == q(1, 4));

    Valuation lh = Valuation::over(Density1D{{Q(0), q(1, 2), Q(1)}, {Q(2), Q(0)}},
                                   PieceRegion{Interval{0, 1}});
    ValuationView lhv{&lh};
    auto halves = equal_partition(lhv, whole, 2, log);
    CHECK(halves[0].parts.back().hi == q(1, 4));

    // partition over a union piece with the split falling in the gap
    IntervalUnion two = IntervalUnion::of({{0, q(1, 4)}, {q(3, 4), 1}});
    auto parts = equal_partition(view, two, 2, log);
    CHECK(eval_raw(u, PieceRegion{parts[0]}) == eval_raw(u, PieceRegion{parts[1]}));
    Q covered = parts[0].length() + parts[1].length();
    CHECK(covered == two.length());
    CHECK_THROWS(equal_partition(view, whole, 0, log));
}

TEST_CASE("exchange hand example: n=2, r=1/2") {
    Instance inst;
    inst.mode = Mode::unrestricted;
    inst.cake = Interval{0, 1};
    for (int i = 0; i < 2; ++i) {
        Agent a;
        a.id = i;
        a.is_old = i == 0;
        if (i == 0) a.old_piece = Interval{0, 1};
        a.valuation = uniform_on(inst.cake);
        inst.agents.push_back(std::move(a));
    }
    auto ex = exchange_redivide(inst, 1, 2);
    Q v0 = eval_raw(inst.agents[0].valuation, *ex.allocation.piece_of(0));
    Q v1 = eval_raw(inst.agents[1].valuation, *ex.allocation.piece_of(1));
    CHECK(v0 == q(3, 4));
    CHECK(v1 == q(1, 4));
    // v0 >= r/2 + (1-r)*1 and v1 >= r/2
    CHECK(v0 >= q(3, 4));
    CHECK(v1 >= q(1, 4));
}

TEST_CASE("exchange: single agent keeps everything") {
    Instance inst;
    inst.mode = Mode::unrestricted;
    inst.cake = Interval{0, 1};
    Agent a;
    a.id = 0;
    a.is_old = true;
    a.old_piece = Interval{0, q(1, 2)};
    a.valuation = uniform_on(inst.cake);
    inst.agents.push_back(std::move(a));
    auto ex = exchange_redivide(inst, 1, 3);
    CHECK(eval_raw(inst.agents[0].valuation, *ex.allocation.piece_of(0)) == 1);
}

TEST_CASE("exchange inequality holds exactly (property)") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 15; ++it) {
        int n = 1 + static_cast<int>(rng() % 5);
        int m = 1 + static_cast<int>(rng() % n);
        long p = 1 + static_cast<long>(rng() % 2);
        long qq = p + 1 + static_cast<long>(rng() % 2);
        Instance inst = random_instance(Mode::unrestricted, n, m, 500 + it, 8);
        auto ex = exchange_redivide(inst, p, qq);
        validate_allocation(inst, ex.allocation);
        Q r = q(p, qq);
        for (const Agent& a : inst.agents) {
            const PieceRegion* piece = ex.allocation.piece_of(a.id);
            Q v = piece ? eval_raw(a.valuation, *piece) : Q(0);
            Q vy = 0;
            if (auto it2 = ex.proportional.find(a.id); it2 != ex.proportional.end())
                vy = eval_raw(a.valuation, it2->second);
            Q vz = a.old_piece ? eval_raw(a.valuation, *a.old_piece) : Q(0);
            CHECK(v >= r * vy + (1 - r) * vz);
            // old pieces stay within Z_j union Y_j
            if (a.old_piece && piece) {
                IntervalUnion dom = to_interval_union(*a.old_piece);
                if (auto it2 = ex.proportional.find(a.id); it2 != ex.proportional.end())
                    dom = union_of(dom, to_interval_union(it2->second));
                IntervalUnion x = to_interval_union(*piece);
                CHECK(intersect(dom, x).length() == x.length());
            }
        }
        CHECK(ex.log.evals + ex.log.marks <= 10 * n * n * qq);
    }
}

TEST_CASE("exchange rejects bad ratios and modes") {
    Instance inst = random_instance(Mode::unrestricted, 2, 1, 7, 8);
    CHECK_THROWS(exchange_redivide(inst, 0, 1));
    CHECK_THROWS(exchange_redivide(inst, 2, 2));
    inst.mode = Mode::interval;
    CHECK_THROWS(exchange_redivide(inst, 1, 2));
}

TEST_CASE("instance validation rejects malformed input") {
    Instance inst;
    inst.mode = Mode::interval;
    inst.cake = Interval{0, 1};
    for (int i = 0; i < 2; ++i) {
        Agent a;
        a.id = i;
        a.is_old = true;
        a.old_piece = Interval{0, q(2, 3)};  // overlapping old pieces
        a.valuation = uniform_on(inst.cake);
        inst.agents.push_back(std::move(a));
    }
    CHECK_THROWS(inst.validate());
    inst.agents[1].old_piece = Interval{q(2, 3), 1};
    CHECK_NOTHROW(inst.validate());
    inst.agents[1].old_piece = Interval{q(2, 3), 2};  // outside cake
    CHECK_THROWS(inst.validate());
}
