#include "rediv/fixtures.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "rediv/completion.hpp"

namespace rediv {

// ---------------------------------------------------------------------------
// gaps (the impossibility construction for connected positive allocations)

Instance gaps_instance(int n, int k) {
    if (k < 1 || k > n) throw Error("gaps instance needs 1 <= k <= n");
    int regions = n / k;  // floor(n/k) unit-value regions per old agent
    if (n > k && regions < 2) throw Error("gaps instance needs floor(n/k) >= 2");

    Instance inst;
    inst.mode = Mode::interval;
    inst.cake = Interval{0, 1};
    int slices = 2 * regions - 1;  // regions and gaps alternate

    auto slice = [&](int j, int s) -> Interval {  // slice s of old piece j
        return {q(j, k) + q(s, k * slices), q(j, k) + q(s + 1, k * slices)};
    };

    for (int j = 0; j < k; ++j) {
        Density1D d;
        d.breaks.push_back(q(j, k));
        for (int s = 0; s < slices; ++s) {
            d.breaks.push_back(slice(j, s).hi);
            d.values.push_back(s % 2 == 0 ? Q(k * slices) : Q(0));  // region value 1 each
        }
        Agent a;
        a.id = j;
        a.is_old = true;
        a.old_piece = Interval{q(j, k), q(j + 1, k)};
        a.valuation = Valuation::over(std::move(d), inst.cake);
        inst.agents.push_back(std::move(a));
    }
    // young agents in k groups; agent t of group j wants one gap of piece j
    for (int t = 0; t < n - k; ++t) {
        int group = t % k;
        int gap = regions > 1 ? (t / k) % (regions - 1) : 0;
        Interval g = slice(group, 2 * gap + 1);
        Density1D d;
        d.breaks = {g.lo, g.hi};
        d.values = {Q(1) / g.length()};
        Agent a;
        a.id = k + t;
        a.is_old = false;
        a.valuation = Valuation::over(std::move(d), inst.cake);
        inst.agents.push_back(std::move(a));
    }
    inst.validate();
    return inst;
}

bool check_gaps_bound(const Instance& inst, const Allocation& alloc, int k) {
    int n = inst.n();
    for (const Agent& a : inst.agents) {
        const PieceRegion* p = alloc.piece_of(a.id);
        if (!p) throw Error("allocation is not positive: empty piece");
        if (!std::holds_alternative<Interval>(*p))
            throw Error("allocation is not connected: non-interval piece");
        if (sign(eval_raw(a.valuation, *p)) <= 0)
            throw Error("allocation is not positive: zero-value piece");
    }
    int regions = n / k;
    for (const Agent& a : inst.agents) {
        if (!a.is_old || a.id >= k) continue;
        Q v = eval_raw(a.valuation, *alloc.piece_of(a.id));
        Q zv = eval_raw(a.valuation, *a.old_piece);
        if (v * regions > zv) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// archipelago tightness

ArchipelagoFixture archipelago_tight(int n, int m) {
    if (n < 1 || m < 1) throw Error("archipelago fixture needs n, m >= 1");
    ArchipelagoFixture fx;
    Density1D d;
    std::vector<Interval> islands;
    d.breaks.push_back(0);
    for (int i = 0; i < m; ++i) {
        Interval isl{Q(2 * i), Q(2 * i + 1)};
        islands.push_back(isl);
        d.breaks.push_back(isl.hi);
        d.values.push_back(i + 1 == m ? Q(n) : Q(1));  // island value n or 1
        if (i + 1 < m) {
            d.breaks.push_back(Q(2 * i + 2));
            d.values.push_back(0);
        }
    }
    std::vector<Interval> parts = islands;
    fx.cake = IntervalUnion::of(parts);
    for (const Interval& isl : islands) fx.islands.push_back(isl);
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.id = i;
        a.is_old = false;
        a.valuation = Valuation::over(d, fx.cake);
        fx.agents.push_back(std::move(a));
    }
    return fx;
}

// ---------------------------------------------------------------------------
// staircase

static RectilinearPolygon staircase_polygon(int R) {
    std::vector<Pt> pts{{0, 0}, {Q(R + 1), 0}};
    for (int t = 0; t <= R; ++t) {
        pts.push_back({Q(R + 1 - t), Q(t + 1)});
        pts.push_back({Q(R - t), Q(t + 1)});
    }
    return RectilinearPolygon::of(pts);
}

Rect staircase_diamond(int R, int i) {
    // centered small square in the top cell of stair i
    return {q(4 * i + 1, 4), q(4 * i + 3, 4), q(4 * (R + 1 - i) - 3, 4),
            q(4 * (R + 1 - i) - 1, 4)};
}

Instance staircase_instance(int n, int R) {
    if (n < 1 || R < 0) throw Error("staircase needs n >= 1 and R >= 0");
    Instance inst;
    inst.mode = Mode::rectilinear;
    inst.cake = staircase_polygon(R);

    Density2D d;
    std::set<Q> xs{Q(0), Q(R + 1)}, ys{Q(0), Q(R + 1)};
    for (int i = 0; i <= R; ++i) {
        Rect dia = staircase_diamond(R, i);
        xs.insert(dia.xlo);
        xs.insert(dia.xhi);
        ys.insert(dia.ylo);
        ys.insert(dia.yhi);
    }
    d.xs.assign(xs.begin(), xs.end());
    d.ys.assign(ys.begin(), ys.end());
    d.cells.assign(d.xs.size() - 1, std::vector<Q>(d.ys.size() - 1, Q(0)));
    for (int i = 0; i <= R; ++i) {
        Rect dia = staircase_diamond(R, i);
        Q value = i == 0 ? Q(n) : Q(1);
        Q dens = value / dia.area();
        for (size_t a = 0; a + 1 < d.xs.size(); ++a)
            for (size_t b = 0; b + 1 < d.ys.size(); ++b) {
                Rect cell{d.xs[a], d.xs[a + 1], d.ys[b], d.ys[b + 1]};
                if (dia.contains(cell)) d.cells[a][b] = dens;
            }
    }
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.id = i;
        a.is_old = false;
        a.valuation = Valuation::over(d, inst.cake);
        inst.agents.push_back(std::move(a));
    }
    return inst;
}

// ---------------------------------------------------------------------------
// tilings

Tiling tiling_pinwheel() {
    Tiling t;
    t.cake = Rect{0, 5, 0, 5};
    t.pieces = {PieceRegion{Rect{1, 2, 0, 3}}, PieceRegion{Rect{2, 5, 1, 2}},
                PieceRegion{Rect{3, 4, 2, 5}}, PieceRegion{Rect{0, 3, 3, 4}}};
    return t;
}

Tiling tiling_diagonal_squares(int k) {
    if (k < 1) throw Error("diagonal squares need k >= 1");
    std::vector<Rect> squares;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Q x(2 * i - j), y(i + 2 * j);
            squares.push_back({x, x + 2, y, y + 2});
        }
    Rect cake{Q(-(k - 1)), Q(2 * k), Q(0), Q(3 * k - 1)};
    std::vector<Rect> grown = expand_maximal_rect({cake}, squares);
    Tiling t;
    t.cake = cake;
    for (const Rect& r : grown) t.pieces.push_back(r);
    return t;
}

Tiling tiling_honeycomb(int rows) {
    if (rows < 1) throw Error("honeycomb needs rows >= 1");
    // affine-regular hexagon, invariant under the affine 60-degree rotation
    // [[1,1],[-1,0]]; translates on the lattice (9,1),(10,-9) half-share each
    // edge with a neighbor and leave one triangular pocket per edge pair
    const std::vector<Pt> hex{{-2, 6}, {-6, 4}, {-4, -2}, {2, -6}, {6, -4}, {4, 2}};
    std::vector<ConvexPolygon> pieces;
    std::vector<Pt> all;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) {
            Q cx = Q(9 * i + 10 * j), cy = Q(i - 9 * j);
            std::vector<Pt> v;
            for (const Pt& p : hex) v.push_back({p.x + cx, p.y + cy});
            pieces.push_back(ConvexPolygon::of(v));
            all.insert(all.end(), v.begin(), v.end());
        }
    ConvexPolygon cake = convex_hull(all);
    pieces = expand_maximal_convex(cake, pieces);
    Tiling t;
    t.cake = cake;
    for (const ConvexPolygon& p : pieces) t.pieces.push_back(p);
    return t;
}

Tiling tiling_rectilinear_pipe(int k, int R) {
    if (k < 2 || R < 3) throw Error("pipe construction needs k >= 2 and R >= 3");
    int S = R - 2;  // stairs; the pipe mouth and the pipe-to-stair junction add 3 - 1
    Q ax0(-(k - 1)), ax1(2 * k), ay0(0), ay1(3 * k - 1);
    Q px1 = ax1 + 2;  // pipe ends here
    std::vector<Pt> pts;
    pts.push_back({ax0, ay0});
    pts.push_back({ax1, ay0});
    pts.push_back({ax1, 1});          // reflex (pipe mouth bottom)
    pts.push_back({px1, 1});          // pipe bottom runs into the stair block
    pts.push_back({px1 + S, 1});      // stair block bottom
    pts.push_back({px1 + S, Q(S + 1)});
    for (int tt = S - 1; tt >= 0; --tt) {
        pts.push_back({px1 + tt, Q(tt + 2)});  // reflex between stairs (except last)
        pts.push_back({px1 + tt, Q(tt + 1) + (tt == 0 ? Q(1, 2) : Q(0))});
    }
    // the loop emitted (px1, 3/2) as its final point: continue along pipe top
    pts.push_back({ax1, Q(3, 2)});    // reflex (pipe mouth top)
    pts.push_back({ax1, ay1});
    pts.push_back({ax0, ay1});
    RectilinearPolygon cake = RectilinearPolygon::of(pts);

    Tiling t;
    t.cake = cake;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Q x(2 * i - j), y(i + 2 * j);
            t.pieces.push_back(Rect{x, x + 2, y, y + 2});
        }
    return t;
}

Tiling tiling_nonmaximal_rectilinear() {
    Tiling t;
    t.cake = RectilinearPolygon::of(
        {{0, 0}, {6, 0}, {6, 4}, {3, 4}, {3, 6}, {0, 6}});
    t.pieces = {PieceRegion{Rect{0, 2, 0, 2}}, PieceRegion{Rect{4, 6, 0, 2}},
                PieceRegion{Rect{0, 2, 4, 6}}, PieceRegion{Rect{4, 5, 2, 3}}};
    return t;
}

// ---------------------------------------------------------------------------
// random instances

namespace {

using Rng = std::mt19937_64;

long draw(Rng& rng, long lo, long hi) {  // inclusive
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

Density1D random_density_1d(Rng& rng) {
    int cells = static_cast<int>(draw(rng, 3, 6));
    Density1D d;
    for (int i = 0; i <= cells; ++i) {
        d.breaks.push_back(q(i, cells));
    }
    bool positive = false;
    for (int i = 0; i < cells; ++i) {
        long v = draw(rng, 0, 9);
        positive |= v > 0;
        d.values.push_back(Q(v));
    }
    if (!positive) d.values[static_cast<size_t>(draw(rng, 0, cells - 1))] = Q(1 + rng() % 9);
    return d;
}

Density2D random_density_2d(Rng& rng, const Rect& bbox) {
    int g = static_cast<int>(draw(rng, 3, 5));
    Density2D d;
    for (int i = 0; i <= g; ++i) {
        d.xs.push_back(bbox.xlo + (bbox.xhi - bbox.xlo) * i / g);
        d.ys.push_back(bbox.ylo + (bbox.yhi - bbox.ylo) * i / g);
    }
    d.cells.assign(g, std::vector<Q>(g));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) d.cells[i][j] = Q(draw(rng, 0, 9));
    return d;
}

// m pairwise-disjoint intervals with endpoints on a uniform grid
std::vector<Interval> random_disjoint_intervals(Rng& rng, int m) {
    int grid = 4 * m + 4;
    std::set<long> cuts;
    while (static_cast<int>(cuts.size()) < 2 * m) cuts.insert(draw(rng, 0, grid));
    std::vector<long> cs(cuts.begin(), cuts.end());
    std::vector<Interval> out;
    for (int i = 0; i < m; ++i) {
        out.push_back({q(cs[2 * i], grid), q(cs[2 * i + 1], grid)});
    }
    return out;
}

Instance random_1d(Rng& rng, Mode mode, int n, int m) {
    Instance inst;
    inst.mode = mode;
    inst.cake = Interval{0, 1};
    std::vector<Interval> pieces = random_disjoint_intervals(rng, m);
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.id = i;
        a.is_old = i < m;
        a.valuation = Valuation::over(random_density_1d(rng), inst.cake);
        if (i < m) {
            if (mode == Mode::unrestricted && draw(rng, 0, 1) == 1) {
                // occasionally an interval-union piece
                Q mid = (pieces[i].lo + pieces[i].hi) / 2;
                Q gap = (pieces[i].hi - pieces[i].lo) / 8;
                if (sign(gap) > 0)
                    a.old_piece = IntervalUnion::of(
                        {{pieces[i].lo, mid - gap}, {mid + gap, pieces[i].hi}});
                else
                    a.old_piece = pieces[i];
            } else {
                a.old_piece = pieces[i];
            }
        }
        inst.agents.push_back(std::move(a));
    }
    inst.validate();
    return inst;
}

Instance random_rectangle(Rng& rng, int n, int m, int grid) {
    Instance inst;
    inst.mode = Mode::rectangle;
    Rect cake{0, Q(grid), 0, Q(grid)};
    inst.cake = cake;
    std::vector<Rect> pieces;
    int guard = 0;
    while (static_cast<int>(pieces.size()) < m) {
        if (++guard > 1000) throw Error("random rectangle placement failed");
        long x1 = draw(rng, 0, grid - 1), x2 = draw(rng, x1 + 1, grid);
        long y1 = draw(rng, 0, grid - 1), y2 = draw(rng, y1 + 1, grid);
        Rect r{Q(x1), Q(x2), Q(y1), Q(y2)};
        bool ok = true;
        for (const Rect& p : pieces) ok &= !intersect_rect(r, p).has_value();
        if (ok) pieces.push_back(r);
    }
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.id = i;
        a.is_old = i < m;
        if (i < m) a.old_piece = pieces[i];
        for (int tries = 0;; ++tries) {
            a.valuation = Valuation::over(random_density_2d(rng, cake), inst.cake);
            if (sign(a.valuation.total) > 0) break;
            if (tries > 50) throw Error("random density kept zero total");
        }
        inst.agents.push_back(std::move(a));
    }
    inst.validate();
    return inst;
}

struct CellSet {
    int g = 0;
    std::vector<std::vector<bool>> in;
};

CellSet random_cell_polygon(Rng& rng, int g, int reflex_cap, RectilinearPolygon& out_poly) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        CellSet cs;
        cs.g = g;
        cs.in.assign(g, std::vector<bool>(g));
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) cs.in[i][j] = draw(rng, 0, 99) < 65;
        // keep the largest 4-connected component
        std::vector<std::vector<int>> comp(g, std::vector<int>(g, -1));
        int ncomp = 0;
        std::vector<int> sizes;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                if (!cs.in[i][j] || comp[i][j] != -1) continue;
                int size = 0;
                std::vector<std::pair<int, int>> stack{{i, j}};
                comp[i][j] = ncomp;
                while (!stack.empty()) {
                    auto [a, b] = stack.back();
                    stack.pop_back();
                    ++size;
                    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
                    for (int dir = 0; dir < 4; ++dir) {
                        int na = a + dx[dir], nb = b + dy[dir];
                        if (na < 0 || nb < 0 || na >= g || nb >= g) continue;
                        if (!cs.in[na][nb] || comp[na][nb] != -1) continue;
                        comp[na][nb] = ncomp;
                        stack.push_back({na, nb});
                    }
                }
                sizes.push_back(size);
                ++ncomp;
            }
        if (sizes.empty()) continue;
        int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) cs.in[i][j] = comp[i][j] == best;
        // fill enclosed holes: complement cells not reachable from the border
        std::vector<std::vector<bool>> outside(g, std::vector<bool>(g, false));
        std::vector<std::pair<int, int>> stack;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                if ((i == 0 || j == 0 || i == g - 1 || j == g - 1) && !cs.in[i][j] &&
                    !outside[i][j]) {
                    outside[i][j] = true;
                    stack.push_back({i, j});
                }
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
            for (int dir = 0; dir < 4; ++dir) {
                int na = a + dx[dir], nb = b + dy[dir];
                if (na < 0 || nb < 0 || na >= g || nb >= g) continue;
                if (cs.in[na][nb] || outside[na][nb]) continue;
                outside[na][nb] = true;
                stack.push_back({na, nb});
            }
        }
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                if (!cs.in[i][j] && !outside[i][j]) cs.in[i][j] = true;
        // trace via the free-space machinery: the set is the unique hole of
        // its complement within the bounding box
        std::vector<Rect> complement;
        int count = 0;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                if (cs.in[i][j])
                    ++count;
                else
                    complement.push_back({Q(i), Q(i + 1), Q(j), Q(j + 1)});
            }
        if (count < 2) continue;
        std::vector<RectilinearHole> holes;
        try {
            holes = rectilinear_holes({Rect{0, Q(g), 0, Q(g)}}, complement);
        } catch (const Error&) {
            continue;  // pinched set; redraw
        }
        if (holes.size() != 1) continue;
        if (holes[0].corners.reflex_count() > reflex_cap) continue;
        out_poly = holes[0].corners;
        return cs;
    }
    throw Error("random rectilinear polygon generation failed");
}

Instance random_rectilinear(Rng& rng, int n, int m, int grid) {
    Instance inst;
    inst.mode = Mode::rectilinear;
    // a small cake may not fit m disjoint pieces; redraw it when placement starves
    RectilinearPolygon poly;
    std::vector<Rect> pieces;
    int g = 0;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 50) throw Error("random rectilinear placement failed");
        CellSet cs = random_cell_polygon(rng, std::max(grid, 4), 8, poly);
        g = cs.g;
        pieces.clear();
        int guard = 0;
        while (static_cast<int>(pieces.size()) < m && ++guard <= 500) {
            long x1 = draw(rng, 0, g - 1), x2 = draw(rng, x1 + 1, std::min<long>(g, x1 + 3));
            long y1 = draw(rng, 0, g - 1), y2 = draw(rng, y1 + 1, std::min<long>(g, y1 + 3));
            bool ok = true;
            for (long i = x1; i < x2 && ok; ++i)
                for (long j = y1; j < y2 && ok; ++j) ok = cs.in[i][j];
            Rect r{Q(x1), Q(x2), Q(y1), Q(y2)};
            for (const Rect& p : pieces) ok &= !intersect_rect(r, p).has_value();
            if (ok) pieces.push_back(r);
        }
        if (static_cast<int>(pieces.size()) == m) break;
    }
    inst.cake = poly;
    Rect bb = poly.bbox();
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.id = i;
        a.is_old = i < m;
        if (i < m) a.old_piece = pieces[i];
        for (int tries = 0;; ++tries) {
            a.valuation = Valuation::over(random_density_2d(rng, bb), inst.cake);
            if (sign(a.valuation.total) > 0) break;
            if (tries > 50) throw Error("random density kept zero total");
        }
        inst.agents.push_back(std::move(a));
    }
    inst.validate();
    return inst;
}

Instance random_convex(Rng& rng, int n, int m, int grid) {
    Instance inst;
    inst.mode = Mode::convex;
    ConvexPolygon cake;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 100) throw Error("random convex cake failed");
        std::vector<Pt> pts;
        for (int i = 0; i < 8; ++i)
            pts.push_back({Q(draw(rng, 0, grid)), Q(draw(rng, 0, grid))});
        try {
            cake = convex_hull(pts);
            break;
        } catch (const Error&) {
        }
    }
    inst.cake = cake;
    std::vector<ConvexPolygon> pieces;
    int guard = 0;
    while (static_cast<int>(pieces.size()) < m) {
        if (++guard > 20000) throw Error("random convex placement failed");
        // small polygon around a random center keeps rejection rates low
        long cx = draw(rng, 0, 4 * grid), cy = draw(rng, 0, 4 * grid);
        std::vector<Pt> pts;
        int corners = static_cast<int>(draw(rng, 3, 4));
        for (int c = 0; c < corners; ++c)
            pts.push_back({q(cx + draw(rng, 0, grid), 4), q(cy + draw(rng, 0, grid), 4)});
        ConvexPolygon cand;
        try {
            cand = convex_hull(pts);
        } catch (const Error&) {
            continue;
        }
        bool ok = true;
        for (const Pt& p : cand.v) ok &= cake.contains(p);
        for (const ConvexPolygon& q : pieces) ok = ok && sign(overlap_area(cand, q)) == 0;
        if (ok) pieces.push_back(cand);
    }
    Rect bb = piece_bbox(inst.cake);
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.id = i;
        a.is_old = i < m;
        if (i < m) a.old_piece = pieces[i];
        for (int tries = 0;; ++tries) {
            a.valuation = Valuation::over(random_density_2d(rng, bb), inst.cake);
            if (sign(a.valuation.total) > 0) break;
            if (tries > 50) throw Error("random density kept zero total");
        }
        inst.agents.push_back(std::move(a));
    }
    inst.validate();
    return inst;
}

}  // namespace

Instance random_instance(Mode mode, int n, int m, std::uint64_t seed, int grid) {
    if (n < 1 || m < 0 || m > n) throw Error("random instance needs 0 <= m <= n");
    Rng rng(seed);
    switch (mode) {
        case Mode::unrestricted:
        case Mode::interval:
            return random_1d(rng, mode, n, m);
        case Mode::rectangle:
            return random_rectangle(rng, n, m, std::max(grid, 2 * m + 2));
        case Mode::rectilinear:
            return random_rectilinear(rng, n, m, grid);
        case Mode::convex:
            return random_convex(rng, n, m, grid);
    }
    throw Error("bad mode");
}

}  // namespace rediv
