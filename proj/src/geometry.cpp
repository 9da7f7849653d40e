#include "rediv/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace rediv {

Q cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// ---------------------------------------------------------------------------
// Intervals

IntervalUnion IntervalUnion::of(std::vector<Interval> raw) {
    for (const auto& iv : raw)
        if (iv.lo > iv.hi) throw Error("interval with lo > hi");
    std::erase_if(raw, [](const Interval& iv) { return iv.empty(); });
    std::sort(raw.begin(), raw.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    IntervalUnion u;
    for (const auto& iv : raw) {
        if (!u.parts.empty()) {
            Interval& last = u.parts.back();
            if (iv.lo < last.hi) throw Error("overlapping intervals in union");
            if (iv.lo == last.hi) {
                last.hi = iv.hi;
                continue;
            }
        }
        u.parts.push_back(iv);
    }
    return u;
}

Q IntervalUnion::length() const {
    Q s = 0;
    for (const auto& iv : parts) s += iv.length();
    return s;
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> out;
    size_t i = 0, j = 0;
    while (i < a.parts.size() && j < b.parts.size()) {
        Q lo = std::max(a.parts[i].lo, b.parts[j].lo);
        Q hi = std::min(a.parts[i].hi, b.parts[j].hi);
        if (lo < hi) out.push_back({lo, hi});
        if (a.parts[i].hi < b.parts[j].hi)
            ++i;
        else
            ++j;
    }
    return IntervalUnion::of(std::move(out));
}

IntervalUnion union_of(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> all = a.parts;
    all.insert(all.end(), b.parts.begin(), b.parts.end());
    std::sort(all.begin(), all.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    IntervalUnion u;
    for (const auto& iv : all) {
        if (iv.empty()) continue;
        if (!u.parts.empty() && iv.lo <= u.parts.back().hi)
            u.parts.back().hi = std::max(u.parts.back().hi, iv.hi);
        else
            u.parts.push_back(iv);
    }
    return u;
}

// ---------------------------------------------------------------------------
// Rectangles

std::optional<Rect> intersect_rect(const Rect& a, const Rect& b) {
    Rect r{std::max(a.xlo, b.xlo), std::min(a.xhi, b.xhi),
           std::max(a.ylo, b.ylo), std::min(a.yhi, b.yhi)};
    if (r.xlo >= r.xhi || r.ylo >= r.yhi) return std::nullopt;
    return r;
}

ConvexPolygon rect_to_polygon(const Rect& r) {
    return ConvexPolygon{{{r.xlo, r.ylo}, {r.xhi, r.ylo}, {r.xhi, r.yhi}, {r.xlo, r.yhi}}};
}

RectilinearPolygon rect_to_rectilinear(const Rect& r) {
    return RectilinearPolygon{
        {{r.xlo, r.ylo}, {r.xhi, r.ylo}, {r.xhi, r.yhi}, {r.xlo, r.yhi}}};
}

// ---------------------------------------------------------------------------
// Convex polygons

static Q shoelace_twice(const std::vector<Pt>& v) {
    Q s = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Pt& a = v[i];
        const Pt& b = v[(i + 1) % v.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return s;
}

ConvexPolygon ConvexPolygon::of(std::vector<Pt> pts) {
    if (pts.size() < 3) throw Error("convex polygon needs >= 3 vertices");
    for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i] == pts[(i + 1) % pts.size()]) throw Error("repeated vertex");
    for (size_t i = 0; i < pts.size(); ++i) {
        const Pt& a = pts[i];
        const Pt& b = pts[(i + 1) % pts.size()];
        const Pt& c = pts[(i + 2) % pts.size()];
        if (sign(cross(a, b, c)) < 0) throw Error("polygon is not convex CCW");
    }
    ConvexPolygon p{std::move(pts)};
    if (sign(p.area()) <= 0) throw Error("degenerate convex polygon");
    return p;
}

Q ConvexPolygon::area() const { return shoelace_twice(v) / 2; }

ConvexPolygon ConvexPolygon::canonical() const {
    std::vector<Pt> out;
    size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt& prev = v[(i + n - 1) % n];
        const Pt& cur = v[i];
        const Pt& next = v[(i + 1) % n];
        if (cur == next) continue;
        if (sign(cross(prev, cur, next)) != 0) out.push_back(cur);
    }
    return ConvexPolygon{std::move(out)};
}

bool ConvexPolygon::contains(const Pt& p) const {
    size_t n = v.size();
    for (size_t i = 0; i < n; ++i)
        if (sign(cross(v[i], v[(i + 1) % n], p)) < 0) return false;
    return true;
}

std::vector<HalfPlane> ConvexPolygon::edges() const {
    ConvexPolygon c = canonical();
    std::vector<HalfPlane> hs;
    size_t n = c.v.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt& a = c.v[i];
        const Pt& b = c.v[(i + 1) % n];
        Pt nrm{b.y - a.y, a.x - b.x};  // outward normal for CCW
        hs.push_back({nrm, nrm.x * a.x + nrm.y * a.y});
    }
    return hs;
}

ConvexPolygon convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw Error("hull of fewer than 3 points");
    auto build = [&](bool lower) {
        std::vector<Pt> h;
        auto scan = lower ? pts : std::vector<Pt>(pts.rbegin(), pts.rend());
        for (const Pt& p : scan) {
            while (h.size() >= 2 && sign(cross(h[h.size() - 2], h.back(), p)) <= 0) h.pop_back();
            h.push_back(p);
        }
        return h;
    };
    std::vector<Pt> lo = build(true), hi = build(false);
    lo.pop_back();
    hi.pop_back();
    lo.insert(lo.end(), hi.begin(), hi.end());
    return ConvexPolygon::of(std::move(lo));
}

std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& p, const HalfPlane& h) {
    std::vector<Pt> out;
    size_t n = p.v.size();
    auto val = [&](const Pt& q) -> Q { return h.n.x * q.x + h.n.y * q.y - h.c; };
    for (size_t i = 0; i < n; ++i) {
        const Pt& a = p.v[i];
        const Pt& b = p.v[(i + 1) % n];
        Q va = val(a), vb = val(b);
        if (va <= 0) out.push_back(a);
        if ((va < 0 && vb > 0) || (va > 0 && vb < 0)) {
            Q t = va / (va - vb);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    // drop consecutive duplicates
    std::vector<Pt> ded;
    for (const Pt& q : out)
        if (ded.empty() || !(ded.back() == q)) ded.push_back(q);
    while (ded.size() > 1 && ded.front() == ded.back()) ded.pop_back();
    if (ded.size() < 3) return std::nullopt;
    ConvexPolygon r{std::move(ded)};
    if (sign(r.area()) <= 0) return std::nullopt;
    return r;
}

std::optional<ConvexPolygon> intersect_convex(const ConvexPolygon& a, const ConvexPolygon& b) {
    std::optional<ConvexPolygon> cur = a;
    for (const HalfPlane& h : b.edges()) {
        cur = clip_convex(*cur, h);
        if (!cur) return std::nullopt;
    }
    return cur;
}

Q overlap_area(const ConvexPolygon& a, const ConvexPolygon& b) {
    auto i = intersect_convex(a, b);
    return i ? i->area() : Q(0);
}

// ---------------------------------------------------------------------------
// Rectilinear polygons

static std::vector<Pt> drop_flat(const std::vector<Pt>& in) {
    std::vector<Pt> pts;
    for (const Pt& p : in)
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    bool changed = true;
    while (changed && pts.size() >= 3) {
        changed = false;
        std::vector<Pt> out;
        size_t n = pts.size();
        for (size_t i = 0; i < n; ++i) {
            const Pt& prev = pts[(i + n - 1) % n];
            const Pt& cur = pts[i];
            const Pt& next = pts[(i + 1) % n];
            if (sign(cross(prev, cur, next)) == 0) {
                changed = true;
                continue;
            }
            out.push_back(cur);
        }
        pts = std::move(out);
    }
    return pts;
}

static bool axis_edge(const Pt& a, const Pt& b) {
    return (a.x == b.x) != (a.y == b.y);
}

RectilinearPolygon RectilinearPolygon::of(std::vector<Pt> pts) {
    pts = drop_flat(pts);
    size_t n = pts.size();
    if (n < 4 || n % 2 != 0) throw Error("rectilinear polygon needs an even vertex count >= 4");
    for (size_t i = 0; i < n; ++i) {
        const Pt& a = pts[i];
        const Pt& b = pts[(i + 1) % n];
        if (!axis_edge(a, b)) throw Error("edge is not axis-parallel");
        const Pt& c = pts[(i + 2) % n];
        bool ab_h = a.y == b.y, bc_h = b.y == c.y;
        if (ab_h == bc_h) throw Error("edges do not alternate horizontal/vertical");
    }
    // simplicity: non-adjacent edges must not touch
    auto span = [](const Q& a, const Q& b) {
        return a <= b ? std::pair<Q, Q>{a, b} : std::pair<Q, Q>{b, a};
    };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Pt &a = pts[i], &b = pts[(i + 1) % n];
            const Pt &c = pts[j], &d = pts[(j + 1) % n];
            bool e1h = a.y == b.y, e2h = c.y == d.y;
            bool touch;
            if (e1h && e2h) {
                auto [l1, r1] = span(a.x, b.x);
                auto [l2, r2] = span(c.x, d.x);
                touch = a.y == c.y && std::max(l1, l2) <= std::min(r1, r2);
            } else if (!e1h && !e2h) {
                auto [l1, r1] = span(a.y, b.y);
                auto [l2, r2] = span(c.y, d.y);
                touch = a.x == c.x && std::max(l1, l2) <= std::min(r1, r2);
            } else {
                const Pt& h1 = e1h ? a : c;
                const Pt& h2 = e1h ? b : d;
                const Pt& v1 = e1h ? c : a;
                const Pt& v2 = e1h ? d : b;
                auto [xl, xr] = span(h1.x, h2.x);
                auto [yl, yr] = span(v1.y, v2.y);
                touch = xl <= v1.x && v1.x <= xr && yl <= h1.y && h1.y <= yr;
            }
            if (touch) throw Error("rectilinear polygon is not simple");
        }
    }
    RectilinearPolygon poly{std::move(pts)};
    if (sign(shoelace_twice(poly.v)) <= 0) throw Error("rectilinear polygon must be CCW");
    return poly;
}

Q RectilinearPolygon::area() const { return shoelace_twice(v) / 2; }

int RectilinearPolygon::reflex_count() const {
    std::vector<Pt> pts = drop_flat(v);
    int r = 0;
    size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
        if (sign(cross(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n])) < 0) ++r;
    }
    return r;
}

Rect RectilinearPolygon::bbox() const {
    Rect r{v[0].x, v[0].x, v[0].y, v[0].y};
    for (const Pt& p : v) {
        r.xlo = std::min(r.xlo, p.x);
        r.xhi = std::max(r.xhi, p.x);
        r.ylo = std::min(r.ylo, p.y);
        r.yhi = std::max(r.yhi, p.y);
    }
    return r;
}

// Splits `loop` along the horizontal chord shot from one reflex vertex and
// recurses until every part is a rectangle.
static void decompose_rec(std::vector<Pt> loop, std::vector<Rect>& out, int depth) {
    if (depth > 4096) throw Error("rectilinear decomposition did not terminate");
    loop = drop_flat(loop);
    size_t n = loop.size();
    if (n < 4) throw Error("degenerate loop in decomposition");
    if (n == 4) {
        Q xlo = std::min({loop[0].x, loop[1].x, loop[2].x, loop[3].x});
        Q xhi = std::max({loop[0].x, loop[1].x, loop[2].x, loop[3].x});
        Q ylo = std::min({loop[0].y, loop[1].y, loop[2].y, loop[3].y});
        Q yhi = std::max({loop[0].y, loop[1].y, loop[2].y, loop[3].y});
        out.push_back({xlo, xhi, ylo, yhi});
        return;
    }
    size_t iv = n;
    for (size_t i = 0; i < n; ++i) {
        if (sign(cross(loop[(i + n - 1) % n], loop[i], loop[(i + 1) % n])) < 0) {
            iv = i;
            break;
        }
    }
    if (iv == n) throw Error("non-rectangle loop without reflex vertex");
    const Pt v = loop[iv];
    const Pt& prev = loop[(iv + n - 1) % n];
    const Pt& next = loop[(iv + 1) % n];
    int dir;
    if (prev.y == v.y)
        dir = sign(v.x - prev.x);  // extend incoming horizontal edge forward
    else
        dir = sign(v.x - next.x);  // extend outgoing horizontal edge backward

    // nearest boundary hit of the ray from v along (dir, 0)
    std::optional<Q> best_t;
    Pt q{};
    size_t hit_edge = n;
    for (size_t i = 0; i < n; ++i) {
        if (i == iv || (i + 1) % n == iv) continue;  // edges incident to v
        const Pt& a = loop[i];
        const Pt& b = loop[(i + 1) % n];
        if (a.x == b.x) {
            Q t = (a.x - v.x) * dir;
            if (sign(t) <= 0) continue;
            Q ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
            if (v.y < ylo || v.y > yhi) continue;
            if (!best_t || t < *best_t) {
                best_t = t;
                q = {a.x, v.y};
                hit_edge = i;
            }
        } else if (a.y == v.y) {
            for (const Pt* e : {&a, &b}) {
                Q t = (e->x - v.x) * dir;
                if (sign(t) <= 0) continue;
                if (!best_t || t < *best_t) {
                    best_t = t;
                    q = *e;
                    hit_edge = i;
                }
            }
        }
    }
    if (!best_t) throw Error("reflex chord found no boundary hit");

    // vertex cycle with q present
    std::vector<Pt> cyc;
    size_t idx_q = 0, idx_v = 0;
    bool q_is_vertex = false;
    for (const Pt& p : loop)
        if (p == q) q_is_vertex = true;
    for (size_t i = 0; i < n; ++i) {
        cyc.push_back(loop[i]);
        if (!q_is_vertex && i == hit_edge) cyc.push_back(q);
    }
    for (size_t i = 0; i < cyc.size(); ++i) {
        if (cyc[i] == q) idx_q = i;
        if (cyc[i] == v) idx_v = i;
    }
    size_t m = cyc.size();
    std::vector<Pt> loopA, loopB;
    for (size_t i = idx_v;; i = (i + 1) % m) {
        loopA.push_back(cyc[i]);
        if (i == idx_q) break;
    }
    for (size_t i = idx_q;; i = (i + 1) % m) {
        loopB.push_back(cyc[i]);
        if (i == idx_v) break;
    }
    decompose_rec(std::move(loopA), out, depth + 1);
    decompose_rec(std::move(loopB), out, depth + 1);
}

std::vector<Rect> rectilinear_decompose(const RectilinearPolygon& poly) {
    std::vector<Rect> out;
    decompose_rec(poly.v, out, 0);
    return out;
}

// ---------------------------------------------------------------------------
// PieceRegion

Q area(const PieceRegion& p) {
    return std::visit(
        [](const auto& g) -> Q {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Interval>)
                return g.length();
            else if constexpr (std::is_same_v<T, IntervalUnion>)
                return g.length();
            else
                return g.area();
        },
        p);
}

bool is_1d(const PieceRegion& p) {
    return std::holds_alternative<Interval>(p) || std::holds_alternative<IntervalUnion>(p);
}

Rect piece_bbox(const PieceRegion& p) {
    if (const Rect* r = std::get_if<Rect>(&p)) return *r;
    if (const ConvexPolygon* c = std::get_if<ConvexPolygon>(&p)) {
        Rect r{c->v[0].x, c->v[0].x, c->v[0].y, c->v[0].y};
        for (const Pt& q : c->v) {
            r.xlo = std::min(r.xlo, q.x);
            r.xhi = std::max(r.xhi, q.x);
            r.ylo = std::min(r.ylo, q.y);
            r.yhi = std::max(r.yhi, q.y);
        }
        return r;
    }
    if (const RectilinearPolygon* rp = std::get_if<RectilinearPolygon>(&p)) return rp->bbox();
    throw Error("bbox of a 1-D piece");
}

// ---------------------------------------------------------------------------
// Rectilinear free space

namespace {

struct Grid {
    std::vector<Q> xs, ys;
    size_t nx() const { return xs.size() - 1; }
    size_t ny() const { return ys.size() - 1; }
    Rect cell(size_t i, size_t j) const { return {xs[i], xs[i + 1], ys[j], ys[j + 1]}; }
};

Grid overlay_grid(const std::vector<Rect>& cake, const std::vector<Rect>& pieces) {
    std::vector<Q> xs, ys;
    auto add = [&](const Rect& r) {
        xs.push_back(r.xlo);
        xs.push_back(r.xhi);
        ys.push_back(r.ylo);
        ys.push_back(r.yhi);
    };
    for (const Rect& r : cake) add(r);
    for (const Rect& r : pieces) add(r);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return {std::move(xs), std::move(ys)};
}

struct DSU {
    std::vector<int> p;
    explicit DSU(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::vector<RectilinearHole> rectilinear_holes(const std::vector<Rect>& cake_rects,
                                               const std::vector<Rect>& pieces) {
    Grid g = overlay_grid(cake_rects, pieces);
    size_t nx = g.nx(), ny = g.ny();
    if (nx == 0 || ny == 0) return {};
    // -2 outside cake, -1 free, k covered by piece k
    std::vector<std::vector<int>> state(nx, std::vector<int>(ny, -2));
    for (size_t i = 0; i < nx; ++i) {
        for (size_t j = 0; j < ny; ++j) {
            Rect c = g.cell(i, j);
            bool in = false;
            for (const Rect& r : cake_rects)
                if (r.contains(c)) {
                    in = true;
                    break;
                }
            if (!in) continue;
            state[i][j] = -1;
            for (size_t k = 0; k < pieces.size(); ++k) {
                if (pieces[k].contains(c)) {
                    state[i][j] = static_cast<int>(k);
                    break;
                }
            }
        }
    }
    DSU dsu(nx * ny);
    auto id = [&](size_t i, size_t j) { return static_cast<int>(i * ny + j); };
    for (size_t i = 0; i < nx; ++i)
        for (size_t j = 0; j < ny; ++j) {
            if (state[i][j] != -1) continue;
            if (i + 1 < nx && state[i + 1][j] == -1) dsu.unite(id(i, j), id(i + 1, j));
            if (j + 1 < ny && state[i][j + 1] == -1) dsu.unite(id(i, j), id(i, j + 1));
        }

    std::map<int, std::vector<std::pair<size_t, size_t>>> comps;
    for (size_t i = 0; i < nx; ++i)
        for (size_t j = 0; j < ny; ++j)
            if (state[i][j] == -1) comps[dsu.find(id(i, j))].push_back({i, j});

    std::vector<RectilinearHole> holes;
    for (auto& [root, cells] : comps) {
        // directed boundary edges, interior on the left
        struct BEdge {
            Pt a, b;
            int owner;
        };
        std::map<std::pair<std::string, std::string>, BEdge> by_start;
        auto key = [](const Pt& p) {
            return std::pair<std::string, std::string>{p.x.get_str(), p.y.get_str()};
        };
        Q comp_area = 0;
        auto neighbor_state = [&](long i, long j) {
            if (i < 0 || j < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny))
                return -2;
            return state[static_cast<size_t>(i)][static_cast<size_t>(j)];
        };
        for (auto [i, j] : cells) {
            Rect c = g.cell(i, j);
            comp_area += c.area();
            long li = static_cast<long>(i), lj = static_cast<long>(j);
            struct Side {
                long ni, nj;
                Pt a, b;
            };
            Side sides[4] = {
                {li, lj - 1, {c.xlo, c.ylo}, {c.xhi, c.ylo}},  // bottom, +x
                {li + 1, lj, {c.xhi, c.ylo}, {c.xhi, c.yhi}},  // right, +y
                {li, lj + 1, {c.xhi, c.yhi}, {c.xlo, c.yhi}},  // top, -x
                {li - 1, lj, {c.xlo, c.yhi}, {c.xlo, c.ylo}},  // left, -y
            };
            for (const Side& s : sides) {
                int st = neighbor_state(s.ni, s.nj);
                if (st == -1) continue;  // same free component
                int owner = st == -2 ? -1 : st;
                auto k = key(s.a);
                if (by_start.count(k)) throw Error("pinched free component");
                by_start[k] = {s.a, s.b, owner};
            }
        }
        // walk the single loop
        if (by_start.empty()) throw Error("free component with no boundary");
        auto start_it = by_start.begin();
        std::vector<BEdge> loop;
        BEdge cur = start_it->second;
        Pt start = cur.a;
        while (true) {
            loop.push_back(cur);
            if (cur.b == start) break;
            auto it = by_start.find(key(cur.b));
            if (it == by_start.end()) throw Error("open boundary loop");
            cur = it->second;
            if (loop.size() > by_start.size()) throw Error("boundary loop overrun");
        }
        if (loop.size() != by_start.size())
            throw Error("free component is not simply connected");

        // merge collinear runs with the same owner; flat vertices survive
        // exactly where the supporting obstacle changes
        std::vector<BEdge> merged;
        for (const BEdge& e : loop) {
            if (!merged.empty()) {
                BEdge& last = merged.back();
                bool collinear = (last.a.x == last.b.x && e.a.x == e.b.x && last.a.x == e.a.x) ||
                                 (last.a.y == last.b.y && e.a.y == e.b.y && last.a.y == e.a.y);
                if (collinear && last.owner == e.owner && last.b == e.a) {
                    last.b = e.b;
                    continue;
                }
            }
            merged.push_back(e);
        }
        // the first and last run may wrap around the start vertex
        if (merged.size() > 1) {
            BEdge& first = merged.front();
            BEdge& last = merged.back();
            bool collinear = (last.a.x == last.b.x && first.a.x == first.b.x &&
                              last.a.x == first.a.x) ||
                             (last.a.y == last.b.y && first.a.y == first.b.y &&
                              last.a.y == first.a.y);
            if (collinear && last.owner == first.owner && last.b == first.a) {
                first.a = last.a;
                merged.pop_back();
            }
        }

        RectilinearHole h;
        for (const BEdge& e : merged) {
            h.outline.push_back(e.a);
            h.edge_owner.push_back(e.owner);
            if (e.owner == -1) h.boundary = true;
        }
        h.hole_area = comp_area;
        h.corners = RectilinearPolygon::of(h.outline);
        if (h.corners.area() != comp_area) throw Error("hole area mismatch");
        holes.push_back(std::move(h));
    }
    return holes;
}

// ---------------------------------------------------------------------------
// Convex free space

static std::vector<ConvexPolygon> subtract_piece(const std::vector<ConvexPolygon>& cells,
                                                 const ConvexPolygon& piece) {
    std::vector<ConvexPolygon> next;
    std::vector<HalfPlane> hs = piece.edges();
    for (const ConvexPolygon& cell : cells) {
        if (overlap_area(cell, piece) == 0) {
            next.push_back(cell);
            continue;
        }
        std::optional<ConvexPolygon> remaining = cell;
        for (const HalfPlane& h : hs) {
            HalfPlane outside{{-h.n.x, -h.n.y}, -h.c};
            if (auto out = clip_convex(*remaining, outside)) next.push_back(out->canonical());
            remaining = clip_convex(*remaining, h);
            if (!remaining) break;
        }
        // whatever remains lies inside the piece and is dropped
    }
    return next;
}

// positive-length contact between two cell boundaries
static bool cells_touch(const ConvexPolygon& a, const ConvexPolygon& b) {
    size_t na = a.v.size(), nb = b.v.size();
    for (size_t i = 0; i < na; ++i) {
        const Pt& p1 = a.v[i];
        const Pt& p2 = a.v[(i + 1) % na];
        for (size_t j = 0; j < nb; ++j) {
            const Pt& q1 = b.v[j];
            const Pt& q2 = b.v[(j + 1) % nb];
            if (sign(cross(p1, p2, q1)) != 0 || sign(cross(p1, p2, q2)) != 0) continue;
            // collinear; check 1-D overlap along the dominant axis
            bool use_x = p1.x != p2.x;
            auto lo1 = use_x ? std::min(p1.x, p2.x) : std::min(p1.y, p2.y);
            auto hi1 = use_x ? std::max(p1.x, p2.x) : std::max(p1.y, p2.y);
            auto lo2 = use_x ? std::min(q1.x, q2.x) : std::min(q1.y, q2.y);
            auto hi2 = use_x ? std::max(q1.x, q2.x) : std::max(q1.y, q2.y);
            if (std::max(lo1, lo2) < std::min(hi1, hi2)) return true;
        }
    }
    return false;
}

// hull that keeps distinct input points lying on hull edges (flat vertices)
static ConvexPolygon hull_keep_collinear(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw Error("hull of fewer than 3 points");
    auto build = [&](bool lower) {
        std::vector<Pt> h;
        for (const Pt& p : (lower ? pts : std::vector<Pt>(pts.rbegin(), pts.rend()))) {
            while (h.size() >= 2 && sign(cross(h[h.size() - 2], h.back(), p)) < 0) h.pop_back();
            h.push_back(p);
        }
        return h;
    };
    std::vector<Pt> lo = build(true), hi = build(false);
    lo.pop_back();
    hi.pop_back();
    lo.insert(lo.end(), hi.begin(), hi.end());
    return ConvexPolygon{std::move(lo)};
}

std::vector<ConvexPolygon> merge_convex_cells(std::vector<ConvexPolygon> cells) {
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < cells.size() && !merged; ++i) {
            for (size_t j = i + 1; j < cells.size() && !merged; ++j) {
                if (!cells_touch(cells[i], cells[j])) continue;
                std::vector<Pt> pts = cells[i].v;
                pts.insert(pts.end(), cells[j].v.begin(), cells[j].v.end());
                ConvexPolygon hull = hull_keep_collinear(std::move(pts));
                if (hull.area() != cells[i].area() + cells[j].area()) continue;
                cells[i] = hull.canonical();
                cells.erase(cells.begin() + static_cast<long>(j));
                merged = true;
            }
        }
    }
    return cells;
}

std::vector<ConvexFreeComponent> convex_free_components(
    const ConvexPolygon& cake, const std::vector<ConvexPolygon>& pieces) {
    std::vector<ConvexPolygon> cells = {cake.canonical()};
    for (const ConvexPolygon& p : pieces) cells = subtract_piece(cells, p);

    DSU dsu(cells.size());
    for (size_t i = 0; i < cells.size(); ++i)
        for (size_t j = i + 1; j < cells.size(); ++j)
            if (cells_touch(cells[i], cells[j])) dsu.unite(static_cast<int>(i), static_cast<int>(j));

    std::map<int, ConvexFreeComponent> by_root;
    for (size_t i = 0; i < cells.size(); ++i) {
        auto& comp = by_root[dsu.find(static_cast<int>(i))];
        comp.cells.push_back(cells[i]);
        comp.total_area += cells[i].area();
    }
    std::vector<ConvexFreeComponent> out;
    for (auto& [root, comp] : by_root) {
        std::vector<Pt> pts;
        for (const ConvexPolygon& c : comp.cells)
            pts.insert(pts.end(), c.v.begin(), c.v.end());
        ConvexPolygon hull = hull_keep_collinear(std::move(pts));
        comp.convex = hull.area() == comp.total_area;
        if (comp.convex) comp.hull = hull;
        out.push_back(std::move(comp));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<PieceRegion> extract_holes(const PieceRegion& cake,
                                       const std::vector<PieceRegion>& pieces) {
    if (std::holds_alternative<Rect>(cake) || std::holds_alternative<RectilinearPolygon>(cake)) {
        std::vector<Rect> cake_rects;
        if (const Rect* r = std::get_if<Rect>(&cake))
            cake_rects = {*r};
        else
            cake_rects = rectilinear_decompose(std::get<RectilinearPolygon>(cake));
        std::vector<Rect> rs;
        for (const PieceRegion& p : pieces) {
            if (const Rect* r = std::get_if<Rect>(&p))
                rs.push_back(*r);
            else
                throw Error("rectilinear hole extraction expects rectangle pieces");
        }
        std::vector<PieceRegion> out;
        for (const RectilinearHole& h : rectilinear_holes(cake_rects, rs)) {
            if (h.corners.v.size() == 4) {
                Rect bb = h.corners.bbox();
                out.push_back(bb);
            } else {
                out.push_back(h.corners);
            }
        }
        return out;
    }
    if (const ConvexPolygon* c = std::get_if<ConvexPolygon>(&cake)) {
        std::vector<ConvexPolygon> ps;
        for (const PieceRegion& p : pieces) {
            if (const ConvexPolygon* cp = std::get_if<ConvexPolygon>(&p))
                ps.push_back(*cp);
            else if (const Rect* r = std::get_if<Rect>(&p))
                ps.push_back(rect_to_polygon(*r));
            else
                throw Error("convex hole extraction expects convex pieces");
        }
        std::vector<PieceRegion> out;
        for (const ConvexFreeComponent& comp : convex_free_components(*c, ps)) {
            if (!comp.convex) throw Error("non-convex hole in convex mode");
            out.push_back(*comp.hull);
        }
        return out;
    }
    throw Error("extract_holes on a 1-D cake");
}

}  // namespace rediv
