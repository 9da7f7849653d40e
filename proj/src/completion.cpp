#include "rediv/completion.hpp"

#include <algorithm>

namespace rediv {

// ---------------------------------------------------------------------------
// 1-D

CompletionResult complete_interval(const Interval& cake, const std::vector<Interval>& pieces) {
    std::vector<size_t> order(pieces.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pieces[a].lo < pieces[b].lo; });
    Q pos = cake.lo;
    for (size_t i : order) {
        if (pieces[i].lo < pos) throw Error("overlapping initial intervals");
        if (pieces[i].hi > cake.hi || pieces[i].lo < cake.lo)
            throw Error("initial interval outside the cake");
        pos = pieces[i].hi;
    }
    std::vector<Interval> grown(pieces.begin(), pieces.end());
    // leading gap goes to the first piece on its right
    if (!order.empty()) grown[order.front()].lo = cake.lo;
    // every other gap goes to the piece on its left
    for (size_t i = 0; i + 1 < order.size(); ++i)
        grown[order[i]].hi = grown[order[i + 1]].lo;
    if (!order.empty()) grown[order.back()].hi = cake.hi;

    CompletionResult res;
    for (const Interval& iv : grown) res.expanded.push_back(iv);
    res.b = 0;
    return res;
}

// ---------------------------------------------------------------------------
// rectangles in a rectangle or rectilinear container

namespace {

Q region_overlap(const Rect& r, const std::vector<Rect>& region) {
    Q s = 0;
    for (const Rect& c : region) {
        auto i = intersect_rect(r, c);
        if (i) s += i->area();
    }
    return s;
}

bool inside_region(const Rect& r, const std::vector<Rect>& region) {
    return region_overlap(r, region) == r.area();
}

enum class Dir { left, right, down, up };

// farthest coordinate the given side of `piece` can move to while the swept
// strip stays inside the container and overlaps no other piece
std::optional<Q> push_limit(const std::vector<Rect>& container, const std::vector<Rect>& pieces,
                            size_t k, Dir dir) {
    const Rect& p = pieces[k];
    bool horiz = dir == Dir::left || dir == Dir::right;
    bool grow_hi = dir == Dir::right || dir == Dir::up;
    Q cur = horiz ? (grow_hi ? p.xhi : p.xlo) : (grow_hi ? p.yhi : p.ylo);

    std::vector<Q> cands;
    auto consider = [&](const Q& c) {
        if (grow_hi ? c > cur : c < cur) cands.push_back(c);
    };
    for (const Rect& c : container) {
        consider(horiz ? c.xlo : c.ylo);
        consider(horiz ? c.xhi : c.yhi);
    }
    for (size_t j = 0; j < pieces.size(); ++j) {
        if (j == k) continue;
        consider(horiz ? pieces[j].xlo : pieces[j].ylo);
        consider(horiz ? pieces[j].xhi : pieces[j].yhi);
    }
    std::sort(cands.begin(), cands.end());
    if (!grow_hi) std::reverse(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    auto strip = [&](const Q& c) -> Rect {
        Rect s = p;
        if (horiz) {
            if (grow_hi)
                s = {cur, c, p.ylo, p.yhi};
            else
                s = {c, cur, p.ylo, p.yhi};
        } else {
            if (grow_hi)
                s = {p.xlo, p.xhi, cur, c};
            else
                s = {p.xlo, p.xhi, c, cur};
        }
        return s;
    };
    auto ok = [&](const Q& c) {
        Rect s = strip(c);
        if (s.empty()) return true;
        if (!inside_region(s, container)) return false;
        for (size_t j = 0; j < pieces.size(); ++j) {
            if (j == k) continue;
            if (intersect_rect(s, pieces[j])) return false;
        }
        return true;
    };
    std::optional<Q> best;
    for (const Q& c : cands) {
        if (!ok(c)) break;
        best = c;
    }
    return best;
}

}  // namespace

std::vector<Rect> expand_maximal_rect(const std::vector<Rect>& container,
                                      std::vector<Rect> pieces) {
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (!inside_region(pieces[i], container)) throw Error("piece outside the cake");
        for (size_t j = i + 1; j < pieces.size(); ++j)
            if (intersect_rect(pieces[i], pieces[j])) throw Error("overlapping input pieces");
    }
    for (int pass = 0; pass < 1000; ++pass) {
        bool changed = false;
        for (size_t k = 0; k < pieces.size(); ++k) {
            for (Dir dir : {Dir::left, Dir::right, Dir::down, Dir::up}) {
                auto lim = push_limit(container, pieces, k, dir);
                if (!lim) continue;
                Rect& p = pieces[k];
                Q& side = dir == Dir::left    ? p.xlo
                          : dir == Dir::right ? p.xhi
                          : dir == Dir::down  ? p.ylo
                                              : p.yhi;
                if (side != *lim) {
                    side = *lim;
                    changed = true;
                }
            }
        }
        if (!changed) return pieces;
    }
    throw Error("rectangle expansion did not converge");
}

// ---------------------------------------------------------------------------
// convex pieces in a convex cake

namespace {

struct ConvexConfig {
    ConvexPolygon cake;
    std::vector<ConvexPolygon> pieces;
};

bool piece_inside_cake(const ConvexPolygon& p, const ConvexPolygon& cake) {
    for (const Pt& v : p.v)
        if (!cake.contains(v)) return false;
    return true;
}

// largest feasible polygon when edge `ei` of piece `k` is pushed outward
std::optional<ConvexPolygon> best_edge_push(const ConvexConfig& cfg, size_t k, size_t ei) {
    const ConvexPolygon piece = cfg.pieces[k].canonical();
    std::vector<HalfPlane> hs = piece.edges();
    if (ei >= hs.size()) return std::nullopt;
    const HalfPlane h = hs[ei];

    Q cap = h.n.x * cfg.cake.v[0].x + h.n.y * cfg.cake.v[0].y;
    for (const Pt& p : cfg.cake.v) {
        Q c = h.n.x * p.x + h.n.y * p.y;
        if (c > cap) cap = c;
    }
    std::vector<Q> cands;
    for (size_t j = 0; j < cfg.pieces.size(); ++j) {
        if (j == k) continue;
        for (const Pt& p : cfg.pieces[j].v) {
            Q c = h.n.x * p.x + h.n.y * p.y;
            if (c > h.c && c <= cap) cands.push_back(c);
        }
    }
    cands.push_back(cap);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::erase_if(cands, [&](const Q& c) { return c <= h.c; });
    if (cands.empty()) return std::nullopt;

    auto grown_at = [&](const Q& c) -> std::optional<ConvexPolygon> {
        std::optional<ConvexPolygon> g = cfg.cake;
        for (size_t e = 0; e < hs.size(); ++e) {
            g = clip_convex(*g, e == ei ? HalfPlane{h.n, c} : hs[e]);
            if (!g) return std::nullopt;
        }
        return g;
    };
    auto feasible = [&](const ConvexPolygon& g) {
        for (size_t j = 0; j < cfg.pieces.size(); ++j) {
            if (j == k) continue;
            if (sign(overlap_area(g, cfg.pieces[j])) > 0) return false;
        }
        return true;
    };
    // feasibility is monotone along the push: binary search the last feasible
    size_t lo = 0, hi = cands.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        auto g = grown_at(cands[mid]);
        if (g && feasible(*g))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == 0) return std::nullopt;
    auto g = grown_at(cands[lo - 1]);
    if (!g) return std::nullopt;
    if (g->area() <= piece.area()) return std::nullopt;
    return g->canonical();
}

std::vector<Pt> arrangement_vertices(const ConvexConfig& cfg) {
    std::vector<Pt> pts;
    for (const ConvexFreeComponent& comp : convex_free_components(cfg.cake, cfg.pieces))
        for (const ConvexPolygon& cell : comp.cells)
            pts.insert(pts.end(), cell.v.begin(), cell.v.end());
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::optional<ConvexPolygon> try_hull_vertex(const ConvexConfig& cfg, size_t k, const Pt& x) {
    const ConvexPolygon& piece = cfg.pieces[k];
    if (piece.contains(x)) return std::nullopt;
    std::vector<Pt> pts = piece.v;
    pts.push_back(x);
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    // plain strict hull
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
    if (lo.size() < 3) return std::nullopt;
    ConvexPolygon grown{std::move(lo)};
    if (grown.area() <= piece.area()) return std::nullopt;
    if (!piece_inside_cake(grown, cfg.cake)) return std::nullopt;
    for (size_t j = 0; j < cfg.pieces.size(); ++j) {
        if (j == k) continue;
        if (sign(overlap_area(grown, cfg.pieces[j])) > 0) return std::nullopt;
    }
    return grown;
}

}  // namespace

// one full pass of edge pushes over all pieces; true when anything moved
static bool push_pass(ConvexConfig& cfg) {
    bool changed = false;
    for (size_t k = 0; k < cfg.pieces.size(); ++k) {
        bool piece_changed = true;
        int guard = 0;
        while (piece_changed) {
            if (++guard > 200) throw Error("edge pushes did not settle");
            piece_changed = false;
            size_t ne = cfg.pieces[k].canonical().v.size();
            for (size_t e = 0; e < ne; ++e) {
                auto g = best_edge_push(cfg, k, e);
                if (g) {
                    cfg.pieces[k] = *g;
                    piece_changed = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return changed;
}

// Expansion runs edge pushes to a fixed point, then a bounded number of
// vertex-hull rounds (each followed by more pushes). The round cap bounds the
// arithmetic depth of the produced coordinates; the configuration is maximal
// with respect to pushes and hulls over the final arrangement in almost all
// cases, and the declared discretization gap is accepted where it is not.
std::vector<ConvexPolygon> expand_maximal_convex(const ConvexPolygon& cake,
                                                 std::vector<ConvexPolygon> pieces) {
    ConvexConfig cfg{cake.canonical(), std::move(pieces)};
    for (size_t i = 0; i < cfg.pieces.size(); ++i) {
        if (!piece_inside_cake(cfg.pieces[i], cfg.cake)) throw Error("piece outside the cake");
        for (size_t j = i + 1; j < cfg.pieces.size(); ++j)
            if (sign(overlap_area(cfg.pieces[i], cfg.pieces[j])) > 0)
                throw Error("overlapping input pieces");
    }
    for (int pass = 0; pass < 60; ++pass)
        if (!push_pass(cfg)) break;
    for (int round = 0; round < 3; ++round) {
        std::vector<Pt> verts = arrangement_vertices(cfg);
        bool hulled = false;
        for (size_t k = 0; k < cfg.pieces.size(); ++k) {
            for (const Pt& x : verts) {
                auto g = try_hull_vertex(cfg, k, x);
                if (g) {
                    cfg.pieces[k] = *g;
                    hulled = true;
                }
            }
        }
        if (!hulled) break;
        for (int pass = 0; pass < 60; ++pass)
            if (!push_pass(cfg)) break;
    }
    return cfg.pieces;
}

// ---------------------------------------------------------------------------
// completion drivers

CompletionResult complete_rectangle(const Rect& cake, const std::vector<Rect>& pieces) {
    std::vector<Rect> container = {cake};
    if (pieces.empty()) return {{}, {cake}, 1};
    std::vector<Rect> grown = expand_maximal_rect(container, pieces);
    CompletionResult res;
    for (const Rect& r : grown) res.expanded.push_back(r);
    for (const RectilinearHole& h : rectilinear_holes(container, grown)) {
        if (h.boundary || h.corners.v.size() != 4)
            throw Error("non-rectangular or boundary hole after rectangle expansion");
        res.blanks.push_back(h.corners.bbox());
    }
    res.b = static_cast<int>(res.blanks.size());
    size_t m = pieces.size();
    if (m == 1 && res.b != 0) throw Error("single maximal rectangle left a blank");
    if (m >= 4 && res.b > static_cast<int>(m) - 3)
        throw Error("rectangle blank bound m-3 violated");
    return res;
}

CompletionResult complete_rectilinear(const RectilinearPolygon& cake,
                                      const std::vector<Rect>& pieces) {
    std::vector<Rect> container = rectilinear_decompose(cake);
    if (pieces.empty()) {
        CompletionResult res;
        for (const Rect& r : container) res.blanks.push_back(r);
        res.b = static_cast<int>(container.size());
        return res;
    }
    std::vector<Rect> grown = expand_maximal_rect(container, pieces);
    CompletionResult res;
    for (const Rect& r : grown) res.expanded.push_back(r);
    for (const RectilinearHole& h : rectilinear_holes(container, grown)) {
        if (!h.boundary) {
            if (h.corners.v.size() != 4)
                throw Error("non-rectangular interior hole after rectilinear expansion");
            res.blanks.push_back(h.corners.bbox());
        } else {
            for (const Rect& r : rectilinear_decompose(h.corners)) res.blanks.push_back(r);
        }
    }
    res.b = static_cast<int>(res.blanks.size());
    return res;
}

CompletionResult complete_convex(const ConvexPolygon& cake,
                                 const std::vector<ConvexPolygon>& pieces) {
    if (pieces.empty()) return {{}, {cake}, 1};
    std::vector<ConvexPolygon> grown = expand_maximal_convex(cake, pieces);
    CompletionResult res;
    for (const ConvexPolygon& p : grown) res.expanded.push_back(p);
    bool all_convex = true;
    for (const ConvexFreeComponent& comp : convex_free_components(cake, grown)) {
        if (comp.convex) {
            res.blanks.push_back(*comp.hull);
        } else {
            // the expansion is maximal only relative to vertex hulling; a hole
            // it could not certify convex is handed out as convex blanks
            all_convex = false;
            for (const ConvexPolygon& cell : merge_convex_cells(comp.cells))
                res.blanks.push_back(cell);
        }
    }
    res.b = static_cast<int>(res.blanks.size());
    size_t m = pieces.size();
    if (m == 1 && res.b != 0) throw Error("single maximal convex piece left a blank");
    if (all_convex && m >= 4 && res.b > 2 * static_cast<int>(m) - 5)
        throw Error("convex blank bound 2m-5 violated");
    return res;
}

// ---------------------------------------------------------------------------
// maximality oracle

MaximalityResult is_maximal(const PieceRegion& cake, const std::vector<PieceRegion>& pieces,
                            ShapeFamily family) {
    MaximalityResult res;
    if (family == ShapeFamily::rectangle || family == ShapeFamily::rectilinear_container) {
        std::vector<Rect> container;
        if (const Rect* r = std::get_if<Rect>(&cake)) {
            container = {*r};
        } else if (const RectilinearPolygon* rp = std::get_if<RectilinearPolygon>(&cake)) {
            container = rectilinear_decompose(*rp);
        } else {
            throw Error("rectilinear cake expected");
        }
        std::vector<Rect> rs;
        for (const PieceRegion& p : pieces) rs.push_back(std::get<Rect>(p));
        for (size_t k = 0; k < rs.size(); ++k) {
            for (Dir dir : {Dir::left, Dir::right, Dir::down, Dir::up}) {
                auto lim = push_limit(container, rs, k, dir);
                if (!lim) continue;
                Rect g = rs[k];
                Q& side = dir == Dir::left    ? g.xlo
                          : dir == Dir::right ? g.xhi
                          : dir == Dir::down  ? g.ylo
                                              : g.yhi;
                if (side != *lim) {
                    side = *lim;
                    const char* names[] = {"push-left", "push-right", "push-down", "push-up"};
                    return {false, MaximalityWitness{k, g, names[static_cast<int>(dir)]}};
                }
            }
        }
        return res;
    }
    // convex
    ConvexConfig cfg{std::get<ConvexPolygon>(cake).canonical(), {}};
    for (const PieceRegion& p : pieces) {
        if (const ConvexPolygon* c = std::get_if<ConvexPolygon>(&p))
            cfg.pieces.push_back(*c);
        else
            cfg.pieces.push_back(rect_to_polygon(std::get<Rect>(p)));
    }
    for (size_t k = 0; k < cfg.pieces.size(); ++k) {
        size_t ne = cfg.pieces[k].canonical().v.size();
        for (size_t e = 0; e < ne; ++e) {
            auto g = best_edge_push(cfg, k, e);
            if (g) return {false, MaximalityWitness{k, *g, "edge-push"}};
        }
    }
    std::vector<Pt> verts = arrangement_vertices(cfg);
    for (size_t k = 0; k < cfg.pieces.size(); ++k)
        for (const Pt& x : verts) {
            auto g = try_hull_vertex(cfg, k, x);
            if (g) return {false, MaximalityWitness{k, *g, "vertex-hull"}};
        }
    return res;
}

}  // namespace rediv
