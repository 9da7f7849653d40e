#include "rediv/valuation.hpp"

#include <algorithm>

namespace rediv {

// ---------------------------------------------------------------------------
// construction

static void validate_1d(const Density1D& d) {
    if (d.breaks.size() != d.values.size() + 1 || d.values.empty())
        throw Error("density grid sizes do not match");
    for (size_t i = 0; i + 1 < d.breaks.size(); ++i)
        if (!(d.breaks[i] < d.breaks[i + 1])) throw Error("breakpoints not increasing");
    for (const Q& v : d.values)
        if (sign(v) < 0) throw Error("negative density");
}

static void validate_2d(const Density2D& d) {
    if (d.xs.size() < 2 || d.ys.size() < 2) throw Error("degenerate 2-D density grid");
    if (d.cells.size() != d.xs.size() - 1) throw Error("density grid sizes do not match");
    for (size_t i = 0; i + 1 < d.xs.size(); ++i)
        if (!(d.xs[i] < d.xs[i + 1])) throw Error("x breakpoints not increasing");
    for (size_t j = 0; j + 1 < d.ys.size(); ++j)
        if (!(d.ys[j] < d.ys[j + 1])) throw Error("y breakpoints not increasing");
    for (const auto& col : d.cells) {
        if (col.size() != d.ys.size() - 1) throw Error("density grid sizes do not match");
        for (const Q& v : col)
            if (sign(v) < 0) throw Error("negative density");
    }
}

Valuation Valuation::over(Density1D d, const PieceRegion& cake) {
    validate_1d(d);
    Valuation v{std::move(d), 0};
    v.total = eval_raw(v, cake);
    return v;
}

Valuation Valuation::over(Density2D d, const PieceRegion& cake) {
    validate_2d(d);
    Valuation v{std::move(d), 0};
    v.total = eval_raw(v, cake);
    return v;
}

// ---------------------------------------------------------------------------
// eval

static Q eval_interval(const Density1D& d, const Interval& iv) {
    Q s = 0;
    for (size_t i = 0; i < d.values.size(); ++i) {
        if (sign(d.values[i]) == 0) continue;
        Q lo = std::max(iv.lo, d.breaks[i]);
        Q hi = std::min(iv.hi, d.breaks[i + 1]);
        if (lo < hi) s += d.values[i] * (hi - lo);
    }
    return s;
}

static Q eval_cell_rect(const Density2D& d, const Rect& r) {
    Q s = 0;
    for (size_t i = 0; i + 1 < d.xs.size(); ++i) {
        Q xlo = std::max(r.xlo, d.xs[i]);
        Q xhi = std::min(r.xhi, d.xs[i + 1]);
        if (!(xlo < xhi)) continue;
        for (size_t j = 0; j + 1 < d.ys.size(); ++j) {
            if (sign(d.cells[i][j]) == 0) continue;
            Q ylo = std::max(r.ylo, d.ys[j]);
            Q yhi = std::min(r.yhi, d.ys[j + 1]);
            if (ylo < yhi) s += d.cells[i][j] * (xhi - xlo) * (yhi - ylo);
        }
    }
    return s;
}

static std::optional<ConvexPolygon> clip_to_rect(const ConvexPolygon& p, const Rect& r) {
    std::optional<ConvexPolygon> cur = p;
    const HalfPlane hs[4] = {
        {{-1, 0}, -r.xlo}, {{1, 0}, r.xhi}, {{0, -1}, -r.ylo}, {{0, 1}, r.yhi}};
    for (const HalfPlane& h : hs) {
        cur = clip_convex(*cur, h);
        if (!cur) return std::nullopt;
    }
    return cur;
}

static Q eval_cell_polygon(const Density2D& d, const ConvexPolygon& p) {
    Rect bb = piece_bbox(p);
    Q s = 0;
    for (size_t i = 0; i + 1 < d.xs.size(); ++i) {
        if (d.xs[i + 1] <= bb.xlo || d.xs[i] >= bb.xhi) continue;
        for (size_t j = 0; j + 1 < d.ys.size(); ++j) {
            if (sign(d.cells[i][j]) == 0) continue;
            if (d.ys[j + 1] <= bb.ylo || d.ys[j] >= bb.yhi) continue;
            auto part = clip_to_rect(p, {d.xs[i], d.xs[i + 1], d.ys[j], d.ys[j + 1]});
            if (part) s += d.cells[i][j] * part->area();
        }
    }
    return s;
}

Q eval_raw(const Valuation& v, const PieceRegion& piece) {
    if (const Density1D* d1 = std::get_if<Density1D>(&v.density)) {
        if (const Interval* iv = std::get_if<Interval>(&piece)) return eval_interval(*d1, *iv);
        if (const IntervalUnion* u = std::get_if<IntervalUnion>(&piece)) {
            Q s = 0;
            for (const Interval& iv : u->parts) s += eval_interval(*d1, iv);
            return s;
        }
        throw Error("1-D valuation asked about a 2-D piece");
    }
    const Density2D& d2 = std::get<Density2D>(v.density);
    if (const Rect* r = std::get_if<Rect>(&piece)) return eval_cell_rect(d2, *r);
    if (const ConvexPolygon* c = std::get_if<ConvexPolygon>(&piece))
        return eval_cell_polygon(d2, *c);
    if (const RectilinearPolygon* rp = std::get_if<RectilinearPolygon>(&piece)) {
        Q s = 0;
        for (const Rect& r : rectilinear_decompose(*rp)) s += eval_cell_rect(d2, r);
        return s;
    }
    throw Error("2-D valuation asked about a 1-D piece");
}

Q eval(const Valuation& v, const PieceRegion& piece, QueryLog& log) {
    ++log.evals;
    return eval_raw(v, piece);
}

// ---------------------------------------------------------------------------
// 1-D marks

static Q mark_union(const Density1D& d, const IntervalUnion& piece, const Q& target) {
    if (sign(target) < 0) throw Error("mark target out of range");
    if (piece.empty()) {
        if (sign(target) == 0) return 0;
        throw Error("mark target out of range");
    }
    if (sign(target) == 0) return piece.parts.front().lo;
    Q cum = 0;
    for (const Interval& part : piece.parts) {
        // segment boundaries: density breakpoints clipped to the part
        std::vector<std::pair<Interval, Q>> segs;
        for (size_t i = 0; i < d.values.size(); ++i) {
            Q lo = std::max(part.lo, d.breaks[i]);
            Q hi = std::min(part.hi, d.breaks[i + 1]);
            if (lo < hi) segs.push_back({{lo, hi}, d.values[i]});
        }
        for (const auto& [seg, dens] : segs) {
            if (cum == target) return seg.lo;
            Q v = dens * seg.length();
            if (cum + v >= target) {
                // dens > 0 here, otherwise cum + 0 >= target with cum < target
                return seg.lo + (target - cum) / dens;
            }
            cum += v;
        }
        if (cum == target) return part.hi;
    }
    throw Error("mark target out of range");
}

Q mark_1d(const Valuation& v, const Interval& piece, const Q& target, QueryLog& log) {
    return mark_1d(v, IntervalUnion::of({piece}), target, log);
}

Q mark_1d(const Valuation& v, const IntervalUnion& piece, const Q& target, QueryLog& log) {
    const Density1D* d = std::get_if<Density1D>(&v.density);
    if (!d) throw Error("mark_1d on a 2-D valuation");
    ++log.marks;
    return mark_union(*d, piece, target);
}

// ---------------------------------------------------------------------------
// directional marks

std::pair<Q, Q> piece_extent(const PieceRegion& piece, Axis axis) {
    if (const Interval* iv = std::get_if<Interval>(&piece)) {
        if (axis != Axis::X) throw Error("1-D piece has no Y extent");
        return {iv->lo, iv->hi};
    }
    Rect bb = piece_bbox(piece);
    return axis == Axis::X ? std::pair<Q, Q>{bb.xlo, bb.xhi} : std::pair<Q, Q>{bb.ylo, bb.yhi};
}

static Pt axis_normal(Axis axis) { return axis == Axis::X ? Pt{1, 0} : Pt{0, 1}; }

// low side of the cut n.p <= c restricted to the piece
static std::optional<PieceRegion> low_side(const PieceRegion& piece, const Pt& n, const Q& c) {
    if (const Rect* r = std::get_if<Rect>(&piece)) {
        if (n.x == 1 && n.y == 0) {
            if (c <= r->xlo) return std::nullopt;
            Rect s = *r;
            s.xhi = std::min(r->xhi, c);
            return s.empty() ? std::nullopt : std::optional<PieceRegion>(s);
        }
        if (n.x == 0 && n.y == 1) {
            if (c <= r->ylo) return std::nullopt;
            Rect s = *r;
            s.yhi = std::min(r->yhi, c);
            return s.empty() ? std::nullopt : std::optional<PieceRegion>(s);
        }
        auto part = clip_convex(rect_to_polygon(*r), {n, c});
        if (!part) return std::nullopt;
        return PieceRegion{*part};
    }
    if (const ConvexPolygon* p = std::get_if<ConvexPolygon>(&piece)) {
        auto part = clip_convex(*p, {n, c});
        if (!part) return std::nullopt;
        return PieceRegion{*part};
    }
    throw Error("directional cut on unsupported piece");
}

static Q value_low(const Valuation& v, const PieceRegion& piece, const Pt& n, const Q& c) {
    auto part = low_side(piece, n, c);
    return part ? eval_raw(v, *part) : Q(0);
}

static Q mark_by_normal(const Valuation& v, const PieceRegion& piece, const Pt& n,
                        const Q& target) {
    const Density2D* d = std::get_if<Density2D>(&v.density);
    if (!d) throw Error("directional mark on a 1-D valuation");
    Q total = eval_raw(v, piece);
    if (sign(target) < 0 || target > total) throw Error("mark target out of range");

    // Breakpoints of the piecewise-quadratic cut-value function: the cut
    // positions where the swept region changes combinatorial structure are
    // the polygon vertices, the grid corners, and every crossing of a polygon
    // edge with a grid line.
    const ConvexPolygon poly = std::holds_alternative<Rect>(piece)
                                   ? rect_to_polygon(std::get<Rect>(piece))
                                   : std::get<ConvexPolygon>(piece);
    std::vector<Q> bps;
    for (const Pt& p : poly.v) bps.push_back(n.x * p.x + n.y * p.y);
    Q lo = *std::min_element(bps.begin(), bps.end());
    Q hi = *std::max_element(bps.begin(), bps.end());
    bool axis_aligned = (n.x == 1 && n.y == 0) || (n.x == 0 && n.y == 1);
    if (axis_aligned) {
        const auto& lines = (n.x == 1) ? d->xs : d->ys;
        for (const Q& t : lines) bps.push_back(t);
    } else {
        for (const Q& x : d->xs)
            for (const Q& y : d->ys) bps.push_back(n.x * x + n.y * y);
    }
    size_t nv = poly.v.size();
    for (size_t i = 0; i < nv; ++i) {
        const Pt& a = poly.v[i];
        const Pt& b = poly.v[(i + 1) % nv];
        for (const Q& gx : d->xs) {
            if ((a.x < gx && gx < b.x) || (b.x < gx && gx < a.x)) {
                Q y = a.y + (gx - a.x) / (b.x - a.x) * (b.y - a.y);
                bps.push_back(n.x * gx + n.y * y);
            }
        }
        for (const Q& gy : d->ys) {
            if ((a.y < gy && gy < b.y) || (b.y < gy && gy < a.y)) {
                Q x = a.x + (gy - a.y) / (b.y - a.y) * (b.x - a.x);
                bps.push_back(n.x * x + n.y * gy);
            }
        }
    }
    std::erase_if(bps, [&](const Q& t) { return t < lo || t > hi; });
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    if (sign(target) == 0) return lo;

    Q prev_c = lo, prev_f = 0;
    for (size_t k = 1; k < bps.size(); ++k) {
        Q f = value_low(v, piece, n, bps[k]);
        if (f >= target) {
            // leftmost root lies in (prev_c, bps[k]]
            Q a = prev_c, b = bps[k], fa = prev_f;
            Q h = b - a;
            // the value restricted to this segment is exactly quadratic:
            // fit through three exact samples
            Q fm = value_low(v, piece, n, a + h / 2) - fa;
            Q fb = f - fa;
            // g(t) = c2 t^2 + c1 t on [0, h], g(h/2) = fm, g(h) = fb
            Q c2 = (2 * fb - 4 * fm) / (h * h);
            Q c1 = (4 * fm - fb) / h;
            Q want = target - fa;
            if (sign(c2) == 0) {
                if (sign(c1) == 0) return a;  // plateau; leftmost
                return a + want / c1;
            }
            // monotone quadratic segment: bisect to 2^-80 of the segment
            Q tl = 0, th = h;
            for (int it = 0; it < 80; ++it) {
                Q tm = (tl + th) / 2;
                Q g = c2 * tm * tm + c1 * tm;
                if (g < want)
                    tl = tm;
                else
                    th = tm;
            }
            return a + th;
        }
        prev_c = bps[k];
        prev_f = f;
    }
    return hi;
}

Q mark_directional(const Valuation& v, const PieceRegion& piece, Axis axis, const Q& target,
                   QueryLog& log) {
    ++log.marks;
    return mark_by_normal(v, piece, axis_normal(axis), target);
}

Q mark_directional(const Valuation& v, const PieceRegion& piece, const Pt& direction,
                   const Q& target, QueryLog& log) {
    if (direction.x == 0 && direction.y == 0) throw Error("zero cut direction");
    ++log.marks;
    return mark_by_normal(v, piece, direction, target);
}

std::vector<Q> normalize_scale(const std::vector<const Valuation*>& agents,
                               const Q& target_total) {
    std::vector<Q> scales;
    for (const Valuation* v : agents) {
        if (sign(v->total) <= 0) throw Error("agent with zero total value");
        scales.push_back(target_total / v->total);
    }
    return scales;
}

// ---------------------------------------------------------------------------
// pieces: intersection and splitting

std::optional<PieceRegion> intersect_pieces(const PieceRegion& piece, const PieceRegion& region) {
    if (is_1d(piece) != is_1d(region)) throw Error("piece dimensions disagree");
    if (is_1d(piece)) {
        auto as_union = [](const PieceRegion& p) {
            if (const Interval* iv = std::get_if<Interval>(&p)) return IntervalUnion::of({*iv});
            return std::get<IntervalUnion>(p);
        };
        IntervalUnion r = intersect(as_union(piece), as_union(region));
        if (r.empty()) return std::nullopt;
        if (r.parts.size() == 1) return PieceRegion{r.parts[0]};
        return PieceRegion{r};
    }
    if (const Rect* a = std::get_if<Rect>(&piece)) {
        if (const Rect* b = std::get_if<Rect>(&region)) {
            auto r = intersect_rect(*a, *b);
            if (!r) return std::nullopt;
            return PieceRegion{*r};
        }
    }
    auto to_poly = [](const PieceRegion& p) {
        if (const Rect* r = std::get_if<Rect>(&p)) return rect_to_polygon(*r);
        if (const ConvexPolygon* c = std::get_if<ConvexPolygon>(&p)) return *c;
        throw Error("intersection of rectilinear pieces is unsupported");
    };
    auto r = intersect_convex(to_poly(piece), to_poly(region));
    if (!r) return std::nullopt;
    return PieceRegion{*r};
}

std::pair<std::optional<PieceRegion>, std::optional<PieceRegion>> split_piece(
    const PieceRegion& piece, Axis axis, const Q& c) {
    if (const Interval* iv = std::get_if<Interval>(&piece)) {
        if (axis != Axis::X) throw Error("1-D piece split along Y");
        Q cc = std::min(std::max(c, iv->lo), iv->hi);
        std::optional<PieceRegion> lo, hi;
        if (iv->lo < cc) lo = PieceRegion{Interval{iv->lo, cc}};
        if (cc < iv->hi) hi = PieceRegion{Interval{cc, iv->hi}};
        return {lo, hi};
    }
    if (const Rect* r = std::get_if<Rect>(&piece)) {
        Rect a = *r, b = *r;
        if (axis == Axis::X) {
            Q cc = std::min(std::max(c, r->xlo), r->xhi);
            a.xhi = cc;
            b.xlo = cc;
        } else {
            Q cc = std::min(std::max(c, r->ylo), r->yhi);
            a.yhi = cc;
            b.ylo = cc;
        }
        std::optional<PieceRegion> lo, hi;
        if (!a.empty()) lo = PieceRegion{a};
        if (!b.empty()) hi = PieceRegion{b};
        return {lo, hi};
    }
    if (const ConvexPolygon* p = std::get_if<ConvexPolygon>(&piece)) {
        Pt n = axis_normal(axis);
        auto lo = clip_convex(*p, {n, c});
        auto hi = clip_convex(*p, {{-n.x, -n.y}, -c});
        std::optional<PieceRegion> l, h;
        if (lo) l = PieceRegion{*lo};
        if (hi) h = PieceRegion{*hi};
        return {l, h};
    }
    throw Error("split on unsupported piece");
}

// ---------------------------------------------------------------------------
// views

Q ValuationView::eval(const PieceRegion& piece, QueryLog& log) const {
    ++log.evals;
    if (!restrict_to) return scale * eval_raw(*val, piece);
    auto part = intersect_pieces(piece, *restrict_to);
    return part ? Q(scale * eval_raw(*val, *part)) : Q(0);
}

Q ValuationView::mark(const PieceRegion& piece, Axis axis, const Q& target,
                      QueryLog& log) const {
    Q raw_target = target / scale;
    if (const Interval* iv = std::get_if<Interval>(&piece)) {
        IntervalUnion dom = IntervalUnion::of({*iv});
        if (restrict_to) {
            auto part = intersect_pieces(piece, *restrict_to);
            if (!part) {
                if (sign(target) == 0) return iv->lo;
                throw Error("mark target out of range");
            }
            dom = std::holds_alternative<Interval>(*part)
                      ? IntervalUnion::of({std::get<Interval>(*part)})
                      : std::get<IntervalUnion>(*part);
        }
        ++log.marks;
        QueryLog scratch;
        return mark_1d(*val, dom, raw_target, scratch);
    }
    const PieceRegion* dom = &piece;
    std::optional<PieceRegion> restricted;
    if (restrict_to) {
        restricted = intersect_pieces(piece, *restrict_to);
        if (!restricted) {
            if (sign(target) == 0) return piece_extent(piece, axis).first;
            throw Error("mark target out of range");
        }
        dom = &*restricted;
    }
    ++log.marks;
    QueryLog scratch;
    return mark_directional(*val, *dom, axis, raw_target, scratch);
}

Q ValuationView::mark_line(const IntervalUnion& piece, const Q& target, QueryLog& log) const {
    if (restrict_to) throw Error("restricted views cannot mark interval unions");
    ++log.marks;
    QueryLog scratch;
    return mark_1d(*val, piece, target / scale, scratch);
}

}  // namespace rediv
