#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "rediv/rational.hpp"

namespace rediv {

struct Pt {
    Q x, y;
    bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
};

// cross(o,a,b) > 0  <=>  a->b turns left around o.
Q cross(const Pt& o, const Pt& a, const Pt& b);

/// Closed interval [lo, hi] on the 1-D cake; empty iff lo == hi.
struct Interval {
    Q lo, hi;
    Q length() const { return hi - lo; }
    bool empty() const { return lo == hi; }
};

/// Sorted pairwise-disjoint intervals; canonical form has no empty parts and
/// merges parts that share an endpoint.
struct IntervalUnion {
    std::vector<Interval> parts;

    static IntervalUnion of(std::vector<Interval> raw);  // sorts, merges, validates
    Q length() const;
    bool empty() const { return parts.empty(); }
};

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion union_of(const IntervalUnion& a, const IntervalUnion& b);

/// Axis-parallel rectangle [xlo,xhi] x [ylo,yhi].
struct Rect {
    Q xlo, xhi, ylo, yhi;
    Q area() const { return (xhi - xlo) * (yhi - ylo); }
    bool empty() const { return xlo == xhi || ylo == yhi; }
    bool contains(const Rect& o) const {
        return xlo <= o.xlo && o.xhi <= xhi && ylo <= o.ylo && o.yhi <= yhi;
    }
};

// Intersection with positive area, or nullopt (boundary contact counts as empty).
std::optional<Rect> intersect_rect(const Rect& a, const Rect& b);

// Half-plane n.x * x + n.y * y <= c.
struct HalfPlane {
    Pt n;
    Q c;
    bool contains(const Pt& p) const { return n.x * p.x + n.y * p.y <= c; }
};

/// Counterclockwise convex polygon. Vertices may include "flat" (180 degree)
/// vertices; `canonical()` strips them. All cross products of consecutive
/// edges are >= 0 and the polygon is non-degenerate (positive area) unless
/// explicitly allowed by a constructor.
struct ConvexPolygon {
    std::vector<Pt> v;

    static ConvexPolygon of(std::vector<Pt> pts);  // validates CCW convexity
    Q area() const;
    ConvexPolygon canonical() const;               // flat vertices removed
    bool contains(const Pt& p) const;              // closed containment
    std::vector<HalfPlane> edges() const;          // one inequality per non-flat edge
};

ConvexPolygon rect_to_polygon(const Rect& r);

// Strict convex hull (collinear interior points dropped); throws when the
// points are degenerate.
ConvexPolygon convex_hull(std::vector<Pt> pts);

// Exact half-plane clip; nullopt when the result has zero area.
std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& p, const HalfPlane& h);

// Intersection of two convex polygons; nullopt when the overlap has zero area.
std::optional<ConvexPolygon> intersect_convex(const ConvexPolygon& a, const ConvexPolygon& b);

Q overlap_area(const ConvexPolygon& a, const ConvexPolygon& b);

/// Counterclockwise simple rectilinear polygon: edges alternate
/// horizontal/vertical. Reflex count R = (#corner vertices - 4) / 2.
struct RectilinearPolygon {
    std::vector<Pt> v;

    static RectilinearPolygon of(std::vector<Pt> pts);  // validates; rejects non-simple
    Q area() const;
    int reflex_count() const;
    Rect bbox() const;
};

RectilinearPolygon rect_to_rectilinear(const Rect& r);

// Horizontal-chord sweep: every reflex vertex extends its horizontal edge
// through the interior until it hits the boundary; the polygon is split along
// that chord and both halves recurse. Yields <= R+1 pairwise-disjoint
// rectangles covering the polygon exactly.
std::vector<Rect> rectilinear_decompose(const RectilinearPolygon& poly);

/// A geometric piece. IntervalUnion only appears in the unrestricted 1-D mode.
using PieceRegion =
    std::variant<Interval, IntervalUnion, Rect, ConvexPolygon, RectilinearPolygon>;

Q area(const PieceRegion& p);
bool is_1d(const PieceRegion& p);
Rect piece_bbox(const PieceRegion& p);  // 2-D pieces only

// ---------------------------------------------------------------------------
// Free-space extraction (holes).

/// One connected free-space component of a rectilinear configuration.
/// The boundary keeps "flat" vertices wherever the supporting obstacle
/// changes, so hole/topping incidences can be analysed; `outline` is the raw
/// traced loop and `corners` the canonical polygon.
struct RectilinearHole {
    std::vector<Pt> outline;                   // CCW loop, flat vertices kept
    RectilinearPolygon corners;                // canonical form
    std::vector<int> edge_owner;               // per outline edge: piece index, or -1 for cake
    bool boundary = false;                     // touches the cake boundary
    Q hole_area;
};

// cake given as its exact rectangle decomposition; pieces pairwise disjoint.
std::vector<RectilinearHole> rectilinear_holes(const std::vector<Rect>& cake_rects,
                                               const std::vector<Rect>& pieces);

/// Disjoint convex cells covering cake minus the union of the pieces,
/// grouped into edge-connected components (contact through a single point
/// does not connect, matching the measure-zero disjointness convention).
struct ConvexFreeComponent {
    std::vector<ConvexPolygon> cells;
    Q total_area;
    bool convex;                               // union of cells is convex
    std::optional<ConvexPolygon> hull;         // set when convex (collinear points kept)
};

std::vector<ConvexFreeComponent> convex_free_components(
    const ConvexPolygon& cake, const std::vector<ConvexPolygon>& pieces);

// Greedily merges touching cells whose union is convex; the result covers the
// same region with pairwise-disjoint convex polygons.
std::vector<ConvexPolygon> merge_convex_cells(std::vector<ConvexPolygon> cells);

/// Hole extraction dispatching on the cake type. Rectangle or
/// rectilinear cake with rectangle pieces yields rectilinear polygons (or
/// Rects when the hole is one); convex cake requires every component to be
/// convex and throws otherwise.
std::vector<PieceRegion> extract_holes(const PieceRegion& cake,
                                       const std::vector<PieceRegion>& pieces);

}  // namespace rediv
