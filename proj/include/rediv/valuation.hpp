#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "rediv/geometry.hpp"

namespace rediv {

/// Piecewise-constant density on the line: values[i] holds on
/// [breaks[i], breaks[i+1]); zero outside the breakpoint range.
struct Density1D {
    std::vector<Q> breaks;  // strictly increasing, size = values.size()+1
    std::vector<Q> values;  // nonnegative
};

/// Piecewise-constant density on a grid; cells[i][j] holds on
/// [xs[i],xs[i+1]] x [ys[j],ys[j+1]]; zero outside the grid.
struct Density2D {
    std::vector<Q> xs, ys;
    std::vector<std::vector<Q>> cells;  // cells[i][j], i indexes xs
};

struct QueryLog {
    long evals = 0;
    long marks = 0;
};

/// An agent's value measure. `total` caches the value of the whole cake.
struct Valuation {
    std::variant<Density1D, Density2D> density;
    Q total;

    static Valuation over(Density1D d, const PieceRegion& cake);
    static Valuation over(Density2D d, const PieceRegion& cake);
};

enum class Axis { X, Y };

// Integral of the density over the piece; no query accounting.
Q eval_raw(const Valuation& v, const PieceRegion& piece);

// Eval query: exact integral, increments the eval counter.
Q eval(const Valuation& v, const PieceRegion& piece, QueryLog& log);

// Mark query on the line: leftmost c with eval over piece ∩ [-inf, c] equal
// to target. Exact (the density is piecewise constant).
Q mark_1d(const Valuation& v, const Interval& piece, const Q& target, QueryLog& log);
Q mark_1d(const Valuation& v, const IntervalUnion& piece, const Q& target, QueryLog& log);

// Mark query normal to an axis (or to an arbitrary direction for convex
// pieces): coordinate c such that the low side of the cut has value target.
// Exact for axis cuts of rectangles (value is piecewise linear in c); for
// convex polygons the value is piecewise quadratic and the root is isolated
// by bisection inside the containing quadratic segment.
Q mark_directional(const Valuation& v, const PieceRegion& piece, Axis axis, const Q& target,
                   QueryLog& log);
Q mark_directional(const Valuation& v, const PieceRegion& piece, const Pt& direction,
                   const Q& target, QueryLog& log);

// Per-agent scale factors making every total equal target_total.
std::vector<Q> normalize_scale(const std::vector<const Valuation*>& agents,
                               const Q& target_total);

// ---------------------------------------------------------------------------

/// A valuation as seen by a protocol: optionally scaled (normalization) and
/// optionally restricted to a region (virtual agents). All protocol queries
/// go through this view so scaling and restriction compose exactly.
/// Valuations themselves are immutable and safe to share across threads; the
/// QueryLog is the one mutable part of a run and belongs to a single run.
struct ValuationView {
    const Valuation* val = nullptr;
    Q scale = 1;
    std::optional<PieceRegion> restrict_to;

    ValuationView() = default;
    explicit ValuationView(const Valuation* valuation) : val(valuation) {}
    ValuationView(const Valuation* valuation, Q s, std::optional<PieceRegion> region)
        : val(valuation), scale(std::move(s)), restrict_to(std::move(region)) {}

    Q eval(const PieceRegion& piece, QueryLog& log) const;
    Q mark(const PieceRegion& piece, Axis axis, const Q& target, QueryLog& log) const;
    Q mark_line(const IntervalUnion& piece, const Q& target, QueryLog& log) const;
};

// piece ∩ region within one shape family; nullopt when the overlap has zero
// measure.
std::optional<PieceRegion> intersect_pieces(const PieceRegion& piece, const PieceRegion& region);

// Splits a piece by the axis-normal cut at coordinate c into the low/high
// sides; either side may be absent (zero measure).
std::pair<std::optional<PieceRegion>, std::optional<PieceRegion>> split_piece(
    const PieceRegion& piece, Axis axis, const Q& c);

// Extent [lo, hi] of the piece along the axis.
std::pair<Q, Q> piece_extent(const PieceRegion& piece, Axis axis);

}  // namespace rediv
