#pragma once

#include <optional>
#include <string>

#include "rediv/geometry.hpp"

namespace rediv {

/// Output of the allocation-completion step: the expanded pieces keep their
/// input order (expanded[j] contains input piece j); blanks follow. Together
/// they partition the cake exactly.
struct CompletionResult {
    std::vector<PieceRegion> expanded;
    std::vector<PieceRegion> blanks;
    int b = 0;
};

// 1-D completion: every gap is attached to its left neighbor (to the right
// neighbor when the gap starts the cake); b is always 0.
CompletionResult complete_interval(const Interval& cake, const std::vector<Interval>& pieces);

// Grows every rectangle to a maximal one inside the container (given as its
// exact rectangle decomposition). Deterministic: pieces in input order, sides
// in order left/right/down/up, each side pushed to the nearest obstacle,
// repeated until a full pass changes nothing.
std::vector<Rect> expand_maximal_rect(const std::vector<Rect>& container,
                                      std::vector<Rect> pieces);

// Maximal growth of convex pieces inside a convex cake. Two move kinds are
// iterated to a fixed point: pushing a supporting edge outward to the
// farthest feasible offset, and replacing a piece by conv(piece ∪ {v}) for a
// vertex v of the free-space arrangement.
std::vector<ConvexPolygon> expand_maximal_convex(const ConvexPolygon& cake,
                                                 std::vector<ConvexPolygon> pieces);

CompletionResult complete_rectangle(const Rect& cake, const std::vector<Rect>& pieces);
CompletionResult complete_rectilinear(const RectilinearPolygon& cake,
                                      const std::vector<Rect>& pieces);
CompletionResult complete_convex(const ConvexPolygon& cake,
                                 const std::vector<ConvexPolygon>& pieces);

struct MaximalityWitness {
    size_t piece;
    PieceRegion grown;
    std::string move;
};

struct MaximalityResult {
    bool maximal = true;
    std::optional<MaximalityWitness> witness;
};

enum class ShapeFamily { rectangle, rectilinear_container, convex };

MaximalityResult is_maximal(const PieceRegion& cake, const std::vector<PieceRegion>& pieces,
                            ShapeFamily family);

}  // namespace rediv
