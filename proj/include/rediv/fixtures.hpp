#pragma once

#include <cstdint>

#include "rediv/protocol.hpp"

namespace rediv {

// The adversarial and tight constructions used throughout the test corpus.

/// Interval instance where every positive connected allocation caps each old
/// agent at 1/floor(n/k) of its old value: old agent j's piece alternates
/// floor(n/k) unit-value regions with floor(n/k)-1 zero gaps, and every young
/// agent wants exactly one gap.
Instance gaps_instance(int n, int k);

// Verifies the cap for old agents 1..k; throws unless the allocation is
// positive (everyone has positive value) and connected (interval pieces).
bool check_gaps_bound(const Instance& inst, const Allocation& alloc, int k);

struct ArchipelagoFixture {
    PieceRegion cake;  // union of the islands
    std::vector<PieceRegion> islands;
    std::vector<Agent> agents;
};

/// n identical agents valuing islands 1..m-1 at 1 and island m at n, the
/// construction showing 1/(n+m-1) is the best possible guarantee.
ArchipelagoFixture archipelago_tight(int n, int m);

/// Staircase cake with R+1 stairs and value concentrated in one small
/// "diamond" square per stair: the top diamond is worth n, the others 1.
/// No axis-parallel rectangle inside the cake can touch two diamonds.
Instance staircase_instance(int n, int R);

// diamond square of stair i (for the no-two-diamonds brute force)
Rect staircase_diamond(int R, int i);

struct Tiling {
    PieceRegion cake;
    std::vector<PieceRegion> pieces;
};

// Four rectangles whose maximal expansion leaves exactly one central blank;
// given in the not-yet-maximal form.
Tiling tiling_pinwheel();

// k x k axis-parallel squares on the lattice (2,1),(-1,2), boundary pieces
// grown to the bounding box; maximal, with ~one unit blank per square.
Tiling tiling_diagonal_squares(int k);

// rows x rows translates of an affine-regular hexagon arranged so every edge
// half-touches a neighbor and half-borders a triangular pocket; maximal with
// two pockets per interior hexagon. Cake = convex hull, boundary pieces grown.
Tiling tiling_honeycomb(int rows);

// Diagonal-squares window connected by a thin pipe to an ascending staircase:
// the rectilinear lower-bound construction. R >= 3 reflex vertexes total.
Tiling tiling_rectilinear_pipe(int k, int R);

// Small rectilinear configuration that is not maximal (one topping can grow
// upward into a boundary hole).
Tiling tiling_nonmaximal_rectilinear();

/// Reproducible pseudo-random instance; identical bytes for identical seeds.
Instance random_instance(Mode mode, int n, int m, std::uint64_t seed, int grid);

}  // namespace rediv
