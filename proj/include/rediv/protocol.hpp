#pragma once

#include <map>
#include <optional>

#include "rediv/valuation.hpp"

namespace rediv {

enum class Mode { unrestricted, interval, rectangle, rectilinear, convex };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);

struct Agent {
    int id = 0;
    bool is_old = false;
    Valuation valuation;
    std::optional<PieceRegion> old_piece;
};

struct Instance {
    Mode mode = Mode::interval;
    PieceRegion cake;
    std::vector<Agent> agents;  // old agents first

    int n() const { return static_cast<int>(agents.size()); }
    int m() const;
    void validate() const;  // shapes, disjointness, containment, positive totals
};

/// Agent id -> piece; ids with no entry received nothing (free disposal).
struct Allocation {
    std::map<int, PieceRegion> pieces;

    const PieceRegion* piece_of(int id) const {
        auto it = pieces.find(id);
        return it == pieces.end() ? nullptr : &it->second;
    }
};

// Disjointness/containment/shape check against the instance's mode.
void validate_allocation(const Instance& inst, const Allocation& alloc);

/// A participant in a protocol run: the valuation view carries the
/// normalization scale and, for virtual agents, the island restriction.
struct AgentRef {
    int id;
    ValuationView view;
};

// Divide-and-conquer proportional division: every agent marks the cut that
// splits off floor(n/2)/n of its value of the piece, the piece is cut at the
// floor(n/2)-th smallest mark, and the two groups recurse. Each agent ends
// with value >= its value of the piece divided by n.
std::map<int, PieceRegion> even_paz(const std::vector<AgentRef>& agents,
                                    const PieceRegion& piece, Axis axis, QueryLog& log);

struct ArchipelagoResult {
    std::map<int, PieceRegion> pieces;
    std::map<int, size_t> island_of;
};

// Division of disjoint islands: values normalized so every
// total equals n+m-1, islands processed last to first, q = the largest rank
// whose holder values the island at least q, the top q agents split the
// island by even_paz, the rest recurse. Guarantee: every agent gets at least
// 1/(n+m-1) of its total, inside a single island.
ArchipelagoResult archipelago(const std::vector<AgentRef>& agents,
                              const std::vector<PieceRegion>& islands, Axis axis,
                              QueryLog& log);

struct RedivideResult {
    Allocation allocation;
    std::vector<PieceRegion> islands;  // completion output order: old pieces then blanks
    int b = 0;
    QueryLog log;
    // diagnostics: the loser pieces of step 3 and the archipelago assignment
    std::map<int, PieceRegion> virtual_pieces;
    std::map<int, size_t> normal_island;   // archipelago island per real agent
    std::map<int, size_t> virtual_island;  // per old agent that had a virtual twin
};

// The redivision pipeline: completion, one virtual agent per old agent
// restricted to its completed island, archipelago over all of them, then each
// old agent keeps the better of its normal and virtual pieces.
RedivideResult redivide(const Instance& inst);

// q exact-equal parts of an interval-union piece by repeated marks.
std::vector<IntervalUnion> equal_partition(const ValuationView& view, const IntervalUnion& piece,
                                           int q, QueryLog& log);

struct ExchangeResult {
    Allocation allocation;
    std::map<int, PieceRegion> proportional;  // the Even-Paz allocation Y
    QueryLog log;
};

// Exchange redivision: X with V_i(X_i) >= r V_i(Y_i) + (1-r) V_i(Z_i) for
// r = p/q,
// via pairwise equal-partition and best-p selection.
ExchangeResult exchange_redivide(const Instance& inst, long p, long q);

// Helper shared by fixtures/tests: 1-D piece as an interval union.
IntervalUnion to_interval_union(const PieceRegion& p);

}  // namespace rediv
