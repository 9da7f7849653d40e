#include "rediv/protocol.hpp"

#include <algorithm>
#include <set>

#include "rediv/completion.hpp"

namespace rediv {

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::unrestricted: return "unrestricted";
        case Mode::interval: return "interval";
        case Mode::rectangle: return "rectangle";
        case Mode::rectilinear: return "rectilinear";
        case Mode::convex: return "convex";
    }
    throw Error("bad mode");
}

Mode mode_from_name(const std::string& s) {
    if (s == "unrestricted") return Mode::unrestricted;
    if (s == "interval") return Mode::interval;
    if (s == "rectangle") return Mode::rectangle;
    if (s == "rectilinear") return Mode::rectilinear;
    if (s == "convex") return Mode::convex;
    throw Error("unknown mode: " + s);
}

int Instance::m() const {
    int c = 0;
    for (const Agent& a : agents)
        if (a.is_old) ++c;
    return c;
}

IntervalUnion to_interval_union(const PieceRegion& p) {
    if (const Interval* iv = std::get_if<Interval>(&p)) return IntervalUnion::of({*iv});
    if (const IntervalUnion* u = std::get_if<IntervalUnion>(&p)) return *u;
    throw Error("expected a 1-D piece");
}

namespace {

bool shape_ok(Mode mode, const PieceRegion& p, bool initial) {
    switch (mode) {
        case Mode::unrestricted:
            return is_1d(p);
        case Mode::interval:
            return std::holds_alternative<Interval>(p);
        case Mode::rectangle:
        case Mode::rectilinear:
            return std::holds_alternative<Rect>(p);
        case Mode::convex:
            return std::holds_alternative<ConvexPolygon>(p) ||
                   (initial && std::holds_alternative<Rect>(p));
    }
    return false;
}

Q pairwise_overlap(const PieceRegion& a, const PieceRegion& b) {
    auto i = intersect_pieces(a, b);
    return i ? area(*i) : Q(0);
}

bool piece_in_cake(const PieceRegion& cake, const PieceRegion& p) {
    if (is_1d(cake)) {
        IntervalUnion c = to_interval_union(cake);
        IntervalUnion u = to_interval_union(p);
        return intersect(c, u).length() == u.length();
    }
    if (const Rect* cr = std::get_if<Rect>(&cake)) {
        if (const Rect* pr = std::get_if<Rect>(&p)) return cr->contains(*pr);
        if (const ConvexPolygon* pc = std::get_if<ConvexPolygon>(&p))
            return overlap_area(rect_to_polygon(*cr), *pc) == pc->area();
    }
    if (const ConvexPolygon* cc = std::get_if<ConvexPolygon>(&cake)) {
        ConvexPolygon pp = std::holds_alternative<Rect>(p) ? rect_to_polygon(std::get<Rect>(p))
                                                           : std::get<ConvexPolygon>(p);
        return overlap_area(*cc, pp) == pp.area();
    }
    if (const RectilinearPolygon* rp = std::get_if<RectilinearPolygon>(&cake)) {
        const Rect& r = std::get<Rect>(p);
        Q covered = 0;
        for (const Rect& c : rectilinear_decompose(*rp)) {
            auto i = intersect_rect(r, c);
            if (i) covered += i->area();
        }
        return covered == r.area();
    }
    return false;
}

}  // namespace

void Instance::validate() const {
    switch (mode) {
        case Mode::unrestricted:
        case Mode::interval:
            if (!std::holds_alternative<Interval>(cake)) throw Error("cake must be an interval");
            break;
        case Mode::rectangle:
            if (!std::holds_alternative<Rect>(cake)) throw Error("cake must be a rectangle");
            break;
        case Mode::rectilinear:
            if (!std::holds_alternative<RectilinearPolygon>(cake))
                throw Error("cake must be a rectilinear polygon");
            break;
        case Mode::convex:
            if (!std::holds_alternative<ConvexPolygon>(cake))
                throw Error("cake must be a convex polygon");
            break;
    }
    if (agents.empty()) throw Error("instance without agents");
    if (m() > n()) throw Error("more old agents than agents");
    std::vector<const PieceRegion*> olds;
    bool seen_young = false;
    std::set<int> ids;
    for (const Agent& a : agents) {
        if (!ids.insert(a.id).second) throw Error("duplicate agent id");
        if (a.is_old && seen_young) throw Error("old agents must come first");
        if (!a.is_old) seen_young = true;
        if (a.is_old != a.old_piece.has_value())
            throw Error("old agents must hold exactly one initial piece");
        if (sign(a.valuation.total) <= 0) throw Error("agent with zero total value");
        if (a.old_piece) {
            if (!shape_ok(mode, *a.old_piece, true))
                throw Error("initial piece has the wrong shape for the mode");
            if (!piece_in_cake(cake, *a.old_piece)) throw Error("initial piece outside cake");
            olds.push_back(&*a.old_piece);
        }
    }
    for (size_t i = 0; i < olds.size(); ++i)
        for (size_t j = i + 1; j < olds.size(); ++j)
            if (sign(pairwise_overlap(*olds[i], *olds[j])) > 0)
                throw Error("initial pieces overlap");
}

void validate_allocation(const Instance& inst, const Allocation& alloc) {
    std::vector<const PieceRegion*> ps;
    for (const auto& [id, piece] : alloc.pieces) {
        bool known = false;
        for (const Agent& a : inst.agents) known |= a.id == id;
        if (!known) throw Error("allocation names an unknown agent");
        if (!shape_ok(inst.mode, piece, false)) throw Error("allocated piece has wrong shape");
        if (!piece_in_cake(inst.cake, piece)) throw Error("allocated piece outside cake");
        ps.push_back(&piece);
    }
    for (size_t i = 0; i < ps.size(); ++i)
        for (size_t j = i + 1; j < ps.size(); ++j)
            if (sign(pairwise_overlap(*ps[i], *ps[j])) > 0)
                throw Error("allocated pieces overlap");
}

// ---------------------------------------------------------------------------
// Even-Paz

static void even_paz_rec(std::vector<AgentRef> agents, const std::optional<PieceRegion>& piece,
                         Axis axis, QueryLog& log, std::map<int, PieceRegion>& out) {
    if (agents.empty()) return;
    if (!piece) return;  // zero-measure piece: nobody gets anything
    size_t n = agents.size();
    if (n == 1) {
        out[agents[0].id] = *piece;
        return;
    }
    size_t k = n / 2;
    Q frac(static_cast<long>(k), static_cast<long>(n));
    frac.canonicalize();
    std::vector<std::pair<Q, size_t>> marks;  // (cut coordinate, index into agents)
    for (size_t i = 0; i < n; ++i) {
        Q total = agents[i].view.eval(*piece, log);
        Q c = agents[i].view.mark(*piece, axis, frac * total, log);
        marks.push_back({c, i});
    }
    std::sort(marks.begin(), marks.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return agents[a.second].id < agents[b.second].id;
    });
    Q cut = marks[k - 1].first;
    auto [low_piece, high_piece] = split_piece(*piece, axis, cut);
    std::vector<AgentRef> low, high;
    for (size_t i = 0; i < n; ++i)
        (i < k ? low : high).push_back(agents[marks[i].second]);
    even_paz_rec(std::move(low), low_piece, axis, log, out);
    even_paz_rec(std::move(high), high_piece, axis, log, out);
}

std::map<int, PieceRegion> even_paz(const std::vector<AgentRef>& agents,
                                    const PieceRegion& piece, Axis axis, QueryLog& log) {
    if (agents.empty()) throw Error("even_paz with no agents");
    std::map<int, PieceRegion> out;
    even_paz_rec(agents, piece, axis, log, out);
    return out;
}

// ---------------------------------------------------------------------------
// archipelago

static void archipelago_rec(std::vector<AgentRef> agents,
                            const std::vector<PieceRegion>& islands, size_t t, Axis axis,
                            QueryLog& log, ArchipelagoResult& res) {
    if (agents.empty() || t == 0) return;
    if (t == 1) {
        for (const AgentRef& a : agents) res.island_of[a.id] = 0;
        auto pieces = even_paz(agents, islands[0], axis, log);
        res.pieces.insert(pieces.begin(), pieces.end());
        return;
    }
    const PieceRegion& last = islands[t - 1];
    std::vector<std::pair<Q, size_t>> vals;
    for (size_t i = 0; i < agents.size(); ++i)
        vals.push_back({agents[i].view.eval(last, log), i});
    std::sort(vals.begin(), vals.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;  // descending value
        return agents[a.second].id < agents[b.second].id;
    });
    size_t q = 0;
    for (size_t j = 0; j < vals.size(); ++j) {
        if (vals[j].first >= Q(static_cast<long>(j + 1))) q = j + 1;
    }
    std::vector<AgentRef> top, rest;
    for (size_t j = 0; j < vals.size(); ++j)
        (j < q ? top : rest).push_back(agents[vals[j].second]);
    if (q >= 1) {
        for (const AgentRef& a : top) res.island_of[a.id] = t - 1;
        auto pieces = even_paz(top, last, axis, log);
        res.pieces.insert(pieces.begin(), pieces.end());
    }
    archipelago_rec(std::move(rest), islands, t - 1, axis, log, res);
}

ArchipelagoResult archipelago(const std::vector<AgentRef>& agents,
                              const std::vector<PieceRegion>& islands, Axis axis,
                              QueryLog& log) {
    if (islands.empty()) throw Error("archipelago with no islands");
    long n = static_cast<long>(agents.size());
    long m = static_cast<long>(islands.size());
    Q target(n + m - 1);
    // normalize: scale every agent so its total over the islands is n+m-1
    std::vector<AgentRef> scaled;
    for (const AgentRef& a : agents) {
        Q total = 0;
        for (const PieceRegion& isl : islands) total += a.view.eval(isl, log);
        if (sign(total) <= 0) throw Error("agent values the archipelago at zero");
        AgentRef s = a;
        s.view.scale *= target / total;
        scaled.push_back(s);
    }
    ArchipelagoResult res;
    archipelago_rec(std::move(scaled), islands, islands.size(), axis, log, res);
    return res;
}

// ---------------------------------------------------------------------------
// redivision

namespace {

struct IslandSetup {
    std::vector<PieceRegion> islands;
    int b = 0;
};

IslandSetup build_islands(const Instance& inst, const std::vector<const Agent*>& olds) {
    IslandSetup s;
    switch (inst.mode) {
        case Mode::interval: {
            std::vector<Interval> pieces;
            for (const Agent* a : olds) pieces.push_back(std::get<Interval>(*a->old_piece));
            CompletionResult c = complete_interval(std::get<Interval>(inst.cake), pieces);
            s.islands = c.expanded;
            s.b = c.b;
            break;
        }
        case Mode::rectangle: {
            std::vector<Rect> pieces;
            for (const Agent* a : olds) pieces.push_back(std::get<Rect>(*a->old_piece));
            CompletionResult c = complete_rectangle(std::get<Rect>(inst.cake), pieces);
            s.islands = c.expanded;
            s.islands.insert(s.islands.end(), c.blanks.begin(), c.blanks.end());
            s.b = c.b;
            break;
        }
        case Mode::rectilinear: {
            std::vector<Rect> pieces;
            for (const Agent* a : olds) pieces.push_back(std::get<Rect>(*a->old_piece));
            CompletionResult c =
                complete_rectilinear(std::get<RectilinearPolygon>(inst.cake), pieces);
            s.islands = c.expanded;
            s.islands.insert(s.islands.end(), c.blanks.begin(), c.blanks.end());
            s.b = c.b;
            break;
        }
        case Mode::convex: {
            std::vector<ConvexPolygon> pieces;
            for (const Agent* a : olds) {
                if (const Rect* r = std::get_if<Rect>(&*a->old_piece))
                    pieces.push_back(rect_to_polygon(*r));
                else
                    pieces.push_back(std::get<ConvexPolygon>(*a->old_piece));
            }
            CompletionResult c = complete_convex(std::get<ConvexPolygon>(inst.cake), pieces);
            s.islands = c.expanded;
            s.islands.insert(s.islands.end(), c.blanks.begin(), c.blanks.end());
            s.b = c.b;
            break;
        }
        default:
            throw Error("redivide works on interval/rectangle/rectilinear/convex modes");
    }
    return s;
}

}  // namespace

RedivideResult redivide(const Instance& inst) {
    inst.validate();
    if (inst.m() < 1) throw Error("redivide needs at least one old agent");
    std::vector<const Agent*> olds;
    for (const Agent& a : inst.agents)
        if (a.is_old) olds.push_back(&a);

    RedivideResult res;
    IslandSetup setup = build_islands(inst, olds);
    res.islands = setup.islands;
    res.b = setup.b;

    if (inst.n() == 1) {
        // single agent: it takes its most valuable island whole
        const Agent& a = inst.agents[0];
        size_t best = 0;
        Q best_v = eval_raw(a.valuation, setup.islands[0]);
        ++res.log.evals;
        for (size_t i = 1; i < setup.islands.size(); ++i) {
            Q v = eval_raw(a.valuation, setup.islands[i]);
            ++res.log.evals;
            if (v > best_v) {
                best = i;
                best_v = v;
            }
        }
        res.allocation.pieces[a.id] = setup.islands[best];
        res.normal_island[a.id] = best;
        return res;
    }

    // virtual agents get ids above every real id
    int max_id = 0;
    for (const Agent& a : inst.agents) max_id = std::max(max_id, a.id);
    std::vector<AgentRef> refs;
    std::map<int, int> virtual_of;  // old agent id -> virtual id
    for (const Agent& a : inst.agents) refs.push_back({a.id, ValuationView{&a.valuation}});
    for (size_t j = 0; j < olds.size(); ++j) {
        const PieceRegion& island = setup.islands[j];
        Q vtotal = eval_raw(olds[j]->valuation, island);
        if (sign(vtotal) <= 0) continue;  // worthless island: virtual twin is pointless
        int vid = max_id + 1 + static_cast<int>(j);
        virtual_of[olds[j]->id] = vid;
        refs.push_back({vid, ValuationView{&olds[j]->valuation, 1, island}});
    }

    ArchipelagoResult arch = archipelago(refs, setup.islands, Axis::X, res.log);

    for (const Agent& a : inst.agents) {
        if (auto it = arch.island_of.find(a.id); it != arch.island_of.end())
            res.normal_island[a.id] = it->second;
        if (!a.is_old) {
            if (auto it = arch.pieces.find(a.id); it != arch.pieces.end())
                res.allocation.pieces[a.id] = it->second;
            continue;
        }
        const PieceRegion* normal = nullptr;
        const PieceRegion* virt = nullptr;
        if (auto it = arch.pieces.find(a.id); it != arch.pieces.end()) normal = &it->second;
        if (auto vit = virtual_of.find(a.id); vit != virtual_of.end()) {
            if (auto it = arch.pieces.find(vit->second); it != arch.pieces.end()) {
                virt = &it->second;
                res.virtual_pieces[a.id] = it->second;
                if (auto ii = arch.island_of.find(vit->second); ii != arch.island_of.end())
                    res.virtual_island[a.id] = ii->second;
            }
        }
        Q vn = normal ? eval_raw(a.valuation, *normal) : Q(0);
        Q vv = virt ? eval_raw(a.valuation, *virt) : Q(0);
        res.log.evals += 2;
        // ties keep the normal piece; the loser is discarded (free disposal)
        if (virt && vv > vn)
            res.allocation.pieces[a.id] = *virt;
        else if (normal)
            res.allocation.pieces[a.id] = *normal;
    }
    return res;
}

// ---------------------------------------------------------------------------
// exchange protocol (unrestricted pieces)

std::vector<IntervalUnion> equal_partition(const ValuationView& view, const IntervalUnion& piece,
                                           int q, QueryLog& log) {
    if (q < 1) throw Error("equal_partition needs q >= 1");
    if (q == 1) return {piece};
    Q total = view.eval(piece, log);
    std::vector<Q> cuts;
    for (int j = 1; j < q; ++j) {
        Q target = total * j / q;
        cuts.push_back(view.mark_line(piece, target, log));
    }
    std::vector<IntervalUnion> parts;
    Q lo = piece.empty() ? Q(0) : piece.parts.front().lo;
    Q hi = piece.empty() ? Q(0) : piece.parts.back().hi;
    Q prev = lo;
    for (int j = 0; j < q; ++j) {
        Q next = j + 1 < q ? cuts[j] : hi;
        parts.push_back(intersect(piece, IntervalUnion::of({{prev, next}})));
        prev = next;
    }
    return parts;
}

ExchangeResult exchange_redivide(const Instance& inst, long p, long q) {
    inst.validate();
    if (inst.mode != Mode::unrestricted) throw Error("exchange needs the unrestricted mode");
    if (!(0 < p && p < q)) throw Error("r = p/q must satisfy 0 < p < q");

    ExchangeResult res;
    const Interval cake = std::get<Interval>(inst.cake);

    std::vector<AgentRef> refs;
    for (const Agent& a : inst.agents) refs.push_back({a.id, ValuationView{&a.valuation}});
    auto y = even_paz(refs, PieceRegion{cake}, Axis::X, res.log);
    res.proportional = y;

    std::map<int, IntervalUnion> taken;
    for (const Agent& owner : inst.agents) {
        if (!owner.old_piece) continue;
        IntervalUnion zi = to_interval_union(*owner.old_piece);
        for (const Agent& taker : inst.agents) {
            auto yit = y.find(taker.id);
            if (yit == y.end()) continue;
            IntervalUnion cell = intersect(zi, to_interval_union(yit->second));
            if (cell.empty()) continue;
            if (owner.id == taker.id) {
                taken[owner.id] = union_of(taken[owner.id], cell);
                continue;
            }
            ValuationView owner_view{&owner.valuation};
            std::vector<IntervalUnion> parts =
                equal_partition(owner_view, cell, static_cast<int>(q), res.log);
            // taker evaluates all q parts and takes the best p
            std::vector<std::pair<Q, size_t>> ranked;
            for (size_t t = 0; t < parts.size(); ++t) {
                ++res.log.evals;
                ranked.push_back({eval_raw(taker.valuation, PieceRegion{parts[t]}), t});
            }
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            for (size_t t = 0; t < parts.size(); ++t) {
                auto& dst = taken[t < static_cast<size_t>(p) ? taker.id : owner.id];
                dst = union_of(dst, parts[ranked[t].second]);
            }
        }
    }
    // pieces of Y that fall outside every old piece stay with their Y owner
    IntervalUnion old_union;
    for (const Agent& a : inst.agents)
        if (a.old_piece) old_union = union_of(old_union, to_interval_union(*a.old_piece));
    for (const auto& [id, piece] : y) {
        IntervalUnion yi = to_interval_union(piece);
        for (const Interval& part : yi.parts) {
            IntervalUnion outside{{part}};
            outside = [&] {
                // part minus old_union
                std::vector<Interval> keep;
                Q pos = part.lo;
                for (const Interval& z : old_union.parts) {
                    if (z.hi <= part.lo || z.lo >= part.hi) continue;
                    if (z.lo > pos) keep.push_back({pos, z.lo});
                    pos = std::max(pos, z.hi);
                }
                if (pos < part.hi) keep.push_back({pos, part.hi});
                return IntervalUnion::of(keep);
            }();
            if (!outside.empty()) taken[id] = union_of(taken[id], outside);
        }
    }

    for (auto& [id, u] : taken) {
        if (u.empty()) continue;
        if (u.parts.size() == 1)
            res.allocation.pieces[id] = u.parts[0];
        else
            res.allocation.pieces[id] = u;
    }
    return res;
}

}  // namespace rediv
