#include "rediv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rediv {

// log of a positive rational, safe for huge numerators/denominators
static double mpq_get_d_log(const Q& v) {
    signed long exp_num, exp_den;
    double dn = mpz_get_d_2exp(&exp_num, v.get_num().get_mpz_t());
    double dd = mpz_get_d_2exp(&exp_den, v.get_den().get_mpz_t());
    return std::log(dn) - std::log(dd) + (exp_num - exp_den) * std::log(2.0);
}

Q utilitarian_welfare(const Instance& inst, const Allocation& alloc) {
    Q s = 0;
    for (const Agent& a : inst.agents) {
        const PieceRegion* p = alloc.piece_of(a.id);
        if (p) s += eval_raw(a.valuation, *p) / a.valuation.total;
    }
    return s / inst.n();
}

Q nash_product(const Instance& inst, const Allocation& alloc) {
    Q prod = 1;
    for (const Agent& a : inst.agents) {
        const PieceRegion* p = alloc.piece_of(a.id);
        Q v = p ? eval_raw(a.valuation, *p) : Q(0);
        if (sign(v) == 0) return 0;
        prod *= v / a.valuation.total;
    }
    return prod;
}

double nash_welfare(const Instance& inst, const Allocation& alloc) {
    Q prod = nash_product(inst, alloc);
    if (sign(prod) == 0) return 0.0;
    // geometric mean via logs to avoid underflow on the way to the root
    double lg = mpq_get_d_log(prod);
    return std::exp(lg / inst.n());
}

FairnessReport fairness_report(const Instance& inst, const Allocation& alloc, int b,
                               const QueryLog& log, const Q& slack) {
    FairnessReport rep;
    rep.b = b;
    rep.evals = log.evals;
    rep.marks = log.marks;
    int n = inst.n(), m = inst.m();
    std::vector<std::pair<const Agent*, Q>> old_ratios;  // X value vs old-piece value
    for (const Agent& a : inst.agents) {
        const PieceRegion* p = alloc.piece_of(a.id);
        Q v = p ? eval_raw(a.valuation, *p) : Q(0);
        rep.normalized.push_back({a.id, v / a.valuation.total});
        if (a.is_old) {
            Q zv = eval_raw(a.valuation, *a.old_piece);
            if (sign(zv) > 0)
                rep.retention.push_back({a.id, v / zv});
            else
                rep.retention.push_back({a.id, std::nullopt});
            old_ratios.push_back({&a, v});
        }
    }
    rep.welfare_util = utilitarian_welfare(inst, alloc);
    rep.welfare_nash = nash_welfare(inst, alloc);
    for (int k = 1; k <= m; ++k) {
        GradualRow row;
        row.k = k;
        row.required = m - k;
        long ceil_nk = (n + k - 1) / k;
        for (auto& [agent, v] : old_ratios) {
            Q zv = eval_raw(agent->valuation, *agent->old_piece);
            // V_j(X_j) >= V_j(Z_j) / ceil(n/k), with optional absolute slack
            if (v * ceil_nk + slack * agent->valuation.total * ceil_nk >= zv) ++row.satisfied;
        }
        row.ok = row.satisfied >= row.required;
        rep.gradual.push_back(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// welfare oracles

static std::optional<OracleResult> oracle_search(const Instance& inst, Welfare kind, int grid,
                                                 const std::optional<Q>& min_share) {
    if (grid < 2 || grid > 24) throw Error("oracle grid out of range");
    int n = inst.n();
    if (n < 1 || n > 6) throw Error("oracle is exhaustive; n must be <= 6");
    if (n - 1 > grid - 1) throw Error("grid too coarse for n-1 cuts");

    Q lo, hi;
    if (inst.mode == Mode::interval || inst.mode == Mode::unrestricted) {
        const Interval& c = std::get<Interval>(inst.cake);
        lo = c.lo;
        hi = c.hi;
    } else {
        Rect bb = piece_bbox(inst.cake);
        lo = bb.xlo;
        hi = bb.xhi;
    }
    std::vector<Q> coords;  // grid+1 cut coordinates including both ends
    for (int t = 0; t <= grid; ++t) coords.push_back(lo + (hi - lo) * t / grid);

    // slab piece between consecutive cut coordinates
    auto slab = [&](int a, int bidx) -> std::optional<PieceRegion> {
        if (a >= bidx) return std::nullopt;
        switch (inst.mode) {
            case Mode::unrestricted:
            case Mode::interval:
                return PieceRegion{Interval{coords[a], coords[bidx]}};
            case Mode::rectangle: {
                Rect r = std::get<Rect>(inst.cake);
                r.xlo = coords[a];
                r.xhi = coords[bidx];
                return PieceRegion{r};
            }
            case Mode::convex: {
                const ConvexPolygon& c = std::get<ConvexPolygon>(inst.cake);
                auto left = clip_convex(c, {{1, 0}, coords[bidx]});
                if (!left) return std::nullopt;
                auto both = clip_convex(*left, {{-1, 0}, -coords[a]});
                if (!both) return std::nullopt;
                return PieceRegion{*both};
            }
            default:
                throw Error("oracle supports interval/rectangle/convex modes");
        }
    };

    // prefix values per agent at every cut coordinate
    std::vector<std::vector<Q>> prefix(n, std::vector<Q>(grid + 1, Q(0)));
    for (int i = 0; i < n; ++i)
        for (int t = 1; t <= grid; ++t) {
            auto s = slab(0, t);
            prefix[i][t] = s ? eval_raw(inst.agents[i].valuation, *s) : Q(0);
        }

    std::vector<int> cuts(n - 1);  // interior cut indices, strictly increasing
    std::vector<int> perm(n);
    OracleResult best;
    bool have_best = false;

    auto consider = [&](const std::vector<int>& borders, const std::vector<int>& assignment) {
        Q util = 0;
        Q prod = 1;
        for (int s = 0; s < n; ++s) {
            const Agent& a = inst.agents[assignment[s]];
            Q v = prefix[assignment[s]][borders[s + 1]] - prefix[assignment[s]][borders[s]];
            Q norm = v / a.valuation.total;
            if (min_share && norm < *min_share) return;
            util += norm;
            prod *= norm;
        }
        util /= n;
        bool better = !have_best ||
                      (kind == Welfare::utilitarian ? util > best.util : prod > best.nash_prod);
        if (!better) return;
        have_best = true;
        best.util = util;
        best.nash_prod = prod;
        best.alloc.pieces.clear();
        for (int s = 0; s < n; ++s) {
            auto piece = slab(borders[s], borders[s + 1]);
            if (piece) best.alloc.pieces[inst.agents[assignment[s]].id] = *piece;
        }
    };

    // choose n-1 strictly increasing interior cuts, then every assignment
    std::vector<int> borders(n + 1);
    borders[0] = 0;
    borders[n] = grid;
    auto rec_cuts = [&](auto&& self, int idx, int from) -> void {
        if (idx == n - 1) {
            std::vector<int> assignment(n);
            std::iota(assignment.begin(), assignment.end(), 0);
            do {
                consider(borders, assignment);
            } while (std::next_permutation(assignment.begin(), assignment.end()));
            return;
        }
        for (int c = from; c <= grid - (n - 1 - idx); ++c) {
            borders[idx + 1] = c;
            self(self, idx + 1, c + 1);
        }
    };
    rec_cuts(rec_cuts, 0, 1);
    if (!have_best) return std::nullopt;
    return best;
}

OracleResult optimal_welfare_oracle(const Instance& inst, Welfare kind, int grid) {
    auto res = oracle_search(inst, kind, grid, std::nullopt);
    if (!res) throw Error("oracle found no allocation");
    return *res;
}

std::optional<OracleResult> optimal_fair_welfare_oracle(const Instance& inst, Welfare kind,
                                                        int grid, const Q& min_share) {
    return oracle_search(inst, kind, grid, min_share);
}

OracleResult optimal_unrestricted_utilitarian(const Instance& inst) {
    const Interval cake = std::get<Interval>(inst.cake);
    std::vector<Q> cuts{cake.lo, cake.hi};
    for (const Agent& a : inst.agents) {
        const Density1D& d = std::get<Density1D>(a.valuation.density);
        for (const Q& b : d.breaks)
            if (cake.lo < b && b < cake.hi) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::map<int, std::vector<Interval>> won;
    Q util = 0;
    for (size_t t = 0; t + 1 < cuts.size(); ++t) {
        Interval seg{cuts[t], cuts[t + 1]};
        int best_id = -1;
        Q best_rate = 0;  // normalized density
        for (const Agent& a : inst.agents) {
            Q v = eval_raw(a.valuation, PieceRegion{seg}) / a.valuation.total;
            if (best_id == -1 || v > best_rate) {
                best_id = a.id;
                best_rate = v;
            }
        }
        won[best_id].push_back(seg);
        util += best_rate;
    }
    OracleResult res;
    res.util = util / inst.n();
    res.nash_prod = 0;
    for (auto& [id, parts] : won) {
        IntervalUnion u = IntervalUnion::of(parts);
        if (u.parts.size() == 1)
            res.alloc.pieces[id] = u.parts[0];
        else
            res.alloc.pieces[id] = u;
    }
    return res;
}

// ---------------------------------------------------------------------------
// price of fairness

static Instance all_old_instance(const Instance& base, const Allocation& initial) {
    Instance inst;
    inst.mode = base.mode;
    inst.cake = base.cake;
    for (const Agent& a : base.agents) {
        const PieceRegion* p = initial.piece_of(a.id);
        Agent old{a.id, true, a.valuation, std::nullopt};
        if (p) {
            old.old_piece = *p;
        } else if (is_1d(base.cake)) {
            // the unrestricted optimum may leave an agent empty
            Q lo = std::get<Interval>(base.cake).lo;
            old.old_piece = Interval{lo, lo};
        } else {
            throw Error("welfare-optimal division left an agent empty");
        }
        inst.agents.push_back(std::move(old));
    }
    return inst;
}

PofResult pof_geometric(const Instance& base, Welfare kind, int grid) {
    OracleResult opt = optimal_welfare_oracle(base, kind, grid);
    Instance inst = all_old_instance(base, opt.alloc);
    RedivideResult rr = redivide(inst);

    PofResult res;
    res.n = base.n();
    res.mode = base.mode;
    res.kind = kind;
    int n = base.n();
    int mode_const = base.mode == Mode::interval ? 3 : base.mode == Mode::rectangle ? 4 : 5;
    // the PoF denominator is the best fair welfare; the redivision output and
    // the 1/(Bn)-proportional grid optimum are both witnesses for it
    auto fair_opt = optimal_fair_welfare_oracle(base, kind, grid, q(1, mode_const * n));
    if (kind == Welfare::utilitarian) {
        Q w = utilitarian_welfare(inst, rr.allocation);
        if (fair_opt && fair_opt->util > w) w = fair_opt->util;
        Q u = opt.util > w ? opt.util : w;
        res.optimal = u;
        res.fair = w;
        res.ratio = to_double(u) / to_double(w);
        NumDenResult nd = numden_maximize(n);
        double expr = n == 1 ? nd.max_true_ratio : nd.max_bound_expr;
        res.bound = mode_const * n * expr;
    } else {
        Q prod_fair = nash_product(inst, rr.allocation);
        if (sign(prod_fair) <= 0) throw Error("redivision produced zero Nash welfare");
        if (fair_opt && fair_opt->nash_prod > prod_fair) prod_fair = fair_opt->nash_prod;
        Q prod_opt = opt.nash_prod > prod_fair ? opt.nash_prod : prod_fair;
        res.optimal = prod_opt;
        res.fair = prod_fair;
        res.ratio = std::exp((mpq_get_d_log(prod_opt) - mpq_get_d_log(prod_fair)) / n);
        res.bound = base.mode == Mode::interval ? 8.4 : base.mode == Mode::rectangle ? 11.2 : 14.0;
    }
    res.within_bound = res.ratio <= res.bound * (1 + 1e-12);
    return res;
}

PofResult pof_unrestricted(const Instance& base, long p, long q) {
    OracleResult opt = optimal_unrestricted_utilitarian(base);
    Instance inst = all_old_instance(base, opt.alloc);
    inst.mode = Mode::unrestricted;
    ExchangeResult ex = exchange_redivide(inst, p, q);

    PofResult res;
    res.n = base.n();
    res.mode = Mode::unrestricted;
    res.kind = Welfare::utilitarian;
    Q w = utilitarian_welfare(inst, ex.allocation);
    // the fully proportional Even-Paz division is r-proportional too
    Allocation y;
    for (const auto& [id, piece] : ex.proportional) y.pieces[id] = piece;
    Q wy = utilitarian_welfare(inst, y);
    if (wy > w) w = wy;
    Q u = opt.util > w ? opt.util : w;
    res.optimal = u;
    res.fair = w;
    res.ratio = to_double(u) / to_double(w);
    Q r = rediv::q(p, q);
    res.bound = 1.0 / (1.0 - to_double(r));
    // exact check of U/W <= 1/(1-r):  U (1-r) <= W
    res.within_bound = u * (1 - r) <= w;
    return res;
}

// ---------------------------------------------------------------------------
// analytic oracles for the utilitarian bound

NumDenResult numden_maximize(long n) {
    if (n < 1) throw Error("numden_maximize needs n >= 1");
    NumDenResult res;
    res.n = n;
    long double Hn = 0;
    for (long k = 1; k <= n; ++k) Hn += 1.0L / k;
    long double Hn1 = n >= 2 ? Hn - 1.0L / n : 0.0L;  // H_{n-1}

    long double best_true = -1, best_expr = -1;
    long argmax_true = 0, argmax_expr = 0;
    long double Hl = 0;  // H_l, updated incrementally
    for (long l = 0; l <= n - 1; ++l) {
        if (l >= 1) Hl += 1.0L / l;
        long double num = (l + 1) + (Hn1 - Hl);
        long double den_true = 1.0L + 0.5L * l * (l + 1) + (n - 1 - l);
        long double t = num / den_true;
        if (t > best_true) {
            best_true = t;
            argmax_true = l;
        }
        if (n >= 2) {
            long double expr =
                2.0L * (l + Hn + 1) / ((long double)l * l - l + 2.0L * (n - 1));
            if (expr > best_expr) {
                best_expr = expr;
                argmax_expr = l;
            }
        }
    }
    res.max_true_ratio = static_cast<double>(best_true);
    if (n == 1) {
        res.argmax_l = argmax_true;
        res.max_bound_expr = static_cast<double>(best_true);
        res.l_star = 0;
        return res;
    }
    res.argmax_l = argmax_expr;
    res.max_bound_expr = static_cast<double>(best_expr);
    long double A = Hn + 1;
    res.l_star = static_cast<double>(std::sqrt(2.0L * (n - 1) + A * (A + 1)) - A);
    return res;
}

StirlingResult stirling_term_check(long n_max) {
    StirlingResult res;
    for (long n = 1; n <= n_max; ++n) {
        double v = std::exp(std::log(n / (2.0 * M_PI)) / (2.0 * n));
        if (v > res.max_value) {
            res.max_value = v;
            res.argmax_n = n;
        }
    }
    return res;
}

}  // namespace rediv
