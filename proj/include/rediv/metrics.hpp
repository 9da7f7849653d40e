#pragma once

#include "rediv/protocol.hpp"

namespace rediv {

enum class Welfare { utilitarian, nash };

struct GradualRow {
    int k = 0;
    int required = 0;   // m - k
    int satisfied = 0;  // old agents with V_j(X_j) >= V_j(Z_j)/ceil(n/k)
    bool ok = false;
};

struct FairnessReport {
    std::vector<std::pair<int, Q>> normalized;                 // per agent id
    std::vector<std::pair<int, std::optional<Q>>> retention;   // per old agent id
    std::vector<GradualRow> gradual;
    Q welfare_util = 0;
    double welfare_nash = 0;
    long evals = 0;
    long marks = 0;
    int b = 0;
};

Q utilitarian_welfare(const Instance& inst, const Allocation& alloc);
double nash_welfare(const Instance& inst, const Allocation& alloc);
// exact product of the normalized values (the n-th power of the Nash welfare)
Q nash_product(const Instance& inst, const Allocation& alloc);

// slack is an absolute tolerance on normalized values, used by the convex
// mode where cut positions come from bisection; 0 everywhere else.
FairnessReport fairness_report(const Instance& inst, const Allocation& alloc, int b,
                               const QueryLog& log, const Q& slack = Q(0));

struct OracleResult {
    Allocation alloc;
    Q util = 0;           // utilitarian welfare of the oracle optimum
    Q nash_prod = 0;      // product of normalized values
};

// Brute-force welfare maximization over allocations cut from a uniform grid:
// choose n-1 of the grid-1 interior cut lines (cuts normal to X) and an
// assignment of agents to the slabs. A lower bound on the true optimum.
// Modes: interval, rectangle, and convex (parallel slabs of the cake).
OracleResult optimal_welfare_oracle(const Instance& inst, Welfare kind, int grid);

// Same search restricted to allocations where every normalized value is at
// least min_share; nullopt when the grid admits none.
std::optional<OracleResult> optimal_fair_welfare_oracle(const Instance& inst, Welfare kind,
                                                        int grid, const Q& min_share);

// Exact utilitarian optimum with unrestricted pieces: every density segment
// goes to the agent with the highest normalized density on it.
OracleResult optimal_unrestricted_utilitarian(const Instance& inst);

struct PofResult {
    int n = 0;
    Mode mode = Mode::interval;
    Welfare kind = Welfare::utilitarian;
    Q optimal;   // U
    Q fair;      // W (for Nash: the exact product; the ratio field is the real ratio)
    double ratio = 0;
    double bound = 0;
    bool within_bound = false;
};

// One price-of-fairness measurement: welfare-optimal division as the initial
// allocation of a redivision with m = n, welfare of the redivision output
// against the per-mode bound. `base` supplies cake/valuations; roles ignored.
PofResult pof_geometric(const Instance& base, Welfare kind, int grid);

// Exchange-based bound for unrestricted pieces: exchange with r = p/q over a
// utilitarian-optimal initial division; ratio <= 1/(1-r) is checked exactly.
PofResult pof_unrestricted(const Instance& base, long p, long q);

struct NumDenResult {
    long n = 0;
    long argmax_l = 0;          // integer maximizer of the relaxed ratio bound
    double l_star = 0;          // closed-form real maximizer
    double max_bound_expr = 0;  // max over integer l of 2(l+H_n+1)/(l^2-l+2(n-1))
    double max_true_ratio = 0;  // max over integer l of NUM/DEN
};

// The two-regime sequence analysis behind the utilitarian price bound:
// a_k = 1 for k <= l and 1/k afterwards, NUM = sum a_k,
// DEN = sum max(k a_k, 1), maximized over l by brute force.
NumDenResult numden_maximize(long n);

struct StirlingResult {
    long argmax_n = 0;
    double max_value = 0;
};

// max over n in 1..n_max of (n/2pi)^(1/(2n)); globally below 1.03.
StirlingResult stirling_term_check(long n_max);

}  // namespace rediv
