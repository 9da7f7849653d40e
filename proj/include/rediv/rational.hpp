#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace rediv {

// Exact rational coordinate/value type. All geometry and all fairness
// accounting run on these; doubles appear only in reports and in the
// bisection stopping rule for convex cuts.
using Q = mpq_class;

inline Q q(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Q r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p" or "p/q". Used by the instance file reader.
inline Q parse_q(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    for (char c : s) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
            throw std::invalid_argument("bad rational literal: " + s);
    }
    Q r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Q& v) { return v.get_str(); }

inline double to_double(const Q& v) { return v.get_d(); }

inline int sign(const Q& v) { return sgn(v); }

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rediv
