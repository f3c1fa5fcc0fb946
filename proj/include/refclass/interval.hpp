#pragma once

#include "refclass/error.hpp"
#include "refclass/rational.hpp"

#include <ostream>
#include <string>

namespace refclass {

/// Closed subinterval [lo, hi] of [0,1] with exact rational endpoints.
class Interval {
public:
    Interval() : lo_(0), hi_(1) {}

    Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_ < 0 || hi_ > 1 || lo_ > hi_)
            throw InvalidInterval("invalid interval [" + to_string(lo_) + ", " + to_string(hi_) + "]");
    }

    static Interval vacuous() { return {}; }
    static Interval point(const Rational& p) { return {p, p}; }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }

    bool is_vacuous() const { return lo_ == 0 && hi_ == 1; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Rational lo_;
    Rational hi_;
};

inline std::string to_string(const Interval& i) {
    return "[" + to_string(i.lo()) + ", " + to_string(i.hi()) + "]";
}

inline std::ostream& operator<<(std::ostream& os, const Interval& i) { return os << to_string(i); }

/// True iff a lies inside b, i.e. a is at least as strong as b.
inline bool nests_in(const Interval& a, const Interval& b) {
    return b.lo() <= a.lo() && a.hi() <= b.hi();
}

/// Neither interval nests in the other.
inline bool disagrees(const Interval& a, const Interval& b) {
    return !nests_in(a, b) && !nests_in(b, a);
}

enum class Strength { A, B, Equal, Incomparable };

inline Strength stronger(const Interval& a, const Interval& b) {
    if (a == b) return Strength::Equal;
    if (nests_in(a, b)) return Strength::A;
    if (nests_in(b, a)) return Strength::B;
    return Strength::Incomparable;
}

} // namespace refclass
