#pragma once

#include "refclass/refclass.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace refclass::test {

inline Rational q(long long n, long long d = 1) { return Rational(n, d); }
inline Interval iv(long long pn, long long pd, long long qn, long long qd) { return {q(pn, pd), q(qn, qd)}; }

/// Parses a KB that the test expects to be valid.
inline KnowledgeBase kb_from(std::string_view text, bool minimal = false) {
    auto r = dsl::parse_kb(text, {minimal});
    if (!r.ok()) throw std::runtime_error("fixture KB invalid: " + dsl::format(r.diagnostics.front()));
    return r.kb;
}

// Home games (H), Gooden pitching (D), Hernandez batting (K), victories (V).
inline constexpr std::string_view kMets1 = R"(class H
class D
class K
class V
member m H
member m D
member m K
stat (and H D K) V [0, 1]
stat H V [0.3, 0.5]
equiv t (member m V)
)";

inline constexpr std::string_view kMets2 = R"(class H
class D
class K
class V
member m H
member m D
member m K
stat (and H D K) V [0.1, 0.6]
stat H V [0.4, 0.8]
equiv t (member m V)
)";

inline constexpr std::string_view kConflict = R"(class H
class K
class V
member m H
member m K
stat H V [2/5, 4/5]
stat K V [3/10, 7/10]
equiv t (member m V)
)";

} // namespace refclass::test
