#pragma once

#include "refclass/class_term.hpp"
#include "refclass/interval.hpp"

#include <string>
#include <utility>
#include <vector>

namespace refclass {

enum class Provenance { Asserted, DerivedISX, DerivedISXB, DerivedBounds };

inline const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::Asserted: return "Asserted";
    case Provenance::DerivedISX: return "DerivedISX";
    case Provenance::DerivedISXB: return "DerivedISXB";
    case Provenance::DerivedBounds: return "DerivedBounds";
    }
    return "?";
}

/// ⟨subject, ref_class, target, interval⟩ with provenance. Derived structures
/// carry the (class, interval) factors they were computed from.
struct InferenceStructure {
    std::string subject;
    ClassTerm ref_class;
    ClassTerm target;
    Interval interval;
    Provenance provenance = Provenance::Asserted;
    std::vector<std::pair<ClassTerm, Interval>> factors;
};

/// The pool S for one (subject, target) pair, at most one structure per class.
struct CandidateSet {
    std::string subject;
    ClassTerm target;
    std::vector<InferenceStructure> structures;
};

} // namespace refclass
