#pragma once

#include "refclass/error.hpp"
#include "refclass/knowledge_base.hpp"
#include "refclass/set_reasoner.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace refclass {

/// Asserted statistics keyed by the closure representatives of (Y, Z).
/// Nested statements for one key collapse to the strongest.
class StatIndex {
public:
    struct Entry {
        Interval interval;
        /// Index into KnowledgeBase::statistics of the statement that supplies interval.
        std::size_t statement = 0;
    };

    /// Two statements for the same key whose intervals do not nest.
    struct Conflict {
        std::size_t first = 0;
        std::size_t second = 0;
    };

    std::optional<Entry> find(const ClassTerm& ref, const ClassTerm& target) const {
        auto it = entries_.find({ref, target});
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    const std::map<std::pair<ClassTerm, ClassTerm>, Entry>& entries() const { return entries_; }
    const std::vector<Conflict>& conflicts() const { return conflicts_; }

    static StatIndex build(const KnowledgeBase& kb, const SubsetClosure& closure) {
        StatIndex idx;
        for (std::size_t i = 0; i < kb.statistics.size(); ++i) {
            const auto& s = kb.statistics[i];
            std::pair key{closure.representative(s.ref_class), closure.representative(s.target)};
            auto it = idx.entries_.find(key);
            if (it == idx.entries_.end()) {
                idx.entries_.emplace(std::move(key), Entry{s.interval, i});
                continue;
            }
            if (nests_in(s.interval, it->second.interval)) {
                if (s.interval != it->second.interval) it->second = Entry{s.interval, i};
            } else if (!nests_in(it->second.interval, s.interval)) {
                idx.conflicts_.push_back({it->second.statement, i});
            }
        }
        return idx;
    }

    /// Like build(), but refuses a KB with conflicting statements.
    static StatIndex build_checked(const KnowledgeBase& kb, const SubsetClosure& closure) {
        auto idx = build(kb, closure);
        if (!idx.conflicts_.empty()) {
            const auto& c = idx.conflicts_.front();
            const auto& a = kb.statistics[c.first];
            const auto& b = kb.statistics[c.second];
            throw InconsistentKb("incomparable statistics for %(" + a.ref_class.render() + ", " +
                                 a.target.render() + "): " + to_string(a.interval) + " and " +
                                 to_string(b.interval) + " (line " + std::to_string(b.pos.line) + ")");
        }
        return idx;
    }

private:
    std::map<std::pair<ClassTerm, ClassTerm>, Entry> entries_;
    std::vector<Conflict> conflicts_;
};

} // namespace refclass
