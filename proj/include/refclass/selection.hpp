#pragma once

#include "refclass/bounds.hpp"
#include "refclass/constructions.hpp"
#include "refclass/error.hpp"
#include "refclass/inference_structure.hpp"
#include "refclass/knowledge_base.hpp"
#include "refclass/set_reasoner.hpp"
#include "refclass/stat_index.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace refclass {

struct QueryConfig {
    /// Bracket (agreement-combination) and product candidates.
    bool constructions = true;
    /// Product candidates; only consulted when constructions is set.
    bool isx = true;
    /// Linear-fractional bounds for intersection classes lacking a statistic.
    bool bounds = false;
    std::size_t max_bracket_blocks = 2;
};

/// Brackets with more than two blocks are only enumerated up to this many names.
inline constexpr std::size_t kMaxFullPartitionNames = 8;

// ---------------------------------------------------------------------------
// Reflection and domination

enum class ReflectionRule { SubsetRule, BracketRule, ConstructionRule };

inline const char* to_string(ReflectionRule r) {
    switch (r) {
    case ReflectionRule::SubsetRule: return "SubsetRule";
    case ReflectionRule::BracketRule: return "BracketRule";
    case ReflectionRule::ConstructionRule: return "ConstructionRule";
    }
    return "?";
}

/// The rule by which a reflects b, if any. Structures about different
/// subjects or targets never reflect each other.
///
///  - ordinary/ordinary: subset in the closure.
///  - bracket or product on either side: the constituent rule, except that a
///    product never reflects a bracket (the agreement class dominates the
///    product built from the same factors; that direction is ConstructionRule).
inline std::optional<ReflectionRule> reflection(const InferenceStructure& a, const InferenceStructure& b,
                                                const SubsetClosure& closure) {
    if (a.subject != b.subject || a.target != b.target) return std::nullopt;
    const auto& ya = a.ref_class;
    const auto& yb = b.ref_class;
    if (ya == yb) return ReflectionRule::SubsetRule;
    if (ya.is_ordinary() && yb.is_ordinary()) {
        if (is_subset(ya, yb, closure)) return ReflectionRule::SubsetRule;
        return std::nullopt;
    }
    if (ya.kind() == TermKind::Product && yb.kind() == TermKind::Bracket) return std::nullopt;
    if (!bracket_reflects(ya, yb)) return std::nullopt;
    if (ya.kind() == TermKind::Bracket && yb.kind() == TermKind::Product) return ReflectionRule::ConstructionRule;
    return ReflectionRule::BracketRule;
}

inline bool reflects(const InferenceStructure& a, const InferenceStructure& b, const SubsetClosure& closure) {
    return reflection(a, b, closure).has_value();
}

inline bool dominates(const InferenceStructure& a, const InferenceStructure& b, const SubsetClosure& closure) {
    return reflects(a, b, closure) && !reflects(b, a, closure);
}

// ---------------------------------------------------------------------------
// Strength order

/// Linearizes strength into a deterministic priority: width ascending, lower
/// endpoint descending, then class/target/subject text. Runs of equal
/// intervals are reordered so that a structure dominating another in the run
/// comes first. Returns indices into s.
inline std::vector<std::size_t> priority_order(const std::vector<InferenceStructure>& s,
                                               const SubsetClosure& closure) {
    std::vector<std::size_t> idx(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) idx[i] = i;
    auto key = [&](std::size_t i) {
        return std::tuple(s[i].interval.width(), -s[i].interval.lo(), s[i].ref_class.render(), s[i].target.render(),
                          s[i].subject);
    };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    std::vector<std::size_t> out;
    for (std::size_t begin = 0; begin < idx.size();) {
        std::size_t end = begin + 1;
        while (end < idx.size() && s[idx[end]].interval == s[idx[begin]].interval) ++end;
        std::vector<std::size_t> run(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                     idx.begin() + static_cast<std::ptrdiff_t>(end));
        while (!run.empty()) {
            // First (text-least) member not dominated by another remaining member.
            std::size_t pick = 0;
            for (std::size_t i = 0; i < run.size(); ++i) {
                bool dominated = false;
                for (std::size_t j = 0; j < run.size() && !dominated; ++j)
                    dominated = j != i && dominates(s[run[j]], s[run[i]], closure);
                if (!dominated) {
                    pick = i;
                    break;
                }
            }
            out.push_back(run[pick]);
            run.erase(run.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        begin = end;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Selection

struct SelectionStep {
    std::size_t selected = 0;
    std::vector<std::size_t> deleted;
    bool failed = false;
    /// The disagreeing structure that made this step fail.
    std::optional<std::size_t> blocked_by;
    /// Failure because reflection ran both ways with a disagreeing structure.
    bool mutual_reflection = false;
};

struct SelectionResult {
    std::optional<std::size_t> selected;
    std::vector<std::size_t> order;
    std::vector<SelectionStep> steps;
};

struct SelectOptions {
    /// Drop structures that the current pick disagrees with and reflects.
    bool deletions = true;
};

/// Priority-queue selection: take the strongest remaining structure s*; scan
/// every structure that disagrees with it. If s* reflects s, s is removed from
/// the queue; if s also reflects s*, or s* does not reflect s, s* fails and
/// the next strongest is tried. The first s* that survives its scan is IS*.
inline SelectionResult select(const std::vector<InferenceStructure>& s, const SubsetClosure& closure,
                              SelectOptions options = {}) {
    SelectionResult result;
    result.order = priority_order(s, closure);
    std::vector<bool> removed(s.size(), false);

    for (std::size_t pos = 0; pos < result.order.size(); ++pos) {
        const std::size_t star = result.order[pos];
        if (removed[star]) continue;
        removed[star] = true;
        SelectionStep step;
        step.selected = star;
        for (std::size_t other : result.order) {
            if (other == star || !disagrees(s[star].interval, s[other].interval)) continue;
            if (reflects(s[star], s[other], closure)) {
                if (options.deletions && !removed[other]) {
                    removed[other] = true;
                    step.deleted.push_back(other);
                }
                if (reflects(s[other], s[star], closure)) {
                    step.failed = true;
                    step.mutual_reflection = true;
                    step.blocked_by = other;
                    break;
                }
            } else {
                step.failed = true;
                step.blocked_by = other;
                break;
            }
        }
        result.steps.push_back(std::move(step));
        if (!result.steps.back().failed) {
            result.selected = star;
            return result;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// The query procedure

enum class Outcome { Selected, Fallback };

struct ReflectionVerdict {
    std::size_t from = 0;
    std::size_t to = 0;
    ReflectionRule rule = ReflectionRule::SubsetRule;
};

/// Everything prob() did, with candidate indices referring to `candidates`,
/// which is listed in priority order.
struct Trace {
    std::string query;
    /// (sentence, membership sentence it resolves to)
    std::vector<std::pair<std::string, std::string>> equivalences;
    std::vector<InferenceStructure> candidates;
    std::vector<std::pair<std::size_t, std::size_t>> disagreements;
    std::vector<ReflectionVerdict> reflections;
    std::vector<SelectionStep> iterations;
    std::vector<std::string> notes;
    Outcome outcome = Outcome::Fallback;
    std::optional<std::size_t> selected;
    Interval prob;
};

/// A validated knowledge base with its closure and statistic index; queries
/// are const and may run concurrently.
class Reasoner {
public:
    explicit Reasoner(KnowledgeBase kb, ClosureOptions options = {})
        : kb_(std::move(kb)), closure_(build_closure(kb_, options)), stats_(StatIndex::build_checked(kb_, closure_)) {}

    const KnowledgeBase& kb() const { return kb_; }
    const SubsetClosure& closure() const { return closure_; }
    const StatIndex& stats() const { return stats_; }

    /// Chains sentence equivalences (in either direction) to a fixpoint and
    /// returns every membership sentence reached, sorted.
    std::vector<MemberSentence> target_memberships(const Sentence& t) const {
        const std::string start = to_string(t);
        std::map<std::string, std::vector<std::string>> graph;
        std::map<std::string, MemberSentence> literal;
        for (const auto& e : kb_.equivalences) {
            const std::string rhs = to_string(e.sentence);
            graph[e.name].push_back(rhs);
            graph[rhs].push_back(e.name);
            if (const auto* ms = std::get_if<MemberSentence>(&e.sentence)) literal.emplace(rhs, *ms);
        }
        if (const auto* ms = std::get_if<MemberSentence>(&t)) literal.emplace(start, *ms);

        std::set<std::string> seen{start};
        std::deque<std::string> queue{start};
        while (!queue.empty()) {
            auto cur = queue.front();
            queue.pop_front();
            for (const auto& nxt : graph[cur])
                if (seen.insert(nxt).second) queue.push_back(nxt);
        }
        std::vector<MemberSentence> out;
        for (const auto& s : seen)
            if (auto it = literal.find(s); it != literal.end()) out.push_back(it->second);
        if (out.empty()) throw UnresolvableQuery("sentence " + start + " resolves to no membership sentence");
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return std::tie(a.individual, a.cls) < std::tie(b.individual, b.cls);
        });
        for (const auto& m : out)
            if (!kb_.declares_individual(m.individual))
                throw UnknownIndividual("query about undeclared individual " + m.individual);
        return out;
    }

    /// Inference structures for "x ∈ target": one per known class of x with a
    /// statistic toward the target, plus bracket/product/bound-derived ones as
    /// configured. Problems with individual derived structures go to notes.
    CandidateSet collect_structures(const std::string& x, const ClassTerm& target, const QueryConfig& config,
                                    std::vector<std::string>* notes = nullptr) const {
        auto note = [&](std::string msg) {
            if (notes) notes->push_back(std::move(msg));
        };
        CandidateSet set{x, target, {}};
        const ClassTerm z = closure_.representative(target);

        std::set<ClassTerm> reps;
        for (const auto& m : classes_of(x, kb_, closure_)) reps.insert(m.representative);

        std::map<ClassTerm, Interval> known;
        for (const auto& y : reps) {
            auto e = stats_.find(y, z);
            if (!e) continue;
            known.emplace(y, e->interval);
            set.structures.push_back({x, y, z, e->interval, Provenance::Asserted, {}});
        }

        if (config.bounds) {
            for (const auto& y : reps) {
                if (y.kind() != TermKind::Intersect || known.count(y)) continue;
                NameSet names = y.names();
                for (const auto& n : z.names()) names.push_back(n);
                std::sort(names.begin(), names.end());
                names.erase(std::unique(names.begin(), names.end()), names.end());
                if (names.size() > kMaxBoundNames) {
                    note("bounds skipped for " + y.render() + ": more than " + std::to_string(kMaxBoundNames) +
                         " names");
                    continue;
                }
                try {
                    AtomSystem sys = encode(kb_, names);
                    Interval iv = bound_conditional(sys, y, z);
                    std::vector<std::pair<ClassTerm, Interval>> factors;
                    for (const auto& s : kb_.statistics)
                        if (sys.expressible(s.ref_class) && sys.expressible(s.target))
                            factors.emplace_back(s.ref_class, s.interval);
                    known.emplace(y, iv);
                    set.structures.push_back({x, y, z, iv, Provenance::DerivedBounds, std::move(factors)});
                } catch (const InconsistentKb& e) {
                    note("bounds for " + y.render() + ": " + e.what());
                }
            }
        }

        if (config.constructions) {
            const NameSet names = kb_.membership_names(x);
            std::size_t blocks = config.max_bracket_blocks;
            if (blocks > 2 && names.size() > kMaxFullPartitionNames) {
                note("bracket enumeration limited to 2 blocks: " + std::to_string(names.size()) + " names");
                blocks = 2;
            }
            const ConstituentLookup lookup = [&](const ClassTerm& c) -> std::optional<Interval> {
                auto it = known.find(closure_.representative(c));
                if (it == known.end()) return std::nullopt;
                return it->second;
            };
            for (const auto& b : enumerate_brackets(names, blocks)) {
                if (b.kind() != TermKind::Bracket) continue;
                std::optional<DerivedStat> stat;
                try {
                    stat = bracket_stat(b, lookup);
                } catch (const UndefinedCombination& e) {
                    note("bracket " + b.render() + " dropped: " + e.what());
                    continue;
                }
                if (!stat) continue;
                set.structures.push_back({x, b, z, stat->interval, Provenance::DerivedISXB, stat->factors});
                if (config.isx) {
                    std::vector<Interval> ivs;
                    for (const auto& f : stat->factors) ivs.push_back(f.second);
                    set.structures.push_back({x, ClassTerm::product(b.blocks()), z, isx_stat(ivs),
                                              Provenance::DerivedISX, stat->factors});
                }
            }
        }
        return set;
    }

    /// Prob(t): pools the structures of every (x, Z) that t resolves to,
    /// selects IS*, and returns its interval, or [0,1] when nothing survives.
    std::pair<Interval, Trace> prob(const Sentence& t, const QueryConfig& config = {}) const {
        Trace trace;
        trace.query = to_string(t);
        std::vector<InferenceStructure> pool;
        for (const auto& m : target_memberships(t)) {
            const std::string resolved = to_string(Sentence{m});
            if (resolved != trace.query) trace.equivalences.emplace_back(trace.query, resolved);
            auto set = collect_structures(m.individual, m.cls, config, &trace.notes);
            for (auto& s : set.structures) pool.push_back(std::move(s));
        }

        auto result = select(pool, closure_);
        std::vector<std::size_t> position(pool.size());
        for (std::size_t i = 0; i < result.order.size(); ++i) position[result.order[i]] = i;
        for (auto i : result.order) trace.candidates.push_back(pool[i]);

        const auto& c = trace.candidates;
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) {
                if (!disagrees(c[i].interval, c[j].interval)) continue;
                trace.disagreements.emplace_back(i, j);
                auto ij = reflection(c[i], c[j], closure_);
                auto ji = reflection(c[j], c[i], closure_);
                if (ij) trace.reflections.push_back({i, j, *ij});
                if (ji) trace.reflections.push_back({j, i, *ji});
                if (ij && ji)
                    trace.notes.push_back("anti-symmetry violation: " + c[i].ref_class.render() + " and " +
                                          c[j].ref_class.render() + " reflect each other");
            }

        for (auto step : result.steps) {
            step.selected = position[step.selected];
            for (auto& d : step.deleted) d = position[d];
            if (step.blocked_by) step.blocked_by = position[*step.blocked_by];
            trace.iterations.push_back(std::move(step));
        }
        if (result.selected) {
            trace.outcome = Outcome::Selected;
            trace.selected = position[*result.selected];
            trace.prob = c[*trace.selected].interval;
        } else {
            trace.outcome = Outcome::Fallback;
            trace.prob = Interval::vacuous();
        }
        return {trace.prob, std::move(trace)};
    }

private:
    KnowledgeBase kb_;
    SubsetClosure closure_;
    StatIndex stats_;
};

/// One-shot convenience over a fresh Reasoner.
inline std::pair<Interval, Trace> prob(const Sentence& t, const KnowledgeBase& kb, const QueryConfig& config = {}) {
    return Reasoner(kb).prob(t, config);
}

} // namespace refclass
