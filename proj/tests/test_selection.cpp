#include "refclass/selection.hpp"
#include "refclass/trace_io.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace refclass;
using refclass::test::iv;
using refclass::test::kb_from;
using refclass::test::q;

namespace {

const ClassTerm V = ClassTerm::prim("V");

InferenceStructure is(ClassTerm cls, Interval i, Provenance p = Provenance::Asserted) {
    return {"m", std::move(cls), V, std::move(i), p, {}};
}

std::optional<std::string> selected_class(const std::vector<InferenceStructure>& s, const SubsetClosure& c) {
    auto r = select(s, c);
    if (!r.selected) return std::nullopt;
    return s[*r.selected].ref_class.render();
}

} // namespace

TEST(TargetMemberships, ResolvesEquivalences) {
    Reasoner r(kb_from(test::kMets1));
    auto direct = r.target_memberships(Sentence{std::string("t")});
    ASSERT_EQ(direct.size(), 1u);
    EXPECT_EQ(direct[0].individual, "m");
    EXPECT_EQ(direct[0].cls, V);

    auto literal = r.target_memberships(Sentence{MemberSentence{"m", V}});
    ASSERT_EQ(literal.size(), 1u);
    EXPECT_EQ(literal[0], (MemberSentence{"m", V}));

    Reasoner chain(kb_from("class V\nclass H\nmember m H\nequiv t s\nequiv s (member m V)\n"));
    auto two = chain.target_memberships(Sentence{std::string("t")});
    ASSERT_EQ(two.size(), 1u);
    EXPECT_EQ(two[0].individual, "m");

    EXPECT_THROW(r.target_memberships(Sentence{std::string("nope")}), UnresolvableQuery);
}

TEST(CollectStructures, MetsPool) {
    Reasoner r(kb_from(test::kMets1));
    auto set = r.collect_structures("m", V, {});
    std::map<std::string, Interval> by_class;
    for (const auto& s : set.structures) by_class.emplace(s.ref_class.render(), s.interval);
    EXPECT_EQ(by_class.at("D&H&K"), Interval::vacuous());
    EXPECT_EQ(by_class.at("H"), iv(3, 10, 1, 2));
}

TEST(CollectStructures, ConflictPoolHasBracketAndProduct) {
    Reasoner r(kb_from(test::kConflict));
    auto set = r.collect_structures("m", V, {});
    std::map<std::string, InferenceStructure> by_class;
    for (const auto& s : set.structures) by_class.emplace(s.ref_class.render(), s);
    ASSERT_EQ(by_class.size(), 4u);
    EXPECT_EQ(by_class.at("H").interval, iv(2, 5, 4, 5));
    EXPECT_EQ(by_class.at("K").interval, iv(3, 10, 7, 10));
    EXPECT_EQ(by_class.at("[H,K]").interval, iv(2, 9, 28, 31));
    EXPECT_EQ(by_class.at("[H,K]").provenance, Provenance::DerivedISXB);
    EXPECT_EQ(by_class.at("H*K").interval, iv(3, 25, 14, 25));
    EXPECT_EQ(by_class.at("H*K").provenance, Provenance::DerivedISX);
    EXPECT_EQ(by_class.at("H*K").factors.size(), 2u);

    QueryConfig no_isx;
    no_isx.isx = false;
    EXPECT_EQ(r.collect_structures("m", V, no_isx).structures.size(), 3u);
    QueryConfig none;
    none.constructions = false;
    EXPECT_EQ(r.collect_structures("m", V, none).structures.size(), 2u);
}

TEST(CollectStructures, NoStatisticsMeansEmptyPool) {
    Reasoner r(kb_from("class H\nclass V\nmember m H\n"));
    EXPECT_TRUE(r.collect_structures("m", V, {}).structures.empty());
}

TEST(CollectStructures, DegenerateBracketIsNotedAndDropped) {
    Reasoner r(kb_from("class H\nclass K\nclass V\nmember m H\nmember m K\nstat H V [1, 1]\nstat K V [0, 1/2]\n"));
    std::vector<std::string> notes;
    auto set = r.collect_structures("m", V, {}, &notes);
    EXPECT_EQ(set.structures.size(), 2u);
    ASSERT_EQ(notes.size(), 1u);
    EXPECT_NE(notes[0].find("[H,K]"), std::string::npos);
}

TEST(CollectStructures, BoundsForIntersectionsWhenEnabled) {
    Reasoner r(kb_from("class H\nclass K\nclass V\nmember m H\nmember m K\n"
                       "stat H V [2/5, 4/5]\nstat H K [1, 1]\n"));
    QueryConfig cfg;
    cfg.bounds = true;
    cfg.constructions = false;
    auto set = r.collect_structures("m", V, cfg);
    bool found = false;
    for (const auto& s : set.structures)
        if (s.ref_class.render() == "H&K") {
            found = true;
            EXPECT_EQ(s.provenance, Provenance::DerivedBounds);
            EXPECT_EQ(s.interval, iv(2, 5, 4, 5));
        }
    EXPECT_TRUE(found);
}

TEST(Reflects, Examples) {
    KnowledgeBase kb = kb_from(test::kMets1);
    auto c = build_closure(kb);
    auto dh = is(ClassTerm::intersect({"D", "H"}), Interval::vacuous());
    auto h = is(ClassTerm::prim("H"), Interval::vacuous());
    auto k = is(ClassTerm::prim("K"), Interval::vacuous());
    auto hk_bracket = is(ClassTerm::bracket({{"H"}, {"K"}}), Interval::vacuous(), Provenance::DerivedISXB);
    auto hk_product = is(ClassTerm::product({{"H"}, {"K"}}), Interval::vacuous(), Provenance::DerivedISX);

    EXPECT_EQ(reflection(dh, h, c), ReflectionRule::SubsetRule);
    EXPECT_EQ(reflection(hk_bracket, h, c), ReflectionRule::BracketRule);
    EXPECT_FALSE(reflects(h, k, c));
    EXPECT_FALSE(reflects(h, hk_bracket, c));
    EXPECT_EQ(reflection(hk_bracket, hk_product, c), ReflectionRule::ConstructionRule);
    EXPECT_FALSE(reflects(hk_product, hk_bracket, c));
    EXPECT_TRUE(reflects(hk_product, h, c));
}

TEST(Dominates, Examples) {
    KnowledgeBase kb = kb_from(test::kMets1);
    auto c = build_closure(kb);
    auto dhk = is(ClassTerm::intersect({"D", "H", "K"}), iv(1, 10, 6, 10));
    auto h = is(ClassTerm::prim("H"), iv(2, 5, 4, 5));
    EXPECT_TRUE(dominates(dhk, h, c));
    EXPECT_FALSE(dominates(h, dhk, c));
    EXPECT_FALSE(dominates(h, h, c));
    auto b = is(ClassTerm::bracket({{"H"}, {"K"}}), iv(2, 9, 28, 31), Provenance::DerivedISXB);
    auto p = is(ClassTerm::product({{"H"}, {"K"}}), iv(3, 25, 14, 25), Provenance::DerivedISX);
    EXPECT_TRUE(dominates(b, p, c));
    EXPECT_FALSE(dominates(p, b, c));
}

TEST(Select, Examples) {
    KnowledgeBase kb = kb_from(test::kMets1);
    auto c = build_closure(kb);
    const auto dhk = ClassTerm::intersect({"D", "H", "K"});
    const auto h = ClassTerm::prim("H");
    const auto k = ClassTerm::prim("K");

    EXPECT_EQ(selected_class({is(dhk, Interval::vacuous()), is(h, iv(3, 10, 5, 10))}, c), "H");
    EXPECT_EQ(selected_class({is(dhk, iv(1, 10, 6, 10)), is(h, iv(2, 5, 4, 5))}, c), "D&H&K");
    EXPECT_EQ(selected_class({is(h, iv(2, 5, 4, 5)), is(k, iv(3, 10, 7, 10))}, c), std::nullopt);
    EXPECT_EQ(selected_class({is(h, iv(2, 5, 4, 5)), is(k, iv(3, 10, 7, 10)),
                              is(ClassTerm::bracket({{"H"}, {"K"}}), iv(2, 9, 28, 31), Provenance::DerivedISXB)},
                             c),
              "[H,K]");
}

TEST(Select, EqualIntervalsPreferTheMoreSpecificClass) {
    KnowledgeBase kb = kb_from(test::kMets1);
    auto c = build_closure(kb);
    // "H" sorts before "H&K" as text, but H&K reflects H.
    std::vector<InferenceStructure> s{is(ClassTerm::prim("H"), iv(1, 5, 2, 5)),
                                      is(ClassTerm::intersect({"H", "K"}), iv(1, 5, 2, 5))};
    EXPECT_EQ(selected_class(s, c), "H&K");
}

TEST(Prob, BaseballScenarios) {
    EXPECT_EQ(prob(Sentence{std::string("t")}, kb_from(test::kMets1)).first, iv(3, 10, 1, 2));
    EXPECT_EQ(prob(Sentence{std::string("t")}, kb_from(test::kMets2)).first, iv(1, 10, 3, 5));
    auto [p, trace] = prob(Sentence{std::string("t")}, kb_from("class H\nclass V\nmember m H\nequiv t (member m V)\n"));
    EXPECT_EQ(p, Interval::vacuous());
    EXPECT_EQ(trace.outcome, Outcome::Fallback);
}

TEST(Prob, PoolsSeveralMembershipSentences) {
    auto kb = kb_from("class H\nclass V\nmember a H\nmember b H\nstat H V [1/5, 2/5]\n"
                      "equiv t (member a V)\nequiv t (member b V)\n");
    auto [p, trace] = prob(Sentence{std::string("t")}, kb);
    EXPECT_EQ(p, iv(1, 5, 2, 5));
    EXPECT_EQ(trace.candidates.size(), 2u);
    EXPECT_EQ(trace.equivalences.size(), 2u);
}

TEST(Prob, TraceIsDeterministic) {
    auto kb = kb_from(test::kConflict);
    Reasoner r(kb);
    const auto a = trace_to_json(r.prob(Sentence{std::string("t")}).second).dump();
    const auto b = trace_to_json(Reasoner(kb).prob(Sentence{std::string("t")}).second).dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(trace_to_text(r.prob(Sentence{std::string("t")}).second),
              trace_to_text(r.prob(Sentence{std::string("t")}).second));
}

using refclass::test::random_pool;

TEST(SelectProperties, MatchesDeclarativeOracleAndNoDeletionVariant) {
    std::mt19937 rng(31);
    int selections = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto pool = random_pool(rng);
        auto closure = build_closure(pool.kb);
        auto fast = select(pool.structures, closure);
        auto slow = select(pool.structures, closure, {false});
        auto oracle = test::declarative_select(pool.structures, closure);
        EXPECT_EQ(fast.selected, oracle);
        EXPECT_EQ(slow.selected, oracle);
        selections += oracle.has_value();
    }
    EXPECT_GT(selections, 50);
}

TEST(SelectProperties, DeletedStructuresAreNeverTheAnswer) {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 300; ++trial) {
        auto pool = random_pool(rng);
        auto closure = build_closure(pool.kb);
        auto r = select(pool.structures, closure);
        for (const auto& step : r.steps)
            for (auto d : step.deleted) {
                EXPECT_NE(r.selected, std::optional<std::size_t>(d));
                // A deleted structure cannot dominate everything it disagrees with.
                bool eligible = true;
                for (std::size_t j = 0; j < pool.structures.size() && eligible; ++j)
                    if (j != d && disagrees(pool.structures[d].interval, pool.structures[j].interval))
                        eligible = dominates(pool.structures[d], pool.structures[j], closure);
                EXPECT_FALSE(eligible);
            }
    }
}

TEST(SelectProperties, NarrowingTheWinnerNeverWidensTheAnswer) {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        auto pool = random_pool(rng);
        auto closure = build_closure(pool.kb);
        auto r = select(pool.structures, closure);
        if (!r.selected) continue;
        auto narrowed = pool.structures;
        auto& win = narrowed[*r.selected];
        const Rational mid = (win.interval.lo() + win.interval.hi()) / 2;
        win.interval = Interval((win.interval.lo() + mid) / 2, (mid + win.interval.hi()) / 2);
        auto again = select(narrowed, closure);
        if (again.selected == r.selected) {
            EXPECT_TRUE(nests_in(narrowed[*again.selected].interval, pool.structures[*r.selected].interval));
        }
    }
}
