#include "refclass/set_reasoner.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace refclass;
using refclass::test::kb_from;

namespace {

std::set<std::string> renders(const std::vector<ClassMembership>& ms) {
    std::set<std::string> out;
    for (const auto& m : ms) out.insert(m.term.render());
    return out;
}

} // namespace

TEST(SetReasoner, TransitiveSubset) {
    auto kb = kb_from("class D\nclass H\nclass G\nsubset D H\nsubset H G\n");
    auto c = build_closure(kb);
    EXPECT_TRUE(is_subset(ClassTerm::prim("D"), ClassTerm::prim("G"), c));
    EXPECT_EQ(c.origin(ClassTerm::prim("D"), ClassTerm::prim("G")), EdgeOrigin::Transitive);
    EXPECT_EQ(c.origin(ClassTerm::prim("D"), ClassTerm::prim("H")), EdgeOrigin::Asserted);
    EXPECT_FALSE(is_subset(ClassTerm::prim("G"), ClassTerm::prim("D"), c));
}

TEST(SetReasoner, SyntacticIntersectionEdge) {
    auto kb = kb_from("class H\nclass D\nclass V\nstat (and H D) V [0, 1]\n");
    auto c = build_closure(kb);
    EXPECT_EQ(c.origin(ClassTerm::intersect({"H", "D"}), ClassTerm::prim("H")), EdgeOrigin::Syntactic);
}

TEST(SetReasoner, EmptyKbHasOnlyReflexiveEdges) {
    KnowledgeBase kb;
    auto c = build_closure(kb);
    EXPECT_EQ(c.terms().size(), 0u);
    EXPECT_EQ(c.edge_count(), 0u);

    auto one = build_closure(kb_from("class A\nclass B\n"));
    EXPECT_EQ(one.edge_count(), 2u);
    EXPECT_TRUE(is_subset(ClassTerm::prim("A"), ClassTerm::prim("A"), one));
}

TEST(SetReasoner, IsSubsetExamples) {
    auto kb = kb_from(test::kMets1);
    auto c = build_closure(kb);
    EXPECT_TRUE(is_subset(ClassTerm::intersect({"H", "D", "K"}), ClassTerm::prim("H"), c));
    EXPECT_FALSE(is_subset(ClassTerm::prim("H"), ClassTerm::intersect({"H", "D"}), c));
    EXPECT_TRUE(is_subset(ClassTerm::prim("X"), ClassTerm::prim("X"), c));
}

TEST(SetReasoner, ClassesOfMetsGame) {
    auto kb = kb_from(test::kMets1);
    auto c = build_closure(kb);
    auto cls = classes_of("m", kb, c);
    EXPECT_EQ(renders(cls), (std::set<std::string>{"H", "D", "K", "D&H", "H&K", "D&K", "D&H&K"}));
    for (const auto& m : cls) {
        if (m.term.kind() == TermKind::Prim) EXPECT_EQ(m.origin, MembershipOrigin::Asserted);
        else EXPECT_EQ(m.origin, MembershipOrigin::Syntactic);
    }
}

TEST(SetReasoner, ClassesOfFollowsSupersets) {
    auto kb = kb_from("class H\nclass G\nmember m H\nsubset H G\n");
    auto c = build_closure(kb);
    auto cls = classes_of("m", kb, c);
    EXPECT_EQ(renders(cls), (std::set<std::string>{"H", "G"}));
    EXPECT_EQ(cls.front().term.render(), "G");
    EXPECT_EQ(cls.front().origin, MembershipOrigin::Closure);
}

TEST(SetReasoner, ClassesOfIndividualWithoutMemberships) {
    auto kb = kb_from("class V\nequiv t (member z V)\n");
    auto c = build_closure(kb);
    EXPECT_TRUE(classes_of("z", kb, c).empty());
    EXPECT_THROW(classes_of("nobody", kb, c), UnknownIndividual);
}

TEST(SetReasoner, MembershipCap) {
    std::string text;
    for (int i = 0; i < 4; ++i) text += "class C" + std::to_string(i) + "\nmember m C" + std::to_string(i) + "\n";
    auto kb = kb_from(text);
    auto c = build_closure(kb, {3});
    EXPECT_THROW(classes_of("m", kb, c), ScaleError);
    EXPECT_EQ(classes_of("m", kb, build_closure(kb, {4})).size(), 15u);
}

TEST(SetReasoner, MutualSubsetsShareARepresentative) {
    auto kb = kb_from("class D\nclass H\nsubset D H\nsubset H D\n");
    auto c = build_closure(kb);
    EXPECT_EQ(c.representative(ClassTerm::prim("H")), ClassTerm::prim("D"));
    ASSERT_EQ(c.equivalence_groups().size(), 1u);
}

TEST(SetReasoner, MeetRule) {
    auto kb = kb_from("class D\nclass H\nclass K\nsubset D H\nsubset D K\nstat (and H K) H [1, 1]\n");
    auto c = build_closure(kb);
    EXPECT_EQ(c.origin(ClassTerm::prim("D"), ClassTerm::intersect({"H", "K"})), EdgeOrigin::Meet);
}

namespace {

KnowledgeBase random_kb(std::mt19937& rng) {
    const std::vector<std::string> names{"A", "B", "C", "D", "E"};
    KnowledgeBase kb;
    for (const auto& n : names) kb.classes.push_back(n);
    auto term = [&]() {
        NameSet ns;
        for (const auto& n : names)
            if (rng() % 3 == 0) ns.push_back(n);
        if (ns.empty()) ns.push_back(names[rng() % names.size()]);
        return ClassTerm::intersect(ns);
    };
    const int subsets = static_cast<int>(rng() % 5);
    for (int i = 0; i < subsets; ++i) kb.subsets.push_back({term(), term(), {}});
    const int members = static_cast<int>(rng() % 4);
    for (int i = 0; i < members; ++i) kb.memberships.push_back({rng() % 2 ? "x" : "y", term(), {}});
    kb.statistics.push_back({term(), term(), Interval::vacuous(), {}});
    return kb;
}

} // namespace

TEST(SetReasonerProperties, ClosureEqualsNaiveFixpointAndReplays) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        auto kb = random_kb(rng);
        auto c = build_closure(kb);
        auto naive = test::naive_closure(kb, c.terms());
        const auto& t = c.terms();
        for (std::size_t a = 0; a < t.size(); ++a)
            for (std::size_t b = 0; b < t.size(); ++b) {
                const bool edge = c.contains(a, b);
                EXPECT_EQ(edge, naive.count({t[a], t[b]}) > 0) << t[a] << " <= " << t[b];
                if (!edge) continue;
                // Replay the recorded derivation.
                switch (c.origin(t[a], t[b])) {
                case EdgeOrigin::Asserted: {
                    bool found = false;
                    for (const auto& s : kb.subsets) found = found || (s.sub == t[a] && s.super == t[b]);
                    EXPECT_TRUE(found);
                    break;
                }
                case EdgeOrigin::Syntactic: {
                    auto an = t[a].names(), bn = t[b].names();
                    EXPECT_TRUE(std::includes(an.begin(), an.end(), bn.begin(), bn.end()));
                    break;
                }
                case EdgeOrigin::Meet:
                    for (const auto& n : t[b].names()) EXPECT_TRUE(is_subset(t[a], ClassTerm::prim(n), c));
                    break;
                case EdgeOrigin::Transitive: {
                    bool via = false;
                    for (std::size_t k = 0; k < t.size() && !via; ++k)
                        via = k != a && k != b && c.contains(a, k) && c.contains(k, b);
                    EXPECT_TRUE(via);
                    break;
                }
                case EdgeOrigin::None: ADD_FAILURE(); break;
                }
            }
    }
}

TEST(SetReasonerProperties, ClassesOfIsMonotoneAndContainsJoint) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        auto kb = random_kb(rng);
        kb.memberships.push_back({"x", ClassTerm::prim("A"), {}});
        auto before = renders(classes_of("x", kb, build_closure(kb)));
        EXPECT_TRUE(before.count(ClassTerm::intersect(kb.membership_names("x")).render()));

        auto grown = kb;
        auto extra = random_kb(rng);
        for (auto& s : extra.subsets) grown.subsets.push_back(s);
        auto after = renders(classes_of("x", grown, build_closure(grown)));
        for (const auto& r : before) EXPECT_TRUE(after.count(r)) << r;
    }
}
