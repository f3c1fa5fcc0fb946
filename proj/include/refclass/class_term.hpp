#pragma once

#include "refclass/error.hpp"

#include <algorithm>
#include <compare>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace refclass {

/// Prim: one primitive class name.
/// Intersect: flat intersection of two or more primitive names.
/// Bracket: agreement-combination class over two or more disjoint constituents,
///          each constituent an intersection of primitive names ("[H&D,K]").
/// Product: cross-product class over the same kind of constituents ("H&D*K").
enum class TermKind { Prim, Intersect, Bracket, Product };

using NameSet = std::vector<std::string>;

/// Un-normalized term as written or assembled by a caller.
struct TermSyntax {
    TermKind kind = TermKind::Prim;
    std::vector<NameSet> blocks;
};

class ClassTerm;
ClassTerm canonicalize(const TermSyntax& syntax);

/// Canonical class term. Instances are only produced by canonicalize(), so two
/// terms are equal iff they denote the same set expression.
class ClassTerm {
public:
    static ClassTerm prim(std::string name) { return canonicalize({TermKind::Prim, {{std::move(name)}}}); }
    static ClassTerm intersect(NameSet names) { return canonicalize({TermKind::Intersect, {std::move(names)}}); }
    static ClassTerm bracket(std::vector<NameSet> constituents) {
        return canonicalize({TermKind::Bracket, std::move(constituents)});
    }
    static ClassTerm product(std::vector<NameSet> constituents) {
        return canonicalize({TermKind::Product, std::move(constituents)});
    }

    TermKind kind() const { return kind_; }
    const std::vector<NameSet>& blocks() const { return blocks_; }
    const std::string& render() const { return render_; }

    /// Prim or Intersect: an ordinary set of individuals.
    bool is_ordinary() const { return kind_ == TermKind::Prim || kind_ == TermKind::Intersect; }

    /// Sorted union of all primitive names in the term.
    NameSet names() const {
        NameSet out;
        for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Constituents as used by the bracket rule; an ordinary term is a single constituent.
    const std::vector<NameSet>& constituents() const { return blocks_; }

    friend bool operator==(const ClassTerm& a, const ClassTerm& b) { return a.render_ == b.render_; }
    friend std::strong_ordering operator<=>(const ClassTerm& a, const ClassTerm& b) {
        return a.render_ <=> b.render_;
    }

private:
    friend ClassTerm canonicalize(const TermSyntax&);
    ClassTerm() = default;

    TermKind kind_ = TermKind::Prim;
    std::vector<NameSet> blocks_;
    std::string render_;
};

inline std::ostream& operator<<(std::ostream& os, const ClassTerm& t) { return os << t.render(); }

namespace detail {

inline std::string join(const NameSet& names, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += sep;
        out += names[i];
    }
    return out;
}

inline bool sets_overlap(const NameSet& a, const NameSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i; else ++j;
    }
    return false;
}

} // namespace detail

/// Produces the unique canonical form: names sorted and deduplicated within each
/// block, blocks sorted, single-block brackets/products collapsed to the
/// intersection (or primitive) of their names. Throws InvalidTerm on empty
/// blocks or overlapping constituents.
inline ClassTerm canonicalize(const TermSyntax& syntax) {
    if (syntax.blocks.empty()) throw InvalidTerm("class term with no names");

    std::vector<NameSet> blocks = syntax.blocks;
    for (auto& b : blocks) {
        if (b.empty()) throw InvalidTerm("class term with an empty constituent");
        for (const auto& n : b)
            if (n.empty()) throw InvalidTerm("empty class name");
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
    }

    TermKind kind = syntax.kind;
    if (kind == TermKind::Prim || kind == TermKind::Intersect) {
        NameSet all;
        for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        blocks = {std::move(all)};
    } else {
        std::sort(blocks.begin(), blocks.end());
        for (std::size_t i = 0; i < blocks.size(); ++i)
            for (std::size_t j = i + 1; j < blocks.size(); ++j)
                if (detail::sets_overlap(blocks[i], blocks[j]))
                    throw InvalidTerm("constituents overlap: {" + detail::join(blocks[i], ",") + "} and {" +
                                      detail::join(blocks[j], ",") + "}");
        if (blocks.size() == 1) kind = TermKind::Intersect;
    }
    if (kind == TermKind::Intersect && blocks.front().size() == 1) kind = TermKind::Prim;
    if (kind == TermKind::Prim && blocks.front().size() > 1) kind = TermKind::Intersect;

    ClassTerm t;
    t.kind_ = kind;
    t.blocks_ = std::move(blocks);
    switch (kind) {
    case TermKind::Prim:
    case TermKind::Intersect:
        t.render_ = detail::join(t.blocks_.front(), "&");
        break;
    case TermKind::Bracket: {
        NameSet parts;
        for (const auto& b : t.blocks_) parts.push_back(detail::join(b, "&"));
        t.render_ = "[" + detail::join(parts, ",") + "]";
        break;
    }
    case TermKind::Product: {
        NameSet parts;
        for (const auto& b : t.blocks_) parts.push_back(detail::join(b, "&"));
        t.render_ = detail::join(parts, "*");
        break;
    }
    }
    return t;
}

inline ClassTerm canonicalize(const ClassTerm& t) { return canonicalize(TermSyntax{t.kind(), t.blocks()}); }

/// Bracket rendering of any term: "[H&D&K]" for an ordinary term, "[H&D,K]" for a bracket.
inline std::string bracket_form(const ClassTerm& t) {
    NameSet parts;
    for (const auto& b : t.constituents()) parts.push_back(detail::join(b, "&"));
    return "[" + detail::join(parts, ",") + "]";
}

} // namespace refclass
