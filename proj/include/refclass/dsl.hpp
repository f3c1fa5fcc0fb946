#pragma once

// Line-oriented knowledge-base language:
//
//   class IDENT
//   member IDENT classterm
//   subset classterm classterm
//   stat classterm classterm [RAT, RAT]
//   equiv IDENT sentence
//
//   classterm := IDENT | (and classterm+)
//   sentence  := IDENT | (member IDENT classterm)
//   RAT       := decimal literal (exact) | n/d
//
// "#" starts a comment that runs to the end of the line.

#include "refclass/class_term.hpp"
#include "refclass/error.hpp"
#include "refclass/knowledge_base.hpp"
#include "refclass/rational.hpp"
#include "refclass/set_reasoner.hpp"
#include "refclass/stat_index.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace refclass::dsl {

enum class DiagCode {
    Lexical,
    Syntax,
    UndeclaredName,
    DuplicateDeclaration,
    IntervalOrder,
    IntervalRange,
    InvalidTerm,
    DuplicateIncomparableStatistic,
    MinimalMode,
};

inline const char* to_string(DiagCode c) {
    switch (c) {
    case DiagCode::Lexical: return "lexical";
    case DiagCode::Syntax: return "syntax";
    case DiagCode::UndeclaredName: return "undeclared-name";
    case DiagCode::DuplicateDeclaration: return "duplicate-declaration";
    case DiagCode::IntervalOrder: return "interval-order";
    case DiagCode::IntervalRange: return "interval-range";
    case DiagCode::InvalidTerm: return "invalid-term";
    case DiagCode::DuplicateIncomparableStatistic: return "duplicate-incomparable-statistic";
    case DiagCode::MinimalMode: return "minimal-mode";
    }
    return "?";
}

struct Diagnostic {
    SourcePos pos;
    DiagCode code;
    std::string message;
};

inline std::string format(const Diagnostic& d) {
    return std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ": " + to_string(d.code) + ": " +
           d.message;
}

struct ParseOptions {
    /// No subset assertions; statistic reference classes limited to primitive
    /// names and intersections of one individual's membership names.
    bool minimal = false;
};

struct ParseResult {
    KnowledgeBase kb;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

namespace detail {

enum class Tok { Ident, Number, LParen, RParen, LBracket, RBracket, Comma };

struct Token {
    Tok kind;
    std::string text;
    int column;
};

/// Syntax tree of a class term before name checking.
struct TermNode {
    std::string name; // leaf when non-empty
    std::vector<TermNode> parts;
    int column = 0;
};

class LineParser {
public:
    LineParser(std::vector<Token> toks, int line, std::vector<Diagnostic>& diags)
        : toks_(std::move(toks)), line_(line), diags_(diags) {}

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token* peek() const { return at_end() ? nullptr : &toks_[pos_]; }
    int column() const { return at_end() ? (toks_.empty() ? 1 : toks_.back().column + 1) : toks_[pos_].column; }

    void fail(const std::string& msg) {
        if (failed_) return;
        failed_ = true;
        diags_.push_back({{line_, column()}, DiagCode::Syntax, msg});
    }
    bool failed() const { return failed_; }

    std::optional<Token> expect(Tok kind, const char* what) {
        if (failed_) return std::nullopt;
        if (at_end() || toks_[pos_].kind != kind) {
            fail(std::string("expected ") + what);
            return std::nullopt;
        }
        return toks_[pos_++];
    }

    bool accept_keyword(std::string_view kw) {
        if (!at_end() && toks_[pos_].kind == Tok::Ident && toks_[pos_].text == kw) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::optional<TermNode> term() {
        if (failed_) return std::nullopt;
        if (auto* t = peek(); t && t->kind == Tok::Ident) {
            ++pos_;
            return TermNode{t->text, {}, t->column};
        }
        const int col = column();
        if (!expect(Tok::LParen, "class name or (and ...)")) return std::nullopt;
        if (!accept_keyword("and")) {
            fail("expected 'and'");
            return std::nullopt;
        }
        TermNode node{{}, {}, col};
        while (!failed_ && peek() && peek()->kind != Tok::RParen) {
            auto sub = term();
            if (!sub) return std::nullopt;
            node.parts.push_back(std::move(*sub));
        }
        if (node.parts.empty()) {
            fail("(and ...) needs at least one class term");
            return std::nullopt;
        }
        if (!expect(Tok::RParen, "')'")) return std::nullopt;
        return node;
    }

    void finish() {
        if (!failed_ && !at_end()) fail("unexpected '" + toks_[pos_].text + "'");
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
    std::vector<Diagnostic>& diags_;
    bool failed_ = false;
};

inline std::optional<std::vector<Token>> tokenize(std::string_view line, int lineno, std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        const int col = static_cast<int>(i) + 1;
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        switch (c) {
        case '(': out.push_back({Tok::LParen, "(", col}); ++i; continue;
        case ')': out.push_back({Tok::RParen, ")", col}); ++i; continue;
        case '[': out.push_back({Tok::LBracket, "[", col}); ++i; continue;
        case ']': out.push_back({Tok::RBracket, "]", col}); ++i; continue;
        case ',': out.push_back({Tok::Comma, ",", col}); ++i; continue;
        default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
            out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            while (j < line.size() &&
                   (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.' || line[j] == '/'))
                ++j;
            out.push_back({Tok::Number, std::string(line.substr(i, j - i)), col});
            i = j;
            continue;
        }
        diags.push_back({{lineno, col}, DiagCode::Lexical, std::string("unexpected character '") + c + "'"});
        return std::nullopt;
    }
    return out;
}

inline void collect_names(const TermNode& n, std::vector<std::pair<std::string, int>>& out) {
    if (!n.name.empty()) {
        out.emplace_back(n.name, n.column);
        return;
    }
    for (const auto& p : n.parts) collect_names(p, out);
}

struct PendingStat {
    TermNode ref;
    TermNode target;
    Token lo;
    Token hi;
    SourcePos pos;
};

inline std::string render_term(const ClassTerm& t) {
    if (t.kind() == TermKind::Intersect) return "(and " + refclass::detail::join(t.names(), " ") + ")";
    return t.render();
}

} // namespace detail

/// Parses and validates a knowledge base. Recovers after a bad statement so
/// every problem is reported; diagnostics come back ordered by position.
inline ParseResult parse_kb(std::string_view text, const ParseOptions& options = {}) {
    using namespace detail;
    ParseResult result;
    auto& diags = result.diagnostics;
    auto& kb = result.kb;

    struct Stmt {
        std::string keyword;
        SourcePos pos;
        std::vector<TermNode> terms;
        std::string ident;
        int ident_col = 0;
        std::optional<Token> lo, hi;
        bool sentence_is_name = false;
        std::string sentence_name;
        std::string sentence_individual;
    };
    std::vector<Stmt> stmts;
    std::map<std::string, SourcePos> declared;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto toks = tokenize(raw, lineno, diags);
        if (!toks || toks->empty()) continue;

        LineParser p(*toks, lineno, diags);
        Stmt st;
        const Token head = toks->front();
        st.pos = {lineno, head.column};
        st.keyword = head.kind == Tok::Ident ? head.text : "";
        p.expect(Tok::Ident, "statement keyword");

        if (st.keyword == "class") {
            if (auto id = p.expect(Tok::Ident, "class name")) {
                st.ident = id->text;
                st.ident_col = id->column;
            }
        } else if (st.keyword == "member") {
            if (auto id = p.expect(Tok::Ident, "individual name")) st.ident = id->text;
            if (auto t = p.term()) st.terms.push_back(std::move(*t));
        } else if (st.keyword == "subset") {
            for (int k = 0; k < 2; ++k)
                if (auto t = p.term()) st.terms.push_back(std::move(*t));
        } else if (st.keyword == "stat") {
            for (int k = 0; k < 2; ++k)
                if (auto t = p.term()) st.terms.push_back(std::move(*t));
            p.expect(Tok::LBracket, "'['");
            st.lo = p.expect(Tok::Number, "lower endpoint");
            p.expect(Tok::Comma, "','");
            st.hi = p.expect(Tok::Number, "upper endpoint");
            p.expect(Tok::RBracket, "']'");
        } else if (st.keyword == "equiv") {
            if (auto id = p.expect(Tok::Ident, "sentence name")) st.ident = id->text;
            if (auto* t = p.peek(); t && t->kind == Tok::Ident) {
                st.sentence_is_name = true;
                st.sentence_name = t->text;
                p.expect(Tok::Ident, "sentence");
            } else if (p.expect(Tok::LParen, "sentence name or (member ...)")) {
                if (!p.accept_keyword("member")) p.fail("expected 'member'");
                if (auto id = p.expect(Tok::Ident, "individual name")) st.sentence_individual = id->text;
                if (auto t = p.term()) st.terms.push_back(std::move(*t));
                p.expect(Tok::RParen, "')'");
            }
        } else if (!p.failed()) {
            diags.push_back({st.pos, DiagCode::Syntax, "unknown statement '" + head.text + "'"});
            continue;
        }
        p.finish();
        if (p.failed()) continue;

        if (st.keyword == "class") {
            if (auto it = declared.find(st.ident); it != declared.end()) {
                diags.push_back({{lineno, st.ident_col}, DiagCode::DuplicateDeclaration,
                                 "class " + st.ident + " already declared at line " + std::to_string(it->second.line)});
                continue;
            }
            declared.emplace(st.ident, SourcePos{lineno, st.ident_col});
        }
        stmts.push_back(std::move(st));
    }

    auto build_term = [&](const TermNode& node, int line) -> std::optional<ClassTerm> {
        std::vector<std::pair<std::string, int>> names;
        collect_names(node, names);
        bool ok = true;
        for (const auto& [name, col] : names)
            if (!declared.count(name)) {
                diags.push_back({{line, col}, DiagCode::UndeclaredName, "undeclared class " + name});
                ok = false;
            }
        if (!ok) return std::nullopt;
        NameSet flat;
        for (auto& [name, _] : names) flat.push_back(name);
        return ClassTerm::intersect(std::move(flat));
    };

    auto parse_endpoint = [&](const Token& tok, int line) -> std::optional<Rational> {
        auto r = parse_rational(tok.text);
        if (!r) {
            diags.push_back({{line, tok.column}, DiagCode::Lexical, "malformed number '" + tok.text + "'"});
            return std::nullopt;
        }
        if (*r < 0 || *r > 1) {
            diags.push_back({{line, tok.column}, DiagCode::IntervalRange, "endpoint " + tok.text + " outside [0, 1]"});
            return std::nullopt;
        }
        return r;
    };

    std::map<std::pair<ClassTerm, ClassTerm>, Interval> seen_stats;
    std::set<std::pair<std::size_t, std::size_t>> reported;
    for (const auto& st : stmts) {
        const int line = st.pos.line;
        if (st.keyword == "class") {
            kb.classes.push_back(st.ident);
        } else if (st.keyword == "member") {
            if (auto t = build_term(st.terms[0], line)) kb.memberships.push_back({st.ident, *t, st.pos});
        } else if (st.keyword == "subset") {
            auto a = build_term(st.terms[0], line);
            auto b = build_term(st.terms[1], line);
            if (options.minimal)
                diags.push_back({st.pos, DiagCode::MinimalMode, "subset assertions are not allowed in minimal mode"});
            else if (a && b)
                kb.subsets.push_back({*a, *b, st.pos});
        } else if (st.keyword == "stat") {
            auto y = build_term(st.terms[0], line);
            auto z = build_term(st.terms[1], line);
            auto lo = parse_endpoint(*st.lo, line);
            auto hi = parse_endpoint(*st.hi, line);
            if (!y || !z || !lo || !hi) continue;
            if (*lo > *hi) {
                diags.push_back({{line, st.lo->column}, DiagCode::IntervalOrder,
                                 "interval lower endpoint " + st.lo->text + " exceeds upper endpoint " + st.hi->text});
                continue;
            }
            Interval iv(*lo, *hi);
            auto key = std::pair{*y, *z};
            if (auto it = seen_stats.find(key); it != seen_stats.end()) {
                if (disagrees(it->second, iv)) {
                    diags.push_back({st.pos, DiagCode::DuplicateIncomparableStatistic,
                                     "statistic %(" + y->render() + ", " + z->render() + ") = " + to_string(iv) +
                                         " conflicts with earlier " + to_string(it->second)});
                    continue;
                }
                if (nests_in(iv, it->second)) it->second = iv;
            } else {
                seen_stats.emplace(key, iv);
            }
            kb.statistics.push_back({*y, *z, iv, st.pos});
        } else if (st.keyword == "equiv") {
            if (st.sentence_is_name) {
                kb.equivalences.push_back({st.ident, Sentence{st.sentence_name}, st.pos});
            } else if (auto t = build_term(st.terms[0], line)) {
                kb.equivalences.push_back({st.ident, Sentence{MemberSentence{st.sentence_individual, *t}}, st.pos});
            }
        }
    }

    if (options.minimal) {
        for (const auto& s : kb.statistics) {
            if (s.ref_class.kind() != TermKind::Intersect) continue;
            const auto names = s.ref_class.names();
            bool ok = false;
            for (const auto& x : kb.individuals()) {
                const auto mine = kb.membership_names(x);
                ok = ok || std::includes(mine.begin(), mine.end(), names.begin(), names.end());
            }
            if (!ok)
                diags.push_back({s.pos, DiagCode::MinimalMode,
                                 "reference class " + s.ref_class.render() +
                                     " is not an intersection of one individual's memberships (minimal mode)"});
        }
    }

    // Statistics that collide only through subset equivalences.
    if (diags.empty()) {
        auto closure = build_closure(kb);
        auto idx = StatIndex::build(kb, closure);
        for (const auto& c : idx.conflicts()) {
            const auto& a = kb.statistics[c.first];
            const auto& b = kb.statistics[c.second];
            diags.push_back({b.pos, DiagCode::DuplicateIncomparableStatistic,
                             "statistic %(" + b.ref_class.render() + ", " + b.target.render() + ") = " +
                                 to_string(b.interval) + " conflicts with %(" + a.ref_class.render() + ", " +
                                 a.target.render() + ") = " + to_string(a.interval) + " (equivalent classes)"});
        }
    }

    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.pos.line, a.pos.column) < std::tie(b.pos.line, b.pos.column);
    });
    return result;
}

/// Canonical text of a knowledge base; parse_kb(render_kb(kb)) reproduces kb
/// up to source positions.
inline std::string render_kb(const KnowledgeBase& kb) {
    std::ostringstream os;
    for (const auto& c : kb.classes) os << "class " << c << "\n";
    for (const auto& m : kb.memberships) os << "member " << m.individual << " " << detail::render_term(m.cls) << "\n";
    for (const auto& s : kb.subsets)
        os << "subset " << detail::render_term(s.sub) << " " << detail::render_term(s.super) << "\n";
    for (const auto& s : kb.statistics)
        os << "stat " << detail::render_term(s.ref_class) << " " << detail::render_term(s.target) << " "
           << to_string(s.interval) << "\n";
    for (const auto& e : kb.equivalences) os << "equiv " << e.name << " " << to_string(e.sentence) << "\n";
    return os.str();
}

/// Parses a query argument: a sentence name or "(member x classterm)".
/// Class names must be declared in kb.
inline std::optional<Sentence> parse_sentence(std::string_view text, const KnowledgeBase& kb, std::string* error = nullptr) {
    auto set_error = [&](std::string msg) {
        if (error) *error = std::move(msg);
        return std::nullopt;
    };
    std::vector<Diagnostic> diags;
    auto toks = detail::tokenize(text, 1, diags);
    if (!toks || toks->empty()) return set_error(diags.empty() ? "empty sentence" : diags.front().message);
    if (toks->size() == 1 && toks->front().kind == detail::Tok::Ident) return Sentence{toks->front().text};

    detail::LineParser p(*toks, 1, diags);
    p.expect(detail::Tok::LParen, "'('");
    if (!p.accept_keyword("member")) p.fail("expected 'member'");
    auto id = p.expect(detail::Tok::Ident, "individual name");
    auto term = p.term();
    p.expect(detail::Tok::RParen, "')'");
    p.finish();
    if (p.failed() || !id || !term) return set_error(diags.empty() ? "malformed sentence" : diags.front().message);

    std::vector<std::pair<std::string, int>> names;
    detail::collect_names(*term, names);
    NameSet flat;
    for (const auto& [name, _] : names) {
        if (!kb.declares_class(name)) return set_error("undeclared class " + name);
        flat.push_back(name);
    }
    return Sentence{MemberSentence{id->text, ClassTerm::intersect(std::move(flat))}};
}

} // namespace refclass::dsl
