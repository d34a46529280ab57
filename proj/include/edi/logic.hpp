#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edi/errors.hpp"

namespace edi {

inline constexpr std::size_t kMaxAtoms = 16;

// Ordered, fixed set of atom names. The order determines how worlds are
// rendered: atom 0 is the leftmost character of a truth vector.
class Vocabulary {
public:
    Vocabulary() = default;

    explicit Vocabulary(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty() || atoms_.size() > kMaxAtoms)
            throw InvalidVocabulary("vocabulary must have between 1 and 16 atoms, got " +
                                    std::to_string(atoms_.size()));
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (!is_atom_name(atoms_[i])) throw InvalidVocabulary("bad atom name '" + atoms_[i] + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (atoms_[i] == atoms_[j]) throw InvalidVocabulary("duplicate atom '" + atoms_[i] + "'");
        }
    }

    // Vocabulary p1..pn; convenient for generated suites.
    static Vocabulary numbered(std::size_t n) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i + 1));
        return Vocabulary(std::move(names));
    }

    std::size_t size() const noexcept { return atoms_.size(); }
    std::size_t world_count() const noexcept { return std::size_t{1} << atoms_.size(); }
    const std::vector<std::string>& atoms() const noexcept { return atoms_; }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i] == name) return i;
        return std::nullopt;
    }

    static bool is_atom_name(std::string_view s) {
        if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
        return std::all_of(s.begin(), s.end(), [](char c) {
            return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
                   c == '_';
        });
    }

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

private:
    std::vector<std::string> atoms_;
};

// A world is its truth vector read as a binary number, so "11" is 3 and
// "01" is 1. Atom i lives in bit (n-1-i).
struct World {
    std::uint32_t bits = 0;

    friend bool operator==(World, World) = default;
    friend auto operator<=>(World, World) = default;
};

inline bool truth(World w, std::size_t atom, std::size_t n) { return (w.bits >> (n - 1 - atom)) & 1u; }

inline std::string render(World w, const Vocabulary& v) {
    std::string s(v.size(), '0');
    for (std::size_t i = 0; i < v.size(); ++i)
        if (truth(w, i, v.size())) s[i] = '1';
    return s;
}

inline World parse_world(std::string_view s, const Vocabulary& v) {
    if (s.size() != v.size()) throw ParseError("world '" + std::string(s) + "' has wrong length");
    World w;
    for (char c : s) {
        if (c != '0' && c != '1') throw ParseError("world '" + std::string(s) + "' is not a truth vector");
        w.bits = (w.bits << 1) | static_cast<std::uint32_t>(c == '1');
    }
    return w;
}

// Worlds in display order: all-true first, all-false last (11, 10, 01, 00).
// Every enumeration in the library follows this order.
inline std::vector<World> canonical_worlds(const Vocabulary& v) {
    std::vector<World> out;
    out.reserve(v.world_count());
    for (std::size_t k = v.world_count(); k-- > 0;) out.push_back(World{static_cast<std::uint32_t>(k)});
    return out;
}

// Position of w in canonical_worlds().
inline std::size_t canonical_position(World w, std::size_t world_count) { return world_count - 1 - w.bits; }

// Bitmask over the 2^n worlds of a vocabulary, indexed by World::bits.
class WorldSet {
public:
    WorldSet() = default;
    explicit WorldSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static WorldSet full(std::size_t universe) {
        WorldSet s(universe);
        for (std::size_t i = 0; i < universe; ++i) s.insert(World{static_cast<std::uint32_t>(i)});
        return s;
    }

    // Bit j of `mask` selects the world with bits == j. Only for universes of
    // at most 64 worlds, which is where exhaustive subset enumeration happens.
    static WorldSet from_mask(std::uint64_t mask, std::size_t universe) {
        WorldSet s(universe);
        if (universe < 64) mask &= (std::uint64_t{1} << universe) - 1;
        if (!s.words_.empty()) s.words_[0] = mask;
        return s;
    }

    static WorldSet of(std::size_t universe, std::initializer_list<World> ws) {
        WorldSet s(universe);
        for (World w : ws) s.insert(w);
        return s;
    }

    std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

    std::size_t universe() const noexcept { return universe_; }

    bool contains(World w) const { return (words_[w.bits / 64] >> (w.bits % 64)) & 1u; }
    void insert(World w) { words_[w.bits / 64] |= std::uint64_t{1} << (w.bits % 64); }
    void erase(World w) { words_[w.bits / 64] &= ~(std::uint64_t{1} << (w.bits % 64)); }

    std::size_t size() const {
        std::size_t c = 0;
        for (auto x : words_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t x) { return x == 0; });
    }

    WorldSet operator&(const WorldSet& o) const {
        WorldSet r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
        return r;
    }
    WorldSet operator|(const WorldSet& o) const {
        WorldSet r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
        return r;
    }
    WorldSet complement() const {
        WorldSet r(universe_);
        for (std::size_t i = 0; i < universe_; ++i) {
            World w{static_cast<std::uint32_t>(i)};
            if (!contains(w)) r.insert(w);
        }
        return r;
    }
    bool subset_of(const WorldSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    // Members in canonical order.
    std::vector<World> members() const {
        std::vector<World> out;
        for (std::size_t k = universe_; k-- > 0;) {
            World w{static_cast<std::uint32_t>(k)};
            if (contains(w)) out.push_back(w);
        }
        return out;
    }

    friend bool operator==(const WorldSet&, const WorldSet&) = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

inline std::string render(const WorldSet& s, const Vocabulary& v) {
    std::string out = "{";
    bool first = true;
    for (World w : s.members()) {
        if (!first) out += ",";
        out += render(w, v);
        first = false;
    }
    return out + "}";
}

// Propositional formula over atom indices. Immutable; subtrees are shared.
class Formula {
public:
    enum class Kind { Top, Bottom, Atom, Not, And, Or, Implies, Iff };

    static Formula top() { return Formula(std::make_shared<Node>(Node{Kind::Top, 0, {}})); }
    static Formula bottom() { return Formula(std::make_shared<Node>(Node{Kind::Bottom, 0, {}})); }
    static Formula atom(std::size_t index) { return Formula(std::make_shared<Node>(Node{Kind::Atom, index, {}})); }
    static Formula negation(Formula a) { return unary(Kind::Not, std::move(a)); }
    static Formula conjunction(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
    static Formula disjunction(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
    static Formula implication(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }
    static Formula biconditional(Formula a, Formula b) { return binary(Kind::Iff, std::move(a), std::move(b)); }

    Kind kind() const { return node_->kind; }
    std::size_t atom_index() const { return node_->atom; }
    // Operand of a negation, or left operand of a binary connective.
    const Formula& lhs() const { return node_->children.front(); }
    const Formula& rhs() const { return node_->children.back(); }

    bool evaluate(World w, std::size_t n) const {
        switch (kind()) {
        case Kind::Top: return true;
        case Kind::Bottom: return false;
        case Kind::Atom: return truth(w, atom_index(), n);
        case Kind::Not: return !lhs().evaluate(w, n);
        case Kind::And: return lhs().evaluate(w, n) && rhs().evaluate(w, n);
        case Kind::Or: return lhs().evaluate(w, n) || rhs().evaluate(w, n);
        case Kind::Implies: return !lhs().evaluate(w, n) || rhs().evaluate(w, n);
        case Kind::Iff: return lhs().evaluate(w, n) == rhs().evaluate(w, n);
        }
        return false;
    }

    std::size_t max_atom_index_plus_one() const {
        switch (kind()) {
        case Kind::Top:
        case Kind::Bottom: return 0;
        case Kind::Atom: return atom_index() + 1;
        case Kind::Not: return lhs().max_atom_index_plus_one();
        default: return std::max(lhs().max_atom_index_plus_one(), rhs().max_atom_index_plus_one());
        }
    }

private:
    struct Node {
        Kind kind;
        std::size_t atom;
        std::vector<Formula> children;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Formula unary(Kind k, Formula a) {
        return Formula(std::make_shared<Node>(Node{k, 0, {std::move(a)}}));
    }
    static Formula binary(Kind k, Formula a, Formula b) {
        return Formula(std::make_shared<Node>(Node{k, 0, {std::move(a), std::move(b)}}));
    }

    std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Surface syntax
//
//   iff     := implies ( "<->" implies )*          left-assoc
//   implies := or ( "->" implies )?                right-assoc
//   or      := and ( "|" and )*
//   and     := unary ( "&" unary )*
//   unary   := "!" unary | "(" iff ")" | "true" | "false" | atom
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok { Atom, True, False, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos; // 1-based column
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        std::size_t col = i + 1;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '!') {
            out.push_back({Tok::Not, "!", col}); ++i;
        } else if (c == '&') {
            out.push_back({Tok::And, "&", col}); ++i;
        } else if (c == '|') {
            out.push_back({Tok::Or, "|", col}); ++i;
        } else if (c == '(') {
            out.push_back({Tok::LParen, "(", col}); ++i;
        } else if (c == ')') {
            out.push_back({Tok::RParen, ")", col}); ++i;
        } else if (src.substr(i, 3) == "<->") {
            out.push_back({Tok::Iff, "<->", col}); i += 3;
        } else if (src.substr(i, 2) == "->") {
            out.push_back({Tok::Implies, "->", col}); i += 2;
        } else if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && (std::islower(static_cast<unsigned char>(src[j])) ||
                                      std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word(src.substr(i, j - i));
            Tok k = word == "true" ? Tok::True : word == "false" ? Tok::False : Tok::Atom;
            out.push_back({k, word, col});
            i = j;
        } else {
            throw ParseError("unexpected character '" + std::string(1, c) + "' at column " + std::to_string(col));
        }
    }
    out.push_back({Tok::End, "", src.size() + 1});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, const Vocabulary& v) : toks_(tokenize(src)), vocab_(v) {}

    Formula parse() {
        Formula f = parse_iff();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at column " + std::to_string(peek().pos));
    }

    Formula parse_iff() {
        Formula lhs = parse_implies();
        while (peek().kind == Tok::Iff) {
            next();
            lhs = Formula::biconditional(lhs, parse_implies());
        }
        return lhs;
    }

    Formula parse_implies() {
        Formula lhs = parse_or();
        if (peek().kind == Tok::Implies) {
            next();
            return Formula::implication(lhs, parse_implies());
        }
        return lhs;
    }

    Formula parse_or() {
        Formula lhs = parse_and();
        while (peek().kind == Tok::Or) {
            next();
            lhs = Formula::disjunction(lhs, parse_and());
        }
        return lhs;
    }

    Formula parse_and() {
        Formula lhs = parse_unary();
        while (peek().kind == Tok::And) {
            next();
            lhs = Formula::conjunction(lhs, parse_unary());
        }
        return lhs;
    }

    Formula parse_unary() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Not: next(); return Formula::negation(parse_unary());
        case Tok::True: next(); return Formula::top();
        case Tok::False: next(); return Formula::bottom();
        case Tok::Atom: {
            auto idx = vocab_.index_of(t.text);
            if (!idx) throw UnknownAtom("unknown atom '" + t.text + "' at column " + std::to_string(t.pos));
            next();
            return Formula::atom(*idx);
        }
        case Tok::LParen: {
            next();
            Formula inner = parse_iff();
            if (peek().kind != Tok::RParen) fail("expected ')'");
            next();
            return inner;
        }
        case Tok::End: fail("unexpected end of input");
        default: fail("unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Vocabulary& vocab_;
};

inline int precedence(Formula::Kind k) {
    switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
    }
}

inline std::string render_at(const Formula& f, const Vocabulary& v, int context) {
    using K = Formula::Kind;
    std::string s;
    int p = precedence(f.kind());
    switch (f.kind()) {
    case K::Top: return "true";
    case K::Bottom: return "false";
    case K::Atom: return v.atoms().at(f.atom_index());
    case K::Not: s = "!" + render_at(f.lhs(), v, 5); break;
    case K::And: s = render_at(f.lhs(), v, 4) + " & " + render_at(f.rhs(), v, 5); break;
    case K::Or: s = render_at(f.lhs(), v, 3) + " | " + render_at(f.rhs(), v, 4); break;
    case K::Implies: s = render_at(f.lhs(), v, 3) + " -> " + render_at(f.rhs(), v, 2); break;
    case K::Iff: s = render_at(f.lhs(), v, 1) + " <-> " + render_at(f.rhs(), v, 2); break;
    }
    return p < context ? "(" + s + ")" : s;
}

} // namespace detail

inline Formula parse_formula(std::string_view text, const Vocabulary& v) { return detail::Parser(text, v).parse(); }

// Renders in the surface syntax with the minimum parentheses needed to
// parse back to the same tree.
inline std::string render(const Formula& f, const Vocabulary& v) { return detail::render_at(f, v, 0); }

inline WorldSet models(const Formula& f, const Vocabulary& v) {
    if (f.max_atom_index_plus_one() > v.size()) throw UnknownAtom("formula references an atom outside the vocabulary");
    WorldSet s(v.world_count());
    for (std::size_t k = 0; k < v.world_count(); ++k) {
        World w{static_cast<std::uint32_t>(k)};
        if (f.evaluate(w, v.size())) s.insert(w);
    }
    return s;
}

inline bool entails(const Formula& a, const Formula& b, const Vocabulary& v) {
    return models(a, v).subset_of(models(b, v));
}

inline bool equivalent(const Formula& a, const Formula& b, const Vocabulary& v) { return models(a, v) == models(b, v); }

// Conjunction of literals identifying exactly w.
inline Formula world_formula(World w, const Vocabulary& v) {
    Formula f = truth(w, 0, v.size()) ? Formula::atom(0) : Formula::negation(Formula::atom(0));
    for (std::size_t i = 1; i < v.size(); ++i) {
        Formula lit = truth(w, i, v.size()) ? Formula::atom(i) : Formula::negation(Formula::atom(i));
        f = Formula::conjunction(f, lit);
    }
    return f;
}

inline Formula formula_of_world_set(const WorldSet& s, const Vocabulary& v) {
    if (s.empty()) return Formula::bottom();
    if (s.size() == v.world_count()) return Formula::top();
    std::optional<Formula> f;
    for (World w : s.members()) f = f ? Formula::disjunction(*f, world_formula(w, v)) : world_formula(w, v);
    return *f;
}

// Convenience for call sites that start from text.
inline WorldSet models_of(std::string_view text, const Vocabulary& v) { return models(parse_formula(text, v), v); }

} // namespace edi
