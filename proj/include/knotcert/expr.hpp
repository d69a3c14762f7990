// The knot expression language: expression trees over the unknot, positive
// torus knots, mirror/reverse, connected sums, Whitehead doubles and twisted
// satellites; the s-expression parser; and the normalization rewrites.

#pragma once

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "knotcert/pattern.hpp"
#include "knotcert/trace.hpp"

namespace knotcert {

// A reference to a pattern: a registry name, a twisted pattern, or a
// composition (kept as a left-nested chain).
struct PatternRef {
    enum class Kind { Name, Twist, Compose };

    Kind kind = Kind::Name;
    std::string name;             // Name
    int t = 0;                    // Twist
    std::vector<PatternRef> parts; // Twist: {inner}; Compose: {left, right}

    static PatternRef named(std::string n) {
        PatternRef r;
        r.kind = Kind::Name;
        r.name = std::move(n);
        return r;
    }
    static PatternRef twisted(PatternRef inner, int t) {
        // Twists accumulate: Twist(Twist(P, a), b) = Twist(P, a+b).
        if (inner.kind == Kind::Twist) {
            int total = inner.t + t;
            PatternRef base = inner.parts[0];
            return twisted_flat(std::move(base), total);
        }
        return twisted_flat(std::move(inner), t);
    }
    static PatternRef twisted_flat(PatternRef inner, int t) {
        PatternRef r;
        r.kind = Kind::Twist;
        r.t = t;
        r.parts.push_back(std::move(inner));
        return r;
    }
    static PatternRef composed(PatternRef left, PatternRef right) {
        // Associativity-normalize: Compose(x, Compose(y, z)) -> Compose(Compose(x, y), z).
        if (right.kind == Kind::Compose) {
            PatternRef rl = right.parts[0];
            PatternRef rr = right.parts[1];
            return composed(composed(std::move(left), std::move(rl)), std::move(rr));
        }
        PatternRef r;
        r.kind = Kind::Compose;
        r.parts.push_back(std::move(left));
        r.parts.push_back(std::move(right));
        return r;
    }
};

inline int winding_number(const PatternRef& p, const Registry& reg) {
    switch (p.kind) {
    case PatternRef::Kind::Name: return reg.at(p.name).w;
    case PatternRef::Kind::Twist: return winding_number(p.parts[0], reg);
    case PatternRef::Kind::Compose:
        return winding_number(p.parts[0], reg) * winding_number(p.parts[1], reg);
    }
    return 0;
}

inline PatternDatum resolve_pattern(const PatternRef& p, const Registry& reg) {
    switch (p.kind) {
    case PatternRef::Kind::Name: return reg.at(p.name);
    case PatternRef::Kind::Twist: return twist_pattern(resolve_pattern(p.parts[0], reg), p.t);
    case PatternRef::Kind::Compose:
        return compose_patterns(resolve_pattern(p.parts[0], reg), resolve_pattern(p.parts[1], reg));
    }
    throw RuleError("unreachable pattern kind");
}

inline std::string to_string(const PatternRef& p) {
    switch (p.kind) {
    case PatternRef::Kind::Name: return p.name;
    case PatternRef::Kind::Twist:
        return "(twist " + to_string(p.parts[0]) + " " + std::to_string(p.t) + ")";
    case PatternRef::Kind::Compose:
        return "(compose " + to_string(p.parts[0]) + " " + to_string(p.parts[1]) + ")";
    }
    return "";
}

inline int compare(const PatternRef& a, const PatternRef& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
    case PatternRef::Kind::Name:
        return a.name.compare(b.name);
    case PatternRef::Kind::Twist: {
        if (a.t != b.t) return a.t < b.t ? -1 : 1;
        return compare(a.parts[0], b.parts[0]);
    }
    case PatternRef::Kind::Compose: {
        if (int c = compare(a.parts[0], b.parts[0])) return c;
        return compare(a.parts[1], b.parts[1]);
    }
    }
    return 0;
}

struct KnotExpr {
    enum class Kind { Unknot, Torus, Mirror, Reverse, Sum, Wh, Sat };

    Kind kind = Kind::Unknot;
    int p = 0, q = 0;              // Torus
    PatternRef pattern;            // Sat
    int twist = 0;                 // Sat
    std::vector<KnotExpr> args;    // children

    static KnotExpr unknot() { return KnotExpr{}; }
    static KnotExpr torus(int p, int q) {
        if (p > q) std::swap(p, q);
        if (p < 2) throw RuleError("torus parameters must be at least 2");
        if (std::gcd(p, q) != 1) throw RuleError("torus parameters must be coprime");
        KnotExpr e;
        e.kind = Kind::Torus;
        e.p = p;
        e.q = q;
        return e;
    }
    static KnotExpr mirror(KnotExpr k) {
        KnotExpr e;
        e.kind = Kind::Mirror;
        e.args.push_back(std::move(k));
        return e;
    }
    static KnotExpr reverse(KnotExpr k) {
        KnotExpr e;
        e.kind = Kind::Reverse;
        e.args.push_back(std::move(k));
        return e;
    }
    static KnotExpr sum(std::vector<KnotExpr> terms) {
        KnotExpr e;
        e.kind = Kind::Sum;
        e.args = std::move(terms);
        return e;
    }
    static KnotExpr wh(KnotExpr k) {
        KnotExpr e;
        e.kind = Kind::Wh;
        e.args.push_back(std::move(k));
        return e;
    }
    static KnotExpr sat(PatternRef pat, int r, KnotExpr companion) {
        KnotExpr e;
        e.kind = Kind::Sat;
        e.pattern = std::move(pat);
        e.twist = r;
        e.args.push_back(std::move(companion));
        return e;
    }

    // The concordance inverse -K = reverse of the mirror image.
    static KnotExpr negate(KnotExpr k) { return reverse(mirror(std::move(k))); }
};

inline int compare(const KnotExpr& a, const KnotExpr& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (a.p != b.p) return a.p < b.p ? -1 : 1;
    if (a.q != b.q) return a.q < b.q ? -1 : 1;
    if (a.twist != b.twist) return a.twist < b.twist ? -1 : 1;
    if (a.kind == KnotExpr::Kind::Sat)
        if (int c = compare(a.pattern, b.pattern)) return c;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i])) return c;
    return 0;
}

inline bool operator==(const KnotExpr& a, const KnotExpr& b) { return compare(a, b) == 0; }
inline bool operator!=(const KnotExpr& a, const KnotExpr& b) { return compare(a, b) != 0; }
inline bool operator<(const KnotExpr& a, const KnotExpr& b) { return compare(a, b) < 0; }

inline std::string to_string(const KnotExpr& e) {
    switch (e.kind) {
    case KnotExpr::Kind::Unknot: return "unknot";
    case KnotExpr::Kind::Torus:
        return "(torus " + std::to_string(e.p) + " " + std::to_string(e.q) + ")";
    case KnotExpr::Kind::Mirror: return "(mirror " + to_string(e.args[0]) + ")";
    case KnotExpr::Kind::Reverse: return "(rev " + to_string(e.args[0]) + ")";
    case KnotExpr::Kind::Sum: {
        std::string s = "(sum";
        for (const auto& a : e.args) s += " " + to_string(a);
        return s + ")";
    }
    case KnotExpr::Kind::Wh: return "(wh " + to_string(e.args[0]) + ")";
    case KnotExpr::Kind::Sat:
        return "(sat " + to_string(e.pattern) + " :r " + std::to_string(e.twist) + " " +
               to_string(e.args[0]) + ")";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    size_t pos() const { return pos_; }

    char peek() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        return text_[pos_];
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "' at position " + std::to_string(pos_),
                             pos_);
        ++pos_;
    }

    std::string word() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '-' || text_[pos_] == ':'))
            ++pos_;
        if (start == pos_)
            throw ParseError("expected a token at position " + std::to_string(start), start);
        return text_.substr(start, pos_ - start);
    }

    int integer() {
        std::string w = word();
        size_t idx = 0;
        try {
            int v = std::stoi(w, &idx);
            if (idx != w.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected an integer, got '" + w + "'", pos_);
        }
    }

private:
    const std::string& text_;
    size_t pos_ = 0;
};

inline KnotExpr parse_rec(Lexer& lex, const Registry& reg) {
    if (lex.peek() != '(') {
        size_t at = lex.pos();
        std::string w = lex.word();
        if (w == "unknot") return KnotExpr::unknot();
        throw ParseError("expected '(' or 'unknot', got '" + w + "' at position " +
                             std::to_string(at),
                         at);
    }
    lex.expect('(');
    size_t at = lex.pos();
    std::string op = lex.word();
    KnotExpr result;
    if (op == "torus") {
        int p = lex.integer();
        int q = lex.integer();
        size_t err_at = lex.pos();
        if (p < 2 || q < 2) throw ParseError("torus parameters must be at least 2", err_at);
        if (std::gcd(p, q) == 0 || std::gcd(p, q) != 1)
            throw ParseError("torus parameters must be coprime", err_at);
        result = KnotExpr::torus(p, q);
    } else if (op == "mirror") {
        result = KnotExpr::mirror(parse_rec(lex, reg));
    } else if (op == "rev") {
        result = KnotExpr::reverse(parse_rec(lex, reg));
    } else if (op == "sum") {
        std::vector<KnotExpr> terms;
        terms.push_back(parse_rec(lex, reg));
        terms.push_back(parse_rec(lex, reg));
        while (lex.peek() != ')') terms.push_back(parse_rec(lex, reg));
        result = KnotExpr::sum(std::move(terms));
    } else if (op == "wh") {
        result = KnotExpr::wh(parse_rec(lex, reg));
    } else if (op == "sat") {
        size_t name_at = lex.pos();
        std::string name = lex.word();
        if (!reg.contains(name))
            throw ParseError("unknown pattern name '" + name + "'", name_at);
        std::string kw = lex.word();
        if (kw != ":r")
            throw ParseError("expected ':r' after pattern name, got '" + kw + "'", name_at);
        int r = lex.integer();
        result = KnotExpr::sat(PatternRef::named(name), r, parse_rec(lex, reg));
    } else {
        throw ParseError("unknown operator '" + op + "' at position " + std::to_string(at), at);
    }
    lex.expect(')');
    return result;
}

} // namespace detail

// Parses an expression. Throws ParseError with a byte position on failure.
inline KnotExpr parse_expr(const std::string& text, const Registry& reg) {
    detail::Lexer lex(text);
    KnotExpr e = detail::parse_rec(lex, reg);
    if (!lex.at_end())
        throw ParseError("trailing input at position " + std::to_string(lex.pos()), lex.pos());
    return e;
}

// ---------------------------------------------------------------------------
// Normalization

namespace detail {

KnotExpr normalize_rec(KnotExpr e, const Registry& reg);

inline KnotExpr normalize_mirror(KnotExpr inner, const Registry& reg) {
    switch (inner.kind) {
    case KnotExpr::Kind::Unknot: return inner;
    case KnotExpr::Kind::Mirror: return inner.args[0];
    case KnotExpr::Kind::Reverse:
        // Canonical order: Reverse outside Mirror.
        return normalize_rec(KnotExpr::reverse(KnotExpr::mirror(inner.args[0])), reg);
    case KnotExpr::Kind::Sum: {
        std::vector<KnotExpr> terms;
        for (auto& a : inner.args) terms.push_back(KnotExpr::mirror(std::move(a)));
        return normalize_rec(KnotExpr::sum(std::move(terms)), reg);
    }
    default:
        return KnotExpr::mirror(std::move(inner));
    }
}

inline KnotExpr normalize_reverse(KnotExpr inner, const Registry& reg) {
    switch (inner.kind) {
    case KnotExpr::Kind::Unknot: return inner;
    case KnotExpr::Kind::Reverse: return inner.args[0];
    case KnotExpr::Kind::Sum: {
        std::vector<KnotExpr> terms;
        for (auto& a : inner.args) terms.push_back(KnotExpr::reverse(std::move(a)));
        return normalize_rec(KnotExpr::sum(std::move(terms)), reg);
    }
    default:
        return KnotExpr::reverse(std::move(inner));
    }
}

inline KnotExpr normalize_rec(KnotExpr e, const Registry& reg) {
    // Normalize children first.
    for (auto& a : e.args) a = normalize_rec(std::move(a), reg);

    switch (e.kind) {
    case KnotExpr::Kind::Mirror:
        return normalize_mirror(std::move(e.args[0]), reg);
    case KnotExpr::Kind::Reverse:
        return normalize_reverse(std::move(e.args[0]), reg);
    case KnotExpr::Kind::Sum: {
        std::vector<KnotExpr> flat;
        for (auto& a : e.args) {
            if (a.kind == KnotExpr::Kind::Sum)
                for (auto& s : a.args) flat.push_back(std::move(s));
            else if (a.kind == KnotExpr::Kind::Unknot)
                ; // identity element
            else
                flat.push_back(std::move(a));
        }
        if (flat.empty()) return KnotExpr::unknot();
        if (flat.size() == 1) return flat[0];
        std::sort(flat.begin(), flat.end());
        return KnotExpr::sum(std::move(flat));
    }
    case KnotExpr::Kind::Sat: {
        // Sat(P, s, Sat(Q, r, K)) -> Sat(Compose(Twist(P, s-r), Q), r, K)
        // exactly when w(Q) = +-1 or r = 0.
        while (e.args[0].kind == KnotExpr::Kind::Sat) {
            const KnotExpr& inner = e.args[0];
            int r = inner.twist;
            int wq = winding_number(inner.pattern, reg);
            if (!(wq == 1 || wq == -1 || r == 0)) break;
            int s = e.twist;
            PatternRef composed = PatternRef::composed(
                PatternRef::twisted(e.pattern, s - r), inner.pattern);
            KnotExpr companion = inner.args[0];
            e = KnotExpr::sat(std::move(composed), r, std::move(companion));
        }
        return e;
    }
    default:
        return e;
    }
}

} // namespace detail

// Idempotent normalization: sums flattened/sorted with unknot terms removed,
// mirror/reverse pushed toward the leaves with double negations cancelled,
// and nested satellites collapsed through the pattern composition when the
// inner winding number is a unit or the inner twist is zero.
inline KnotExpr normalize(KnotExpr e, const Registry& reg) {
    return detail::normalize_rec(std::move(e), reg);
}

// Collects e and all subexpressions, depth first.
inline void collect_subexprs(const KnotExpr& e, std::vector<KnotExpr>& out) {
    for (const auto& a : e.args) collect_subexprs(a, out);
    out.push_back(e);
}

} // namespace knotcert
