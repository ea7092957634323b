#ifndef ICOH_MODEL_HPP
#define ICOH_MODEL_HPP

#include "forms.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icoh {

// ---------------------------------------------------------------------------
// Polynomials in the parameters and their conjugates. A monomial stores the
// exponents of (p_1..p_m, conj p_1..conj p_m).

using PolyMono = std::vector<int>;

class Poly {
public:
    using Terms = std::map<PolyMono, GaussScalar>;

    Poly() = default;
    explicit Poly(int nparams) : np_(nparams) {}

    static Poly constant(int nparams, const GaussScalar& c) {
        Poly p(nparams);
        p.add(PolyMono(2 * nparams, 0), c);
        return p;
    }
    static Poly param(int nparams, int k, bool conj = false) {
        Poly p(nparams);
        PolyMono m(2 * nparams, 0);
        m[conj ? nparams + k : k] = 1;
        p.add(m, GaussScalar(1));
        return p;
    }

    int nparams() const { return np_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::optional<GaussScalar> as_constant() const {
        if (terms_.empty()) return GaussScalar(0);
        if (terms_.size() != 1) return std::nullopt;
        const auto& [m, c] = *terms_.begin();
        for (int e : m)
            if (e != 0) return std::nullopt;
        return c;
    }

    void add(const PolyMono& m, const GaussScalar& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out(a.np_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                PolyMono m = ma;
                for (std::size_t k = 0; k < m.size(); ++k) m[k] += mb[k];
                out.add(m, ca * cb);
            }
        return out;
    }
    Poly scaled(const GaussScalar& s) const {
        Poly out(np_);
        for (const auto& [m, c] : terms_) out.add(m, c * s);
        return out;
    }

    Poly conj() const {
        Poly out(np_);
        for (const auto& [m, c] : terms_) {
            PolyMono n(m.size());
            for (int k = 0; k < np_; ++k) {
                n[k] = m[np_ + k];
                n[np_ + k] = m[k];
            }
            out.add(n, c.conj());
        }
        return out;
    }

    GaussScalar evaluate(const std::vector<GaussScalar>& values) const {
        GaussScalar acc;
        for (const auto& [m, c] : terms_) {
            GaussScalar t = c;
            for (int k = 0; k < np_; ++k) {
                for (int e = 0; e < m[k]; ++e) t *= values[k];
                for (int e = 0; e < m[np_ + k]; ++e) t *= values[k].conj();
            }
            acc += t;
        }
        return acc;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

private:
    int np_ = 0;
    Terms terms_;
};

inline std::string render_poly(const Poly& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    const int np = p.nparams();
    for (const auto& [m, c] : p.terms()) {
        std::string factors;
        for (int k = 0; k < np; ++k) {
            if (m[k] > 0) factors += "*" + names[k] + (m[k] > 1 ? "^" + std::to_string(m[k]) : "");
        }
        for (int k = 0; k < np; ++k) {
            for (int e = 0; e < m[np + k]; ++e) factors += "*conj(" + names[k] + ")";
        }
        GaussScalar coef = c;
        bool neg = coef.is_real() ? sgn(coef.re()) < 0 : (sgn(coef.re()) == 0 && sgn(coef.im()) < 0);
        if (neg) coef = -coef;
        std::string cs;
        if (!coef.is_one() || factors.empty()) cs = to_display(coef);
        std::string term = cs.empty() ? factors.substr(1) : cs + factors;
        if (first)
            out += neg ? "-" + term : term;
        else
            out += neg ? " - " + term : " + " + term;
        first = false;
    }
    return out;
}

// Twisted form whose coefficients are parameter polynomials.
struct SymForm {
    std::map<Key, Poly, KeyLess> terms;

    void add(const Key& k, const Poly& c) {
        if (c.is_zero()) return;
        auto it = terms.find(k);
        if (it == terms.end()) {
            terms.emplace(k, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const SymForm& a, const SymForm& b) { return a.terms == b.terms; }
};

// ---------------------------------------------------------------------------

struct CharacterGen {
    std::string name;
    SymForm differential;
    int partner = -1;
    friend bool operator==(const CharacterGen&, const CharacterGen&) = default;
};

struct LatticeRule {
    Rational mu_over_pi;
    friend bool operator==(const LatticeRule& a, const LatticeRule& b) { return a.mu_over_pi == b.mu_over_pi; }
};

struct ModelSpec {
    std::string name;
    std::string family;
    int n = 0;
    std::vector<std::string> params;
    std::vector<Poly> constraints;  // each polynomial must vanish
    std::vector<SymForm> d_table;   // d eta^j, j = 1..n
    std::vector<CharacterGen> chars;
    // weight[j-1]: character factor carried by eta^j relative to a closed
    // coordinate form; used to build the lattice subcomplexes
    std::vector<CharMonomial> weights;
    std::optional<LatticeRule> lattice;

    int nchar() const { return static_cast<int>(chars.size()); }
    std::vector<std::string> char_names() const {
        std::vector<std::string> v;
        for (const auto& c : chars) v.push_back(c.name);
        return v;
    }
    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

using ParamBinding = std::map<std::string, GaussScalar>;

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

class BindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline int generator_index(const std::string& name, const std::string& prefix) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return -1;
    for (std::size_t k = prefix.size(); k < name.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(name[k]))) return -1;
    return std::stoi(name.substr(prefix.size()));
}

struct Token {
    enum Kind { Ident, Number, Imag, Sym, End } kind = End;
    std::string text;
    int col = 0;
};

inline std::vector<Token> tokenize(const std::string& s, int line, int col0) {
    std::vector<Token> out;
    std::size_t k = 0;
    while (k < s.size()) {
        char c = s[k];
        int col = col0 + static_cast<int>(k);
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++k;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = k;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Token::Ident, s.substr(k, j - k), col});
            k = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = k;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && s[j] == 'i' &&
                !(j + 1 < s.size() && (std::isalnum(static_cast<unsigned char>(s[j + 1])) || s[j + 1] == '_'))) {
                out.push_back({Token::Imag, s.substr(k, j - k), col});
                k = j + 1;
                continue;
            }
            out.push_back({Token::Number, s.substr(k, j - k), col});
            k = j;
            continue;
        }
        if (std::string("+-*/^()=,|[]").find(c) != std::string::npos) {
            out.push_back({Token::Sym, std::string(1, c), col});
            ++k;
            continue;
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Token::End, "", col0 + static_cast<int>(s.size())});
    return out;
}

class ExprParser {
public:
    ExprParser(const ModelSpec& spec, std::vector<Token> toks, std::size_t start, int line)
        : spec_(spec), toks_(std::move(toks)), pos_(start), line_(line) {}

    SymForm parse_all() {
        SymForm f = expr();
        if (peek().kind != Token::End) fail(peek(), "unexpected '" + peek().text + "'");
        return f;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(line_, t.col, msg); }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(const std::string& sym) {
        if (peek().kind == Token::Sym && peek().text == sym) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(const std::string& sym) {
        if (!accept(sym)) fail(peek(), "expected '" + sym + "'");
    }

    int np() const { return static_cast<int>(spec_.params.size()); }
    CharMonomial zero_ch() const { return CharMonomial(spec_.chars.size(), 0); }

    SymForm constant(const GaussScalar& c) const {
        SymForm f;
        f.add(Key{zero_ch(), {}}, Poly::constant(np(), c));
        return f;
    }

    static SymForm plus(SymForm a, const SymForm& b, bool minus) {
        for (const auto& [k, c] : b.terms) a.add(k, minus ? c.scaled(GaussScalar(-1)) : c);
        return a;
    }

    static SymForm times(const SymForm& a, const SymForm& b) {
        SymForm out;
        for (const auto& [ka, ca] : a.terms)
            for (const auto& [kb, cb] : b.terms) {
                MultiIndex m;
                int s = wedge_sign(ka.idx, kb.idx, m);
                if (s == 0) continue;
                CharMonomial ch = ka.ch;
                for (std::size_t i = 0; i < ch.size(); ++i) ch[i] += kb.ch[i];
                Poly c = ca * cb;
                out.add(Key{std::move(ch), m}, s > 0 ? c : c.scaled(GaussScalar(-1)));
            }
        return out;
    }

    std::optional<Poly> as_scalar(const SymForm& f) const {
        if (f.is_zero()) return Poly(np());
        if (f.terms.size() != 1) return std::nullopt;
        const auto& [k, c] = *f.terms.begin();
        if (k.idx.holo || k.idx.anti) return std::nullopt;
        for (int e : k.ch)
            if (e != 0) return std::nullopt;
        return c;
    }

    SymForm from_poly(const Poly& p) const {
        SymForm f;
        f.add(Key{zero_ch(), {}}, p);
        return f;
    }

    SymForm expr() {
        SymForm acc;
        bool neg = false;
        if (accept("-"))
            neg = true;
        else
            accept("+");
        acc = term();
        if (neg) acc = plus(SymForm{}, acc, true);
        while (true) {
            if (accept("+"))
                acc = plus(acc, term(), false);
            else if (accept("-"))
                acc = plus(acc, term(), true);
            else
                break;
        }
        return acc;
    }

    SymForm term() {
        SymForm acc = unary();
        while (true) {
            if (accept("*")) {
                acc = times(acc, unary());
            } else if (peek().kind == Token::Sym && peek().text == "/") {
                const Token& t = next();
                SymForm d = unary();
                auto p = as_scalar(d);
                std::optional<GaussScalar> c = p ? p->as_constant() : std::nullopt;
                if (!c) fail(t, "division only by a constant scalar");
                if (c->is_zero()) fail(t, "division by zero");
                acc = times(acc, constant(c->inverse()));
            } else {
                break;
            }
        }
        return acc;
    }

    SymForm unary() {
        if (accept("-")) return plus(SymForm{}, unary(), true);
        return power();
    }

    SymForm power() {
        const Token& t = peek();
        SymForm base = primary();
        if (!accept("^")) return base;
        bool neg = accept("-");
        const Token& e = next();
        if (e.kind != Token::Number) fail(e, "expected integer exponent");
        int k = std::stoi(e.text);
        if (neg) k = -k;
        // characters accept any integer exponent; scalars only k >= 0
        if (base.terms.size() == 1) {
            const auto& [key, c] = *base.terms.begin();
            bool pure_char = !key.idx.holo && !key.idx.anti && c.as_constant() && c.as_constant()->is_one();
            bool has_char = false;
            for (int x : key.ch)
                if (x != 0) has_char = true;
            if (pure_char && has_char) {
                CharMonomial ch = key.ch;
                for (int& x : ch) x *= k;
                SymForm f;
                f.add(Key{ch, {}}, Poly::constant(np(), GaussScalar(1)));
                return f;
            }
        }
        auto p = as_scalar(base);
        if (!p) fail(t, "only scalars and characters can be raised to a power");
        if (k < 0) fail(e, "negative exponent on a scalar");
        Poly r = Poly::constant(np(), GaussScalar(1));
        for (int j = 0; j < k; ++j) r = r * *p;
        return from_poly(r);
    }

    SymForm primary() {
        const Token& t = next();
        switch (t.kind) {
            case Token::Number:
                return constant(GaussScalar(make_rational(t.text)));
            case Token::Imag:
                return constant(GaussScalar(Rational(0), make_rational(t.text)));
            case Token::Sym:
                if (t.text == "(") {
                    SymForm f = expr();
                    expect(")");
                    return f;
                }
                fail(t, "unexpected '" + t.text + "'");
            case Token::Ident:
                return ident(t);
            default:
                fail(t, "unexpected end of expression");
        }
    }

    SymForm ident(const Token& t) {
        if (t.text == "i") return constant(GaussScalar::i());
        if (t.text == "e" && peek().kind == Token::Sym && peek().text == "[") return form_literal();
        if (t.text == "conj" || t.text == "re" || t.text == "im") {
            expect("(");
            const Token& at = peek();
            SymForm a = expr();
            expect(")");
            auto p = as_scalar(a);
            if (!p) fail(at, t.text + "() applies to scalar expressions only");
            Poly c = p->conj();
            if (t.text == "conj") return from_poly(c);
            if (t.text == "re") return from_poly((*p + c).scaled(GaussScalar(Rational(1, 2))));
            return from_poly((*p - c).scaled(GaussScalar(Rational(0), Rational(-1, 2))));
        }
        if (int j = generator_index(t.text, "e"); j >= 0) {
            if (j < 1 || j > spec_.n) fail(t, "unknown coframe symbol '" + t.text + "'");
            FormExpr m = FormExpr::monomial(spec_.n, static_cast<int>(spec_.chars.size()), {j}, {});
            SymForm f;
            for (const auto& [k, c] : m.terms()) f.add(k, Poly::constant(np(), c));
            return f;
        }
        for (int k = 0; k < np(); ++k)
            if (spec_.params[k] == t.text) return from_poly(Poly::param(np(), k));
        for (std::size_t k = 0; k < spec_.chars.size(); ++k)
            if (spec_.chars[k].name == t.text) {
                CharMonomial ch = zero_ch();
                ch[k] = 1;
                SymForm f;
                f.add(Key{ch, {}}, Poly::constant(np(), GaussScalar(1)));
                return f;
            }
        fail(t, "unknown symbol '" + t.text + "'");
    }

    std::vector<int> index_list(const std::string& stop) {
        std::vector<int> v;
        while (!(peek().kind == Token::Sym && peek().text == stop)) {
            const Token& t = next();
            if (t.kind == Token::Sym && t.text == ",") continue;
            if (t.kind != Token::Number) fail(t, "expected coframe index");
            int j = std::stoi(t.text);
            if (j < 1 || j > spec_.n) fail(t, "unknown coframe symbol e" + t.text);
            v.push_back(j);
        }
        return v;
    }

    SymForm form_literal() {
        const Token& open = next();  // '['
        std::vector<int> h = index_list("|");
        expect("|");
        std::vector<int> a = index_list("]");
        expect("]");
        std::set<int> hs(h.begin(), h.end()), as(a.begin(), a.end());
        if (hs.size() != h.size() || as.size() != a.size()) fail(open, "repeated coframe index");
        FormExpr m = FormExpr::monomial(spec_.n, static_cast<int>(spec_.chars.size()), h, a);
        SymForm f;
        for (const auto& [k, c] : m.terms()) f.add(k, Poly::constant(np(), c));
        return f;
    }

    const ModelSpec& spec_;
    std::vector<Token> toks_;
    std::size_t pos_;
    int line_;
};

inline bool reserved(const std::string& s) {
    static const std::set<std::string> words = {"i",     "e",      "conj", "re",   "im",     "model", "dim",
                                                "param", "constraint", "char", "d", "lattice", "mu",  "pi",
                                                "weight", "family"};
    return words.count(s) > 0 || generator_index(s, "e") >= 0;
}

}  // namespace detail

// Model DSL. One statement per line or separated by ';'; '#' starts a comment.
//   model NAME dim N
//   family TAG
//   param a b ...
//   constraint EXPR = EXPR
//   char c1 conj c2
//   d c1 = EXPR            (degree 1)
//   weight e2 = c1^1       (character monomial)
//   lattice mu = 1/2 pi
//   d eJ = EXPR            (total degree 2)
inline ModelSpec parse_model(const std::string& text) {
    using detail::Token;
    ModelSpec spec;
    bool have_header = false;
    std::vector<bool> d_seen;
    std::vector<bool> char_d_seen;
    std::vector<bool> weight_seen;
    std::vector<std::pair<std::string, std::pair<int, int>>> pending_partners;
    std::set<std::string> names;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string body = raw.substr(0, raw.find('#'));
        std::size_t start = 0;
        while (start <= body.size()) {
            std::size_t semi = body.find(';', start);
            std::string stmt = body.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
            int col0 = static_cast<int>(start) + 1;
            start = semi == std::string::npos ? body.size() + 1 : semi + 1;
            auto toks = detail::tokenize(stmt, line, col0);
            if (toks.front().kind == Token::End) continue;
            const Token& kw = toks[0];
            auto fail = [&](const Token& t, const std::string& msg) -> void { throw ParseError(line, t.col, msg); };
            auto ident_at = [&](std::size_t k, const std::string& what) -> const Token& {
                if (toks[k].kind != Token::Ident) fail(toks[k], "expected " + what);
                return toks[k];
            };
            auto sym_at = [&](std::size_t k, const std::string& s) {
                if (!(toks[k].kind == Token::Sym && toks[k].text == s)) fail(toks[k], "expected '" + s + "'");
            };
            if (kw.kind != Token::Ident) fail(kw, "expected a statement keyword");
            if (kw.text == "model") {
                if (have_header) fail(kw, "duplicate model header");
                spec.name = ident_at(1, "model name").text;
                if (!(toks[2].kind == Token::Ident && toks[2].text == "dim")) fail(toks[2], "expected 'dim'");
                if (toks[3].kind != Token::Number) fail(toks[3], "expected dimension");
                spec.n = std::stoi(toks[3].text);
                if (spec.n < 1 || spec.n > kMaxDim) fail(toks[3], "dimension out of range");
                if (toks[4].kind != Token::End) fail(toks[4], "unexpected token");
                spec.d_table.assign(spec.n, SymForm{});
                spec.weights.assign(spec.n, CharMonomial{});
                d_seen.assign(spec.n, false);
                weight_seen.assign(spec.n, false);
                have_header = true;
                continue;
            }
            if (!have_header) fail(kw, "expected 'model NAME dim N' first");
            if (kw.text == "family") {
                spec.family = ident_at(1, "family tag").text;
                if (toks[2].kind != Token::End) fail(toks[2], "unexpected token");
            } else if (kw.text == "param") {
                if (!spec.chars.empty()) fail(kw, "parameters must be declared before characters");
                for (std::size_t k = 1; toks[k].kind != Token::End; ++k) {
                    const Token& t = ident_at(k, "parameter name");
                    if (detail::reserved(t.text)) fail(t, "reserved name '" + t.text + "'");
                    if (!names.insert(t.text).second) fail(t, "duplicate name '" + t.text + "'");
                    spec.params.push_back(t.text);
                }
                for (auto& f : spec.d_table)
                    if (!f.is_zero()) fail(kw, "parameters must be declared before structure equations");
                if (!spec.constraints.empty()) fail(kw, "parameters must be declared before constraints");
            } else if (kw.text == "constraint") {
                std::size_t eq = 0;
                for (std::size_t k = 1; k < toks.size(); ++k)
                    if (toks[k].kind == Token::Sym && toks[k].text == "=") eq = k;
                if (eq == 0) fail(kw, "constraint needs '='");
                std::vector<Token> lhs(toks.begin(), toks.begin() + eq);
                lhs.push_back({Token::End, "", toks[eq].col});
                std::vector<Token> rhs(toks.begin() + eq + 1, toks.end());
                if (lhs.size() <= 2) fail(toks[eq], "empty left-hand side");
                SymForm l = detail::ExprParser(spec, lhs, 1, line).parse_all();
                SymForm r = detail::ExprParser(spec, rhs, 0, line).parse_all();
                Poly p(static_cast<int>(spec.params.size()));
                for (const auto& [k, c] : l.terms) {
                    if (k.idx.holo || k.idx.anti) fail(toks[1], "constraint must be scalar");
                    p += c;
                }
                for (const auto& [k, c] : r.terms) {
                    if (k.idx.holo || k.idx.anti) fail(toks[eq + 1], "constraint must be scalar");
                    p -= c;
                }
                spec.constraints.push_back(p);
            } else if (kw.text == "char") {
                const Token& nm = ident_at(1, "character name");
                if (detail::reserved(nm.text)) fail(nm, "reserved name '" + nm.text + "'");
                if (!names.insert(nm.text).second) fail(nm, "duplicate name '" + nm.text + "'");
                if (!(toks[2].kind == Token::Ident && toks[2].text == "conj")) fail(toks[2], "expected 'conj'");
                const Token& pt = ident_at(3, "partner name");
                if (toks[4].kind != Token::End) fail(toks[4], "unexpected token");
                for (const auto& f : spec.d_table)
                    if (!f.is_zero()) fail(kw, "characters must be declared before structure equations");
                for (std::size_t k = 0; k < spec.chars.size(); ++k)
                    if (char_d_seen[k]) fail(kw, "characters must be declared before their differentials");
                spec.chars.push_back(CharacterGen{nm.text, {}, -1});
                char_d_seen.push_back(false);
                pending_partners.push_back({pt.text, {line, pt.col}});
            } else if (kw.text == "weight") {
                const Token& g = ident_at(1, "coframe generator");
                int j = detail::generator_index(g.text, "e");
                if (j < 1 || j > spec.n) fail(g, "unknown coframe symbol '" + g.text + "'");
                if (weight_seen[j - 1]) fail(g, "duplicate weight for " + g.text);
                sym_at(2, "=");
                SymForm w = detail::ExprParser(spec, toks, 3, line).parse_all();
                if (w.terms.size() != 1 || w.terms.begin()->first.idx.holo || w.terms.begin()->first.idx.anti ||
                    !(w.terms.begin()->second.as_constant() && w.terms.begin()->second.as_constant()->is_one()))
                    fail(toks[3], "weight must be a character monomial");
                spec.weights[j - 1] = w.terms.begin()->first.ch;
                weight_seen[j - 1] = true;
            } else if (kw.text == "lattice") {
                if (spec.lattice) fail(kw, "duplicate lattice rule");
                if (!(toks[1].kind == Token::Ident && toks[1].text == "mu")) fail(toks[1], "expected 'mu'");
                sym_at(2, "=");
                std::size_t k = 3;
                Rational r(1);
                if (toks[k].kind == Token::Number) {
                    r = make_rational(toks[k].text);
                    ++k;
                    if (toks[k].kind == Token::Sym && toks[k].text == "/") {
                        if (toks[k + 1].kind != Token::Number) fail(toks[k + 1], "expected denominator");
                        Rational den = make_rational(toks[k + 1].text);
                        if (den == 0) fail(toks[k + 1], "division by zero");
                        r /= den;
                        k += 2;
                    }
                    if (toks[k].kind == Token::Sym && toks[k].text == "*") ++k;
                }
                if (!(toks[k].kind == Token::Ident && toks[k].text == "pi")) fail(toks[k], "expected 'pi'");
                if (toks[k + 1].kind != Token::End) fail(toks[k + 1], "unexpected token");
                if (r <= 0) fail(toks[3], "lattice parameter must be positive");
                spec.lattice = LatticeRule{r};
            } else if (kw.text == "d") {
                const Token& g = ident_at(1, "generator");
                sym_at(2, "=");
                int j = detail::generator_index(g.text, "e");
                if (j >= 0) {
                    if (j < 1 || j > spec.n) fail(g, "unknown coframe symbol '" + g.text + "'");
                    if (d_seen[j - 1]) fail(g, "duplicate structure equation for " + g.text);
                    SymForm f = detail::ExprParser(spec, toks, 3, line).parse_all();
                    for (const auto& [key, c] : f.terms) {
                        for (int e : key.ch)
                            if (e != 0) fail(toks[3], "structure equation must not carry characters");
                        if (total_degree(key.idx) != 2) fail(toks[3], "structure equation must have total degree 2");
                    }
                    spec.d_table[j - 1] = f;
                    d_seen[j - 1] = true;
                    continue;
                }
                int c = -1;
                for (std::size_t k = 0; k < spec.chars.size(); ++k)
                    if (spec.chars[k].name == g.text) c = static_cast<int>(k);
                if (c < 0) fail(g, "unknown generator '" + g.text + "'");
                if (char_d_seen[c]) fail(g, "duplicate differential for " + g.text);
                SymForm f = detail::ExprParser(spec, toks, 3, line).parse_all();
                for (const auto& [key, cf] : f.terms) {
                    for (int e : key.ch)
                        if (e != 0) fail(toks[3], "character differential must not carry characters");
                    if (total_degree(key.idx) != 1) fail(toks[3], "character differential must have degree 1");
                }
                spec.chars[c].differential = f;
                char_d_seen[c] = true;
            } else {
                fail(kw, "unknown statement '" + kw.text + "'");
            }
        }
    }
    if (!have_header) throw ParseError(line > 0 ? line : 1, 1, "missing 'model NAME dim N' header");
    for (std::size_t k = 0; k < spec.chars.size(); ++k) {
        const auto& [pname, pos] = pending_partners[k];
        int p = -1;
        for (std::size_t j = 0; j < spec.chars.size(); ++j)
            if (spec.chars[j].name == pname) p = static_cast<int>(j);
        if (p < 0) throw ParseError(pos.first, pos.second, "unknown conjugate partner '" + pname + "'");
        spec.chars[k].partner = p;
    }
    for (std::size_t k = 0; k < spec.chars.size(); ++k)
        if (spec.chars[spec.chars[k].partner].partner != static_cast<int>(k))
            throw ParseError(pending_partners[k].second.first, pending_partners[k].second.second,
                             "conjugation pairing is not an involution");
    // character exponent vectors were built while characters were being added
    for (auto& w : spec.weights) w.resize(spec.chars.size(), 0);
    if (spec.lattice && spec.chars.size() != 2)
        throw ParseError(line, 1, "lattice rule needs exactly two character generators");
    return spec;
}

inline std::string render_symform(const SymForm& f, const ModelSpec& spec) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : f.terms) {
        std::string factors;
        for (std::size_t i = 0; i < k.ch.size(); ++i)
            if (k.ch[i] != 0) factors += "*" + spec.chars[i].name + "^" + std::to_string(k.ch[i]);
        if (k.idx.holo || k.idx.anti) factors += "*" + render_index(k.idx);
        std::string cs;
        bool neg = false;
        if (auto cc = c.as_constant()) {
            GaussScalar coef = *cc;
            neg = coef.is_real() ? sgn(coef.re()) < 0 : (sgn(coef.re()) == 0 && sgn(coef.im()) < 0);
            if (neg) coef = -coef;
            if (!coef.is_one() || factors.empty()) cs = to_display(coef);
        } else {
            cs = render_poly(c, spec.params);
            if (c.terms().size() > 1) cs = "(" + cs + ")";
        }
        std::string term = cs.empty() ? factors.substr(1) : (factors.empty() ? cs : cs + factors);
        if (first)
            out += neg ? "-" + term : term;
        else
            out += neg ? " - " + term : " + " + term;
        first = false;
    }
    return out;
}

inline std::string render_model(const ModelSpec& spec) {
    std::ostringstream os;
    os << "model " << spec.name << " dim " << spec.n << "\n";
    if (!spec.family.empty()) os << "family " << spec.family << "\n";
    if (!spec.params.empty()) {
        os << "param";
        for (const auto& p : spec.params) os << " " << p;
        os << "\n";
    }
    for (const auto& c : spec.constraints) os << "constraint " << render_poly(c, spec.params) << " = 0\n";
    for (const auto& c : spec.chars) os << "char " << c.name << " conj " << spec.chars[c.partner].name << "\n";
    for (const auto& c : spec.chars) os << "d " << c.name << " = " << render_symform(c.differential, spec) << "\n";
    for (int j = 0; j < spec.n; ++j) {
        bool any = false;
        for (int e : spec.weights[j])
            if (e != 0) any = true;
        if (!any) continue;
        SymForm w;
        w.add(Key{spec.weights[j], {}}, Poly::constant(static_cast<int>(spec.params.size()), GaussScalar(1)));
        os << "weight e" << j + 1 << " = " << render_symform(w, spec) << "\n";
    }
    if (spec.lattice) {
        const Rational& r = spec.lattice->mu_over_pi;
        os << "lattice mu = " << (r == 1 ? std::string("pi") : r.get_str(10) + " pi") << "\n";
    }
    for (int j = 0; j < spec.n; ++j) os << "d e" << j + 1 << " = " << render_symform(spec.d_table[j], spec) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Instantiated model: structure equations with numeric coefficients.

struct Model {
    std::string name;
    std::string family;
    int n = 0;
    std::vector<std::string> char_names;
    std::vector<int> partner;
    std::vector<FormExpr> d_table;     // d eta^j
    std::vector<FormExpr> dbar_table;  // d of conj(eta^j)
    std::vector<FormExpr> char_diff;   // d c = c * char_diff
    std::vector<CharMonomial> weights;
    std::optional<LatticeRule> lattice;
    std::vector<GaussScalar> param_values;

    int nchar() const { return static_cast<int>(char_names.size()); }
    CharMonomial trivial_char() const { return CharMonomial(char_names.size(), 0); }

    FormExpr zero() const { return FormExpr(n, nchar()); }
    FormExpr mono(const std::vector<int>& holo, const std::vector<int>& anti,
                  const GaussScalar& c = GaussScalar(1), CharMonomial ch = {}) const {
        return FormExpr::monomial(n, nchar(), holo, anti, c, std::move(ch));
    }
    FormExpr conj(const FormExpr& f) const { return conjugate(f, partner); }
    std::string render(const FormExpr& f) const { return icoh::render(f, char_names); }
};

inline FormExpr instantiate(const SymForm& f, int n, int nchar, const std::vector<GaussScalar>& values) {
    FormExpr out(n, nchar);
    for (const auto& [k, c] : f.terms) out.add(k, c.evaluate(values));
    return out;
}

inline std::vector<GaussScalar> binding_values(const ModelSpec& spec, const ParamBinding& binding) {
    std::vector<GaussScalar> values;
    for (const auto& p : spec.params) {
        auto it = binding.find(p);
        if (it == binding.end()) throw BindingError("parameter '" + p + "' is not bound");
        values.push_back(it->second);
    }
    for (const auto& [k, v] : binding)
        if (std::find(spec.params.begin(), spec.params.end(), k) == spec.params.end())
            throw BindingError("unknown parameter '" + k + "'");
    return values;
}

inline bool satisfies_constraints(const ModelSpec& spec, const ParamBinding& binding) {
    auto values = binding_values(spec, binding);
    for (const auto& c : spec.constraints)
        if (!c.evaluate(values).is_zero()) return false;
    return true;
}

// Binding in declaration order, e.g. {0,1,0,0,0,0}.
inline ParamBinding make_binding(const ModelSpec& spec, const std::vector<GaussScalar>& values) {
    if (values.size() != spec.params.size())
        throw BindingError("expected " + std::to_string(spec.params.size()) + " parameter values, got " +
                           std::to_string(values.size()));
    ParamBinding b;
    for (std::size_t k = 0; k < values.size(); ++k) b[spec.params[k]] = values[k];
    return b;
}

inline Model bind_model(const ModelSpec& spec, const ParamBinding& binding) {
    auto values = binding_values(spec, binding);
    for (std::size_t k = 0; k < spec.constraints.size(); ++k)
        if (!spec.constraints[k].evaluate(values).is_zero())
            throw BindingError("binding violates constraint " + render_poly(spec.constraints[k], spec.params) +
                               " = 0");
    Model m;
    m.name = spec.name;
    m.family = spec.family;
    m.n = spec.n;
    m.char_names = spec.char_names();
    for (const auto& c : spec.chars) m.partner.push_back(c.partner);
    const int nc = spec.nchar();
    for (const auto& f : spec.d_table) m.d_table.push_back(instantiate(f, spec.n, nc, values));
    for (const auto& f : m.d_table) m.dbar_table.push_back(conjugate(f, m.partner));
    for (const auto& c : spec.chars) m.char_diff.push_back(instantiate(c.differential, spec.n, nc, values));
    m.weights = spec.weights;
    m.lattice = spec.lattice;
    m.param_values = values;
    return m;
}

// Form text in the canonical syntax, e.g. "(1+2i)*c1^1*c2^-1*e[1,2|3]",
// with parameters evaluated at the model's binding.
inline FormExpr parse_form(const ModelSpec& spec, const Model& m, const std::string& text) {
    auto toks = detail::tokenize(text, 1, 1);
    if (toks.front().kind == detail::Token::End) throw ParseError(1, 1, "empty form");
    SymForm f = detail::ExprParser(spec, toks, 0, 1).parse_all();
    return instantiate(f, m.n, m.nchar(), m.param_values);
}

// Exponents (p, q) on (first generator, its partner).
inline bool lattice_trivial(const LatticeRule& rule, const CharMonomial& m) {
    if (m.size() != 2) throw std::invalid_argument("lattice rule expects two character generators");
    long p = m[0], q = m[1];
    if (p + q != 0) return false;
    Rational t = Rational(p - q) * rule.mu_over_pi / 2;
    t.canonicalize();
    return t.get_den() == 1;
}

inline bool character_trivial(const Model& m, const CharMonomial& ch) {
    bool zero = std::all_of(ch.begin(), ch.end(), [](int e) { return e == 0; });
    if (zero) return true;
    if (!m.lattice) throw std::invalid_argument("model has no lattice rule for twisted monomials");
    return lattice_trivial(*m.lattice, ch);
}

}  // namespace icoh

#endif
