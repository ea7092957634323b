#ifndef ICOH_FORMS_HPP
#define ICOH_FORMS_HPP

#include "linalg.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icoh {

// Sets of coframe indices 1..n are bitmasks: index j lives in bit j-1.
using IndexSet = std::uint32_t;
inline constexpr int kMaxDim = 16;

inline IndexSet bit(int j) { return IndexSet(1) << (j - 1); }

inline IndexSet index_set(const std::vector<int>& idx) {
    IndexSet s = 0;
    for (int j : idx) {
        if (j < 1 || j > kMaxDim) throw std::out_of_range("coframe index out of range");
        if (s & bit(j)) throw std::invalid_argument("repeated coframe index");
        s |= bit(j);
    }
    return s;
}

inline std::vector<int> indices(IndexSet s) {
    std::vector<int> v;
    while (s) {
        v.push_back(std::countr_zero(s) + 1);
        s &= s - 1;
    }
    return v;
}

inline int size(IndexSet s) { return std::popcount(s); }

// Lexicographic comparison of the ascending index sequences.
inline bool seq_less(IndexSet x, IndexSet y) {
    while (x && y) {
        IndexSet lx = x & (~x + 1), ly = y & (~y + 1);
        if (lx != ly) return lx < ly;
        x &= x - 1;
        y &= y - 1;
    }
    return !x && y;
}

// Parity of the shuffle that sorts the concatenation (x, y) of disjoint sets.
inline int shuffle_sign(IndexSet x, IndexSet y) {
    int inv = 0;
    for (IndexSet t = y; t; t &= t - 1) {
        IndexSet b = t & (~t + 1);
        inv += std::popcount(x & ~((b << 1) - 1));
    }
    return (inv & 1) ? -1 : 1;
}

using CharMonomial = std::vector<int>;

struct MultiIndex {
    IndexSet holo = 0;
    IndexSet anti = 0;
    int p() const { return size(holo); }
    int q() const { return size(anti); }
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

struct Key {
    CharMonomial ch;
    MultiIndex idx;
    friend bool operator==(const Key&, const Key&) = default;
};

struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
        if (a.ch != b.ch) return a.ch < b.ch;
        if (a.idx.holo != b.idx.holo) return seq_less(a.idx.holo, b.idx.holo);
        return seq_less(a.idx.anti, b.idx.anti);
    }
};

struct Bidegree {
    enum class Kind { Pure, Mixed, Any };
    Kind kind = Kind::Any;
    int p = 0;
    int q = 0;
    bool is_pure() const { return kind == Kind::Pure; }
    bool compatible(int pp, int qq) const {
        return kind == Kind::Any || (kind == Kind::Pure && p == pp && q == qq);
    }
};

// Finite linear combination of character-twisted monomials eta^H ^ eta^{bar A}.
class FormExpr {
public:
    using Terms = std::map<Key, GaussScalar, KeyLess>;

    FormExpr() = default;
    FormExpr(int n, int nchar) : n_(n), nchar_(nchar) {
        if (n < 0 || n > kMaxDim) throw std::out_of_range("coframe size out of range");
    }

    static FormExpr scalar(int n, int nchar, const GaussScalar& c) {
        FormExpr f(n, nchar);
        f.add(Key{CharMonomial(nchar, 0), {}}, c);
        return f;
    }

    static FormExpr monomial(int n, int nchar, const std::vector<int>& holo, const std::vector<int>& anti,
                             const GaussScalar& c = GaussScalar(1), CharMonomial ch = {}) {
        FormExpr f(n, nchar);
        if (ch.empty()) ch.assign(nchar, 0);
        IndexSet h = 0, a = 0;
        int sign = 1;
        // unsorted input is reordered with the Koszul sign
        for (int j : holo) {
            if (j < 1 || j > n) throw std::out_of_range("coframe index out of range");
            if (h & bit(j)) return f;
            sign *= shuffle_sign(h, bit(j));
            h |= bit(j);
        }
        for (int j : anti) {
            if (j < 1 || j > n) throw std::out_of_range("coframe index out of range");
            if (a & bit(j)) return f;
            sign *= shuffle_sign(a, bit(j));
            a |= bit(j);
        }
        f.add(Key{std::move(ch), {h, a}}, sign > 0 ? c : -c);
        return f;
    }

    int dim() const { return n_; }
    int nchar() const { return nchar_; }
    bool bound() const { return n_ >= 0; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add(const Key& k, const GaussScalar& c) {
        if (c.is_zero()) return;
        if (nchar_ >= 0 && static_cast<int>(k.ch.size()) != nchar_)
            throw std::invalid_argument("character monomial length mismatch");
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    GaussScalar coeff(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? GaussScalar(0) : it->second;
    }

    FormExpr& operator+=(const FormExpr& o) {
        adopt(o);
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    FormExpr& operator-=(const FormExpr& o) {
        adopt(o);
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    FormExpr& operator*=(const GaussScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend FormExpr operator+(FormExpr a, const FormExpr& b) { return a += b; }
    friend FormExpr operator-(FormExpr a, const FormExpr& b) { return a -= b; }
    friend FormExpr operator*(const GaussScalar& s, FormExpr a) { return a *= s; }
    FormExpr operator-() const { return GaussScalar(-1) * *this; }

    friend bool operator==(const FormExpr& a, const FormExpr& b) { return a.terms_ == b.terms_; }

    // Raises an error when two bound forms live on different coframes.
    void adopt(const FormExpr& o) {
        if (!o.bound()) return;
        if (!bound()) {
            n_ = o.n_;
            nchar_ = o.nchar_;
            return;
        }
        if (n_ != o.n_ || nchar_ != o.nchar_) throw std::invalid_argument("form context mismatch");
    }

    // Terms of exact bidegree (p,q).
    FormExpr component(int p, int q) const {
        FormExpr f;
        f.n_ = n_;
        f.nchar_ = nchar_;
        for (const auto& [k, c] : terms_)
            if (k.idx.p() == p && k.idx.q() == q) f.terms_.emplace(k, c);
        return f;
    }

    bool is_untwisted() const {
        for (const auto& [k, c] : terms_)
            for (int e : k.ch)
                if (e != 0) return false;
        return true;
    }

private:
    int n_ = -1;
    int nchar_ = -1;
    Terms terms_;
};

inline Bidegree bidegree(const FormExpr& a) {
    Bidegree b;
    for (const auto& [k, c] : a.terms()) {
        if (b.kind == Bidegree::Kind::Any) {
            b = Bidegree{Bidegree::Kind::Pure, k.idx.p(), k.idx.q()};
        } else if (b.p != k.idx.p() || b.q != k.idx.q()) {
            return Bidegree{Bidegree::Kind::Mixed, 0, 0};
        }
    }
    return b;
}

inline int total_degree(const MultiIndex& m) { return m.p() + m.q(); }

// Product of two canonical monomials; returns 0 sign when they overlap.
inline int wedge_sign(const MultiIndex& a, const MultiIndex& b, MultiIndex& out) {
    if ((a.holo & b.holo) || (a.anti & b.anti)) return 0;
    // (Ha A_a)(Hb A_b) -> Ha Hb A_a A_b: Hb passes A_a
    int s = ((a.q() * b.p()) & 1) ? -1 : 1;
    s *= shuffle_sign(a.holo, b.holo);
    s *= shuffle_sign(a.anti, b.anti);
    out = MultiIndex{a.holo | b.holo, a.anti | b.anti};
    return s;
}

inline FormExpr wedge(const FormExpr& a, const FormExpr& b) {
    FormExpr out;
    out.adopt(a);
    out.adopt(b);
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            MultiIndex m;
            int s = wedge_sign(ka.idx, kb.idx, m);
            if (s == 0) continue;
            CharMonomial ch = ka.ch;
            for (std::size_t i = 0; i < ch.size(); ++i) ch[i] += kb.ch[i];
            GaussScalar c = ca * cb;
            out.add(Key{std::move(ch), m}, s > 0 ? c : -c);
        }
    return out;
}

// partner[i] is the generator conjugate to generator i.
inline FormExpr conjugate(const FormExpr& a, const std::vector<int>& partner = {}) {
    FormExpr out;
    out.adopt(a);
    for (const auto& [k, c] : a.terms()) {
        CharMonomial ch(k.ch.size(), 0);
        for (std::size_t i = 0; i < k.ch.size(); ++i) {
            if (k.ch[i] == 0) continue;
            if (i >= partner.size()) throw std::invalid_argument("missing conjugation pairing for character");
            ch[partner[i]] += k.ch[i];
        }
        // conj(eta^H eta^{bar A}) = eta^{bar H} eta^A = (-1)^{|H||A|} eta^A eta^{bar H}
        int s = ((k.idx.p() * k.idx.q()) & 1) ? -1 : 1;
        GaussScalar z = c.conj();
        out.add(Key{std::move(ch), {k.idx.anti, k.idx.holo}}, s > 0 ? z : -z);
    }
    return out;
}

// Ordered monomial basis with a reverse index.
class BasisIndex {
public:
    BasisIndex() = default;
    explicit BasisIndex(std::vector<Key> keys) : keys_(std::move(keys)) {
        for (std::size_t i = 0; i < keys_.size(); ++i) pos_.emplace(keys_[i], i);
        if (pos_.size() != keys_.size()) throw std::invalid_argument("duplicate basis monomial");
    }
    std::size_t size() const { return keys_.size(); }
    const std::vector<Key>& keys() const { return keys_; }
    const Key& operator[](std::size_t i) const { return keys_[i]; }
    std::optional<std::size_t> find(const Key& k) const {
        auto it = pos_.find(k);
        if (it == pos_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<Key> keys_;
    std::map<Key, std::size_t, KeyLess> pos_;
};

class OutsideBasis : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Vec coordinates(const FormExpr& a, const BasisIndex& basis) {
    Vec v(basis.size());
    for (const auto& [k, c] : a.terms()) {
        auto i = basis.find(k);
        if (!i) throw OutsideBasis("form has a term outside the enumerated space");
        v[*i] = c;
    }
    return v;
}

inline FormExpr from_coordinates(const Vec& v, const BasisIndex& basis, int n, int nchar) {
    if (v.size() != basis.size()) throw std::invalid_argument("coordinate length mismatch");
    FormExpr f(n, nchar);
    for (std::size_t i = 0; i < v.size(); ++i) f.add(basis[i], v[i]);
    return f;
}

// Canonical text: (1+2i)*c1^1*c2^-1*e[1,2|3]
inline std::string render_index(const MultiIndex& m) {
    std::string s = "e[";
    bool first = true;
    for (int j : indices(m.holo)) {
        if (!first) s += ",";
        s += std::to_string(j);
        first = false;
    }
    s += "|";
    first = true;
    for (int j : indices(m.anti)) {
        if (!first) s += ",";
        s += std::to_string(j);
        first = false;
    }
    return s + "]";
}

inline std::string render(const FormExpr& a, const std::vector<std::string>& char_names = {}) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : a.terms()) {
        std::string factors;
        for (std::size_t i = 0; i < k.ch.size(); ++i) {
            if (k.ch[i] == 0) continue;
            std::string name = i < char_names.size() ? char_names[i] : "c" + std::to_string(i + 1);
            factors += "*" + name + "^" + std::to_string(k.ch[i]);
        }
        if (k.idx.holo || k.idx.anti) factors += "*" + render_index(k.idx);
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

}  // namespace icoh

#endif
