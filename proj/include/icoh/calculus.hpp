#ifndef ICOH_CALCULUS_HPP
#define ICOH_CALCULUS_HPP

#include "model.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icoh {

namespace detail {

inline FormExpr mono_key(const Model& m, const CharMonomial& ch, IndexSet h, IndexSet a) {
    FormExpr f(m.n, m.nchar());
    f.add(Key{ch, {h, a}}, GaussScalar(1));
    return f;
}

// d of a single twisted monomial with unit coefficient.
inline FormExpr d_monomial(const Model& m, const Key& key) {
    FormExpr out(m.n, m.nchar());
    const IndexSet H = key.idx.holo, A = key.idx.anti;
    FormExpr self = mono_key(m, key.ch, H, A);
    for (int i = 0; i < m.nchar(); ++i) {
        if (key.ch[i] == 0) continue;
        out += GaussScalar(key.ch[i]) * wedge(m.char_diff[i], self);
    }
    const CharMonomial zero = m.trivial_char();
    int pos = 0;
    IndexSet before_h = 0, before_a = 0;
    auto leibniz = [&](bool holo, int j) {
        const FormExpr& dj = holo ? m.d_table[j - 1] : m.dbar_table[j - 1];
        if (!dj.is_zero()) {
            IndexSet after_h = holo ? (H & ~before_h & ~bit(j)) : 0;
            IndexSet after_a = A & ~before_a & ~(holo ? 0 : bit(j));
            FormExpr t = wedge(wedge(mono_key(m, key.ch, before_h, before_a), dj), mono_key(m, zero, after_h, after_a));
            if (pos & 1)
                out -= t;
            else
                out += t;
        }
        ++pos;
    };
    for (int j : indices(H)) {
        leibniz(true, j);
        before_h |= bit(j);
    }
    for (int j : indices(A)) {
        leibniz(false, j);
        before_a |= bit(j);
    }
    return out;
}

}  // namespace detail

// d extended by Leibniz over the structure equations, their conjugates, and
// d(c w) = c (dlog c ^ w + dw) for character generators.
inline FormExpr differential(const Model& m, const FormExpr& a) {
    FormExpr out(m.n, m.nchar());
    for (const auto& [k, c] : a.terms()) out += c * detail::d_monomial(m, k);
    return out;
}

// Pair (del a, delbar a): bidegree projections of d, taken term by term.
inline std::pair<FormExpr, FormExpr> split_differential(const Model& m, const FormExpr& a) {
    FormExpr del(m.n, m.nchar()), dbar(m.n, m.nchar());
    for (const auto& [k, c] : a.terms()) {
        FormExpr t = detail::d_monomial(m, k);
        const int p = k.idx.p(), q = k.idx.q();
        for (const auto& [kt, ct] : t.terms()) {
            if (kt.idx.p() == p + 1 && kt.idx.q() == q)
                del.add(kt, c * ct);
            else if (kt.idx.p() == p && kt.idx.q() == q + 1)
                dbar.add(kt, c * ct);
        }
    }
    return {std::move(del), std::move(dbar)};
}

inline FormExpr del(const Model& m, const FormExpr& a) { return split_differential(m, a).first; }
inline FormExpr delbar(const Model& m, const FormExpr& a) { return split_differential(m, a).second; }
inline FormExpr ddbar(const Model& m, const FormExpr& a) { return del(m, delbar(m, a)); }

// ---------------------------------------------------------------------------

struct Metric {
    std::vector<Rational> diag;  // squared norms of the coframe entries

    static Metric unit(int n) { return Metric{std::vector<Rational>(n, Rational(1))}; }

    void check(int n) const {
        if (static_cast<int>(diag.size()) != n) throw std::invalid_argument("metric size does not match coframe");
        for (const auto& g : diag)
            if (g <= 0) throw std::invalid_argument("metric entries must be positive");
    }
    Rational weight(IndexSet s) const {
        Rational w(1);
        for (int j : indices(s)) w *= diag[j - 1];
        return w;
    }
};

struct DefectReport {
    bool passed = true;
    FormExpr witness;
};

class UnsupportedStar : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Conjugate-linear star with the volume normalization dropped:
// c eta^{I bar J} -> conj(c) g_I g_J eps(I,J) eta^{I^c bar J^c}, (p,q) -> (n-p, n-q).
inline FormExpr hodge_star(const FormExpr& a, const Metric& g, int n) {
    g.check(n);
    Bidegree b = bidegree(a);
    if (b.kind == Bidegree::Kind::Mixed) throw UnsupportedStar("hodge star needs pure bidegree");
    if (!a.is_untwisted()) throw UnsupportedStar("hodge star is not defined on character-twisted forms");
    FormExpr out(n, a.bound() ? a.nchar() : 0);
    const IndexSet all = n == 32 ? ~IndexSet(0) : (IndexSet(1) << n) - 1;
    for (const auto& [k, c] : a.terms()) {
        IndexSet I = k.idx.holo, J = k.idx.anti;
        IndexSet Ic = all & ~I, Jc = all & ~J;
        int eps = shuffle_sign(I, Ic) * shuffle_sign(J, Jc);
        GaussScalar z = c.conj() * GaussScalar(g.weight(I) * g.weight(J));
        out.add(Key{k.ch, {Ic, Jc}}, eps > 0 ? z : -z);
    }
    return out;
}

inline FormExpr fundamental_form(const Model& m, const Metric& g) {
    g.check(m.n);
    FormExpr w(m.n, m.nchar());
    for (int j = 1; j <= m.n; ++j)
        w += m.mono({j}, {j}, GaussScalar(Rational(0), g.diag[j - 1] / 2));
    return w;
}

inline DefectReport skt_check(const Model& m, const Metric& g) {
    DefectReport r;
    r.witness = ddbar(m, fundamental_form(m, g));
    r.passed = r.witness.is_zero();
    return r;
}

// |A|^2 + |C|^2 + |D|^2 = 2 Re(conj(B) D)
inline bool skt_family_condition(const GaussScalar& A, const GaussScalar& B, const GaussScalar& C,
                                 const GaussScalar& D, const GaussScalar& /*E*/) {
    Rational lhs = A.norm_sq() + C.norm_sq() + D.norm_sq();
    Rational rhs = 2 * (B.conj() * D).re();
    return lhs == rhs;
}

inline bool bc_harmonic(const FormExpr& a, const Model& m, const Metric& g) {
    if (!differential(m, a).is_zero()) return false;
    return ddbar(m, hodge_star(a, g, m.n)).is_zero();
}

inline bool aeppli_harmonic(const FormExpr& a, const Model& m, const Metric& g) {
    if (!ddbar(m, a).is_zero()) return false;
    auto [d1, d2] = split_differential(m, hodge_star(a, g, m.n));
    return d1.is_zero() && d2.is_zero();
}

// ---------------------------------------------------------------------------
// Structural checks on a bound model.

struct CheckEntry {
    std::string what;
    FormExpr witness;
};

struct ValidationReport {
    bool passed = true;
    std::vector<CheckEntry> failures;
};

inline ValidationReport validate(const Model& m) {
    ValidationReport r;
    auto record = [&](const std::string& what, FormExpr w) {
        if (w.is_zero()) return;
        r.passed = false;
        r.failures.push_back({what, std::move(w)});
    };
    for (int j = 1; j <= m.n; ++j) {
        record("d^2 e" + std::to_string(j), differential(m, m.d_table[j - 1]));
        record("d^2 conj(e" + std::to_string(j) + ")", differential(m, m.dbar_table[j - 1]));
    }
    for (int i = 0; i < m.nchar(); ++i) {
        record("d^2 " + m.char_names[i], differential(m, m.char_diff[i]));
        record("conjugation of d " + m.char_names[i],
               m.conj(m.char_diff[i]) - m.char_diff[m.partner[i]]);
    }
    return r;
}

inline ValidationReport validate(const ModelSpec& spec, const ParamBinding& binding) {
    return validate(bind_model(spec, binding));
}

inline ValidationReport integrability_check(const Model& m) {
    ValidationReport r;
    for (int j = 1; j <= m.n; ++j) {
        FormExpr w = m.d_table[j - 1].component(0, 2);
        if (!w.is_zero()) {
            r.passed = false;
            r.failures.push_back({"(0,2) part of d e" + std::to_string(j), w});
        }
    }
    return r;
}

}  // namespace icoh

#endif
