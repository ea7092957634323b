#ifndef ICOH_COHOMOLOGY_HPP
#define ICOH_COHOMOLOGY_HPP

#include "calculus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace icoh {

enum class SpaceKind { FullInvariant, KsB, BGammaC };

inline std::string to_string(SpaceKind k) {
    switch (k) {
        case SpaceKind::FullInvariant: return "FULL_INVARIANT";
        case SpaceKind::KsB: return "KS_B";
        case SpaceKind::BGammaC: return "BGAMMA_C";
    }
    return "?";
}

class KindMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SpaceEnumeration {
    SpaceKind kind = SpaceKind::FullInvariant;
    int p = 0, q = 0;
    BasisIndex basis;
};

namespace detail {

inline std::vector<IndexSet> subsets_of_size(int n, int k) {
    std::vector<IndexSet> out;
    if (k < 0 || k > n) return out;
    for (IndexSet s = 0; s < (IndexSet(1) << n); ++s)
        if (size(s) == k) out.push_back(s);
    std::sort(out.begin(), out.end(), seq_less);
    return out;
}

inline CharMonomial conj_char(const Model& m, const CharMonomial& ch) {
    CharMonomial out(ch.size(), 0);
    for (std::size_t i = 0; i < ch.size(); ++i) out[m.partner[i]] += ch[i];
    return out;
}

// t(I) = prod_{i in I} w_i / conj(w_i)
inline CharMonomial twist(const Model& m, IndexSet I) {
    CharMonomial t = m.trivial_char();
    for (int i : indices(I)) {
        const CharMonomial& w = m.weights[i - 1];
        CharMonomial cw = conj_char(m, w);
        for (std::size_t k = 0; k < t.size(); ++k) t[k] += w[k] - cw[k];
    }
    return t;
}

// Coframe entries with non-zero differential; for KS models these are 1..l.
inline IndexSet moving_generators(const Model& m) {
    IndexSet s = 0;
    for (int j = 1; j <= m.n; ++j)
        if (!m.d_table[j - 1].is_zero()) s |= bit(j);
    return s;
}

}  // namespace detail

inline int ks_split(const Model& m) {
    IndexSet s = detail::moving_generators(m);
    int l = size(s);
    if (s != ((IndexSet(1) << l) - 1)) throw KindMismatch("KS_B needs the non-closed coframe entries to come first");
    return l;
}

inline SpaceEnumeration enumerate_space(const Model& m, SpaceKind kind, int p, int q) {
    SpaceEnumeration e;
    e.kind = kind;
    e.p = p;
    e.q = q;
    std::vector<Key> keys;
    const auto hs = detail::subsets_of_size(m.n, p);
    const auto as = detail::subsets_of_size(m.n, q);
    switch (kind) {
        case SpaceKind::FullInvariant:
            for (IndexSet h : hs)
                for (IndexSet a : as) keys.push_back(Key{m.trivial_char(), {h, a}});
            break;
        case SpaceKind::KsB: {
            if (m.nchar() != 0) throw KindMismatch("KS_B is defined for models without characters");
            IndexSet L = bit(ks_split(m) + 1) - 1;
            for (IndexSet h : hs)
                for (IndexSet a : as)
                    if (size(h & L) == size(a & L)) keys.push_back(Key{m.trivial_char(), {h, a}});
            break;
        }
        case SpaceKind::BGammaC: {
            if (!m.lattice || m.nchar() == 0)
                throw KindMismatch("BGAMMA_C needs character generators and a lattice rule");
            std::set<Key, KeyLess> seen;
            for (IndexSet h : hs)
                for (IndexSet a : as) {
                    // phi^J ^ t(I) phi^{bar I}
                    CharMonomial ta = detail::twist(m, a);
                    if (lattice_trivial(*m.lattice, ta)) seen.insert(Key{ta, {h, a}});
                    // conj(t(J)) phi^J ^ phi^{bar I}
                    CharMonomial tb = detail::conj_char(m, detail::twist(m, h));
                    if (lattice_trivial(*m.lattice, tb)) seen.insert(Key{tb, {h, a}});
                }
            keys.assign(seen.begin(), seen.end());
            break;
        }
    }
    std::sort(keys.begin(), keys.end(), KeyLess{});
    e.basis = BasisIndex(std::move(keys));
    return e;
}

// ---------------------------------------------------------------------------
// A bigraded finite complex with lazily built operator matrices.

class Complex {
public:
    // with_invariant adds the untwisted monomials to a BGAMMA_C complex; the sum of the two
    // subcomplexes is again a subcomplex and is closed under wedge with invariant forms.
    Complex(Model m, SpaceKind kind, bool with_invariant = false)
        : model_(std::move(m)), kind_(kind), with_invariant_(with_invariant && kind == SpaceKind::BGammaC) {
        if (kind_ == SpaceKind::KsB) ks_split(model_);
        if (kind_ == SpaceKind::BGammaC && (!model_.lattice || model_.nchar() == 0))
            throw KindMismatch("BGAMMA_C needs character generators and a lattice rule");
    }
    Complex(const Complex&) = delete;
    Complex& operator=(const Complex&) = delete;

    const Model& model() const { return model_; }
    SpaceKind kind() const { return kind_; }
    bool with_invariant() const { return with_invariant_; }
    int n() const { return model_.n; }
    bool in_range(int p, int q) const { return p >= 0 && q >= 0 && p <= n() && q <= n(); }
    bool untwisted() const { return kind_ != SpaceKind::BGammaC; }

    const BasisIndex& slice(int p, int q) const {
        std::lock_guard lk(mu_);
        auto it = slices_.find({p, q});
        if (it != slices_.end()) return it->second;
        BasisIndex b;
        if (in_range(p, q)) {
            b = enumerate_space(model_, kind_, p, q).basis;
            if (with_invariant_) {
                std::set<Key, KeyLess> keys(b.keys().begin(), b.keys().end());
                SpaceEnumeration inv = enumerate_space(model_, SpaceKind::FullInvariant, p, q);
                keys.insert(inv.basis.keys().begin(), inv.basis.keys().end());
                b = BasisIndex(std::vector<Key>(keys.begin(), keys.end()));
            }
        }
        return slices_.emplace(std::make_pair(p, q), std::move(b)).first->second;
    }
    std::size_t dim(int p, int q) const { return slice(p, q).size(); }

    // slice(p,q) -> slice(p+1,q)
    const ExactMatrix& del(int p, int q) const {
        std::lock_guard lk(mu_);
        build_d(p, q);
        return del_.at({p, q});
    }
    // slice(p,q) -> slice(p,q+1)
    const ExactMatrix& delbar(int p, int q) const {
        std::lock_guard lk(mu_);
        build_d(p, q);
        return delbar_.at({p, q});
    }
    // slice(p,q) -> slice(p+1,q+1)
    const ExactMatrix& ddbar(int p, int q) const {
        std::lock_guard lk(mu_);
        auto it = ddbar_.find({p, q});
        if (it != ddbar_.end()) return it->second;
        ExactMatrix m = del(p, q + 1) * delbar(p, q);
        return ddbar_.emplace(std::make_pair(p, q), std::move(m)).first->second;
    }

    // Conjugate-linear star in matrix form: *(sum x_k e_k) = S conj(x); S is real.
    ExactMatrix star(int p, int q, const Metric& g) const {
        if (!untwisted()) throw UnsupportedStar("hodge star is not defined on character-twisted complexes");
        const BasisIndex& src = slice(p, q);
        const BasisIndex& dst = slice(n() - p, n() - q);
        ExactMatrix s(dst.size(), src.size());
        for (std::size_t k = 0; k < src.size(); ++k) {
            FormExpr e = basis_form(src, k);
            Vec c = coordinates(hodge_star(e, g, n()), dst);
            for (std::size_t r = 0; r < c.size(); ++r) s(r, k) = c[r];
        }
        return s;
    }

    Vec coords(const FormExpr& f, int p, int q) const { return coordinates(f, slice(p, q)); }
    FormExpr form(const Vec& v, int p, int q) const { return from_coordinates(v, slice(p, q), n(), model_.nchar()); }
    FormExpr basis_form(const BasisIndex& b, std::size_t k) const {
        FormExpr f(n(), model_.nchar());
        f.add(b[k], GaussScalar(1));
        return f;
    }

    // Matrix of a -> a ^ w (right) or w ^ a (left) from slice(p,q) to slice(p+dp, q+dq).
    ExactMatrix wedge_map(const FormExpr& w, int p, int q, bool left) const {
        Bidegree b = bidegree(w);
        int dp = 0, dq = 0;
        if (b.kind == Bidegree::Kind::Pure) {
            dp = b.p;
            dq = b.q;
        } else if (b.kind == Bidegree::Kind::Mixed) {
            throw std::invalid_argument("wedge map needs a pure bidegree form");
        }
        return wedge_map(w, p, q, dp, dq, left);
    }
    ExactMatrix wedge_map(const FormExpr& w, int p, int q, int dp, int dq, bool left) const {
        return wedge_map_into(w, p, q, left, slice(p + dp, q + dq));
    }
    ExactMatrix wedge_map_into(const FormExpr& w, int p, int q, bool left, const BasisIndex& dst) const {
        const BasisIndex& src = slice(p, q);
        ExactMatrix m(dst.size(), src.size());
        for (std::size_t k = 0; k < src.size(); ++k) {
            FormExpr e = basis_form(src, k);
            Vec c = coordinates(left ? wedge(w, e) : wedge(e, w), dst);
            for (std::size_t r = 0; r < c.size(); ++r) m(r, k) = c[r];
        }
        return m;
    }

    // slice(p,q) followed by any further monomials occurring in `extra`; used where
    // products of complex elements may leave the enumerated space.
    BasisIndex extended_slice(int p, int q, const std::vector<FormExpr>& extra) const {
        const BasisIndex& b = slice(p, q);
        std::vector<Key> keys = b.keys();
        std::set<Key, KeyLess> more;
        for (const auto& f : extra)
            for (const auto& [k, c] : f.terms())
                if (!b.find(k)) more.insert(k);
        keys.insert(keys.end(), more.begin(), more.end());
        return BasisIndex(std::move(keys));
    }

    // Per-complex memo for derived objects keyed by (tag, p, q).
    template <class T, class F>
    std::shared_ptr<const T> memo(const std::string& tag, int p, int q, F&& build) const {
        std::lock_guard lk(mu_);
        auto key = std::make_tuple(tag, p, q);
        auto it = memo_.find(key);
        if (it != memo_.end()) return std::static_pointer_cast<const T>(it->second);
        auto v = std::make_shared<const T>(build());
        memo_.emplace(key, v);
        return v;
    }

private:
    void build_d(int p, int q) const {
        if (del_.count({p, q})) return;
        const BasisIndex& src = slice(p, q);
        const BasisIndex& t1 = slice(p + 1, q);
        const BasisIndex& t2 = slice(p, q + 1);
        ExactMatrix d1(t1.size(), src.size()), d2(t2.size(), src.size());
        for (std::size_t k = 0; k < src.size(); ++k) {
            auto [a, b] = split_differential(model_, basis_form(src, k));
            Vec c1, c2;
            try {
                c1 = coordinates(a, t1);
                c2 = coordinates(b, t2);
            } catch (const OutsideBasis&) {
                throw std::logic_error("enumerated space is not closed under d at (" + std::to_string(p) + "," +
                                       std::to_string(q) + ")");
            }
            for (std::size_t r = 0; r < c1.size(); ++r) d1(r, k) = c1[r];
            for (std::size_t r = 0; r < c2.size(); ++r) d2(r, k) = c2[r];
        }
        del_.emplace(std::make_pair(p, q), std::move(d1));
        delbar_.emplace(std::make_pair(p, q), std::move(d2));
    }

    Model model_;
    SpaceKind kind_;
    bool with_invariant_ = false;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::pair<int, int>, BasisIndex> slices_;
    mutable std::map<std::pair<int, int>, ExactMatrix> del_, delbar_, ddbar_;
    mutable std::map<std::tuple<std::string, int, int>, std::shared_ptr<const void>> memo_;
};

// ---------------------------------------------------------------------------

struct CohomologySpace {
    std::size_t dim = 0;
    std::vector<FormExpr> representatives;
    Subspace cycles;
    Subspace boundaries;
    bool harmonic_representatives = false;
};

namespace detail {

inline CohomologySpace make_space(Subspace cycles, Subspace boundaries,
                                  const std::function<FormExpr(const Vec&)>& to_form,
                                  const std::optional<Subspace>& harmonic = std::nullopt) {
    if (!cycles.contains(boundaries)) throw std::logic_error("boundaries not contained in cycles");
    CohomologySpace h;
    h.dim = cycles.dim() - boundaries.dim();
    std::vector<Vec> reps;
    if (harmonic && harmonic->dim() == h.dim && cycles.contains(*harmonic) &&
        intersection(*harmonic, boundaries).dim() == 0) {
        reps = harmonic->basis();
        h.harmonic_representatives = true;
    } else {
        reps = complement_basis(cycles, boundaries);
    }
    for (const auto& v : reps) h.representatives.push_back(to_form(v));
    h.cycles = std::move(cycles);
    h.boundaries = std::move(boundaries);
    return h;
}

inline ExactMatrix conj_times(const ExactMatrix& a, const ExactMatrix& s) { return a.conj() * s; }

}  // namespace detail

inline Subspace bc_harmonic_space(const Complex& c, int p, int q, const Metric& g) {
    const int n = c.n();
    std::size_t N = c.dim(p, q);
    ExactMatrix s = c.star(p, q, g);
    return kernel_basis(vstack({c.del(p, q), c.delbar(p, q), detail::conj_times(c.ddbar(n - p, n - q), s)}, N));
}

inline Subspace aeppli_harmonic_space(const Complex& c, int p, int q, const Metric& g) {
    const int n = c.n();
    std::size_t N = c.dim(p, q);
    ExactMatrix s = c.star(p, q, g);
    return kernel_basis(vstack({c.ddbar(p, q), detail::conj_times(c.del(n - p, n - q), s),
                                detail::conj_times(c.delbar(n - p, n - q), s)},
                               N));
}

inline CohomologySpace bott_chern(const Complex& c, int p, int q, const Metric* g = nullptr) {
    std::size_t N = c.dim(p, q);
    Subspace cycles = kernel_basis(vstack({c.del(p, q), c.delbar(p, q)}, N));
    Subspace bnd = column_space(c.ddbar(p - 1, q - 1));
    if (bnd.ambient_dim() != N) bnd = Subspace(N);
    std::optional<Subspace> harm;
    if (c.untwisted() && c.in_range(p, q)) {
        Metric unit = Metric::unit(c.n());
        try {
            harm = bc_harmonic_space(c, p, q, g ? *g : unit);
        } catch (const OutsideBasis&) {
        }
    }
    return detail::make_space(std::move(cycles), std::move(bnd), [&](const Vec& v) { return c.form(v, p, q); }, harm);
}

inline CohomologySpace aeppli(const Complex& c, int p, int q, const Metric* g = nullptr) {
    std::size_t N = c.dim(p, q);
    Subspace cycles = kernel_basis(c.ddbar(p, q));
    if (cycles.ambient_dim() != N) cycles = Subspace::full(N);
    Subspace b1 = column_space(c.del(p - 1, q)), b2 = column_space(c.delbar(p, q - 1));
    if (b1.ambient_dim() != N) b1 = Subspace(N);
    if (b2.ambient_dim() != N) b2 = Subspace(N);
    std::optional<Subspace> harm;
    if (c.untwisted() && c.in_range(p, q)) {
        Metric unit = Metric::unit(c.n());
        try {
            harm = aeppli_harmonic_space(c, p, q, g ? *g : unit);
        } catch (const OutsideBasis&) {
        }
    }
    return detail::make_space(std::move(cycles), sum(b1, b2), [&](const Vec& v) { return c.form(v, p, q); }, harm);
}

// Aeppli space with canonical (unit-metric) representatives, computed once per complex.
inline std::shared_ptr<const CohomologySpace> aeppli_cached(const Complex& c, int p, int q) {
    return c.memo<CohomologySpace>("aeppli", p, q, [&] { return aeppli(c, p, q); });
}

inline CohomologySpace dolbeault(const Complex& c, int p, int q) {
    std::size_t N = c.dim(p, q);
    Subspace cycles = kernel_basis(c.delbar(p, q));
    Subspace bnd = column_space(c.delbar(p, q - 1));
    if (bnd.ambient_dim() != N) bnd = Subspace(N);
    return detail::make_space(std::move(cycles), std::move(bnd), [&](const Vec& v) { return c.form(v, p, q); });
}

namespace detail {

// Total-degree block layout: slices (0,k), (1,k-1), ... concatenated.
struct DegreeLayout {
    std::vector<std::pair<int, int>> parts;
    std::vector<std::size_t> offset;
    std::size_t total = 0;
};

inline DegreeLayout degree_layout(const Complex& c, int k) {
    DegreeLayout L;
    for (int p = 0; p <= k; ++p) {
        int q = k - p;
        if (!c.in_range(p, q)) continue;
        L.parts.push_back({p, q});
        L.offset.push_back(L.total);
        L.total += c.dim(p, q);
    }
    return L;
}

inline ExactMatrix total_d(const Complex& c, int k) {
    DegreeLayout src = degree_layout(c, k), dst = degree_layout(c, k + 1);
    ExactMatrix m(dst.total, src.total);
    auto place = [&](const ExactMatrix& blk, int tp, int tq, std::size_t col0) {
        for (std::size_t i = 0; i < dst.parts.size(); ++i) {
            if (dst.parts[i] != std::make_pair(tp, tq)) continue;
            for (std::size_t r = 0; r < blk.rows(); ++r)
                for (std::size_t cc = 0; cc < blk.cols(); ++cc) m(dst.offset[i] + r, col0 + cc) += blk(r, cc);
        }
    };
    for (std::size_t j = 0; j < src.parts.size(); ++j) {
        auto [p, q] = src.parts[j];
        place(c.del(p, q), p + 1, q, src.offset[j]);
        place(c.delbar(p, q), p, q + 1, src.offset[j]);
    }
    return m;
}

}  // namespace detail

inline CohomologySpace de_rham(const Complex& c, int k) {
    detail::DegreeLayout L = detail::degree_layout(c, k);
    Subspace cycles = kernel_basis(detail::total_d(c, k));
    if (cycles.ambient_dim() != L.total) cycles = Subspace::full(L.total);
    Subspace bnd = k > 0 ? column_space(detail::total_d(c, k - 1)) : Subspace(L.total);
    if (bnd.ambient_dim() != L.total) bnd = Subspace(L.total);
    auto to_form = [&](const Vec& v) {
        FormExpr f(c.n(), c.model().nchar());
        for (std::size_t i = 0; i < L.parts.size(); ++i) {
            auto [p, q] = L.parts[i];
            Vec part(v.begin() + L.offset[i], v.begin() + L.offset[i] + c.dim(p, q));
            f += c.form(part, p, q);
        }
        return f;
    };
    return detail::make_space(std::move(cycles), std::move(bnd), to_form);
}

// H^{-1} of the Schweitzer complex around (p,q): coordinates are A^{p-2,q-1} (+) A^{p-1,q-2}.
struct SchweitzerMinusOne {
    std::size_t du = 0, dv = 0;
    ExactMatrix cycle_map;     // (u,v) -> del u + delbar v in A^{p-1,q-1}
    ExactMatrix boundary_map;  // (a,b,c) -> (del a + delbar b, del b + delbar c)
};

inline SchweitzerMinusOne schweitzer_minus_one_maps(const Complex& c, int p, int q) {
    SchweitzerMinusOne s;
    s.du = c.dim(p - 2, q - 1);
    s.dv = c.dim(p - 1, q - 2);
    const std::size_t T = c.dim(p - 1, q - 1);
    s.cycle_map = hstack({c.del(p - 2, q - 1), c.delbar(p - 1, q - 2)}, T);
    const std::size_t da = c.dim(p - 3, q - 1), db = c.dim(p - 2, q - 2), dc = c.dim(p - 1, q - 3);
    ExactMatrix top = hstack({c.del(p - 3, q - 1), c.delbar(p - 2, q - 2), ExactMatrix(s.du, dc)}, s.du);
    ExactMatrix bot = hstack({ExactMatrix(s.dv, da), c.del(p - 2, q - 2), c.delbar(p - 1, q - 3)}, s.dv);
    s.boundary_map = vstack({top, bot}, da + db + dc);
    return s;
}

// Whether (u, v), u of bidegree (p-2,q-1) and v of bidegree (p-1,q-2), is a
// Schweitzer (-1)-cycle with nonzero class.
inline bool schweitzer_minus_one_nonzero(const Complex& c, int p, int q, const FormExpr& u, const FormExpr& v) {
    SchweitzerMinusOne s = schweitzer_minus_one_maps(c, p, q);
    Vec x = c.coords(u, p - 2, q - 1), y = c.coords(v, p - 1, q - 2);
    x.insert(x.end(), y.begin(), y.end());
    if (!is_zero(s.cycle_map.apply(x))) throw std::invalid_argument("pair is not a Schweitzer cycle");
    Subspace bnd = column_space(s.boundary_map);
    if (bnd.ambient_dim() != x.size()) return !is_zero(x);
    return !bnd.contains(x);
}

inline CohomologySpace schweitzer_h(const Complex& c, int p, int q, int level) {
    if (level == 1) return bott_chern(c, p, q);
    if (level == 0) return aeppli(c, p - 1, q - 1);
    if (level != -1) throw std::invalid_argument("Schweitzer level must be -1, 0 or 1");
    SchweitzerMinusOne s = schweitzer_minus_one_maps(c, p, q);
    const std::size_t N = s.du + s.dv;
    Subspace cycles = kernel_basis(s.cycle_map);
    if (cycles.ambient_dim() != N) cycles = Subspace::full(N);
    Subspace bnd = column_space(s.boundary_map);
    if (bnd.ambient_dim() != N) bnd = Subspace(N);
    auto to_form = [&](const Vec& v) {
        Vec u(v.begin(), v.begin() + s.du), w(v.begin() + s.du, v.end());
        return c.form(u, p - 2, q - 1) + c.form(w, p - 1, q - 2);
    };
    return detail::make_space(std::move(cycles), std::move(bnd), to_form);
}

// ---------------------------------------------------------------------------
// Special-type structures: d eta^j = 0 for j < n, d eta^n in span(eta^{ij}, eta^{i bar j}), i, j < n.

inline bool is_special_type(const Model& m) {
    if (m.nchar() != 0 || m.n < 1) return false;
    const IndexSet low = bit(m.n) - 1;
    for (int j = 1; j < m.n; ++j)
        if (!m.d_table[j - 1].is_zero()) return false;
    for (const auto& [k, c] : m.d_table[m.n - 1].terms()) {
        if ((k.idx.holo & ~low) || (k.idx.anti & ~low)) return false;
        if (k.idx.p() == 0) return false;
    }
    return true;
}

struct SpecialTypeBC {
    std::size_t h1 = 0, i1 = 0, h2 = 0, h3 = 0;
    std::size_t quotient() const { return h1 - i1; }
    std::size_t total() const { return h1 - i1 + h2 + h3; }
    std::size_t generic = 0;
};

class NotSpecialType : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline SpecialTypeBC special_type_bc_decomposition(const Complex& c, int p, int q) {
    const Model& m = c.model();
    if (!is_special_type(m) || c.kind() != SpaceKind::FullInvariant)
        throw NotSpecialType("model is not of special type");
    const int n = m.n;
    const IndexSet top = bit(n);
    const BasisIndex& B = c.slice(p, q);
    const std::size_t N = B.size();
    auto span_of = [&](auto pred) {
        std::vector<Vec> vs;
        for (std::size_t k = 0; k < N; ++k)
            if (pred(B[k].idx)) vs.push_back(unit_vec(N, k));
        return Subspace::span(N, vs);
    };
    SpecialTypeBC r;
    Subspace closed = c.in_range(p, q) ? kernel_basis(vstack({c.del(p, q), c.delbar(p, q)}, N)) : Subspace(N);
    Subspace H1 = span_of([&](const MultiIndex& x) { return !(x.holo & top) && !(x.anti & top); });
    // ddbar(eta^{n bar n} ^ mu), mu without index n
    std::vector<Vec> imgs;
    if (p >= 1 && q >= 1) {
        FormExpr nn = m.mono({n}, {n});
        const BasisIndex& S = c.slice(p - 2, q - 2);
        for (std::size_t k = 0; k < S.size(); ++k) {
            if ((S[k].idx.holo & top) || (S[k].idx.anti & top)) continue;
            FormExpr f = ddbar(m, wedge(nn, c.basis_form(S, k)));
            imgs.push_back(coordinates(f, B));
        }
    }
    Subspace I1 = Subspace::span(N, imgs);
    if (!H1.contains(I1) || !closed.contains(H1)) throw std::logic_error("special-type decomposition: H1 not closed");
    Subspace span2 = span_of([&](const MultiIndex& x) { return bool(x.holo & top) != bool(x.anti & top); });
    Subspace span3 = span_of([&](const MultiIndex& x) { return (x.holo & top) && (x.anti & top); });
    r.h1 = H1.dim();
    r.i1 = I1.dim();
    r.h2 = intersection(closed, span2).dim();
    r.h3 = intersection(closed, span3).dim();
    r.generic = bott_chern(c, p, q).dim;
    return r;
}

// ---------------------------------------------------------------------------

struct KsHodgeNumbers {
    long direct = 0;   // sum_r C(l,r)^2 C(k,p-r) C(k,q-r)
    long printed = 0;  // displayed closed form
    long proof = 0;    // product form used in the proof
};

inline long binom(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline KsHodgeNumbers ks_hodge_numbers(int l, int k, int p, int q) {
    if (l < 1 || k < 1) throw std::invalid_argument("l and k must be positive");
    KsHodgeNumbers h;
    for (int r = 0; r <= std::min(p, q); ++r) h.direct += binom(l, r) * binom(l, r) * binom(k, p - r) * binom(k, q - r);
    const int lo = std::max({0, p - k, q - k});
    for (int r = lo; r <= std::min(p, q); ++r) h.printed += binom(l, r) * (binom(k, p - r) + binom(k, q - r));
    long s1 = 0, s2 = 0;
    for (int r = lo; r <= std::min(p, q); ++r) s1 += binom(l, r) * binom(k, p - r);
    for (int r = lo; r <= std::max(p, q); ++r) s2 += binom(l, r) * binom(k, q - r);
    h.proof = s1 * s2;
    return h;
}

}  // namespace icoh

#endif
