#ifndef ICOH_MASSEY_HPP
#define ICOH_MASSEY_HPP

#include "cohomology.hpp"
#include "parallel.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icoh {

enum class Verdict { Nonvanishing, Vanishing, Undefined };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Nonvanishing: return "NONVANISHING";
        case Verdict::Vanishing: return "VANISHING";
        case Verdict::Undefined: return "UNDEFINED";
    }
    return "?";
}

class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class InvalidClass : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct BCClass {
    FormExpr representative;
    int p = 0, q = 0;
    bool certified_harmonic = false;
};

namespace detail {
inline GaussScalar parity(int k) { return GaussScalar((k % 2 == 0) ? 1 : -1); }

inline Vec neg(Vec v) {
    for (auto& z : v) z = -z;
    return v;
}
inline Vec add(Vec a, const Vec& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
}
}  // namespace detail

inline BCClass make_bc_class(const Complex& c, const FormExpr& rep, const Metric* g = nullptr) {
    const Model& m = c.model();
    Bidegree b = bidegree(rep);
    if (b.kind != Bidegree::Kind::Pure) throw InvalidClass("class representative must be a non-zero form of pure bidegree");
    if (!differential(m, rep).is_zero()) throw InvalidClass("class representative is not d-closed: " + m.render(rep));
    Vec v;
    try {
        v = c.coords(rep, b.p, b.q);
    } catch (const OutsideBasis&) {
        throw InvalidClass("class representative is outside the chosen complex");
    }
    if (!solve(c.ddbar(b.p - 1, b.q - 1), v).empty())
        throw InvalidClass("class representative is ddbar-exact: " + m.render(rep));
    BCClass k{rep, b.p, b.q, false};
    if (c.untwisted() && rep.is_untwisted()) {
        Metric unit = Metric::unit(m.n);
        k.certified_harmonic = bc_harmonic(rep, m, g ? *g : unit);
    }
    return k;
}

// All f of bidegree (p-1,q-1) with ddbar f = target, target of bidegree (p,q).
inline AffineSet ddbar_primitive(const Complex& c, const FormExpr& target, int p, int q) {
    Vec t;
    if (!c.in_range(p, q)) {
        if (!target.is_zero()) return AffineSet{std::nullopt, Subspace(c.dim(p - 1, q - 1))};
        t = Vec();
    } else {
        t = c.coords(target, p, q);
    }
    return solve(c.ddbar(p - 1, q - 1), t);
}

// ---------------------------------------------------------------------------

struct TripleResult {
    bool defined = false;
    std::string reason;
    FormExpr representative;
    std::pair<int, int> target{0, 0};
    Subspace indeterminacy;
    Verdict verdict = Verdict::Undefined;
    FormExpr f_ab, f_bc;
    AffineSet primitives_ab, primitives_bc;
    bool certified = false;  // verdict checked over the full primitive sets
};

inline TripleResult triple_product(const Complex& c, const BCClass& a, const BCClass& b, const BCClass& g) {
    using detail::parity;
    const Model& m = c.model();
    const int p = a.p, q = a.q, r = b.p, s = b.q, u = g.p, v = g.q;
    TripleResult R;
    const int tp = p + r + u - 1, tq = q + s + v - 1;
    R.target = {tp, tq};
    FormExpr ab = wedge(a.representative, b.representative);
    FormExpr bc = wedge(b.representative, g.representative);
    try {
        R.primitives_ab = ddbar_primitive(c, parity(p + q) * ab, p + r, q + s);
        R.primitives_bc = ddbar_primitive(c, parity(r + s) * bc, r + u, s + v);
    } catch (const OutsideBasis&) {
        throw std::invalid_argument("product leaves the chosen complex");
    }
    if (R.primitives_ab.empty() || R.primitives_bc.empty()) {
        R.reason = R.primitives_ab.empty() ? "first wedge is not ddbar-exact" : "second wedge is not ddbar-exact";
        return R;
    }
    R.defined = true;
    R.f_ab = c.form(*R.primitives_ab.particular, p + r - 1, q + s - 1);
    R.f_bc = c.form(*R.primitives_bc.particular, r + u - 1, s + v - 1);
    auto rho_of = [&](const FormExpr& fab, const FormExpr& fbc) {
        return parity(p + q) * wedge(a.representative, fbc) - parity(r + s) * wedge(fab, g.representative);
    };
    R.representative = rho_of(R.f_ab, R.f_bc);
    if (!ddbar(m, R.representative).is_zero()) throw InvariantViolation("triple representative is not ddbar-closed");

    const std::size_t N = c.dim(tp, tq);
    auto coords_t = [&](const FormExpr& f) {
        try {
            return c.coords(f, tp, tq);
        } catch (const OutsideBasis&) {
            throw std::invalid_argument("product leaves the chosen complex");
        }
    };
    std::vector<Vec> gens;
    // alpha ^ H_A(r+u-1, s+v-1) and H_A(p+r-1, q+s-1) ^ gamma
    for (const auto& x : aeppli_cached(c, r + u - 1, s + v - 1)->representatives)
        gens.push_back(coords_t(wedge(a.representative, x)));
    for (const auto& y : aeppli_cached(c, p + r - 1, q + s - 1)->representatives)
        gens.push_back(coords_t(wedge(y, g.representative)));
    // im del + im delbar and ker ddbar at the target, shared across products
    auto exact = c.memo<Subspace>("del+delbar image", tp, tq, [&] {
        Subspace e(N);
        Subspace b1 = column_space(c.del(tp - 1, tq)), b2 = column_space(c.delbar(tp, tq - 1));
        if (b1.ambient_dim() == N) e = sum(e, b1);
        if (b2.ambient_dim() == N) e = sum(e, b2);
        return e;
    });
    Subspace ind = sum(Subspace::span(N, gens), *exact);
    if (c.in_range(tp, tq)) {
        auto closed = c.memo<Subspace>("ddbar kernel", tp, tq, [&] { return kernel_basis(c.ddbar(tp, tq)); });
        R.indeterminacy = intersection(ind, *closed);
    } else {
        R.indeterminacy = ind;
    }
    Vec rv = coords_t(R.representative);
    R.verdict = R.indeterminacy.contains(rv) ? Verdict::Vanishing : Verdict::Nonvanishing;

    // Changing f_ab, f_bc along their affine directions must stay inside the indeterminacy.
    bool ok = true;
    for (const auto& d : R.primitives_bc.direction.basis())
        ok = ok && R.indeterminacy.contains(coords_t(wedge(a.representative, c.form(d, r + u - 1, s + v - 1))));
    for (const auto& d : R.primitives_ab.direction.basis())
        ok = ok && R.indeterminacy.contains(coords_t(wedge(c.form(d, p + r - 1, q + s - 1), g.representative)));
    R.certified = ok;
    return R;
}

// ---------------------------------------------------------------------------
// Quadruple products. Unknown blocks X = (x, y, z, eta, eta', xi, xi') with
//   ddbar x = ab, ddbar y = bc, ddbar z = cd,
//   x c - a y = del eta + delbar eta',  y d - b z = del xi + delbar xi'.

class QuadSystem {
public:
    enum Block { X = 0, Y, Z, Eta, EtaP, Xi, XiP };

    QuadSystem(const Complex& c, const BCClass& a, const BCClass& b, const BCClass& g, const BCClass& d)
        : c_(c), a_(a), b_(b), g_(g), d_(d) {
        P_ = a.p + b.p + g.p + d.p;
        Q_ = a.q + b.q + g.q + d.q;
        deg_[X] = {a.p + b.p - 1, a.q + b.q - 1};
        deg_[Y] = {b.p + g.p - 1, b.q + g.q - 1};
        deg_[Z] = {g.p + d.p - 1, g.q + d.q - 1};
        const std::pair<int, int> xg{deg_[X].first + g.p, deg_[X].second + g.q};
        const std::pair<int, int> yd{deg_[Y].first + d.p, deg_[Y].second + d.q};
        deg_[Eta] = {xg.first - 1, xg.second};
        deg_[EtaP] = {xg.first, xg.second - 1};
        deg_[Xi] = {yd.first - 1, yd.second};
        deg_[XiP] = {yd.first, yd.second - 1};
        for (int k = 0; k < 7; ++k) {
            off_[k] = total_;
            total_ += c.dim(deg_[k].first, deg_[k].second);
        }
        build(xg, yd);
    }

    int P() const { return P_; }
    int Q() const { return Q_; }
    std::pair<int, int> block_bidegree(Block k) const { return deg_[k]; }
    std::size_t total() const { return total_; }
    const AffineSet& solutions() const { return sol_; }

    Vec assemble(const std::array<FormExpr, 7>& blocks) const {
        Vec x(total_);
        for (int k = 0; k < 7; ++k) {
            Vec v = c_.coords(blocks[k], deg_[k].first, deg_[k].second);
            std::copy(v.begin(), v.end(), x.begin() + off_[k]);
        }
        return x;
    }
    FormExpr block(const Vec& x, Block k) const {
        auto [p, q] = deg_[k];
        Vec v(x.begin() + off_[k], x.begin() + off_[k] + c_.dim(p, q));
        return c_.form(v, p, q);
    }

    // (u, v) with u in A^{P-2,Q-1}, v in A^{P-1,Q-2}; split into the part linear in X and the x-z bilinear part.
    std::pair<FormExpr, FormExpr> linear_part(const Vec& x) const {
        using detail::parity;
        const int deg_a = a_.p + a_.q;
        FormExpr u = parity(deg_a) * wedge(a_.representative, block(x, Xi)) + wedge(block(x, Eta), d_.representative);
        FormExpr v = parity(deg_a) * wedge(a_.representative, block(x, XiP)) + wedge(block(x, EtaP), d_.representative);
        return {u, v};
    }
    std::pair<FormExpr, FormExpr> bilinear_part(const FormExpr& x, const FormExpr& z) const {
        using detail::parity;
        const Model& m = c_.model();
        const int deg_x = deg_[X].first + deg_[X].second;
        FormExpr u = parity(deg_x + 1) * wedge(x, delbar(m, z));
        FormExpr v = -wedge(del(m, x), z);
        return {u, v};
    }
    std::pair<FormExpr, FormExpr> evaluate(const Vec& x) const {
        auto [u1, v1] = linear_part(x);
        auto [u2, v2] = bilinear_part(block(x, X), block(x, Z));
        return {u1 + u2, v1 + v2};
    }

    // Coordinates in A^{P-2,Q-1} (+) A^{P-1,Q-2}.
    Vec coords(const std::pair<FormExpr, FormExpr>& uv) const { return coords(uv, c_); }
    Vec coords(const std::pair<FormExpr, FormExpr>& uv, const Complex& mc) const {
        Vec u, v;
        try {
            u = mc.coords(uv.first, P_ - 2, Q_ - 1);
            v = mc.coords(uv.second, P_ - 1, Q_ - 2);
        } catch (const OutsideBasis&) {
            throw std::invalid_argument("quadruple representative leaves the chosen complex");
        }
        u.insert(u.end(), v.begin(), v.end());
        return u;
    }

private:
    void place(ExactMatrix& A, std::size_t row0, Block k, const ExactMatrix& blk, bool negate = false) const {
        for (std::size_t r = 0; r < blk.rows(); ++r)
            for (std::size_t cc = 0; cc < blk.cols(); ++cc)
                if (!blk(r, cc).is_zero()) A(row0 + r, off_[k] + cc) += negate ? -blk(r, cc) : blk(r, cc);
    }

    // Rows of a secondary equation: the target slice plus every monomial the wedge images can reach.
    BasisIndex secondary_rows(std::pair<int, int> t, Block k1, const FormExpr& right, Block k2,
                              const FormExpr& left) const {
        std::vector<FormExpr> imgs;
        auto collect = [&](Block k, const FormExpr& w, bool on_left) {
            const BasisIndex& S = c_.slice(deg_[k].first, deg_[k].second);
            for (std::size_t i = 0; i < S.size(); ++i)
                imgs.push_back(on_left ? wedge(w, c_.basis_form(S, i)) : wedge(c_.basis_form(S, i), w));
        };
        collect(k1, right, false);
        collect(k2, left, true);
        return c_.extended_slice(t.first, t.second, imgs);
    }

    void build(std::pair<int, int> xg, std::pair<int, int> yd) {
        const int pa = a_.p + b_.p, qa = a_.q + b_.q;
        const std::pair<int, int> sb{b_.p + g_.p, b_.q + g_.q}, sc{g_.p + d_.p, g_.q + d_.q};
        const BasisIndex T4 = secondary_rows(xg, X, g_.representative, Y, a_.representative);
        const BasisIndex T5 = secondary_rows(yd, Y, d_.representative, Z, b_.representative);
        std::size_t r1 = c_.dim(pa, qa), r2 = c_.dim(sb.first, sb.second), r3 = c_.dim(sc.first, sc.second);
        std::size_t r4 = T4.size(), r5 = T5.size();
        ExactMatrix A(r1 + r2 + r3 + r4 + r5, total_);
        Vec rhs(A.rows());
        bool consistent = true;
        auto put_rhs = [&](std::size_t row0, const FormExpr& f, std::pair<int, int> bd) {
            if (f.is_zero()) return;
            try {
                Vec v = c_.coords(f, bd.first, bd.second);
                for (std::size_t k = 0; k < v.size(); ++k) rhs[row0 + k] = v[k];
            } catch (const OutsideBasis&) {
                consistent = false;  // ddbar images stay in the complex
            }
        };
        std::size_t row = 0;
        place(A, row, X, c_.ddbar(deg_[X].first, deg_[X].second));
        put_rhs(row, wedge(a_.representative, b_.representative), {pa, qa});
        row += r1;
        place(A, row, Y, c_.ddbar(deg_[Y].first, deg_[Y].second));
        put_rhs(row, wedge(b_.representative, g_.representative), sb);
        row += r2;
        place(A, row, Z, c_.ddbar(deg_[Z].first, deg_[Z].second));
        put_rhs(row, wedge(g_.representative, d_.representative), sc);
        row += r3;
        place(A, row, X, c_.wedge_map_into(g_.representative, deg_[X].first, deg_[X].second, false, T4));
        place(A, row, Y, c_.wedge_map_into(a_.representative, deg_[Y].first, deg_[Y].second, true, T4), true);
        place(A, row, Eta, c_.del(deg_[Eta].first, deg_[Eta].second), true);
        place(A, row, EtaP, c_.delbar(deg_[EtaP].first, deg_[EtaP].second), true);
        row += r4;
        place(A, row, Y, c_.wedge_map_into(d_.representative, deg_[Y].first, deg_[Y].second, false, T5));
        place(A, row, Z, c_.wedge_map_into(b_.representative, deg_[Z].first, deg_[Z].second, true, T5), true);
        place(A, row, Xi, c_.del(deg_[Xi].first, deg_[Xi].second), true);
        place(A, row, XiP, c_.delbar(deg_[XiP].first, deg_[XiP].second), true);
        sol_ = solve(A, rhs);
        if (!consistent) sol_.particular.reset();
    }

    const Complex& c_;
    BCClass a_, b_, g_, d_;
    int P_ = 0, Q_ = 0;
    std::array<std::pair<int, int>, 7> deg_{};
    std::array<std::size_t, 7> off_{};
    std::size_t total_ = 0;
    AffineSet sol_;
};

struct QuadResult {
    bool defined = false;
    std::string reason;
    int P = 0, Q = 0;
    FormExpr representative;  // u + v at the particular defining system
    AffineSet achievable_classes;  // in H_S^{-1} quotient coordinates
    std::size_t hs_dim = 0;
    bool exact_coset = true;  // false when x-z cross terms forced a relaxed hull
    Verdict verdict = Verdict::Undefined;
};

namespace detail {

// Coordinates of a cycle in the quotient cycles/boundaries, w.r.t. complement representatives.
class QuotientCoords {
public:
    QuotientCoords(const Subspace& cycles, const Subspace& boundaries)
        : reps_(complement_basis(cycles, boundaries)), bnd_(boundaries) {
        std::vector<Vec> cols = reps_;
        for (const auto& v : boundaries.basis()) cols.push_back(v);
        basis_ = ExactMatrix::from_columns(cycles.ambient_dim(), cols);
    }
    std::size_t dim() const { return reps_.size(); }
    Vec operator()(const Vec& v) const {
        AffineSet s = solve(basis_, v);
        if (s.empty()) throw InvariantViolation("quadruple representative is not a Schweitzer cycle");
        return Vec(s.particular->begin(), s.particular->begin() + reps_.size());
    }

private:
    std::vector<Vec> reps_;
    Subspace bnd_;
    ExactMatrix basis_;
};

}  // namespace detail

// The defining system ranges over `c`; classes are measured in H_S^{-1} of `measure`
// (default `c`), which must contain every form the construction produces.
inline QuadResult quad_product(const Complex& c, const BCClass& a, const BCClass& b, const BCClass& g,
                               const BCClass& d, const Complex* measure = nullptr) {
    const Complex& mc = measure ? *measure : c;
    QuadResult R;
    QuadSystem sys(c, a, b, g, d);
    R.P = sys.P();
    R.Q = sys.Q();
    const AffineSet& S = sys.solutions();
    if (S.empty()) {
        R.reason = "defining system has no solution";
        return R;
    }
    R.defined = true;
    SchweitzerMinusOne maps = schweitzer_minus_one_maps(mc, R.P, R.Q);
    const std::size_t N = maps.du + maps.dv;
    Subspace cycles = kernel_basis(maps.cycle_map);
    if (cycles.ambient_dim() != N) cycles = Subspace::full(N);
    Subspace bnd = column_space(maps.boundary_map);
    if (bnd.ambient_dim() != N) bnd = Subspace(N);
    detail::QuotientCoords qc(cycles, bnd);
    R.hs_dim = qc.dim();

    const Vec& X0 = *S.particular;
    auto uv0 = sys.evaluate(X0);
    R.representative = uv0.first + uv0.second;
    Vec phi0 = sys.coords(uv0, mc);
    if (!cycles.contains(phi0)) throw InvariantViolation("quadruple representative is not a Schweitzer cycle");

    FormExpr x0 = sys.block(X0, QuadSystem::X), z0 = sys.block(X0, QuadSystem::Z);
    std::vector<Vec> dirs;
    for (const auto& D : S.direction.basis()) {
        auto lin = sys.linear_part(D);
        auto c1 = sys.bilinear_part(x0, sys.block(D, QuadSystem::Z));
        auto c2 = sys.bilinear_part(sys.block(D, QuadSystem::X), z0);
        dirs.push_back(sys.coords({lin.first + c1.first + c2.first, lin.second + c1.second + c2.second}, mc));
    }
    // Cross terms B(x_i, z_j) over bases of the x- and z-projections of the direction space.
    std::vector<Vec> xs, zs;
    for (const auto& D : S.direction.basis()) {
        xs.push_back(c.coords(sys.block(D, QuadSystem::X), sys.block_bidegree(QuadSystem::X).first,
                              sys.block_bidegree(QuadSystem::X).second));
        zs.push_back(c.coords(sys.block(D, QuadSystem::Z), sys.block_bidegree(QuadSystem::Z).first,
                              sys.block_bidegree(QuadSystem::Z).second));
    }
    auto [xp, xq] = sys.block_bidegree(QuadSystem::X);
    auto [zp, zq] = sys.block_bidegree(QuadSystem::Z);
    Subspace xspan = Subspace::span(c.dim(xp, xq), xs), zspan = Subspace::span(c.dim(zp, zq), zs);
    std::vector<Vec> cross;
    for (const auto& xv : xspan.basis())
        for (const auto& zv : zspan.basis()) {
            Vec w = sys.coords(sys.bilinear_part(c.form(xv, xp, xq), c.form(zv, zp, zq)), mc);
            if (!bnd.contains(w)) cross.push_back(std::move(w));
        }
    if (!cross.empty()) {
        // The bilinear image is not a linear set; enlarge to its linear span.
        R.exact_coset = false;
        dirs.insert(dirs.end(), cross.begin(), cross.end());
    }
    std::vector<Vec> qdirs;
    for (const auto& v : dirs) qdirs.push_back(qc(v));
    R.achievable_classes.particular = qc(phi0);
    R.achievable_classes.direction = Subspace::span(R.hs_dim, qdirs);
    R.verdict = R.achievable_classes.contains(Vec(R.hs_dim)) ? Verdict::Vanishing : Verdict::Nonvanishing;
    return R;
}

// ---------------------------------------------------------------------------
// Obstruction search on special-type structures.

struct ObstructionHit {
    FormExpr alpha, beta, gamma_tilde;
    TripleResult product;
};

inline std::vector<ObstructionHit> search_obstruction(const Complex& c) {
    const Model& m = c.model();
    if (!is_special_type(m) || c.kind() != SpaceKind::FullInvariant)
        throw NotSpecialType("model is not of special type");
    const int n = m.n;
    const IndexSet top = bit(n);
    const Metric unit = Metric::unit(n);
    std::vector<BCClass> cands;
    for (int p = 0; p <= n - 1; ++p)
        for (int q = 0; q <= n - 1; ++q) {
            if (p + q == 0) continue;
            const BasisIndex& B = c.slice(p, q);
            for (std::size_t k = 0; k < B.size(); ++k) {
                if ((B[k].idx.holo & top) || (B[k].idx.anti & top)) continue;
                FormExpr f = c.basis_form(B, k);
                if (!bc_harmonic(f, m, unit)) continue;
                try {
                    cands.push_back(make_bc_class(c, f, &unit));
                } catch (const InvalidClass&) {
                }
            }
        }
    const FormExpr w = ddbar(m, m.mono({n}, {n}));
    // For each bidegree and target monomial: the single monomial gamma avoiding index n
    // with w ^ gamma proportional to the target, if exactly one such monomial exists.
    auto key_less = [](const std::pair<std::pair<int, int>, Key>& x, const std::pair<std::pair<int, int>, Key>& y) {
        if (x.first != y.first) return x.first < y.first;
        return KeyLess{}(x.second, y.second);
    };
    std::map<std::pair<std::pair<int, int>, Key>, std::optional<FormExpr>, decltype(key_less)> memo(key_less);
    auto find_gamma = [&](int gp, int gq, const FormExpr& target) -> std::optional<FormExpr> {
        const BasisIndex& S = c.slice(gp, gq);
        const auto& [tkey, tc] = *target.terms().begin();
        std::optional<FormExpr> found;
        for (std::size_t k = 0; k < S.size(); ++k) {
            if ((S[k].idx.holo & top) || (S[k].idx.anti & top)) continue;
            FormExpr g = c.basis_form(S, k);
            FormExpr wg = wedge(w, g);
            auto it = wg.terms().find(tkey);
            if (it == wg.terms().end()) continue;
            GaussScalar s = tc / it->second;
            if (!(s * wg - target).is_zero()) continue;
            if (found) return std::nullopt;  // not unique
            found = s * g;
        }
        return found;  // w ^ gamma = target
    };
    std::vector<ObstructionHit> hits;
    std::vector<std::pair<const BCClass*, const BCClass*>> pairs;
    for (const auto& a : cands)
        for (const auto& b : cands) {
            FormExpr ab = wedge(a.representative, b.representative);
            if (ab.is_zero()) continue;
            const int gp = a.p + b.p - 2, gq = a.q + b.q - 2;
            if (gp < 0 || gq < 0) continue;
            const FormExpr target = detail::parity(a.p + a.q) * ab;
            auto mk = std::make_pair(std::make_pair(gp, gq), target.terms().begin()->first);
            std::optional<FormExpr> unit_gamma;
            auto it = memo.find(mk);
            if (it == memo.end()) {
                FormExpr mono(n, m.nchar());
                mono.add(mk.second, GaussScalar(1));
                unit_gamma = find_gamma(gp, gq, mono);
                memo.emplace(mk, unit_gamma);
            } else {
                unit_gamma = it->second;
            }
            if (!unit_gamma) continue;
            FormExpr gamma = target.terms().begin()->second * *unit_gamma;
            if (wedge(gamma, b.representative).is_zero()) continue;
            hits.push_back({a.representative, b.representative, gamma, {}});
            pairs.emplace_back(&a, &b);
        }
    parallel_for(hits.size(), [&](std::size_t i) {
        hits[i].product = triple_product(c, *pairs[i].first, *pairs[i].second, *pairs[i].second);
    });
    return hits;
}

}  // namespace icoh

#endif
