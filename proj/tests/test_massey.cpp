#include "icoh/catalog.hpp"
#include "icoh/massey.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace icoh;

namespace {

Model load(const std::string& name, const std::string& binding = "") {
    auto r = get_model(name, binding);
    return bind_model(r.spec, r.binding);
}

// Second route for untwisted models: matrices built from the calculus module on
// an enumerated monomial basis, primitives from solve(), and indeterminacy
// spanned by alpha ^ ker(ddbar) + ker(ddbar) ^ gamma + im del + im delbar
// (no Aeppli representatives involved).
struct Oracle {
    const Model& m;

    std::vector<Key> keys(int p, int q) const {
        std::vector<Key> out;
        if (p < 0 || q < 0 || p > m.n || q > m.n) return out;
        const IndexSet all = (IndexSet(1) << m.n) - 1;
        for (IndexSet h = 0; h <= all; ++h)
            for (IndexSet a = 0; a <= all; ++a)
                if (size(h) == p && size(a) == q) out.push_back(Key{{}, {h, a}});
        return out;
    }
    ExactMatrix op(int p, int q, int tp, int tq, FormExpr (*f)(const Model&, const FormExpr&)) const {
        BasisIndex dst(keys(tp, tq));
        std::vector<Vec> cols;
        for (const auto& k : keys(p, q)) {
            FormExpr x(m.n, 0);
            x.add(k, GaussScalar(1));
            cols.push_back(coordinates(f(m, x), dst));
        }
        return ExactMatrix::from_columns(dst.size(), cols);
    }
    FormExpr form(const Vec& v, int p, int q) const { return from_coordinates(v, BasisIndex(keys(p, q)), m.n, 0); }
    Vec coords(const FormExpr& f, int p, int q) const { return coordinates(f, BasisIndex(keys(p, q))); }

    // nullopt: undefined
    std::optional<bool> nonvanishing(const FormExpr& a, const FormExpr& b, const FormExpr& g) const {
        auto deg = [](const FormExpr& f) { return std::make_pair(bidegree(f).p, bidegree(f).q); };
        auto [p, q] = deg(a);
        auto [r, s] = deg(b);
        auto [u, v] = deg(g);
        auto sgn = [](int k) { return GaussScalar(k % 2 ? -1 : 1); };
        auto prim = [&](const FormExpr& t, int P, int Q) -> std::optional<FormExpr> {
            if (P > m.n || Q > m.n) return t.is_zero() ? std::optional<FormExpr>(FormExpr(m.n, 0)) : std::nullopt;
            AffineSet s = solve(op(P - 1, Q - 1, P, Q, ddbar), coords(t, P, Q));
            if (s.empty()) return std::nullopt;
            return form(*s.particular, P - 1, Q - 1);
        };
        auto fab = prim(sgn(p + q) * wedge(a, b), p + r, q + s);
        auto fbc = prim(sgn(r + s) * wedge(b, g), r + u, s + v);
        if (!fab || !fbc) return std::nullopt;
        FormExpr rho = sgn(p + q) * wedge(a, *fbc) - sgn(r + s) * wedge(*fab, g);
        const int tp = p + r + u - 1, tq = q + s + v - 1;
        const std::size_t N = keys(tp, tq).size();
        if (N == 0) return false;
        std::vector<Vec> gens;
        const Subspace kbc = kernel_basis(op(r + u - 1, s + v - 1, r + u, s + v, ddbar));
        const Subspace kab = kernel_basis(op(p + r - 1, q + s - 1, p + r, q + s, ddbar));
        for (const auto& x : kbc.basis())
            gens.push_back(coords(wedge(a, form(x, r + u - 1, s + v - 1)), tp, tq));
        for (const auto& y : kab.basis())
            gens.push_back(coords(wedge(form(y, p + r - 1, q + s - 1), g), tp, tq));
        Subspace ind = Subspace::span(N, gens);
        Subspace e1 = column_space(op(tp - 1, tq, tp, tq, del)), e2 = column_space(op(tp, tq - 1, tp, tq, delbar));
        if (e1.ambient_dim() == N) ind = sum(ind, e1);
        if (e2.ambient_dim() == N) ind = sum(ind, e2);
        return !ind.contains(coords(rho, tp, tq));
    }
};

std::optional<bool> engine_nonvanishing(const Complex& c, const FormExpr& a, const FormExpr& b, const FormExpr& g) {
    TripleResult t = triple_product(c, make_bc_class(c, a), make_bc_class(c, b), make_bc_class(c, g));
    if (!t.defined) return std::nullopt;
    return t.verdict == Verdict::Nonvanishing;
}

// d-closed, non-ddbar-exact monomials of total degree 1 or 2
std::vector<FormExpr> monomial_classes(const Complex& c) {
    const Model& m = c.model();
    std::vector<FormExpr> out;
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; p + q <= 2; ++q) {
            if (p + q == 0) continue;
            for (const auto& k : c.slice(p, q).keys()) {
                FormExpr f(m.n, m.nchar());
                f.add(k, GaussScalar(1));
                try {
                    make_bc_class(c, f);
                    out.push_back(f);
                } catch (const InvalidClass&) {
                }
            }
        }
    return out;
}

}  // namespace

TEST_CASE("torus: products with a nonzero wedge are undefined, repeated ones vanish") {
    Model m = load("torus3");
    Complex c(m, SpaceKind::FullInvariant);
    auto e = [&](int j) { return make_bc_class(c, m.mono({j}, {})); };
    CHECK(triple_product(c, e(1), e(2), e(3)).verdict == Verdict::Undefined);
    CHECK(triple_product(c, e(1), e(1), e(2)).verdict == Verdict::Undefined);
    TripleResult t = triple_product(c, e(1), e(1), e(1));
    CHECK(t.defined);
    CHECK(t.verdict == Verdict::Vanishing);
    CHECK(t.certified);
}

TEST_CASE("class construction rejects bad representatives") {
    Model m = load("nil6_I", "nonSKT-sample");
    Complex c(m, SpaceKind::FullInvariant);
    CHECK_THROWS_AS(make_bc_class(c, m.mono({3}, {})), InvalidClass);                       // not closed
    CHECK_THROWS_AS(make_bc_class(c, m.mono({1}, {}) + m.mono({}, {1})), InvalidClass);   // mixed
    CHECK_THROWS_AS(make_bc_class(c, m.zero()), InvalidClass);
    // ddbar-exact: ddbar(e3 ^ conj e3) is a nonzero multiple of e12 ^ conj(e12)
    CHECK_THROWS_AS(make_bc_class(c, m.mono({1, 2}, {1, 2})), InvalidClass);
}

TEST_CASE("engine and second route agree on triple products") {
    std::mt19937_64 rng(43);
    std::vector<std::pair<std::string, std::string>> ms = {
        {"nil6_I", "nonSKT-sample"}, {"nil6_I", "l6zero-sample"}, {"nil6_II", "l4-sample"},
        {"nil6_II", "orthogonal-sample"}, {"nil6_I", "skt-sample"}};
    for (const auto& [name, b] : ms) {
        Model m = load(name, b);
        Complex c(m, SpaceKind::FullInvariant);
        Oracle o{m};
        auto cls = monomial_classes(c);
        REQUIRE_FALSE(cls.empty());
        int defined = 0;
        for (int t = 0; t < 150; ++t) {
            const FormExpr& a = cls[rng() % cls.size()];
            const FormExpr& x = cls[rng() % cls.size()];
            const FormExpr& g = cls[rng() % cls.size()];
            if (bidegree(a).p + bidegree(x).p + bidegree(g).p > m.n + 1 ||
                bidegree(a).q + bidegree(x).q + bidegree(g).q > m.n + 1)
                continue;
            INFO(name << " " << b << ": " << m.render(a) << ", " << m.render(x) << ", " << m.render(g));
            auto e = engine_nonvanishing(c, a, x, g);
            CHECK(e == o.nonvanishing(a, x, g));
            defined += e.has_value();
        }
        CHECK(defined > 0);
    }
}

TEST_CASE("the verdict does not depend on the representative of a class") {
    Model m = load("prop43", "skt-witness");
    Complex c(m, SpaceKind::FullInvariant);
    FormExpr a = m.mono({1, 2}, {1, 3}), b = m.mono({}, {2});
    TripleResult base = triple_product(c, make_bc_class(c, a), make_bc_class(c, b), make_bc_class(c, b));
    REQUIRE(base.verdict == Verdict::Nonvanishing);
    CHECK(base.certified);
    int shifts = 0;
    for (const auto& k : c.slice(1, 1).keys()) {
        FormExpr x(m.n, 0);
        x.add(k, GaussScalar(1));
        FormExpr shift = ddbar(m, x);
        if (shift.is_zero()) continue;
        ++shifts;
        TripleResult r = triple_product(c, make_bc_class(c, a + shift), make_bc_class(c, b), make_bc_class(c, b));
        CHECK(r.verdict == Verdict::Nonvanishing);
    }
    CHECK(shifts > 0);
    TripleResult s = triple_product(c, make_bc_class(c, GaussScalar(Rational(3, 2)) * a), make_bc_class(c, b),
                                    make_bc_class(c, GaussScalar::i() * b));
    CHECK(s.verdict == Verdict::Nonvanishing);
}

TEST_CASE("SKT points carry no nonvanishing products among low-degree monomial classes") {
    for (const auto& [name, b] : std::vector<std::pair<std::string, std::string>>{{"nil6_I", "skt-sample"},
                                                                                   {"nil6_II", "skt-sample"}}) {
        Model m = load(name, b);
        Complex c(m, SpaceKind::FullInvariant);
        auto cls = monomial_classes(c);
        std::vector<BCClass> bc;
        for (const auto& f : cls)
            if (bidegree(f).p + bidegree(f).q == 2) bc.push_back(make_bc_class(c, f));
        int nonvanishing = 0;
        for (const auto& x : bc)
            for (const auto& y : bc)
                for (const auto& z : bc) {
                    if (x.p + y.p + z.p > 4 || x.q + y.q + z.q > 4) continue;
                    nonvanishing += triple_product(c, x, y, z).verdict == Verdict::Nonvanishing;
                }
        CHECK(nonvanishing == 0);
    }
}

TEST_CASE("special-type search") {
    Model m = load("ex1");
    Complex c(m, SpaceKind::FullInvariant);
    auto hits = search_obstruction(c);
    REQUIRE_FALSE(hits.empty());
    for (const auto& h : hits) {
        CHECK(h.product.verdict == Verdict::Nonvanishing);
        CHECK(h.product.certified);
    }
    // alpha = e[1,2|3], beta = e[3|1]
    FormExpr alpha = m.mono({1, 2}, {3}), beta = m.mono({3}, {1});
    bool found = false;
    for (const auto& h : hits) found = found || (h.alpha == alpha && h.beta == beta);
    CHECK(found);
    CHECK(engine_nonvanishing(c, alpha, beta, beta) == std::optional<bool>(true));
    CHECK(engine_nonvanishing(c, m.mono({1, 2}, {2}), beta, beta) == std::optional<bool>(false));

    Model p = load("prop43");
    Complex cp(p, SpaceKind::FullInvariant);
    CHECK_THROWS_AS(search_obstruction(cp), NotSpecialType);
}

TEST_CASE("quadruple product on the Nakamura manifold") {
    for (const char* b : {"mu=pi", "mu=pi/2"}) {
        Model m = load("nakamura4", b);
        Complex work(m, SpaceKind::FullInvariant);
        Complex meas(m, SpaceKind::BGammaC, true);
        auto k = [&](std::vector<int> h, std::vector<int> a) { return make_bc_class(work, m.mono(h, a)); };
        QuadResult q = quad_product(work, k({1, 2}, {}), k({}, {2, 3}), k({}, {1, 3}), k({}, {1, 2}), &meas);
        INFO(b);
        CHECK(q.defined);
        CHECK(q.verdict == Verdict::Nonvanishing);
        CHECK(q.P == 2);
        CHECK(q.Q == 6);
        CHECK(q.hs_dim == aeppli(meas, 1, 4).dim);
    }
    // on the torus the first wedge is not ddbar-exact
    Model t = load("torus3");
    Complex ct(t, SpaceKind::FullInvariant);
    auto e = [&](int j) { return make_bc_class(ct, t.mono({j}, {})); };
    CHECK(quad_product(ct, e(1), e(2), e(3), e(1)).verdict == Verdict::Undefined);
}
