#include "icoh/catalog.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace icoh;

namespace {

Model load(const std::string& name, const std::string& binding = "") {
    auto r = get_model(name, binding);
    return bind_model(r.spec, r.binding);
}

GaussScalar small_scalar(std::mt19937_64& rng) {
    static const std::vector<GaussScalar> V = {GaussScalar(0), GaussScalar(1), GaussScalar(-1), GaussScalar::i(),
                                               GaussScalar(Rational(1, 2)), GaussScalar(Rational(1), Rational(1))};
    return V[rng() % V.size()];
}

FormExpr random_form(const Model& m, std::mt19937_64& rng, int terms = 3) {
    FormExpr f = m.zero();
    for (int t = 0; t < terms; ++t) {
        std::vector<int> h, a;
        for (int j = 1; j <= m.n; ++j) {
            if (rng() % 3 == 0) h.push_back(j);
            if (rng() % 3 == 0) a.push_back(j);
        }
        CharMonomial ch(m.nchar(), 0);
        for (auto& e : ch) e = static_cast<int>(rng() % 3) - 1;
        f += m.mono(h, a, small_scalar(rng), ch);
    }
    return f;
}

int parity(const FormExpr& f) {
    for (const auto& [k, c] : f.terms()) return (k.idx.p() + k.idx.q()) % 2;
    return 0;
}

std::vector<Model> models() {
    return {load("nil6_I", "nonSKT-sample"), load("nil6_I", "skt-mixed"), load("nil6_II", "orthogonal-sample"),
            load("ex1"),  load("prop43"), load("nakamura4", "mu=pi"), [] {
                auto r = get_model("ks", "", 2, 1);
                return bind_model(r.spec, r.binding);
            }()};
}

// Sign of the permutation sorting the word (I, I^c), computed by counting inversions.
int shuffle_parity(IndexSet I, int n) {
    std::vector<int> word = indices(I);
    for (int j = 1; j <= n; ++j)
        if (!(I & bit(j))) word.push_back(j);
    int inv = 0;
    for (std::size_t a = 0; a < word.size(); ++a)
        for (std::size_t b = a + 1; b < word.size(); ++b) inv += word[a] > word[b];
    return inv % 2 ? -1 : 1;
}

}  // namespace

TEST_CASE("d squares to zero and splits into anticommuting del and delbar") {
    std::mt19937_64 rng(31);
    for (const Model& m : models()) {
        INFO(m.name);
        for (int t = 0; t < 60; ++t) {
            FormExpr a = random_form(m, rng);
            CHECK(differential(m, differential(m, a)).is_zero());
            CHECK(del(m, del(m, a)).is_zero());
            CHECK(delbar(m, delbar(m, a)).is_zero());
            CHECK(del(m, delbar(m, a)) == -delbar(m, del(m, a)));
            CHECK(del(m, a) + delbar(m, a) == differential(m, a));
            CHECK(m.conj(differential(m, a)) == differential(m, m.conj(a)));
        }
    }
}

TEST_CASE("d is a graded derivation") {
    std::mt19937_64 rng(37);
    for (const Model& m : models()) {
        INFO(m.name);
        for (int t = 0; t < 40; ++t) {
            FormExpr a = random_form(m, rng, 1), b = random_form(m, rng, 2);
            FormExpr lhs = differential(m, wedge(a, b));
            FormExpr rhs = wedge(differential(m, a), b);
            FormExpr tail = wedge(a, differential(m, b));
            rhs += parity(a) ? -tail : tail;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("structure equations are read back by d on the coframe") {
    Model m = load("nil6_I", "skt-mixed");  // l2 = 1, l3 = 1/2, l6 = 1
    FormExpr expect = m.mono({1, 2}, {}) + m.mono({1}, {1}, GaussScalar(Rational(1, 2))) + m.mono({2}, {2});
    CHECK(differential(m, m.mono({3}, {})) == expect);
    CHECK(differential(m, m.mono({}, {3})) == m.conj(expect));
    CHECK(del(m, m.mono({3}, {})) == m.mono({1, 2}, {}));

    Model nak = load("nakamura4", "mu=pi");
    // d c1 = c1 * e1: d(c1 e3) = c1 e1 ^ e3 + c1 d e3 = c1 e13 - c1 e13 = 0
    FormExpr phi3 = nak.mono({3}, {}, GaussScalar(1), {1, 0});
    CHECK(differential(nak, phi3).is_zero());
}

TEST_CASE("hodge star matches the shuffle-sign oracle and squares to a sign") {
    for (int n = 1; n <= 4; ++n) {
        Metric g = Metric::unit(n);
        const IndexSet all = (IndexSet(1) << n) - 1;
        for (IndexSet I = 0; I <= all; ++I)
            for (IndexSet J = 0; J <= all; ++J) {
                FormExpr a = FormExpr::monomial(n, 0, indices(I), indices(J), GaussScalar::i());
                FormExpr s = hodge_star(a, g, n);
                int eps = shuffle_parity(I, n) * shuffle_parity(J, n);
                CHECK(s == FormExpr::monomial(n, 0, indices(all & ~I), indices(all & ~J), GaussScalar(-eps) * GaussScalar::i()));
                FormExpr ss = hodge_star(s, g, n);
                int p = size(I), q = size(J);
                int sign = (p * (n - p) + q * (n - q)) % 2 ? -1 : 1;
                CHECK(ss == GaussScalar(sign) * a);
            }
    }
}

TEST_CASE("a ^ star a is a positive multiple of the volume form up to a bidegree sign") {
    const int n = 3;
    Metric g{{Rational(1), Rational(2), Rational(1, 3)}};
    const IndexSet all = 7;
    std::map<std::pair<int, int>, int> sign_of;
    for (IndexSet I = 0; I <= all; ++I)
        for (IndexSet J = 0; J <= all; ++J) {
            FormExpr a = FormExpr::monomial(n, 0, indices(I), indices(J));
            FormExpr w = wedge(a, hodge_star(a, g, n));
            REQUIRE(w.size() == 1);
            GaussScalar c = w.terms().begin()->second;
            REQUIRE(c.is_real());
            CHECK(sgn(c.re()) != 0);
            auto key = std::make_pair(size(I), size(J));
            int s = sgn(c.re());
            auto it = sign_of.emplace(key, s).first;
            CHECK(it->second == s);
        }
    CHECK_THROWS_AS(hodge_star(FormExpr::monomial(n, 0, {1}, {}) + FormExpr::monomial(n, 0, {}, {1}), g, n),
                    UnsupportedStar);
    CHECK_THROWS_AS(hodge_star(FormExpr::monomial(n, 2, {1}, {}, GaussScalar(1), {1, 0}), g, n), UnsupportedStar);
}

TEST_CASE("metrics are validated") {
    CHECK_THROWS(Metric{{Rational(1), Rational(0)}}.check(2));
    CHECK_THROWS(Metric{{Rational(1)}}.check(2));
    CHECK_NOTHROW(Metric{{Rational(1), Rational(5, 2)}}.check(2));
}

TEST_CASE("SKT check agrees with the closed forms of the catalog families") {
    std::mt19937_64 rng(41);
    auto spec_I = parse_model(catalog_text::nil6_I);
    for (int t = 0; t < 200; ++t) {
        std::vector<GaussScalar> l(6);
        for (auto& x : l) x = small_scalar(rng);
        if (rng() % 2) l[0] = GaussScalar(0);
        else l[5] = GaussScalar(0);
        Model m = bind_model(spec_I, make_binding(spec_I, l));
        // C = -|l2|^2 - |l4|^2 - |l5|^2 + 2 Re(conj(l3) l6)
        Rational C = -(l[1].norm_sq() + l[3].norm_sq() + l[4].norm_sq()) + 2 * (l[2].conj() * l[5]).re();
        CHECK(skt_check(m, Metric::unit(3)).passed == (C == 0));
    }
    auto spec_P = parse_model(catalog_text::prop43);
    for (int t = 0; t < 200; ++t) {
        std::vector<GaussScalar> v(5);
        for (auto& x : v) x = small_scalar(rng);
        Model m = bind_model(spec_P, make_binding(spec_P, v));
        Rational s = v[0].norm_sq() + v[1].norm_sq() + v[3].norm_sq() - 2 * (v[2] * v[4].conj()).re();
        CHECK(skt_check(m, Metric::unit(4)).passed == (s == 0));
    }
    CHECK(skt_check(load("nil6_I", "nonSKT-sample"), Metric::unit(3)).passed == false);
    CHECK(skt_check(load("prop43", "skt-witness"), Metric::unit(4)).passed);
    CHECK(skt_check(load("prop43", "non-skt"), Metric::unit(4)).passed == false);
}

TEST_CASE("normal-form SKT condition") {
    using G = GaussScalar;
    CHECK(skt_family_condition(G(0), G(0), G(0), G(0), G(0)));
    CHECK_FALSE(skt_family_condition(G(1), G(0), G(0), G(0), G(0)));
    CHECK_FALSE(skt_family_condition(G(0), G(1), G(0), G(1), G(0)));
    CHECK(skt_family_condition(G(0), G(1), G(1), G(1), G(0)));
}

TEST_CASE("catalog bindings validate and a broken model does not") {
    for (const auto& e : catalog()) {
        if (e.name == "ks") continue;
        if (e.bindings.empty()) {
            Model m = load(e.name);
            CHECK(validate(m).passed);
            CHECK(integrability_check(m).passed);
        }
        for (const auto& b : e.bindings) {
            INFO(e.name << " " << b.name);
            Model m = load(e.name, b.name);
            CHECK(validate(m).passed);
            CHECK(integrability_check(m).passed);
        }
    }
    for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 2; ++k) {
            auto r = get_model("ks", "", l, k);
            Model m = bind_model(r.spec, r.binding);
            CHECK(validate(m).passed);
            CHECK(integrability_check(m).passed);
        }
    auto bad = parse_model("model bad dim 3\nd e1 = 0\nd e2 = e[1|1]\nd e3 = e[2|2]\n");
    ValidationReport v = validate(bad, {});
    CHECK_FALSE(v.passed);
    REQUIRE_FALSE(v.failures.empty());
    CHECK(v.failures.front().what == "d^2 e3");
    auto nonint = parse_model("model ni dim 2\nd e1 = 0\nd e2 = e[|1,2]\n");
    CHECK_FALSE(integrability_check(bind_model(nonint, {})).passed);
}
