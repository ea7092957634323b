#include "icoh/forms.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace icoh;

namespace {

constexpr int N = 4;

// Monomials as letter words: eta^j is letter j, conj(eta^j) is letter N + j.
// The canonical order of the engine (holomorphic ascending, then antiholomorphic
// ascending) is the ascending letter order, so the sign of a product is the parity
// of the sorting permutation of the concatenated word.
struct Word {
    std::vector<int> letters;
    GaussScalar coeff{1};
};

std::optional<Word> sort_word(Word w) {
    int inv = 0;
    auto& l = w.letters;
    for (std::size_t a = 0; a < l.size(); ++a)
        for (std::size_t b = a + 1; b < l.size(); ++b) {
            if (l[a] == l[b]) return std::nullopt;
            inv += l[a] > l[b];
        }
    std::sort(l.begin(), l.end());
    if (inv % 2) w.coeff = -w.coeff;
    return w;
}

FormExpr word_to_form(const Word& w) {
    std::vector<int> h, a;
    for (int x : w.letters) (x <= N ? h : a).push_back(x <= N ? x : x - N);
    return FormExpr::monomial(N, 0, h, a, w.coeff);
}

Word random_word(std::mt19937_64& rng) {
    Word w;
    for (int x = 1; x <= 2 * N; ++x)
        if (rng() % 3 == 0) w.letters.push_back(x);
    std::shuffle(w.letters.begin(), w.letters.end(), rng);
    w.coeff = GaussScalar(Rational(static_cast<long>(rng() % 5) - 2), Rational(static_cast<long>(rng() % 3) - 1));
    return w;
}

FormExpr random_form(std::mt19937_64& rng, int terms = 4) {
    FormExpr f(N, 0);
    for (int t = 0; t < terms; ++t) {
        Word w = random_word(rng);
        if (auto s = sort_word(w)) f += word_to_form(*s);
    }
    return f;
}

int degree_parity(const FormExpr& f) {
    int par = -1;
    for (const auto& [k, c] : f.terms()) {
        int d = (k.idx.p() + k.idx.q()) % 2;
        if (par >= 0 && par != d) return -1;
        par = d;
    }
    return par;
}

}  // namespace

TEST_CASE("unsorted monomial input is reordered with the permutation sign") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 500; ++t) {
        Word w = random_word(rng);
        std::vector<int> h, a;
        for (int x : w.letters) (x <= N ? h : a).push_back(x <= N ? x : x - N);
        // letters of one type keep their relative order; only the within-type shuffles count
        Word hw{h, GaussScalar(1)}, aw;
        for (int x : a) aw.letters.push_back(N + x);
        auto sh = sort_word(hw), sa = sort_word(aw);
        GaussScalar expect = w.coeff * sh->coeff * sa->coeff;
        FormExpr f = FormExpr::monomial(N, 0, h, a, w.coeff);
        if (expect.is_zero()) {
            CHECK(f.is_zero());
            continue;
        }
        REQUIRE(f.size() == 1);
        CHECK(f.terms().begin()->second == expect);
    }
    CHECK(FormExpr::monomial(N, 0, {1, 1}, {}).is_zero());
    CHECK_THROWS_AS(FormExpr::monomial(N, 0, {5}, {}), std::out_of_range);
}

TEST_CASE("wedge of monomials agrees with the word-sorting oracle") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 2000; ++t) {
        auto a = sort_word(random_word(rng)), b = sort_word(random_word(rng));
        if (!a || !b) continue;
        Word cat{a->letters, a->coeff * b->coeff};
        cat.letters.insert(cat.letters.end(), b->letters.begin(), b->letters.end());
        auto s = sort_word(cat);
        FormExpr got = wedge(word_to_form(*a), word_to_form(*b));
        if (!s) {
            CHECK(got.is_zero());
        } else {
            CHECK(got == word_to_form(*s));
        }
    }
}

TEST_CASE("wedge is associative, bilinear and graded commutative") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 300; ++t) {
        FormExpr a = random_form(rng), b = random_form(rng), c = random_form(rng);
        CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
        CHECK(wedge(a + b, c) == wedge(a, c) + wedge(b, c));
        int pa = degree_parity(a), pb = degree_parity(b);
        if (pa >= 0 && pb >= 0) {
            FormExpr ba = wedge(b, a);
            CHECK(wedge(a, b) == ((pa * pb) % 2 ? -ba : ba));
        }
    }
}

TEST_CASE("conjugation agrees with the word oracle and is an involutive algebra map") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 500; ++t) {
        auto w = sort_word(random_word(rng));
        if (!w) continue;
        Word cw{{}, w->coeff.conj()};
        for (int x : w->letters) cw.letters.push_back(x <= N ? x + N : x - N);
        CHECK(conjugate(word_to_form(*w)) == word_to_form(*sort_word(cw)));
    }
    for (int t = 0; t < 200; ++t) {
        FormExpr a = random_form(rng), b = random_form(rng);
        CHECK(conjugate(conjugate(a)) == a);
        CHECK(conjugate(wedge(a, b)) == wedge(conjugate(a), conjugate(b)));
    }
}

TEST_CASE("character exponents add under wedge and swap under conjugation") {
    FormExpr a = FormExpr::monomial(3, 2, {1}, {}, GaussScalar(1), {1, 0});
    FormExpr b = FormExpr::monomial(3, 2, {}, {2}, GaussScalar(1), {-1, 2});
    FormExpr ab = wedge(a, b);
    REQUIRE(ab.size() == 1);
    CHECK(ab.terms().begin()->first.ch == CharMonomial{0, 2});
    FormExpr cab = conjugate(ab, {1, 0});
    CHECK(cab.terms().begin()->first.ch == CharMonomial{2, 0});
    CHECK_THROWS(conjugate(a));
    CHECK(a.is_untwisted() == false);
    CHECK(FormExpr::monomial(3, 2, {1}, {}).is_untwisted());
}

TEST_CASE("bidegree and components") {
    FormExpr f = FormExpr::monomial(3, 0, {1}, {2}) + FormExpr::monomial(3, 0, {2}, {3});
    CHECK(bidegree(f).is_pure());
    CHECK(bidegree(f).p == 1);
    CHECK(bidegree(f).q == 1);
    FormExpr g = f + FormExpr::monomial(3, 0, {1, 2}, {});
    CHECK(bidegree(g).kind == Bidegree::Kind::Mixed);
    CHECK(g.component(2, 0) == FormExpr::monomial(3, 0, {1, 2}, {}));
    CHECK(g.component(1, 1) == f);
    CHECK(bidegree(FormExpr(3, 0)).kind == Bidegree::Kind::Any);
    CHECK_THROWS(FormExpr(3, 0) + FormExpr(4, 0));
}

TEST_CASE("coordinates round-trip through a basis index") {
    std::vector<Key> keys;
    for (IndexSet h = 0; h < 8; ++h) keys.push_back(Key{{}, {h, 1}});
    BasisIndex basis(keys);
    FormExpr f = FormExpr::monomial(3, 0, {1, 3}, {1}, GaussScalar(2)) + FormExpr::monomial(3, 0, {}, {1}, GaussScalar::i());
    Vec v = coordinates(f, basis);
    CHECK(from_coordinates(v, basis, 3, 0) == f);
    CHECK_THROWS_AS(coordinates(FormExpr::monomial(3, 0, {}, {2}), basis), OutsideBasis);
    CHECK_THROWS(BasisIndex({keys[0], keys[0]}));
}

TEST_CASE("canonical rendering") {
    FormExpr f = FormExpr::monomial(3, 0, {2, 1}, {3}, GaussScalar(Rational(1, 2)));
    CHECK(render(f) == "-1/2*e[1,2|3]");
    CHECK(render(FormExpr(3, 0)) == "0");
    FormExpr g = FormExpr::monomial(3, 0, {}, {}, GaussScalar(Rational(1), Rational(2)));
    CHECK(render(g) == "(1+2i)");
}
