#include "icoh/catalog.hpp"

#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace icoh;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kToy = R"(model toy dim 3   # trailing comment
family test
param a b
constraint a*conj(b) + conj(a)*b = 0
d e1 = 0; d e2 = 0
d e3 = a*e[1,2|] + 1/2*conj(b)*e[1|2] - re(a)*e[2|1] + i*im(b)*e[1|1]
)";

}  // namespace

TEST_CASE("parse a small model and instantiate it") {
    ModelSpec spec = parse_model(kToy);
    CHECK(spec.name == "toy");
    CHECK(spec.family == "test");
    CHECK(spec.n == 3);
    CHECK(spec.params == std::vector<std::string>{"a", "b"});
    REQUIRE(spec.constraints.size() == 1);

    GaussScalar a{Rational(2), Rational(1)}, b{Rational(1), Rational(2)};  // Re(a conj b) = 2 + 2 != 0
    CHECK_FALSE(satisfies_constraints(spec, make_binding(spec, {a, b})));
    CHECK_THROWS_AS(bind_model(spec, make_binding(spec, {a, b})), BindingError);

    GaussScalar b2{Rational(-1), Rational(2)};  // a conj(b2) = (2+i)(-1-2i) = -3i, purely imaginary
    Model m = bind_model(spec, make_binding(spec, {a, b2}));
    FormExpr expect = m.mono({1, 2}, {}, a) + m.mono({1}, {2}, GaussScalar(Rational(1, 2)) * b2.conj()) -
                      m.mono({2}, {1}, GaussScalar(a.re())) + m.mono({1}, {1}, GaussScalar::i() * GaussScalar(b2.im()));
    CHECK(m.d_table[2] == expect);
    CHECK(m.d_table[0].is_zero());
    CHECK(m.dbar_table[2] == m.conj(expect));
}

TEST_CASE("render_model round-trips through parse_model") {
    for (const auto& e : catalog())
        for (const auto& [variant, text] : e.sources) {
            ModelSpec s = parse_model(text);
            ModelSpec t = parse_model(render_model(s));
            CHECK(s == t);
            CHECK(render_model(t) == render_model(s));
        }
    ModelSpec toy = parse_model(kToy);
    CHECK(parse_model(render_model(toy)) == toy);
}

TEST_CASE("parse errors carry positions") {
    struct Bad {
        std::string text;
        std::string fragment;
    };
    std::vector<Bad> bad = {
        {"model x dim 2\nd e1 = 0\nd e2 = e1\n", "total degree 2"},
        {"model x dim 2\nd e1 = 0\nd e2 = e[1|3]\n", "unknown coframe symbol"},
        {"model x dim 2\nd e1 = 0\nd e2 = q*e[1|1]\n", "q"},        // undeclared parameter
        {"model x dim 2\nd e1 = 0\nd e2 = e[1|]\n", "degree"},      // wrong degree
        {"model x dim 2\nd e1 = 0\nd e2 = (e[1|1]\n", ""},          // unbalanced
        {"dim 2\n", ""},                                            // no header
        {"model x dim 2\nparam i\nd e1 = 0\nd e2 = 0\n", "i"},      // reserved name
    };
    for (const auto& b : bad) {
        INFO(b.text);
        try {
            parse_model(b.text);
            FAIL("accepted");
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            CHECK(std::string(e.what()).find(b.fragment) != std::string::npos);
        }
    }
}

TEST_CASE("binding errors") {
    ModelSpec spec = parse_model(catalog_text::nil6_I);
    CHECK_THROWS_AS(make_binding(spec, {GaussScalar(1)}), BindingError);
    ParamBinding b = make_binding(spec, std::vector<GaussScalar>(6));
    b.erase("l3");
    CHECK_THROWS_AS(bind_model(spec, b), BindingError);
    b["l3"] = GaussScalar(0);
    b["zz"] = GaussScalar(0);
    CHECK_THROWS_AS(bind_model(spec, b), BindingError);
}

TEST_CASE("forms in canonical text parse back to themselves") {
    auto ref = get_model("nakamura4", "mu=pi");
    Model m = bind_model(ref.spec, ref.binding);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 200; ++t) {
        FormExpr f = m.zero();
        for (int k = 0; k < 3; ++k) {
            std::vector<int> h, a;
            for (int j = 1; j <= 4; ++j) {
                if (rng() % 3 == 0) h.push_back(j);
                if (rng() % 3 == 0) a.push_back(j);
            }
            CharMonomial ch = {static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2};
            Rational re(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3), im(static_cast<long>(rng() % 5) - 2, 1 + rng() % 2);
            re.canonicalize();
            im.canonicalize();
            GaussScalar c{re, im};
            f += m.mono(h, a, c, ch);
        }
        INFO(m.render(f));
        CHECK(parse_form(ref.spec, m, m.render(f)) == f);
    }
    CHECK(parse_form(ref.spec, m, "e[1 2|]") == m.mono({1, 2}, {}));
    CHECK(parse_form(ref.spec, m, "e[2,1|]") == -m.mono({1, 2}, {}));
    CHECK_THROWS_AS(parse_form(ref.spec, m, ""), ParseError);
    CHECK_THROWS_AS(parse_form(ref.spec, m, "e[1|"), ParseError);
}

TEST_CASE("lattice triviality matches exp(i*mu*k) = 1") {
    // c1^p c2^q restricted to the lattice is trivial iff p = -q and p*mu/pi is an integer
    LatticeRule pi{Rational(1)}, half{Rational(1, 2)};
    for (int p = -4; p <= 4; ++p)
        for (int q = -4; q <= 4; ++q) {
            CHECK(lattice_trivial(pi, {p, q}) == (p + q == 0));
            CHECK(lattice_trivial(half, {p, q}) == (p + q == 0 && p % 2 == 0));
        }
}

TEST_CASE("shipped model files match the embedded catalog") {
    const std::string dir = std::string(ICOH_SOURCE_DIR) + "/models/";
    for (const auto& e : catalog()) {
        if (e.name == "ks") {
            CHECK(read_file(dir + "ks_1_1.icoh") == ks_source(1, 1));
            continue;
        }
        if (e.name == "nakamura4") {
            CHECK(read_file(dir + "nakamura4_pi.icoh") == e.source("pi"));
            CHECK(read_file(dir + "nakamura4_pi2.icoh") == e.source("pi/2"));
            continue;
        }
        INFO(e.name);
        CHECK(read_file(dir + e.name + ".icoh") == e.source());
    }
}
