#include "icoh/catalog.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <set>

using namespace icoh;

namespace {

Model load(const std::string& name, const std::string& binding = "") {
    auto r = get_model(name, binding);
    return bind_model(r.spec, r.binding);
}

}  // namespace

TEST_CASE("catalog lists every shipped model once") {
    auto ms = list_models();
    CHECK(ms.size() >= 7);
    std::set<std::string> names;
    for (const auto& [name, desc] : ms) {
        CHECK_FALSE(desc.empty());
        CHECK(names.insert(name).second);
    }
    for (const char* n : {"nil6_I", "nil6_II", "ex1", "ex2", "prop43", "ks", "nakamura4", "torus3"})
        CHECK(names.count(n) == 1);
    CHECK(catalog_entry("nakamura4").sources.size() == 2);
}

TEST_CASE("named bindings instantiate the documented values") {
    Model iw = load("nil6_I", "nonSKT-sample");
    CHECK(iw.d_table[2] == iw.mono({1, 2}, {}));
    CHECK(iw.d_table[0].is_zero());
    CHECK(iw.d_table[1].is_zero());

    Model nak = load("nakamura4", "mu=pi");
    REQUIRE(nak.lattice);
    CHECK(nak.lattice->mu_over_pi == Rational(1));
    CHECK(nak.d_table[3] == -nak.mono({2, 3}, {}));
    CHECK(nak.nchar() == 2);
    Model half = load("nakamura4", "mu=pi/2");
    REQUIRE(half.lattice);
    CHECK(half.lattice->mu_over_pi == Rational(1, 2));

    auto w = get_model("prop43", "skt-witness");
    CHECK(w.binding.at("E2") == GaussScalar(Rational(3, 2)));
    // default binding is the first listed
    CHECK(get_model("nil6_I").binding == get_model("nil6_I", "nonSKT-sample").binding);
}

TEST_CASE("every catalog binding is a valid integrable model") {
    for (const auto& e : catalog()) {
        if (e.name == "ks") continue;
        std::vector<std::string> bs;
        for (const auto& b : e.bindings) bs.push_back(b.name);
        if (bs.empty()) bs.push_back("");
        for (const auto& b : bs) {
            INFO(e.name << " " << b);
            Model m = load(e.name, b);
            CHECK(validate(m).passed);
            CHECK(integrability_check(m).passed);
            auto r = get_model(e.name, b);
            CHECK(satisfies_constraints(r.spec, r.binding));
        }
    }
}

TEST_CASE("unknown names are rejected") {
    CHECK_THROWS_AS(get_model("nil7"), UnknownModel);
    CHECK_THROWS_AS(catalog_entry(""), UnknownModel);
    CHECK_THROWS_AS(get_model("nil6_I", "no-such-binding"), std::invalid_argument);
    CHECK_THROWS_AS(get_model("torus3", "x"), BindingError);
    CHECK_THROWS_AS(catalog_entry("nakamura4").source("pi/3"), std::invalid_argument);
}

TEST_CASE("generated families") {
    for (int l = 1; l <= 3; ++l)
        for (int k = 1; l + k <= 4; ++k) {
            auto r = get_model("ks", "", l, k);
            CHECK(r.spec.n == l + k);
            CHECK(r.spec.name == "ks_" + std::to_string(l) + "_" + std::to_string(k));
            Model m = bind_model(r.spec, r.binding);
            CHECK(validate(m).passed);
            for (int i = 1; i <= k; ++i) CHECK(m.d_table[l + i - 1].is_zero());
        }
    CHECK_THROWS(get_model("ks", "", 0, 1));
    for (int n = 1; n <= 5; ++n) {
        Model t = load("torus" + std::to_string(n));
        CHECK(t.n == n);
        for (const auto& f : t.d_table) CHECK(f.is_zero());
    }
}

TEST_CASE("fixture files named by the catalog exist") {
    const std::filesystem::path dir = std::filesystem::path(ICOH_SOURCE_DIR) / "tests" / "fixtures";
    std::size_t n = 0;
    for (const auto& e : catalog())
        for (const auto& f : e.fixtures) {
            INFO(f);
            CHECK(std::filesystem::exists(dir / f));
            ++n;
        }
    CHECK(n >= 5);
}
