#ifndef ICOH_CATALOG_HPP
#define ICOH_CATALOG_HPP

#include "calculus.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icoh {

struct NamedBinding {
    std::string name;
    std::vector<GaussScalar> values;  // in parameter declaration order
    std::string note;
    std::string variant;  // source variant; empty for single-source entries
};

struct CatalogEntry {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> sources;  // variant -> DSL text
    std::vector<NamedBinding> bindings;
    std::vector<std::string> fixtures;  // files under tests/fixtures

    const std::string& source(const std::string& variant = "") const {
        for (const auto& [v, t] : sources)
            if (v == variant) return t;
        if (variant.empty() && !sources.empty()) return sources.front().second;
        throw std::invalid_argument("unknown variant '" + variant + "' of " + name);
    }
    const NamedBinding& binding(const std::string& b) const {
        for (const auto& nb : bindings)
            if (nb.name == b) return nb;
        throw std::invalid_argument("unknown binding '" + b + "' for model " + name);
    }
};

class UnknownModel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace catalog_text {

inline const char* nil6_I = R"(model nil6_I dim 3
family nil6_I
param l1 l2 l3 l4 l5 l6
constraint l1*l6 = 0
d e1 = 0
d e2 = l1*e[1|1]
d e3 = l2*e[1,2|] + l3*e[1|1] + l4*e[1|2] + l5*e[2|1] + l6*e[2|2]
)";

inline const char* nil6_II = R"(model nil6_II dim 3
family nil6_II
param l1 l2 l3 l4
# Re(l1)Re(l4) + Im(l1)Im(l4) = 0
constraint l1*conj(l4) + conj(l1)*l4 = 0
d e1 = 0
d e2 = l1*e[1,3|] + l2*e[1|1] + l1*e[1|3]
d e3 = l3*e[1|1] + l4*e[1|2] + conj(l4)*e[2|1]
)";

inline const char* ex1 = R"(model ex1 dim 4
family special
param A B C
d e1 = 0
d e2 = 0
d e3 = 0
d e4 = A*e[1,2|] + B*e[1|3] + C*e[2|1]
)";

inline const char* ex2 = R"(model ex2 dim 5
family special
param D E F
d e1 = 0
d e2 = 0
d e3 = 0
d e4 = 0
d e5 = D*e[1,2|] + E*e[3|2] + F*e[4|3]
)";

inline const char* prop43 = R"(model prop43 dim 4
family prop43
param B1 G1 D1 D2 E2
d e1 = 0
d e2 = 0
d e3 = B1*e[2|1]
d e4 = G1*e[1,2|] + D1*e[1|1] + D2*e[1|2] + E2*e[2|2]
)";

inline std::string nakamura4(const std::string& mu) {
    return "model nakamura4 dim 4\n"
           "family nakamura\n"
           "char c1 conj c2\n"
           "char c2 conj c1\n"
           "d c1 = e[1|]\n"
           "d c2 = e[|1]\n"
           "weight e2 = c1^1\n"
           "weight e3 = c1^-1\n"
           "lattice mu = " +
           mu +
           "\n"
           "d e1 = 0\n"
           "d e2 = e[1,2|]\n"
           "d e3 = -e[1,3|]\n"
           "d e4 = -e[2,3|]\n";
}

}  // namespace catalog_text

// d phi^j = 1/2 phi^j ^ sum_i (phi^{l+i} - conj(phi^{l+i})), j <= l; d phi^{l+i} = 0
inline std::string ks_source(int l, int k) {
    if (l < 1 || k < 1 || l + k > kMaxDim) throw std::invalid_argument("ks needs l, k >= 1");
    std::string s = "model ks_" + std::to_string(l) + "_" + std::to_string(k) + " dim " + std::to_string(l + k) + "\n";
    s += "family ks\n";
    for (int j = 1; j <= l; ++j) {
        s += "d e" + std::to_string(j) + " =";
        for (int i = 1; i <= k; ++i) {
            std::string a = std::to_string(j), b = std::to_string(l + i);
            s += (i == 1 ? " " : " + ") + std::string("1/2*e[") + a + "," + b + "|] - 1/2*e[" + a + "|" + b + "]";
        }
        s += "\n";
    }
    for (int i = 1; i <= k; ++i) s += "d e" + std::to_string(l + i) + " = 0\n";
    return s;
}

inline std::string torus_source(int n) {
    std::string s = "model torus" + std::to_string(n) + " dim " + std::to_string(n) + "\nfamily torus\n";
    for (int j = 1; j <= n; ++j) s += "d e" + std::to_string(j) + " = 0\n";
    return s;
}

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        using G = GaussScalar;
        const G z(0), o(1), h(Rational(1, 2)), ii = G::i();
        std::vector<CatalogEntry> v;
        v.push_back({"nil6_I",
                     "6-dimensional nilmanifolds, complex structure family I (l1*l6 = 0)",
                     {{"", catalog_text::nil6_I}},
                     {{"nonSKT-sample", {z, o, z, z, z, z}, "l2 = 1 only; C = -1", ""},
                      {"skt-sample", {z, z, z, z, z, o}, "l6 = 1 only; C = 0, SKT", ""},
                      {"skt-mixed", {z, o, h, z, z, o}, "C = -1 + 2*Re(1/2) = 0", ""},
                      {"l6zero-sample", {o, o, z, z, z, z}, "l1 = l2 = 1, l6 = 0; C = -1", ""},
                      {"heisenberg", {z, z, o, z, z, z}, "only l3; C = 0", ""}},
                     {"nil6_I_nonSKT.json"}});
        v.push_back({"nil6_II",
                     "6-dimensional nilmanifolds, complex structure family II",
                     {{"", catalog_text::nil6_II}},
                     {{"l4-sample", {z, z, z, o}, "l4 = 1; non-SKT", ""},
                      {"l1-sample", {o, z, z, z}, "l1 = 1, l4 = 0; non-SKT", ""},
                      {"orthogonal-sample", {o, z, o, ii}, "l1 = 1, l4 = i; Re(l1 conj(l4)) = 0", ""},
                      {"skt-sample", {z, o, o, z}, "l1 = l4 = 0; SKT", ""}},
                     {}});
        v.push_back({"ex1",
                     "nilmanifold of special type, complex dimension 4, d e4 = A e12 + B e1 3bar + C e2 1bar",
                     {{"", catalog_text::ex1}},
                     {{"unit", {o, o, o}, "A = B = C = 1", ""}},
                     {}});
        v.push_back({"ex2",
                     "nilmanifold of special type, complex dimension 5, d e5 = D e12 + E e3 2bar + F e4 3bar",
                     {{"", catalog_text::ex2}},
                     {{"unit", {o, o, o}, "D = E = F = 1", ""}},
                     {}});
        v.push_back({"prop43",
                     "SKT nilmanifolds of complex dimension 4 without geometrically-BC-formal metrics",
                     {{"", catalog_text::prop43}},
                     {{"skt-witness", {o, o, o, o, G(Rational(3, 2))},
                       "|B1|^2+|G1|^2+|D2|^2 = 3 = 2*Re(D1*conj(E2))", ""},
                      {"non-skt", {o, o, o, o, o}, "SKT equation fails: 3 != 2", ""}},
                     {}});
        v.push_back({"ks",
                     "Kahler solvmanifolds C^l x C^k, invariant coframe (generated for --l, --k)",
                     {{"", ks_source(1, 1)}},
                     {},
                     {"ks_1_1_dolbeault.json"}});
        v.push_back({"nakamura4",
                     "complex parallelizable Nakamura manifold of complex dimension 4, lattice variants mu = pi, pi/2",
                     {{"pi", catalog_text::nakamura4("pi")}, {"pi/2", catalog_text::nakamura4("1/2 pi")}},
                     {{"mu=pi", {}, "lattice with mu = pi", "pi"}, {"mu=pi/2", {}, "lattice with mu = pi/2", "pi/2"}},
                     {"nakamura4_pi_bc.json", "nakamura4_pi2_bc.json"}});
        v.push_back({"torus3", "complex torus of dimension 3", {{"", torus_source(3)}}, {}, {"torus3_bc.json"}});
        return v;
    }();
    return entries;
}

inline std::vector<std::pair<std::string, std::string>> list_models() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : catalog()) out.emplace_back(e.name, e.description);
    return out;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw UnknownModel("unknown model '" + name + "'");
}

struct ModelRef {
    ModelSpec spec;
    ParamBinding binding;
};

// Empty binding name picks the first named binding when the model has parameters.
// "ks" reads l and k; "torusN" is generated for any N.
inline ModelRef get_model(const std::string& name, const std::string& binding_name = "", int l = 1, int k = 1) {
    const bool torus = name.rfind("torus", 0) == 0 && name.size() > 5 &&
                       name.find_first_not_of("0123456789", 5) == std::string::npos;
    if ((name == "ks" || torus) && !binding_name.empty())
        throw BindingError("model " + name + " has no named bindings");
    if (name == "ks") return {parse_model(ks_source(l, k)), {}};
    if (torus) return {parse_model(torus_source(std::stoi(name.substr(5)))), {}};
    const CatalogEntry& e = catalog_entry(name);
    if (e.bindings.empty()) {
        if (!binding_name.empty()) throw BindingError("model " + name + " has no named bindings");
        return {parse_model(e.source()), {}};
    }
    const NamedBinding& b = binding_name.empty() ? e.bindings.front() : e.binding(binding_name);
    ModelRef r{parse_model(e.source(b.variant)), {}};
    r.binding = make_binding(r.spec, b.values);
    return r;
}

}  // namespace icoh

#endif
