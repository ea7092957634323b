#ifndef ICOH_VERIFY_HPP
#define ICOH_VERIFY_HPP

#include "catalog.hpp"
#include "formality.hpp"
#include "massey.hpp"

#include <array>
#include <chrono>
#include <optional>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace icoh {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::vector<std::string> details;
    double seconds = 0;
};

using Grid = std::array<std::array<int, 5>, 5>;  // [p][q]

// Cardinalities of the listed Bott-Chern bases for the Nakamura manifold.
inline const Grid& nakamura_table(bool mu_pi) {
    static const Grid pi = {{{1, 1, 3, 4, 1}, {1, 7, 13, 12, 3}, {3, 13, 15, 17, 7}, {4, 12, 17, 17, 6}, {1, 3, 7, 6, 1}}};
    static const Grid half = {{{1, 1, 3, 4, 1}, {1, 1, 3, 4, 1}, {3, 3, 0, 3, 3}, {4, 4, 3, 6, 4}, {1, 1, 3, 4, 1}}};
    return mu_pi ? pi : half;
}

inline Model nakamura_model(bool mu_pi) {
    auto r = get_model("nakamura4", mu_pi ? "mu=pi" : "mu=pi/2");
    return bind_model(r.spec, r.binding);
}

inline Grid bc_grid(const Complex& c) {
    Grid g{};
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; q <= 4; ++q) g[p][q] = static_cast<int>(bott_chern(c, p, q).dim);
    return g;
}

namespace detail {

inline std::string grid_row(const Grid& g, int p) {
    std::string s;
    for (int q = 0; q <= 4; ++q) s += (q ? " " : "") + std::to_string(g[p][q]);
    return s;
}

template <class F>
CriterionResult timed(int id, const std::string& name, F&& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.details.push_back(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline GaussScalar gs(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return GaussScalar(r);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CriterionResult criterion_tables() {
    return detail::timed(1, "Bott-Chern tables of the Nakamura manifold", [](CriterionResult& r) {
        r.passed = true;
        for (bool mu_pi : {true, false}) {
            Complex c(nakamura_model(mu_pi), SpaceKind::BGammaC);
            Grid got = bc_grid(c);
            const Grid& want = nakamura_table(mu_pi);
            const std::string tag = mu_pi ? "mu=pi" : "mu=pi/2";
            for (int p = 0; p <= 4; ++p)
                r.details.push_back(tag + " p=" + std::to_string(p) + ": computed " + detail::grid_row(got, p) +
                                    " | listed " + detail::grid_row(want, p));
            for (int p = 0; p <= 4; ++p)
                for (int q = 0; q <= 4; ++q)
                    if (got[p][q] != want[p][q]) {
                        r.passed = false;
                        r.details.push_back(tag + " mismatch at (" + std::to_string(p) + "," + std::to_string(q) +
                                            "): computed " + std::to_string(got[p][q]) + ", listed " +
                                            std::to_string(want[p][q]));
                    }
            auto spot = [&](int p, int q, int v) {
                bool ok = got[p][q] == v;
                r.details.push_back(tag + " spot h(" + std::to_string(p) + "," + std::to_string(q) +
                                    ") = " + std::to_string(v) + (ok ? " ok" : " FAILED"));
                r.passed = r.passed && ok;
            };
            spot(4, 4, 1);
            if (mu_pi) {
                spot(1, 1, 7);
            } else {
                spot(2, 0, 3);
                spot(1, 1, 1);
                spot(2, 2, 0);
            }
        }
    });
}

// Quadruple product on the Nakamura manifold: defining systems are solved on the
// invariant complex and their classes measured in H_S^{-1} of C_Gamma + invariants.
inline CriterionResult criterion_quad() {
    return detail::timed(2, "quadruple product on the Nakamura manifold", [](CriterionResult& r) {
        r.passed = true;
        for (bool mu_pi : {true, false}) {
            const std::string tag = mu_pi ? "mu=pi" : "mu=pi/2";
            Model m = nakamura_model(mu_pi);
            Complex work(m, SpaceKind::FullInvariant);
            Complex meas(m, SpaceKind::BGammaC, true);
            auto cls = [&](const Complex& c, std::vector<int> h, std::vector<int> a) {
                return make_bc_class(c, m.mono(h, a));
            };
            auto A = cls(work, {1, 2}, {}), B = cls(work, {}, {2, 3}), G = cls(work, {}, {1, 3}), D = cls(work, {}, {1, 2});
            QuadResult q = quad_product(work, A, B, G, D, &meas);
            bool nonvanishing = q.defined && q.verdict == Verdict::Nonvanishing;
            r.details.push_back(tag + ": verdict " + to_string(q.verdict) + ", H_S^-1(" + std::to_string(q.P) + "," +
                                std::to_string(q.Q) + ") dim " + std::to_string(q.hs_dim) +
                                (q.exact_coset ? ", exact coset" : ", relaxed coset"));
            AffineSet prim = ddbar_primitive(meas, wedge(A.representative, B.representative), 2, 2);
            bool has24 = prim.contains(meas.coords(m.mono({2}, {4}), 1, 1));
            r.details.push_back(tag + ": ddbar-primitive set of e12 ^ e|23 contains e[2|4]: " + (has24 ? "yes" : "no"));
            bool cls_nonzero = schweitzer_minus_one_nonzero(meas, 2, 6, m.zero(), m.mono({2}, {1, 2, 3, 4}));
            r.details.push_back(tag + ": class of e[2|1,2,3,4] in H_S^-1(2,6) nonzero: " + (cls_nonzero ? "yes" : "no"));
            std::size_t ha = aeppli(meas, 1, 4).dim;
            r.details.push_back(tag + ": h_A(1,4) = " + std::to_string(ha));
            r.passed = r.passed && nonvanishing && has24 && cls_nonzero && ha == q.hs_dim;
        }
    });
}

// ---------------------------------------------------------------------------
// Complex dimension 3 nilmanifolds.

enum class Nil6Case { I_l1_zero, I_l6_zero, II };

inline std::string to_string(Nil6Case c) {
    switch (c) {
        case Nil6Case::I_l1_zero: return "family I, l1 = 0";
        case Nil6Case::I_l6_zero: return "family I, l6 = 0";
        case Nil6Case::II: return "family II";
    }
    return "?";
}

// Deterministic grid over {0, 1, -1, i, 1/2}: all SKT points found, then non-SKT points by stride.
inline std::vector<std::vector<GaussScalar>> nil6_grid(Nil6Case which, std::size_t want = 60) {
    const std::vector<GaussScalar> V = {detail::gs(0), detail::gs(1), detail::gs(-1), GaussScalar::i(), detail::gs(1, 2)};
    const int free = which == Nil6Case::II ? 4 : 5;
    std::vector<std::vector<GaussScalar>> skt, other;
    std::vector<int> idx(free, 0);
    while (true) {
        std::vector<GaussScalar> f;
        for (int k : idx) f.push_back(V[k]);
        std::vector<GaussScalar> b;
        bool skt_pt = false, admissible = true;
        if (which == Nil6Case::I_l1_zero) {
            b = {detail::gs(0), f[0], f[1], f[2], f[3], f[4]};
        } else if (which == Nil6Case::I_l6_zero) {
            b = {f[0], f[1], f[2], f[3], f[4], detail::gs(0)};
        } else {
            b = f;
            admissible = (b[0] * b[3].conj()).re() == 0;
        }
        if (admissible) {
            if (which == Nil6Case::II) {
                skt_pt = b[0].is_zero() && b[3].is_zero();
            } else {
                Rational C = -(b[1].norm_sq() + b[3].norm_sq() + b[4].norm_sq()) + 2 * (b[2].conj() * b[5]).re();
                skt_pt = C == 0;
            }
            (skt_pt ? skt : other).push_back(b);
        }
        int k = free - 1;
        while (k >= 0 && ++idx[k] == static_cast<int>(V.size())) idx[k--] = 0;
        if (k < 0) break;
    }
    std::vector<std::vector<GaussScalar>> out;
    std::size_t ns = std::min(skt.size(), want / 3);
    for (std::size_t k = 0; k < ns; ++k) out.push_back(skt[k * skt.size() / ns]);
    std::size_t no = want - ns;
    for (std::size_t k = 0; k < no && k < other.size(); ++k) out.push_back(other[k * other.size() / no]);
    return out;
}

// First nonvanishing <a, b, c> over Bott-Chern representatives of positive degree, if any.
inline std::optional<std::array<FormExpr, 3>> find_nonvanishing_triple(const Complex& c) {
    std::vector<BCClass> cls;
    for (int p = 0; p <= c.n(); ++p)
        for (int q = 0; q <= c.n(); ++q) {
            if (p + q == 0) continue;
            for (const auto& f : bott_chern(c, p, q).representatives) cls.push_back(make_bc_class(c, f));
        }
    for (const auto& a : cls)
        for (const auto& b : cls)
            for (const auto& g : cls) {
                if (a.p + b.p + g.p - 1 > c.n() || a.q + b.q + g.q - 1 > c.n()) continue;
                if (triple_product(c, a, b, g).verdict == Verdict::Nonvanishing)
                    return std::array<FormExpr, 3>{a.representative, b.representative, g.representative};
            }
    return std::nullopt;
}

struct Nil6Point {
    std::vector<GaussScalar> params;
    bool skt_formula = false;  // C = 0, resp. l1 = l4 = 0
    bool skt_unit = false;     // ddbar omega = 0 for the unit metric
    bool formal = false;
    Verdict designated = Verdict::Undefined;
    std::string note;
    std::optional<std::array<FormExpr, 3>> alternative;  // searched only when the designated product fails
    bool ok() const { return skt_formula == formal && (skt_formula || designated == Verdict::Nonvanishing); }
};

inline Nil6Point nil6_point(Nil6Case which, const std::vector<GaussScalar>& b) {
    Nil6Point pt;
    pt.params = b;
    const std::string name = which == Nil6Case::II ? "nil6_II" : "nil6_I";
    ModelSpec spec = parse_model(catalog_entry(name).source());
    Model m = bind_model(spec, make_binding(spec, b));
    if (!validate(m).passed || !integrability_check(m).passed) throw InvariantViolation("catalog model fails validation");
    if (which == Nil6Case::II) {
        pt.skt_formula = b[0].is_zero() && b[3].is_zero();
    } else {
        Rational C = -(b[1].norm_sq() + b[3].norm_sq() + b[4].norm_sq()) + 2 * (b[2].conj() * b[5]).re();
        pt.skt_formula = C == 0;
    }
    const Metric unit = Metric::unit(3);
    pt.skt_unit = skt_check(m, unit).passed;
    Complex c(m, SpaceKind::FullInvariant);
    pt.formal = geom_bc_formality(c, unit).formal;
    if (pt.skt_formula) return pt;
    std::vector<int> h1, a1, h2, a2, h3, a3;
    if (which == Nil6Case::I_l1_zero) {
        h1 = {1}, a1 = {1}, h2 = {2}, a2 = {2}, h3 = {2}, a3 = {2};
    } else if (which == Nil6Case::I_l6_zero) {
        h1 = {1}, a1 = {1}, h2 = {2}, a2 = {2}, h3 = {1}, a3 = {2};
    } else if (!b[3].is_zero()) {
        h1 = {1, 2}, a1 = {}, h2 = {}, a2 = {1, 2}, h3 = {}, a3 = {1, 2};
    } else {
        h1 = {1, 3}, a1 = {}, h2 = {}, a2 = {1, 3}, h3 = {}, a3 = {1, 3};
    }
    try {
        auto A = make_bc_class(c, m.mono(h1, a1)), B = make_bc_class(c, m.mono(h2, a2)),
             G = make_bc_class(c, m.mono(h3, a3));
        TripleResult t = triple_product(c, A, B, G);
        pt.designated = t.verdict;
        if (!t.defined) pt.note = t.reason;
    } catch (const InvalidClass& e) {
        pt.designated = Verdict::Undefined;
        pt.note = e.what();
    }
    if (pt.designated != Verdict::Nonvanishing) pt.alternative = find_nonvanishing_triple(c);
    return pt;
}

inline std::string render_params(const std::vector<GaussScalar>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + to_display(v[k]);
    return s + ")";
}

inline CriterionResult criterion_nil6(std::size_t per_family = 60) {
    return detail::timed(3, "SKT iff geometrically-BC-formal in complex dimension 3", [&](CriterionResult& r) {
        r.passed = true;
        for (Nil6Case w : {Nil6Case::I_l1_zero, Nil6Case::I_l6_zero, Nil6Case::II}) {
            auto grid = nil6_grid(w, per_family);
            std::size_t nskt = 0, iff_ok = 0, nonv = 0, nonskt = 0, unit_agree = 0, failed = 0, alt = 0;
            std::vector<std::string> bad;
            for (const auto& b : grid) {
                Nil6Point pt = nil6_point(w, b);
                nskt += pt.skt_formula;
                iff_ok += pt.skt_formula == pt.formal;
                unit_agree += pt.skt_formula == pt.skt_unit;
                if (!pt.skt_formula) {
                    ++nonskt;
                    nonv += pt.designated == Verdict::Nonvanishing;
                }
                if (!pt.ok()) {
                    ++failed;
                    alt += pt.alternative.has_value();
                    if (bad.size() < 4)
                        bad.push_back("  " + render_params(b) + ": SKT " + (pt.skt_formula ? "yes" : "no") +
                                      ", formal " + (pt.formal ? "yes" : "no") + ", product " +
                                      to_string(pt.designated) + (pt.note.empty() ? "" : " (" + pt.note + ")"));
                }
            }
            bool ok = failed == 0 && grid.size() >= 50;
            r.passed = r.passed && ok;
            r.details.push_back(to_string(w) + ": " + std::to_string(grid.size()) + " points, " + std::to_string(nskt) +
                                " SKT; SKT<=>formal on " + std::to_string(iff_ok) + "; unit-metric ddbar omega agrees on " +
                                std::to_string(unit_agree) + "; designated product NONVANISHING on " +
                                std::to_string(nonv) + "/" + std::to_string(nonskt) + " non-SKT points");
            for (auto& s : bad) r.details.push_back(s);
            if (failed > bad.size()) r.details.push_back("  ... " + std::to_string(failed - bad.size()) + " more");
            if (failed)
                r.details.push_back("  another NONVANISHING triple product exists at " + std::to_string(alt) + "/" +
                                    std::to_string(failed) + " failing points (reported only)");
        }
    });
}

// ---------------------------------------------------------------------------

inline CriterionResult criterion_examples() {
    return detail::timed(4, "obstruction examples in complex dimension 4 and 5", [](CriterionResult& r) {
        r.passed = true;
        struct Case {
            std::string model;
            std::vector<int> ah, aa, bh, ba;  // as printed
            std::vector<int> ch, ca, dh, da;  // self-consistent reading
        };
        const std::vector<Case> cases = {
            {"ex1", {1, 2}, {2}, {3}, {1}, {1, 2}, {3}, {3}, {1}},
            {"ex2", {3, 4}, {1}, {1}, {1, 2}, {3, 4}, {1}, {1, 2}, {2}},
        };
        for (const auto& cs : cases) {
            auto ref = get_model(cs.model, "unit");
            Model m = bind_model(ref.spec, ref.binding);
            Complex c(m, SpaceKind::FullInvariant);
            auto hits = search_obstruction(c);
            std::size_t nonv = 0;
            for (const auto& h : hits) nonv += h.product.verdict == Verdict::Nonvanishing;
            r.details.push_back(cs.model + ": " + std::to_string(hits.size()) + " search hits, " + std::to_string(nonv) +
                                " NONVANISHING");
            auto probe = [&](const FormExpr& a, const FormExpr& b, const std::string& label) {
                std::string verdict;
                try {
                    auto A = make_bc_class(c, a), B = make_bc_class(c, b);
                    verdict = to_string(triple_product(c, A, B, B).verdict);
                } catch (const InvalidClass& e) {
                    verdict = std::string("UNDEFINED (") + e.what() + ")";
                }
                bool found = false;
                for (const auto& h : hits)
                    if ((h.alpha - a).is_zero() && (h.beta - b).is_zero()) found = true;
                r.details.push_back(cs.model + " " + label + " <" + m.render(a) + ", " + m.render(b) + ", " +
                                    m.render(b) + ">: " + verdict + ", found by search: " + (found ? "yes" : "no"));
                return verdict == "NONVANISHING" && found;
            };
            bool printed = probe(m.mono(cs.ah, cs.aa), m.mono(cs.bh, cs.ba), "as printed");
            probe(m.mono(cs.ch, cs.ca), m.mono(cs.dh, cs.da), "consistent reading");
            r.passed = r.passed && printed && nonv == hits.size() && !hits.empty();
        }
    });
}

inline CriterionResult criterion_prop43() {
    return detail::timed(5, "SKT nilmanifold with a nonvanishing triple product", [](CriterionResult& r) {
        auto ref = get_model("prop43", "skt-witness");
        Model m = bind_model(ref.spec, ref.binding);
        Complex c(m, SpaceKind::FullInvariant);
        bool skt = skt_check(m, Metric::unit(4)).passed;
        std::size_t ha = aeppli(c, 2, 1).dim;
        auto A = make_bc_class(c, m.mono({1, 2, 4}, {1})), B = make_bc_class(c, m.mono({}, {2}));
        TripleResult t = triple_product(c, A, B, B);
        r.details.push_back("binding (1,1,1,1,3/2): skt_check " + std::string(skt ? "passes" : "fails"));
        r.details.push_back("h_A(2,1) = " + std::to_string(ha));
        r.details.push_back("<e[1,2,4|1], e[|2], e[|2]> = " + to_string(t.verdict) + ", representative " +
                            m.render(t.representative));
        r.passed = skt && ha == 15 && t.verdict == Verdict::Nonvanishing;
    });
}

// ---------------------------------------------------------------------------

inline CriterionResult criterion_ks() {
    return detail::timed(6, "Kahler solvmanifolds", [](CriterionResult& r) {
        r.passed = true;
        for (auto [l, k] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
            auto ref = get_model("ks", "", l, k);
            Model m = bind_model(ref.spec, ref.binding);
            Complex c(m, SpaceKind::KsB);
            const int n = m.n;
            const std::string tag = "(l,k)=(" + std::to_string(l) + "," + std::to_string(k) + ")";
            bool d_zero = true, closed = true, dims = true, products = true;
            std::string table_direct, table_printed, table_proof;
            const Metric unit = Metric::unit(n);
            std::vector<BCClass> classes;
            for (int p = 0; p <= n; ++p)
                for (int q = 0; q <= n; ++q) {
                    const BasisIndex& B = c.slice(p, q);
                    for (std::size_t j = 0; j < B.size(); ++j) {
                        FormExpr e = c.basis_form(B, j);
                        if (!differential(m, e).is_zero()) d_zero = false;
                        try {
                            c.coords(hodge_star(e, unit, n), n - p, n - q);
                            c.coords(m.conj(e), q, p);
                        } catch (const OutsideBasis&) {
                            closed = false;
                        }
                        for (int p2 = 0; p2 + p <= n; ++p2)
                            for (int q2 = 0; q2 + q <= n; ++q2) {
                                const BasisIndex& B2 = c.slice(p2, q2);
                                for (std::size_t j2 = 0; j2 < B2.size(); ++j2) try {
                                        c.coords(wedge(e, c.basis_form(B2, j2)), p + p2, q + q2);
                                    } catch (const OutsideBasis&) {
                                        closed = false;
                                    }
                            }
                        // exhaustive for n <= 3; classes of total degree <= 2 for (2,2)
                        if (p + q > 0 && (n <= 3 || p + q <= 2)) classes.push_back(make_bc_class(c, e));
                    }
                    std::size_t direct = B.size();
                    std::size_t bc = bott_chern(c, p, q).dim, ae = aeppli(c, p, q).dim, db = dolbeault(c, p, q).dim;
                    KsHodgeNumbers h = ks_hodge_numbers(l, k, p, q);
                    if (!(bc == direct && ae == direct && db == direct && h.direct == static_cast<long>(direct)))
                        dims = false;
                    table_direct += " " + std::to_string(direct);
                    table_printed += " " + std::to_string(h.printed);
                    table_proof += " " + std::to_string(h.proof);
                }
            std::size_t attempted = 0, defined = 0;
            for (const auto& a : classes)
                for (const auto& b : classes)
                    for (const auto& g : classes) {
                        if (a.p + b.p + g.p - 1 > n || a.q + b.q + g.q - 1 > n) continue;
                        ++attempted;
                        TripleResult t = triple_product(c, a, b, g);
                        if (t.defined) ++defined;
                        if (t.verdict == Verdict::Nonvanishing) products = false;
                    }
            bool ok = d_zero && closed && dims && products;
            r.passed = r.passed && ok;
            r.details.push_back(tag + ": d = 0 on B " + (d_zero ? "yes" : "no") + ", B closed under wedge/star/conj " +
                                (closed ? "yes" : "no") + ", BC = Aeppli = Dolbeault = direct " + (dims ? "yes" : "no") +
                                ", triple products " + std::to_string(attempted) + " attempted, " +
                                std::to_string(defined) + " defined, none NONVANISHING " + (products ? "yes" : "no"));
            r.details.push_back(tag + " h^{p,q} row-major, direct :" + table_direct);
            r.details.push_back(tag + " h^{p,q} row-major, printed:" + table_printed + " (reported only)");
            r.details.push_back(tag + " h^{p,q} row-major, proof  :" + table_proof + " (reported only)");
        }
    });
}

// ---------------------------------------------------------------------------
// Property suite.

namespace detail {

inline std::vector<std::pair<std::string, Model>> property_models() {
    std::vector<std::pair<std::string, Model>> out;
    for (const auto& e : catalog()) {
        if (e.name == "ks") {
            for (auto [l, k] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}}) {
                auto r = get_model("ks", "", l, k);
                out.emplace_back(r.spec.name, bind_model(r.spec, r.binding));
            }
            continue;
        }
        if (e.bindings.empty()) {
            auto r = get_model(e.name);
            out.emplace_back(e.name, bind_model(r.spec, r.binding));
            continue;
        }
        for (const auto& b : e.bindings) {
            auto r = get_model(e.name, b.name);
            out.emplace_back(e.name + ":" + b.name, bind_model(r.spec, r.binding));
        }
    }
    return out;
}

inline GaussScalar random_scalar(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    return GaussScalar(a, b);
}

inline FormExpr random_form(const Model& m, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> terms(1, 4), exps(-2, 2);
    std::uniform_int_distribution<IndexSet> sets(0, (IndexSet(1) << m.n) - 1);
    FormExpr f(m.n, m.nchar());
    int t = terms(rng);
    for (int k = 0; k < t; ++k) {
        CharMonomial ch(m.nchar(), 0);
        for (auto& e : ch) e = exps(rng);
        f.add(Key{ch, {sets(rng), sets(rng)}}, random_scalar(rng));
    }
    return f;
}

}  // namespace detail

inline CriterionResult criterion_algebraic(std::size_t forms_per_model = 200) {
    return detail::timed(7, "algebraic property suite", [&](CriterionResult& r) {
        r.passed = true;
        std::mt19937_64 rng(20240611);
        std::size_t checks = 0;
        auto fail = [&](const std::string& what) {
            r.passed = false;
            if (r.details.size() < 20) r.details.push_back("FAILED " + what);
        };
        auto models = detail::property_models();
        for (const auto& [name, m] : models) {
            for (std::size_t k = 0; k < forms_per_model; ++k) {
                FormExpr a = detail::random_form(m, rng);
                FormExpr da = differential(m, a);
                auto [d1, d2] = split_differential(m, a);
                if (!differential(m, da).is_zero()) fail(name + ": d^2 on " + m.render(a));
                if (!del(m, d1).is_zero()) fail(name + ": del^2 on " + m.render(a));
                if (!delbar(m, d2).is_zero()) fail(name + ": delbar^2 on " + m.render(a));
                if (!(del(m, d2) + delbar(m, d1)).is_zero()) fail(name + ": del delbar + delbar del on " + m.render(a));
                if (!(m.conj(da) - differential(m, m.conj(a))).is_zero()) fail(name + ": conj d on " + m.render(a));
                if (!(d1 + d2 - da).is_zero()) fail(name + ": d = del + delbar on " + m.render(a));
                checks += 6;
            }
            if (m.n <= 4 && m.nchar() == 0) {
                const Metric unit = Metric::unit(m.n);
                const IndexSet all = (IndexSet(1) << m.n) - 1;
                for (IndexSet h = 0; h <= all; ++h)
                    for (IndexSet a = 0; a <= all; ++a) {
                        FormExpr e(m.n, 0);
                        e.add(Key{{}, {h, a}}, GaussScalar(1));
                        FormExpr ss = hodge_star(hodge_star(e, unit, m.n), unit, m.n);
                        if (!((ss - e).is_zero() || (ss + e).is_zero())) fail(name + ": star star on " + m.render(e));
                        ++checks;
                    }
            }
        }
        // rank-nullity and kernel soundness on random matrices
        for (int t = 0; t < 200; ++t) {
            std::uniform_int_distribution<int> dim(1, 7), zero(0, 2);
            std::size_t rows = dim(rng), cols = dim(rng);
            ExactMatrix M(rows, cols);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j) M(i, j) = zero(rng) == 0 ? GaussScalar(0) : detail::random_scalar(rng);
            Subspace K = kernel_basis(M);
            if (rank(M) + K.dim() != cols) fail("rank-nullity on a random " + std::to_string(rows) + "x" + std::to_string(cols));
            for (const auto& v : K.basis())
                if (!is_zero(M.apply(v))) fail("kernel vector not annihilated");
            checks += 2;
        }
        // triple verdicts do not depend on the primitive choices
        std::size_t triples = 0;
        auto certify = [&](const Complex& c, const FormExpr& a, const FormExpr& b, const FormExpr& g) {
            TripleResult t = triple_product(c, make_bc_class(c, a), make_bc_class(c, b), make_bc_class(c, g));
            if (t.defined && !t.certified) fail("triple verdict depends on primitives: " + c.model().render(a));
            ++triples;
        };
        for (const auto& [name, m] : models) {
            if (m.nchar() != 0) continue;
            Complex c(m, name.rfind("ks", 0) == 0 ? SpaceKind::KsB : SpaceKind::FullInvariant);
            std::vector<FormExpr> reps;
            for (int p = 0; p <= m.n && reps.size() < 6; ++p)
                for (int q = 0; q <= m.n && reps.size() < 6; ++q) {
                    if (p + q == 0 || p + q > 2) continue;
                    for (const auto& f : bott_chern(c, p, q).representatives)
                        if (reps.size() < 6 && bidegree(f).kind == Bidegree::Kind::Pure) reps.push_back(f);
                }
            for (const auto& a : reps)
                for (const auto& b : reps) certify(c, a, b, b);
        }
        r.details.insert(r.details.begin(),
                         std::to_string(models.size()) + " models, " + std::to_string(forms_per_model) +
                             " random forms each, " + std::to_string(checks) + " identity checks, " +
                             std::to_string(triples) + " triple products certified");
    });
}

// ---------------------------------------------------------------------------

inline CriterionResult criterion_duality() {
    return detail::timed(8, "Aeppli / Bott-Chern duality", [](CriterionResult& r) {
        r.passed = true;
        std::size_t cells = 0, models = 0;
        auto check = [&](const std::string& name, const Complex& c) {
            ++models;
            const int n = c.n();
            for (int p = 0; p <= n; ++p)
                for (int q = 0; q <= n; ++q) {
                    ++cells;
                    std::size_t a = aeppli(c, p, q).dim, b = bott_chern(c, n - p, n - q).dim;
                    if (a != b) {
                        r.passed = false;
                        r.details.push_back("FAILED " + name + " at (" + std::to_string(p) + "," + std::to_string(q) +
                                            "): h_A " + std::to_string(a) + ", h_BC " + std::to_string(b));
                    }
                }
        };
        for (const auto& [name, m] : detail::property_models()) {
            if (name.rfind("ks", 0) == 0) {
                Complex c(m, SpaceKind::KsB);
                check(name + " (B)", c);
            }
            Complex c(m, SpaceKind::FullInvariant);
            check(name, c);
        }
        r.details.insert(r.details.begin(), std::to_string(models) + " complexes, " + std::to_string(cells) + " cells");
    });
}

// ---------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, std::vector<int>>>& verify_suites() {
    static const std::vector<std::pair<std::string, std::vector<int>>> s = {
        {"tables", {1}},   {"quad", {2}}, {"nil6", {3}},      {"examples", {4}},        {"prop43", {5}},
        {"ks", {6}},       {"algebraic", {7}}, {"duality", {8}}, {"all", {1, 2, 3, 4, 5, 6, 7, 8}}};
    return s;
}

inline CriterionResult run_criterion(int id) {
    switch (id) {
        case 1: return criterion_tables();
        case 2: return criterion_quad();
        case 3: return criterion_nil6();
        case 4: return criterion_examples();
        case 5: return criterion_prop43();
        case 6: return criterion_ks();
        case 7: return criterion_algebraic();
        case 8: return criterion_duality();
    }
    throw std::invalid_argument("unknown criterion " + std::to_string(id));
}

inline std::vector<int> suite_criteria(const std::string& suite) {
    for (const auto& [name, ids] : verify_suites())
        if (name == suite) return ids;
    throw std::invalid_argument("unknown verify suite '" + suite + "'");
}

}  // namespace icoh

#endif
