#include "icoh/icoh.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace icoh;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitInput = 2, kExitInvariant = 3, kExitUndefined = 4;

struct Options {
    std::string model;
    std::string model_file;
    std::string params;
    std::string binding;
    std::string mu;
    int l = 1, k = 1;
    bool json = false, csv = false, reps = false, all = false;
    int p = -1, q = -1;
    std::string theory = "bc";
    std::string kind;
    int level = -1;
    std::string metric;
    std::vector<std::string> classes;
    bool auto_search = false;
    std::string suite = "all";
};

class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Resolved {
    ModelSpec spec;
    ParamBinding binding;
    Model model;
    std::string label;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<GaussScalar> parse_values(const std::string& s) {
    std::vector<GaussScalar> v;
    for (const auto& t : split_list(s)) v.push_back(parse_gauss(t));
    return v;
}

std::string mu_binding(const std::string& mu) {
    if (mu == "pi") return "mu=pi";
    if (mu == "pi/2" || mu == "1/2 pi" || mu == "1/2pi") return "mu=pi/2";
    throw InputError("--mu must be pi or pi/2");
}

Resolved resolve(const Options& o) {
    Resolved r;
    if (!o.model_file.empty()) {
        std::ifstream in(o.model_file);
        if (!in) throw InputError("cannot read model file " + o.model_file);
        std::stringstream ss;
        ss << in.rdbuf();
        r.spec = parse_model(ss.str());
        if (!o.params.empty()) r.binding = make_binding(r.spec, parse_values(o.params));
        r.label = o.model_file;
    } else {
        if (o.model.empty()) throw InputError("a model name or --model-file is required");
        std::string bname = o.binding;
        if (!o.mu.empty()) {
            if (o.model != "nakamura4") throw InputError("--mu applies to nakamura4 only");
            bname = mu_binding(o.mu);
        }
        ModelRef ref = get_model(o.model, o.params.empty() ? bname : (bname.empty() ? "" : bname), o.l, o.k);
        r.spec = ref.spec;
        r.binding = o.params.empty() ? ref.binding : make_binding(r.spec, parse_values(o.params));
        r.label = r.spec.name;
    }
    r.model = bind_model(r.spec, r.binding);
    return r;
}

SpaceKind choose_kind(const Options& o, const Model& m) {
    if (o.kind == "invariant") return SpaceKind::FullInvariant;
    if (o.kind == "ks") return SpaceKind::KsB;
    if (o.kind == "cgamma") return SpaceKind::BGammaC;
    if (!o.kind.empty()) throw InputError("--kind must be invariant, ks or cgamma");
    if (m.lattice && m.nchar() > 0) return SpaceKind::BGammaC;
    if (m.family == "ks") return SpaceKind::KsB;
    return SpaceKind::FullInvariant;
}

Metric parse_metric(const std::string& s, int n) {
    if (s.empty()) return Metric::unit(n);
    Metric g;
    for (const auto& t : split_list(s)) g.diag.push_back(make_rational(t));
    try {
        g.check(n);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return g;
}

Json model_json(const Resolved& r) {
    Json b = Json::object();
    for (const auto& p : r.spec.params) b[p] = to_string(r.binding.at(p));
    return Json{{"name", r.spec.name}, {"source", r.label}, {"binding", b}};
}

struct Report {
    Json doc;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Report(int argc, char** argv) {
        Json cmd = Json::array();
        for (int i = 1; i < argc; ++i) cmd.push_back(argv[i]);
        doc["command"] = cmd;
    }
    void emit() {
        doc["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        doc["engine_version"] = kEngineVersion;
        std::cout << doc.dump(2) << "\n";
    }
};

// ---------------------------------------------------------------------------

int cmd_cohomology(const Options& o, Report& rep) {
    Resolved r = resolve(o);
    const Model& m = r.model;
    Complex c(m, choose_kind(o, m), o.theory == "schweitzer" && m.lattice.has_value());
    const int n = m.n;
    const bool derham = o.theory == "derham";
    std::vector<std::pair<int, int>> cells;
    if (o.all) {
        if (derham)
            for (int k = 0; k <= 2 * n; ++k) cells.emplace_back(k, 0);
        else
            for (int p = 0; p <= n; ++p)
                for (int q = 0; q <= n; ++q) cells.emplace_back(p, q);
    } else {
        if (o.p < 0 || (!derham && o.q < 0)) throw InputError("give -p and -q, or --all");
        cells.emplace_back(o.p, derham ? 0 : o.q);
    }
    std::vector<CohomologySpace> out(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        auto [p, q] = cells[i];
        if (o.theory == "bc")
            out[i] = bott_chern(c, p, q);
        else if (o.theory == "aeppli")
            out[i] = aeppli(c, p, q);
        else if (o.theory == "dolbeault")
            out[i] = dolbeault(c, p, q);
        else if (derham)
            out[i] = de_rham(c, p);
        else if (o.theory == "schweitzer")
            out[i] = schweitzer_h(c, p, q, o.level);
        else
            throw InputError("unknown theory '" + o.theory + "'");
    });

    if (o.json) {
        rep.doc["model"] = model_json(r);
        Json res;
        res["theory"] = o.theory;
        res["complex"] = to_string(c.kind());
        if (o.theory == "schweitzer") res["level"] = o.level;
        Json cells_j = Json::array();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            Json e;
            if (derham) {
                e["k"] = cells[i].first;
            } else {
                e["p"] = cells[i].first;
                e["q"] = cells[i].second;
            }
            e["dim"] = out[i].dim;
            if (o.reps) {
                Json reps = Json::array();
                for (const auto& f : out[i].representatives) reps.push_back(m.render(f));
                e["representatives"] = reps;
            }
            cells_j.push_back(e);
        }
        res["cells"] = cells_j;
        rep.doc["results"] = res;
        rep.emit();
        return kExitOk;
    }
    if (o.csv) {
        std::cout << (derham ? "k,dim\n" : "p,q,dim\n");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (derham)
                std::cout << cells[i].first << "," << out[i].dim << "\n";
            else
                std::cout << cells[i].first << "," << cells[i].second << "," << out[i].dim << "\n";
        }
        return kExitOk;
    }
    std::cout << r.label << ", " << o.theory << " cohomology on " << to_string(c.kind()) << "\n";
    if (derham) {
        for (std::size_t i = 0; i < cells.size(); ++i) std::cout << "  b_" << cells[i].first << " = " << out[i].dim << "\n";
    } else if (o.all) {
        std::cout << "  p\\q";
        for (int q = 0; q <= n; ++q) std::cout << std::setw(5) << q;
        std::cout << "\n";
        for (int p = 0; p <= n; ++p) {
            std::cout << std::setw(5) << p;
            for (int q = 0; q <= n; ++q) std::cout << std::setw(5) << out[p * (n + 1) + q].dim;
            std::cout << "\n";
        }
    } else {
        std::cout << "  h(" << cells[0].first << "," << cells[0].second << ") = " << out[0].dim << "\n";
    }
    if (o.reps)
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (const auto& f : out[i].representatives)
                std::cout << "  [" << cells[i].first << "," << cells[i].second << "] " << m.render(f) << "\n";
    return kExitOk;
}

// Closed-form SKT quantities of the catalog families, if the model is one of them.
std::optional<std::pair<std::string, std::string>> family_quantity(const Resolved& r) {
    const auto& v = r.model.param_values;
    if (r.spec.family == "nil6_I" && v.size() == 6) {
        Rational C = -(v[1].norm_sq() + v[3].norm_sq() + v[4].norm_sq()) + 2 * (v[2].conj() * v[5]).re();
        return std::make_pair(std::string("C"), to_display(GaussScalar(C)));
    }
    if (r.spec.family == "nil6_II" && v.size() == 4)
        return std::make_pair(std::string("l1 = l4 = 0"), std::string(v[0].is_zero() && v[3].is_zero() ? "yes" : "no"));
    if (r.spec.family == "prop43" && v.size() == 5) {
        Rational s = v[0].norm_sq() + v[1].norm_sq() + v[3].norm_sq() - 2 * (v[2] * v[4].conj()).re();
        return std::make_pair(std::string("|B1|^2+|G1|^2+|D2|^2-2Re(D1 conj(E2))"), to_display(GaussScalar(s)));
    }
    return std::nullopt;
}

int cmd_skt(const Options& o, Report& rep) {
    Resolved r = resolve(o);
    Metric g = parse_metric(o.metric, r.model.n);
    DefectReport d = skt_check(r.model, g);
    auto fam = family_quantity(r);
    if (o.json) {
        rep.doc["model"] = model_json(r);
        Json res{{"skt", d.passed}, {"ddbar_omega", r.model.render(d.witness)}};
        if (fam) res["family_condition"] = Json{{"name", fam->first}, {"value", fam->second}};
        rep.doc["results"] = res;
        rep.emit();
        return kExitOk;
    }
    std::cout << r.label << ": " << (d.passed ? "SKT" : "NOT SKT") << "\n";
    if (!d.passed) std::cout << "  ddbar omega = " << r.model.render(d.witness) << "\n";
    if (fam) std::cout << "  " << fam->first << " = " << fam->second << "\n";
    return kExitOk;
}

int cmd_formality(const Options& o, Report& rep) {
    Resolved r = resolve(o);
    Metric g = parse_metric(o.metric, r.model.n);
    Complex c(r.model, choose_kind(o, r.model));
    FormalityVerdict v = geom_bc_formality(c, g);
    const Model& m = r.model;
    if (o.json) {
        rep.doc["model"] = model_json(r);
        Json res{{"formal", v.formal}};
        if (v.counterexample)
            res["counterexample"] = Json{{"a", m.render(v.counterexample->first)},
                                         {"b", m.render(v.counterexample->second)},
                                         {"product", m.render(v.product)}};
        Json dims = Json::array();
        for (const auto& [k, d] : v.harmonic_dims) dims.push_back(Json{{"p", k.first}, {"q", k.second}, {"dim", d}});
        res["harmonic_dims"] = dims;
        rep.doc["results"] = res;
        rep.emit();
        return kExitOk;
    }
    std::cout << r.label << ": " << (v.formal ? "FORMAL" : "NOT FORMAL") << " (geometric BC formality, "
              << (o.metric.empty() ? "unit metric" : "metric " + o.metric) << ")\n";
    if (v.counterexample)
        std::cout << "  " << m.render(v.counterexample->first) << " ^ " << m.render(v.counterexample->second) << " = "
                  << m.render(v.product) << " is not BC-harmonic\n";
    return kExitOk;
}

int cmd_massey(const std::string& kind, const Options& o, Report& rep) {
    Resolved r = resolve(o);
    const Model& m = r.model;
    if (o.json) rep.doc["model"] = model_json(r);
    if (o.auto_search) {
        if (kind != "triple") throw InputError("--auto searches triple products only");
        Complex c(m, SpaceKind::FullInvariant);
        auto hits = search_obstruction(c);
        if (o.json) {
            Json hs = Json::array();
            for (const auto& h : hits)
                hs.push_back(Json{{"alpha", m.render(h.alpha)},
                                  {"beta", m.render(h.beta)},
                                  {"gamma_tilde", m.render(h.gamma_tilde)},
                                  {"verdict", to_string(h.product.verdict)},
                                  {"representative", m.render(h.product.representative)}});
            rep.doc["results"] = Json{{"hits", hs}};
            rep.emit();
            return kExitOk;
        }
        std::cout << r.label << ": " << hits.size() << " obstruction hits\n";
        for (const auto& h : hits)
            std::cout << "  <" << m.render(h.alpha) << ", " << m.render(h.beta) << ", " << m.render(h.beta)
                      << "> " << to_string(h.product.verdict) << "  gamma~ = " << m.render(h.gamma_tilde) << "\n";
        return kExitOk;
    }
    const std::size_t need = kind == "triple" ? 3 : 4;
    if (o.classes.size() != need)
        throw InputError(kind + " needs " + std::to_string(need) + " --classes (or --auto)");
    std::vector<FormExpr> forms;
    for (const auto& t : o.classes) forms.push_back(parse_form(r.spec, m, t));

    SpaceKind sk = choose_kind(o, m);
    const bool twisted = sk == SpaceKind::BGammaC;
    // Twisted complexes: solve on invariant forms for quads, measure in C_Gamma + invariants.
    Complex measure(m, sk, twisted);
    std::optional<Complex> work_store;
    if (kind == "quad" && twisted) work_store.emplace(m, SpaceKind::FullInvariant);
    const Complex& work = work_store ? *work_store : measure;

    std::vector<BCClass> cls;
    try {
        for (const auto& f : forms) cls.push_back(make_bc_class(work, f));
    } catch (const InvalidClass& e) {
        throw InputError(e.what());
    }
    Verdict verdict;
    Json res;
    std::string text;
    if (kind == "triple") {
        TripleResult t = triple_product(work, cls[0], cls[1], cls[2]);
        verdict = t.verdict;
        res = Json{{"verdict", to_string(t.verdict)},
                   {"defined", t.defined},
                   {"reason", t.reason},
                   {"representative", m.render(t.representative)},
                   {"target", Json{{"p", t.target.first}, {"q", t.target.second}}},
                   {"indeterminacy_dim", t.indeterminacy.dim()},
                   {"certified", t.certified}};
        std::ostringstream os;
        os << "triple product: " << to_string(t.verdict) << "\n";
        if (t.defined)
            os << "  representative " << m.render(t.representative) << " in bidegree (" << t.target.first << ","
               << t.target.second << "), indeterminacy dim " << t.indeterminacy.dim() << "\n";
        else
            os << "  " << t.reason << "\n";
        text = os.str();
    } else {
        QuadResult qr = quad_product(work, cls[0], cls[1], cls[2], cls[3], &measure);
        verdict = qr.verdict;
        res = Json{{"verdict", to_string(qr.verdict)},
                   {"defined", qr.defined},
                   {"reason", qr.reason},
                   {"representative", m.render(qr.representative)},
                   {"target", Json{{"p", qr.P}, {"q", qr.Q}}},
                   {"hs_dim", qr.hs_dim},
                   {"achievable_dim", qr.achievable_classes.direction.dim()},
                   {"exact_coset", qr.exact_coset}};
        std::ostringstream os;
        os << "quadruple product: " << to_string(qr.verdict) << "\n";
        if (qr.defined)
            os << "  representative " << m.render(qr.representative) << " in H_S^-1(" << qr.P << "," << qr.Q
               << ") of dim " << qr.hs_dim << ", achievable classes dim " << qr.achievable_classes.direction.dim()
               << (qr.exact_coset ? "" : " (relaxed)") << "\n";
        else
            os << "  " << qr.reason << "\n";
        text = os.str();
    }
    if (o.json) {
        rep.doc["results"] = res;
        rep.emit();
    } else {
        std::cout << r.label << " " << text;
    }
    return verdict == Verdict::Undefined ? kExitUndefined : kExitOk;
}

int cmd_verify(const Options& o, Report& rep) {
    std::vector<int> ids;
    try {
        ids = suite_criteria(o.suite);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    bool all_ok = true;
    Json crit = Json::array();
    for (int id : ids) {
        CriterionResult r = run_criterion(id);
        all_ok = all_ok && r.passed;
        if (o.json) {
            crit.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"details", r.details}});
        } else {
            std::cout << "[" << (r.passed ? "PASS" : "FAIL") << "] " << r.id << ". " << r.name << "\n";
            for (const auto& d : r.details) std::cout << "    " << d << "\n";
            std::cout << std::flush;
        }
    }
    if (o.json) {
        rep.doc["results"] = Json{{"suite", o.suite}, {"passed", all_ok}, {"criteria", crit}};
        rep.emit();
    }
    return all_ok ? kExitOk : kExitFail;
}

int cmd_list(const Options& o, Report& rep) {
    if (o.json) {
        Json ms = Json::array();
        for (const auto& e : catalog()) {
            Json bs = Json::array();
            for (const auto& b : e.bindings) bs.push_back(Json{{"name", b.name}, {"note", b.note}});
            ms.push_back(Json{{"name", e.name}, {"description", e.description}, {"bindings", bs}});
        }
        rep.doc["results"] = Json{{"models", ms}};
        rep.emit();
        return kExitOk;
    }
    for (const auto& e : catalog()) {
        std::cout << e.name << "  " << e.description << "\n";
        for (const auto& b : e.bindings) std::cout << "    --binding " << b.name << "  " << b.note << "\n";
    }
    return kExitOk;
}

int cmd_export(const Options& o) {
    if (o.model == "ks") {
        std::cout << ks_source(o.l, o.k);
        return kExitOk;
    }
    const CatalogEntry& e = catalog_entry(o.model);
    std::string variant;
    if (!o.mu.empty()) variant = e.binding(mu_binding(o.mu)).variant;
    std::cout << e.source(variant);
    return kExitOk;
}

void add_model_options(CLI::App* s, Options& o) {
    s->add_option("model", o.model, "catalog model name");
    s->add_option("--model-file", o.model_file, "model in the DSL");
    s->add_option("--params", o.params, "parameter values, comma separated");
    s->add_option("--binding", o.binding, "named catalog binding");
    s->add_option("--mu", o.mu, "nakamura4 lattice: pi or pi/2");
    s->add_option("--l", o.l, "ks: dimension of the C^l factor");
    s->add_option("--k", o.k, "ks: dimension of the C^k factor");
    s->add_option("--kind", o.kind, "complex: invariant, ks or cgamma");
    s->add_flag("--json", o.json, "JSON report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bott-Chern / Aeppli cohomology and ABC-Massey products of nilmanifolds and solvmanifolds"};
    app.require_subcommand(1);
    Options o;

    auto* coh = app.add_subcommand("cohomology", "dimension tables");
    add_model_options(coh, o);
    coh->add_option("--theory", o.theory, "bc, aeppli, dolbeault, derham or schweitzer")
        ->check(CLI::IsMember({"bc", "aeppli", "dolbeault", "derham", "schweitzer"}));
    coh->add_option("-p", o.p, "holomorphic degree (total degree for derham)");
    coh->add_option("-q", o.q, "antiholomorphic degree");
    coh->add_option("--level", o.level, "Schweitzer level -1, 0 or 1");
    coh->add_flag("--all", o.all, "every bidegree");
    coh->add_flag("--reps", o.reps, "print representatives");
    coh->add_flag("--csv", o.csv, "CSV grid");

    auto* skt = app.add_subcommand("skt", "SKT check for a diagonal metric");
    add_model_options(skt, o);
    skt->add_option("--metric", o.metric, "diagonal metric entries, comma separated");

    auto* form = app.add_subcommand("formality", "geometric Bott-Chern formality");
    add_model_options(form, o);
    form->add_option("--metric", o.metric, "diagonal metric entries, comma separated");

    auto* massey = app.add_subcommand("massey", "ABC-Massey products");
    massey->require_subcommand(1);
    auto* triple = massey->add_subcommand("triple", "triple product");
    auto* quad = massey->add_subcommand("quad", "quadruple product");
    for (auto* s : {triple, quad}) {
        add_model_options(s, o);
        s->add_option("--classes", o.classes, "class representatives in form syntax, e.g. \"e[1 2|]\"");
    }
    triple->add_flag("--auto", o.auto_search, "search obstruction products on special-type models");

    auto* ver = app.add_subcommand("verify", "acceptance checks");
    ver->add_option("suite", o.suite, "tables, quad, nil6, examples, prop43, ks, algebraic, duality or all");
    ver->add_flag("--json", o.json, "JSON report");

    auto* list = app.add_subcommand("list", "catalog models");
    list->add_flag("--json", o.json, "JSON report");

    auto* exp = app.add_subcommand("export", "print a catalog model in the DSL");
    exp->add_option("model", o.model, "catalog model name")->required();
    exp->add_option("--mu", o.mu, "nakamura4 lattice");
    exp->add_option("--l", o.l, "ks: l");
    exp->add_option("--k", o.k, "ks: k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    Report rep(argc, argv);
    try {
        if (*coh) return cmd_cohomology(o, rep);
        if (*skt) return cmd_skt(o, rep);
        if (*form) return cmd_formality(o, rep);
        if (*triple) return cmd_massey("triple", o, rep);
        if (*quad) return cmd_massey("quad", o, rep);
        if (*ver) return cmd_verify(o, rep);
        if (*list) return cmd_list(o, rep);
        if (*exp) return cmd_export(o);
    } catch (const InvariantViolation& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}
