#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "adelic/json_io.hpp"
#include "adelic/selftest.hpp"

using namespace adelic;

namespace {

struct Config {
    std::string field = "Q";
    std::string cache;
    long search_bound = 1000;
    long refinement_cap = 256;
    std::uint64_t seed = 0;
    bool pretty = false;
};

Field make_field(const Config& cfg) {
    auto build = [&]() {
        if (cfg.field == "Q") return Field::rationals();
        if (cfg.field.rfind("d=", 0) == 0) {
            try {
                return Field::imag_quadratic(std::stol(cfg.field.substr(2)));
            } catch (const DomainError&) {
                throw;
            } catch (const std::exception&) {
            }
        }
        throw UsageError("field \"--field\" must be Q or d=<negative integer>");
    };
    Field F = build();
    F.set_search_bound(cfg.search_bound);
    if (!cfg.cache.empty()) F.load_cache(cfg.cache);
    return F;
}

Json parse_payload(const std::string& text, const std::string& flag) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError("field \"" + flag + "\": " + e.what());
    }
}

PrimeSetExpr parse_set(const std::string& text, const std::string& flag) {
    try {
        return ps_parse(text);
    } catch (const UsageError& e) {
        throw UsageError("field \"" + flag + "\": " + e.what());
    } catch (const DomainError& e) {
        throw UsageError("field \"" + flag + "\": " + e.what());
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void emit(const Json& j, const Config& cfg) {
    if (cfg.pretty)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << j.dump() << "\n";
}

void finish(const Field& F, const Config& cfg) {
    if (!cfg.cache.empty()) F.save_cache(cfg.cache);
}

std::string form_str(const Form& f) {
    std::ostringstream os;
    os << "(" << f.a << ", " << f.b << ", " << f.c << ")";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact orbit computations for the affine action on adelic points"};
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--field", cfg.field, "Q or d=<negative squarefree integer>");
    app.add_option("--cache", cfg.cache, "path of the field cache file")
        ->envname("ADELIC_ORBIT_CACHE");
    app.add_option("--search-bound", cfg.search_bound,
                   "bound for auxiliary prime searches (>= 100)");
    app.add_option("--refinement-cap", cfg.refinement_cap,
                   "piece refinement budget for equivalence checks (>= 64)");
    app.add_option("--seed", cfg.seed, "seed for the randomized suites");
    app.add_flag("--pretty", cfg.pretty, "indent the JSON output");

    auto* c_info = app.add_subcommand("field-info", "describe the working field");

    std::string arg_element, arg_prime;
    auto* c_factor = app.add_subcommand("factor", "factor a field element");
    c_factor->add_option("--element", arg_element, "element to factor")->required();

    auto* c_class = app.add_subcommand("classgroup", "class group via reduced forms");
    auto* c_units = app.add_subcommand("units", "unit group of the integer ring");

    auto* c_val = app.add_subcommand("valuation", "valuation of an element at a prime");
    c_val->add_option("--element", arg_element, "element")->required();
    c_val->add_option("--prime", arg_prime, "prime label, e.g. P3 or P3'")->required();

    std::string arg_primes, arg_exps;
    auto* c_cof = app.add_subcommand(
        "cofactor", "auxiliary prime and generator completing prescribed valuations");
    c_cof->add_option("--primes", arg_primes, "comma-separated prime labels")->required();
    c_cof->add_option("--exps", arg_exps, "comma-separated exponents")->required();

    std::string arg_g, arg_point;
    auto* c_act = app.add_subcommand("act", "apply a group element to a point");
    c_act->add_option("--g", arg_g, "group element JSON {\"x\":..,\"k\":..}")->required();
    c_act->add_option("--point", arg_point, "point JSON")->required();

    std::string arg_base, arg_target;
    auto* c_closure = app.add_subcommand(
        "closure", "whether the orbit closure of the base contains the target");
    c_closure->add_option("--base", arg_base, "base point JSON")->required();
    c_closure->add_option("--target", arg_target, "target point JSON")->required();

    std::string arg_nbhd;
    auto* c_approx = app.add_subcommand(
        "approx", "group element moving the base into a basic neighborhood");
    c_approx->add_option("--base", arg_base, "base point JSON")->required();
    c_approx->add_option("--nbhd", arg_nbhd, "neighborhood JSON")->required();

    auto* c_quasi = app.add_subcommand("quasiorbit", "vanishing set of a point");
    c_quasi->add_option("--point", arg_point, "point JSON")->required();

    auto* c_stab = app.add_subcommand("stabilizer", "stabilizer of a point");
    c_stab->add_option("--point", arg_point, "point JSON")->required();

    std::string arg_zero_set, arg_family;
    auto* c_triv = app.add_subcommand(
        "trivial-point", "point with prescribed vanishing set and trivial stabilizer");
    c_triv->add_option("--zero-set", arg_zero_set, "prime set expression")->required();
    c_triv->add_option("--family", arg_family,
                       "infinite auxiliary prime set for the empty case");

    auto* c_wit = app.add_subcommand(
        "witness", "dense-orbit point with certified trivial stabilizer");

    std::string arg_a, arg_b, arg_open_a, arg_open_b;
    auto* c_ideal = app.add_subcommand(
        "ideal", "order relations of primitive ideals, or the open-set lattice");
    c_ideal->add_option("--a", arg_a, "prime set expression labeling the first ideal");
    c_ideal->add_option("--b", arg_b, "prime set expression labeling the second ideal");
    c_ideal->add_option("--open-a", arg_open_a, "open set JSON {\"gens\":[[..]]}");
    c_ideal->add_option("--open-b", arg_open_b, "open set JSON {\"gens\":[[..]]}");

    bool arg_serial = false;
    auto* c_self = app.add_subcommand("selftest", "run every invariant suite");
    c_self->add_flag("--serial", arg_serial, "run the suites one after another");

    for (CLI::App* s : app.get_subcommands([](CLI::App*) { return true; }))
        s->fallthrough();

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) return app.exit(e);  // --help
            throw UsageError(e.what());
        }
        if (cfg.search_bound < 100)
            throw UsageError("field \"--search-bound\" must be at least 100");
        if (cfg.refinement_cap < 64)
            throw UsageError("field \"--refinement-cap\" must be at least 64");

        Field F = make_field(cfg);
        Json out;

        if (c_info->parsed()) {
            out["kind"] = F.is_rational() ? "rational" : "imaginary-quadratic";
            if (!F.is_rational()) out["d"] = F.d();
            out["discriminant"] = F.discriminant();
            out["classNumber"] = F.class_group().size();
            Json units = Json::array();
            for (const auto& u : F.unit_group().elements)
                units.push_back(F.element_str(u));
            out["units"] = units;
            if (!F.is_rational()) out["omega"] = F.element_str(F.omega());
        } else if (c_factor->parsed()) {
            Element x = F.parse_element(arg_element);
            out["element"] = F.element_str(x);
            out["norm"] = F.norm(x).get_str();
            Json fac = Json::array();
            for (const auto& [P, e] : F.factor_element(x))
                fac.push_back(Json{{"prime", P.label}, {"exp", e}});
            out["factors"] = fac;
        } else if (c_class->parsed()) {
            const ClassGroup& G = F.class_group();
            out["h"] = G.size();
            Json classes = Json::array();
            for (const auto& f : G.classes) classes.push_back(form_str(f));
            out["classes"] = classes;
            out["identity"] = G.identity;
            Json table = Json::array();
            for (int i = 0; i < G.size(); ++i) {
                Json row = Json::array();
                for (int j = 0; j < G.size(); ++j) row.push_back(G.compose(i, j));
                table.push_back(row);
            }
            out["table"] = table;
        } else if (c_units->parsed()) {
            const UnitGroup& U = F.unit_group();
            out["count"] = static_cast<long>(U.elements.size());
            Json units = Json::array();
            for (const auto& u : U.elements) units.push_back(F.element_str(u));
            out["units"] = units;
        } else if (c_val->parsed()) {
            Element x = F.parse_element(arg_element);
            PrimeIdeal P = F.require_prime(arg_prime);
            out["element"] = F.element_str(x);
            out["prime"] = P.label;
            out["valuation"] = exponent_json(F.valuation_ext(x, P));
        } else if (c_cof->parsed()) {
            std::vector<PrimeIdeal> primes;
            std::vector<long> exps;
            for (const std::string& lab : split_list(arg_primes))
                primes.push_back(F.require_prime(lab));
            for (const std::string& e : split_list(arg_exps)) {
                try {
                    exps.push_back(std::stol(e));
                } catch (const std::exception&) {
                    throw UsageError("field \"--exps\" must list integers");
                }
            }
            if (primes.size() != exps.size())
                throw UsageError("field \"--exps\" must match --primes in length");
            auto res = F.principal_cofactor(primes, exps,
                                            [](const PrimeIdeal&) { return false; });
            out["prime"] = res.Q.label;
            out["k"] = F.element_str(res.k);
        } else if (c_act->parsed()) {
            GroupElement g = group_from_json(parse_payload(arg_g, "--g"), F);
            OmegaPoint w = point_from_json(parse_payload(arg_point, "--point"), F);
            out["g"] = group_json(g, F);
            out["point"] = point_json(w, F);
            out["result"] = point_json(act(g, w, F), F);
        } else if (c_closure->parsed()) {
            OmegaPoint base = point_from_json(parse_payload(arg_base, "--base"), F);
            OmegaPoint target = point_from_json(parse_payload(arg_target, "--target"), F);
            out["base"] = point_json(base, F);
            out["target"] = point_json(target, F);
            out["contains"] = orbit_closure_contains(base, target, F);
        } else if (c_approx->parsed()) {
            OmegaPoint base = point_from_json(parse_payload(arg_base, "--base"), F);
            BasicNeighborhood V =
                neighborhood_from_json(parse_payload(arg_nbhd, "--nbhd"), F);
            ApproxResult res = approximate_into(base, V, F);
            out["base"] = point_json(base, F);
            out["neighborhood"] = neighborhood_json(V, F);
            out["g"] = group_json(res.g, F);
            out["transcript"] = res.transcript;
        } else if (c_quasi->parsed()) {
            OmegaPoint w = point_from_json(parse_payload(arg_point, "--point"), F);
            out["point"] = point_json(w, F);
            out["zeroSet"] = ps_print(quasi_orbit(w));
        } else if (c_stab->parsed()) {
            OmegaPoint w = point_from_json(parse_payload(arg_point, "--point"), F);
            StabilizerDescription s = stabilizer(w, F, cfg.refinement_cap);
            out["point"] = point_json(w, F);
            Json sj = stabilizer_json(s, F);
            for (auto& [key, value] : sj.items()) out[key] = value;
        } else if (c_triv->parsed()) {
            PrimeSetExpr A = parse_set(arg_zero_set, "--zero-set");
            std::optional<PrimeSetExpr> family;
            if (!arg_family.empty()) family = parse_set(arg_family, "--family");
            OmegaPoint w = trivial_stabilizer_point(A, F, family);
            out["zeroSet"] = ps_print(A);
            out["point"] = point_json(w, F);
            out["stabilizerTag"] = stab_tag_name(stabilizer(w, F, cfg.refinement_cap).tag);
        } else if (c_wit->parsed()) {
            OmegaPoint w = essential_freeness_witness(F);
            out["point"] = point_json(w, F);
            out["zeroSet"] = ps_print(quasi_orbit(w));
            out["stabilizerTag"] = stab_tag_name(stabilizer(w, F, cfg.refinement_cap).tag);
        } else if (c_ideal->parsed()) {
            if (!arg_open_a.empty() || !arg_open_b.empty()) {
                if (arg_open_a.empty() || arg_open_b.empty())
                    throw UsageError("field \"--open-a\" and \"--open-b\" go together");
                AlgebraIdeal a =
                    ideal_of_open(open_from_json(parse_payload(arg_open_a, "--open-a"), F));
                AlgebraIdeal b =
                    ideal_of_open(open_from_json(parse_payload(arg_open_b, "--open-b"), F));
                out["openA"] = open_json(a.open);
                out["openB"] = open_json(b.open);
                out["leq"] = algebra_ideal_leq(a, b);
                out["geq"] = algebra_ideal_leq(b, a);
                out["meet"] = open_json(algebra_ideal_meet(a, b).open);
                out["join"] = open_json(algebra_ideal_join(a, b).open);
            } else if (!arg_a.empty()) {
                PrimIdealDescriptor I = primitive_ideal(parse_set(arg_a, "--a"));
                out["a"] = ps_print(I.A);
                out["aMaximal"] = is_maximal(I, F);
                if (!arg_b.empty()) {
                    PrimIdealDescriptor J = primitive_ideal(parse_set(arg_b, "--b"));
                    out["b"] = ps_print(J.A);
                    out["bMaximal"] = is_maximal(J, F);
                    out["leq"] = ideal_leq(I, J, F);
                    out["geq"] = ideal_leq(J, I, F);
                    out["equal"] = ideal_equal(I, J, F);
                }
            } else {
                throw UsageError("field \"--a\" or \"--open-a\" is required");
            }
        } else if (c_self->parsed()) {
            std::vector<SuiteResult> rs = run_selftests(F, cfg.seed, !arg_serial);
            long checks = 0;
            bool all = true;
            Json suites = Json::array();
            for (const SuiteResult& r : rs) {
                checks += r.checks;
                all = all && r.passed;
                Json sj{{"name", r.name}, {"passed", r.passed}, {"checks", r.checks}};
                if (!r.detail.empty()) sj["detail"] = r.detail;
                suites.push_back(sj);
            }
            out["seed"] = cfg.seed;
            out["suites"] = suites;
            out["checks"] = checks;
            out["passed"] = all;
            if (!all) {
                emit(out, cfg);
                finish(F, cfg);
                return 1;
            }
        }

        emit(out, cfg);
        finish(F, cfg);
        return 0;
    } catch (const UsageError& e) {
        Json err{{"error", {{"type", "usage"}, {"message", e.what()}}}};
        emit(err, cfg);
        return 2;
    } catch (const SearchExhausted& e) {
        Json err{{"error", {{"type", "search-exhausted"}, {"message", e.what()}}}};
        emit(err, cfg);
        return 1;
    } catch (const InfeasibleSymbolic& e) {
        Json err{{"error", {{"type", "infeasible-symbolic"}, {"message", e.what()}}}};
        emit(err, cfg);
        return 1;
    } catch (const RefinementCapExceeded& e) {
        Json err{{"error", {{"type", "refinement-cap"}, {"message", e.what()}}}};
        emit(err, cfg);
        return 1;
    } catch (const SymbolicCollision& e) {
        Json err{{"error", {{"type", "symbolic-collision"}, {"message", e.what()}}}};
        emit(err, cfg);
        return 1;
    } catch (const DomainError& e) {
        Json err{{"error", {{"type", "domain"}, {"message", e.what()}}}};
        emit(err, cfg);
        return 1;
    } catch (const std::exception& e) {
        Json err{{"error", {{"type", "internal"}, {"message", e.what()}}}};
        emit(err, cfg);
        return 1;
    }
}
