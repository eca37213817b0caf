#include "adelic/selftest.hpp"

#include <future>
#include <random>
#include <sstream>

namespace adelic {

namespace {

struct Ctx {
    const Field& F;
    std::mt19937_64 rng;
    SuiteResult out;

    Ctx(const Field& f, const std::string& name, std::uint64_t seed) : F(f) {
        out.name = name;
        std::uint64_t h = 1469598103934665603ull;
        for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
        rng.seed(seed ^ h);
    }

    void check(bool ok, const std::string& msg) {
        ++out.checks;
        if (!ok && out.passed) {
            out.passed = false;
            out.detail = msg;
        }
    }

    long uniform(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng);
    }

    Rat rat(long span = 20, long den = 8) {
        return make_rat(uniform(-span, span), uniform(1, den));
    }

    Element element() {
        Element x;
        x.a = rat();
        if (F.discriminant() != 1) x.b = rat();
        return x;
    }

    Element nonzero() {
        for (;;) {
            Element x = element();
            if (!x.is_zero()) return x;
        }
    }

    Element integral_nonzero() {
        for (;;) {
            Element x;
            x.a = make_rat(uniform(-20, 20), 1);
            if (F.discriminant() != 1) x.b = make_rat(uniform(-20, 20), 1);
            if (!x.is_zero()) return x;
        }
    }

    Element unit_like() {
        // nonzero element with small numerator and denominator
        for (;;) {
            Element x;
            x.a = make_rat(uniform(-6, 6), uniform(1, 4));
            if (F.discriminant() != 1 && uniform(0, 1)) x.b = make_rat(uniform(-3, 3), 1);
            if (!x.is_zero()) return x;
        }
    }

    PrimeIdeal prime() {
        std::vector<PrimeIdeal> ps = F.primes_up_to(40);
        return ps[static_cast<std::size_t>(uniform(0, static_cast<long>(ps.size()) - 1))];
    }

    PrimeSetExpr atom() {
        switch (uniform(0, 3)) {
            case 0: return PrimeSetExpr::empty();
            case 1: return PrimeSetExpr::all();
            case 2: {
                std::vector<std::string> labels;
                long n = uniform(1, 3);
                for (long i = 0; i < n; ++i) labels.push_back(prime().label);
                return PrimeSetExpr::finite(labels);
            }
            default: {
                long m = uniform(1, 12);
                std::vector<long> rs;
                long n = uniform(1, 3);
                for (long i = 0; i < n; ++i) rs.push_back(uniform(0, m - 1));
                SplitFilter f = SplitFilter::Any;
                if (F.discriminant() != 1) {
                    switch (uniform(0, 3)) {
                        case 0: f = SplitFilter::Split; break;
                        case 1: f = SplitFilter::Inert; break;
                        case 2: f = SplitFilter::Ramified; break;
                        default: break;
                    }
                }
                return PrimeSetExpr::residue_class(m, rs, f);
            }
        }
    }

    PrimeSetExpr set_expr(int depth = 2) {
        if (depth == 0 || uniform(0, 2) == 0) return atom();
        switch (uniform(0, 2)) {
            case 0:
                return PrimeSetExpr::union_of(set_expr(depth - 1), set_expr(depth - 1));
            case 1:
                return PrimeSetExpr::intersect(set_expr(depth - 1), set_expr(depth - 1));
            default:
                return PrimeSetExpr::complement(set_expr(depth - 1));
        }
    }

    SuperIdeal superideal() {
        switch (uniform(0, 3)) {
            case 0: return superideal_unit();
            case 1: return superideal_zero();
            default: return superideal_of(nonzero(), F);
        }
    }

    /// Exact point: exact global, optionally one exact finite override.
    OmegaPoint exact_point() {
        std::vector<std::pair<PrimeSetExpr, LocalValue>> ov;
        if (uniform(0, 1)) {
            PrimeIdeal P = prime();
            ov.push_back({PrimeSetExpr::finite({P.label}),
                          LocalValue::exact_k(element())});
        }
        return point_make(sketch_make(element(), std::move(ov), F), superideal());
    }

    GroupElement group_elt() { return ge_make(element(), nonzero()); }
};

using Suite = void (*)(Ctx&);

std::string show(const Element& x, const Field& F) { return F.element_str(x); }

// ---------------------------------------------------------------------------
// numberfield

void s_multiplicativity(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 40; ++i) {
        Element x = c.nonzero(), y = c.nonzero();
        Element xy = F.mul(x, y);
        c.check(F.norm(xy) == F.norm(x) * F.norm(y),
                "norm not multiplicative at " + show(x, F) + ", " + show(y, F));
        c.check(F.trace(F.add(x, y)) == F.trace(x) + F.trace(y),
                "trace not additive at " + show(x, F) + ", " + show(y, F));
        if (F.discriminant() != 1) {
            Element nc = F.mul(x, F.conj(x));
            c.check(nc.b == 0 && nc.a == F.norm(x),
                    "x * conj(x) != N(x) at " + show(x, F));
        }
        for (const PrimeIdeal& P : F.primes_up_to(12))
            c.check(F.valuation(xy, P) == F.valuation(x, P) + F.valuation(y, P),
                    "valuation not additive at " + P.label);
    }
}

void s_factor_roundtrip(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 40; ++i) {
        Element x = c.nonzero();
        auto fac = F.factor_element(x);
        Rat nrm = abs(F.norm(x));
        Rat prod = 1;
        for (const auto& [P, e] : fac) {
            c.check(F.valuation(x, P) == e, "factor exponent mismatch at " + P.label);
            Rat np(P.norm());
            for (long k = 0; k < e; ++k) prod *= np;
            for (long k = 0; k > e; --k) prod /= np;
        }
        c.check(prod == nrm, "norm not recovered from factorization of " + show(x, F));
    }
}

void s_denominator_independence(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 40; ++i) {
        Element x = c.nonzero();
        Element s;
        s.a = make_rat(c.uniform(1, 30), 1);
        Element sx = F.mul(s, x);
        auto fac = F.factor_element(sx);
        for (const auto& [P, e] : fac)
            c.check(F.valuation(x, P) == e - F.valuation(s, P),
                    "scaled valuation mismatch at " + P.label);
    }
}

void s_classgroup_axioms(Ctx& c) {
    const Field& F = c.F;
    const ClassGroup& G = F.class_group();
    int n = G.size();
    for (int a = 0; a < n; ++a) {
        c.check(G.compose(a, G.identity) == a, "identity law fails");
        c.check(G.compose(a, G.inverse(a)) == G.identity, "inverse law fails");
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d)
                c.check(G.compose(G.compose(a, b), d) == G.compose(a, G.compose(b, d)),
                        "associativity fails");
        int acc = G.identity;
        for (int k = 0; k <= 4; ++k) {
            c.check(G.power(a, k) == acc, "power law fails");
            acc = G.compose(acc, a);
        }
    }
}

void s_principality_oracle(Ctx& c) {
    const Field& F = c.F;
    const ClassGroup& G = F.class_group();
    for (int i = 0; i < 25; ++i) {
        Element x = c.integral_nonzero();
        Ideal I = F.principal_ideal(x);
        c.check(F.is_principal(I).principal, "principal ideal not detected: (" + show(x, F) + ")");
        c.check(F.ideal_class_index(I) == G.identity, "principal ideal off identity class");
    }
    for (const PrimeIdeal& P : F.primes_up_to(30)) {
        bool prin = F.is_principal(P.lattice).principal;
        c.check(prin == (F.ideal_class_index(P.lattice) == G.identity),
                "class index disagrees with principality at " + P.label);
        if (prin) {
            Element g = F.is_principal(P.lattice).generator;
            c.check(abs(F.norm(g)) == Rat(P.norm()), "generator norm mismatch at " + P.label);
        }
    }
}

// ---------------------------------------------------------------------------
// primesets

void s_boolean_laws(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 25; ++i) {
        PrimeSetExpr S = c.set_expr(), T = c.set_expr();
        c.check(ps_equal(PrimeSetExpr::complement(PrimeSetExpr::complement(S)), S, F),
                "double complement fails");
        c.check(ps_equal(PrimeSetExpr::complement(PrimeSetExpr::union_of(S, T)),
                          PrimeSetExpr::intersect(PrimeSetExpr::complement(S),
                                                     PrimeSetExpr::complement(T)),
                          F),
                "De Morgan fails");
        c.check(ps_equal(PrimeSetExpr::union_of(S, PrimeSetExpr::intersect(S, T)), S, F),
                "absorption fails");
        for (const PrimeIdeal& P : F.primes_up_to(30)) {
            bool inS = ps_contains(S, P, F), inT = ps_contains(T, P, F);
            c.check(ps_contains(PrimeSetExpr::union_of(S, T), P, F) == (inS || inT),
                    "union membership fails at " + P.label);
            c.check(ps_contains(PrimeSetExpr::intersect(S, T), P, F) == (inS && inT),
                    "intersection membership fails at " + P.label);
            c.check(ps_contains(PrimeSetExpr::complement(S), P, F) == !inS,
                    "complement membership fails at " + P.label);
        }
        c.check(ps_equal(ps_parse(ps_print(S)), S, F), "print/parse round trip fails");
    }
}

void s_subset_order(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 30; ++i) {
        PrimeSetExpr S = c.set_expr(), T = c.set_expr(), U = c.set_expr();
        c.check(ps_subset(S, S, F), "reflexivity fails");
        c.check(ps_subset(PrimeSetExpr::intersect(S, T), S, F),
                "meet lower bound fails");
        c.check(ps_subset(S, PrimeSetExpr::union_of(S, T), F), "join upper bound fails");
        if (ps_subset(S, T, F) && ps_subset(T, U, F))
            c.check(ps_subset(S, U, F), "transitivity fails");
        if (ps_subset(S, T, F) && ps_subset(T, S, F))
            c.check(ps_equal(S, T, F), "antisymmetry fails");
    }
}

void s_closure_specialization(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 30; ++i) {
        PrimeSetExpr A = c.set_expr(), B = c.set_expr();
        c.check(pc_closure_contains(pc_point_closure(A), B, F) == ps_subset(A, B, F),
                "closure membership disagrees with containment");
    }
    for (int i = 0; i < 20; ++i) {
        std::vector<std::vector<PrimeIdeal>> g1, g2;
        for (long k = c.uniform(1, 2); k > 0; --k) {
            std::vector<PrimeIdeal> gen;
            for (long j = c.uniform(1, 2); j > 0; --j) gen.push_back(c.prime());
            g1.push_back(gen);
        }
        for (long k = c.uniform(1, 2); k > 0; --k) {
            std::vector<PrimeIdeal> gen;
            for (long j = c.uniform(1, 2); j > 0; --j) gen.push_back(c.prime());
            g2.push_back(gen);
        }
        PowerCofiniteOpen U = pc_make(g1), V = pc_make(g2);
        PrimeSetExpr A = c.set_expr();
        bool inU = pc_contains_point(U, A, F), inV = pc_contains_point(V, A, F);
        c.check(pc_contains_point(pc_union(U, V), A, F) == (inU || inV),
                "open union membership fails");
        c.check(pc_contains_point(pc_intersect(U, V), A, F) == (inU && inV),
                "open intersection membership fails");
        c.check(pc_leq(pc_intersect(U, V), U), "open meet order fails");
        c.check(pc_leq(U, pc_union(U, V)), "open join order fails");
    }
}

void s_split_infinite(Ctx& c) {
    const Field& F = c.F;
    int done = 0;
    while (done < 15) {
        PrimeSetExpr S = c.set_expr();
        if (!ps_cardinality(S, F).infinite) continue;
        ++done;
        auto [S1, S2] = ps_split_infinite(S, F);
        c.check(ps_is_empty(PrimeSetExpr::intersect(S1, S2), F),
                "split halves intersect");
        c.check(ps_equal(PrimeSetExpr::union_of(S1, S2), S, F),
                "split halves do not cover");
        c.check(ps_cardinality(S1, F).infinite && ps_cardinality(S2, F).infinite,
                "split half finite");
    }
}

// ---------------------------------------------------------------------------
// adelic

void s_superideal_multiplicative(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 30; ++i) {
        Element x = c.nonzero(), y = c.nonzero();
        SuperIdeal prod = superideal_mul(x, superideal_of(y, F), F);
        c.check(superideal_equal(prod, superideal_of(F.mul(x, y), F), F),
                "superideal product mismatch at " + show(x, F) + ", " + show(y, F));
        SuperIdeal a = superideal_of(x, F);
        for (const PrimeIdeal& P : F.primes_up_to(12))
            c.check(superideal_exp_at(a, P, F) == F.valuation_ext(x, P),
                    "superideal exponent mismatch at " + P.label);
    }
    for (int i = 0; i < 10; ++i) {
        Element x = c.nonzero();
        c.check(superideal_equal(superideal_mul(x, superideal_zero(), F),
                                  superideal_zero(), F),
                "zero not absorbing");
    }
}

void s_equivalence_properties(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 25; ++i) {
        OmegaPoint w1 = c.exact_point(), w2 = c.exact_point();
        c.check(points_equivalent(w1, w1, F) == Tri::Yes, "reflexivity fails");
        Tri t12 = points_equivalent(w1, w2, F), t21 = points_equivalent(w2, w1, F);
        c.check(t12 == t21, "symmetry fails");
        c.check(t12 != Tri::Unknown, "exact pair left unknown");
    }
}

void s_valinterval_soundness(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 30; ++i) {
        OmegaPoint w1 = c.exact_point(), w2 = c.exact_point();
        PrimeIdeal P = c.prime();
        ValInterval iv = local_sub(w1.r, w2.r, P, F);
        LocalValue l1 = sketch_local(w1.r, P, F), l2 = sketch_local(w2.r, P, F);
        c.check(iv.exact, "exact locals produced an inexact interval");
        ExtInt expect = F.valuation_ext(F.sub(l1.value, l2.value), P);
        c.check(!iv.minus_inf && iv.lower == expect,
                "difference valuation mismatch at " + P.label);
    }
    // a symbolic local with the matching valuation keeps the bound sound
    for (int i = 0; i < 15; ++i) {
        PrimeIdeal P = c.prime();
        long v = c.uniform(0, 3);
        Element e = c.element();
        OmegaPoint w1 = point_make(
            sketch_make(e,
                        {{PrimeSetExpr::finite({P.label}),
                          LocalValue::generic(ExtInt::finite(v), false)}},
                        F),
            superideal_unit());
        Element g = c.element();
        OmegaPoint w2 = point_make(sketch_make(g, {}, F), superideal_unit());
        ValInterval iv = local_sub(w1.r, w2.r, P, F);
        auto inst = F.element_with_valuations({P}, {v});
        if (!inst) continue;
        ExtInt actual = F.valuation_ext(F.sub(*inst, g), P);
        c.check(iv.minus_inf || actual >= iv.lower,
                "interval bound unsound at " + P.label);
        if (iv.exact) c.check(!iv.minus_inf && actual == iv.lower,
                              "exact interval wrong at " + P.label);
    }
}

// ---------------------------------------------------------------------------
// dynamics

void s_action_law(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 20; ++i) {
        OmegaPoint w = c.exact_point();
        GroupElement g = c.group_elt(), h = c.group_elt();
        c.check(points_equivalent(act(ge_identity(), w, F), w, F) == Tri::Yes,
                "identity does not fix the point");
        OmegaPoint lhs = act(ge_compose(g, h, F), w, F);
        OmegaPoint rhs = act(g, act(h, w, F), F);
        c.check(points_equivalent(lhs, rhs, F) == Tri::Yes, "composition law fails");
        OmegaPoint back = act(ge_inverse(g, F), act(g, w, F), F);
        c.check(points_equivalent(back, w, F) == Tri::Yes, "inverse does not undo");
    }
}

void s_closure_consistency(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 40; ++i) {
        OmegaPoint w1 = c.exact_point(), w2 = c.exact_point();
        bool direct = orbit_closure_contains(w1, w2, F);
        bool via = pc_closure_contains(pc_point_closure(quasi_orbit(w1)),
                                       quasi_orbit(w2), F);
        c.check(direct == via, "closure criterion disagrees with point closure");
    }
}

void s_approximate_into(Ctx& c) {
    const Field& F = c.F;
    OmegaPoint base = point_make(sketch_make(F.parse_element("1"), {}, F),
                                 superideal_unit());
    for (int i = 0; i < 8; ++i) {
        GroupElement g = c.group_elt();
        OmegaPoint target = act(g, base, F);
        BasicNeighborhood V;
        V.target = target;
        for (const auto& [P, e] : F.factor_element(g.k))
            V.exact.push_back({P, e});
        PrimeIdeal P0 = c.prime();
        bool constrained = false;
        for (const auto& [P, e] : V.exact) constrained |= (P == P0);
        if (!constrained) V.first.push_back({P0, c.uniform(1, 2)});
        ApproxResult res = approximate_into(base, V, F);
        for (const std::string& line : res.transcript)
            c.check(line.find("[fail]") == std::string::npos,
                    "transcript reports a failure: " + line);
        OmegaPoint moved = act(res.g, base, F);
        for (const auto& [P, e] : V.exact)
            c.check(superideal_exp_at(moved.a, P, F) == ExtInt::finite(e),
                    "exact exponent missed at " + P.label);
    }
}

void s_stabilizer_conjugation(Ctx& c) {
    const Field& F = c.F;
    OmegaPoint w_aff = point_make(sketch_make(F.parse_element("0"), {}, F),
                                  superideal_unit());
    OmegaPoint w_line = point_make(sketch_make(F.parse_element("0"), {}, F),
                                   superideal_zero());
    for (int i = 0; i < 10; ++i) {
        GroupElement g = c.group_elt();
        StabilizerDescription s1 = stabilizer(act(g, w_aff, F), F);
        c.check(s1.tag == StabTag::FullAffineOverR, "moved affine point lost its tag");
        StabilizerDescription expect1;
        expect1.tag = StabTag::FullAffineOverR;
        expect1.conjugator = g;
        c.check(same_stabilizer(s1, expect1, F) == Tri::Yes,
                "affine stabilizer not conjugation covariant");
        StabilizerDescription s2 = stabilizer(act(g, w_line, F), F);
        c.check(s2.tag == StabTag::MultiplicativeLine, "moved line point lost its tag");
        StabilizerDescription expect2;
        expect2.tag = StabTag::MultiplicativeLine;
        expect2.conjugator = g;
        c.check(same_stabilizer(s2, expect2, F) == Tri::Yes,
                "line stabilizer not conjugation covariant");
    }
}

void s_trivial_points(Ctx& c) {
    const Field& F = c.F;
    std::vector<PrimeSetExpr> sets = {PrimeSetExpr::empty(), PrimeSetExpr::all()};
    for (int i = 0; i < 4; ++i) {
        std::vector<std::string> labels;
        for (long k = c.uniform(1, 3); k > 0; --k) labels.push_back(c.prime().label);
        sets.push_back(PrimeSetExpr::finite(labels));
        sets.push_back(PrimeSetExpr::complement(PrimeSetExpr::finite(labels)));
    }
    for (const PrimeSetExpr& A : sets) {
        OmegaPoint w = trivial_stabilizer_point(A, F);
        c.check(ps_equal(quasi_orbit(w), A, F),
                "vanishing set differs from the request: " + ps_print(A));
        c.check(stabilizer(w, F).tag == StabTag::Trivial,
                "stabilizer not certified trivial for " + ps_print(A));
    }
    OmegaPoint w = essential_freeness_witness(F);
    c.check(ps_is_empty(quasi_orbit(w), F), "witness orbit not dense");
    c.check(stabilizer(w, F).tag == StabTag::Trivial, "witness stabilizer not trivial");
}

void s_ideal_order(Ctx& c) {
    const Field& F = c.F;
    for (int i = 0; i < 30; ++i) {
        PrimeSetExpr A = c.set_expr(), B = c.set_expr();
        PrimIdealDescriptor I = primitive_ideal(A), J = primitive_ideal(B);
        c.check(ideal_leq(I, J, F) == ps_subset(A, B, F),
                "primitive ideal order disagrees with containment");
        c.check(is_maximal(I, F) == ps_equal(A, PrimeSetExpr::all(), F),
                "maximality criterion fails");
        c.check(ideal_leq(primitive_ideal(PrimeSetExpr::empty()), I, F),
                "bottom ideal not minimal");
    }
    for (int i = 0; i < 15; ++i) {
        std::vector<std::vector<PrimeIdeal>> g1 = {{c.prime()}}, g2 = {{c.prime(), c.prime()}};
        AlgebraIdeal a = ideal_of_open(pc_make(g1)), b = ideal_of_open(pc_make(g2));
        AlgebraIdeal m = algebra_ideal_meet(a, b), j = algebra_ideal_join(a, b);
        c.check(algebra_ideal_leq(m, a) && algebra_ideal_leq(m, b), "meet not a lower bound");
        c.check(algebra_ideal_leq(a, j) && algebra_ideal_leq(b, j), "join not an upper bound");
        c.check(algebra_ideal_leq(ideal_of_open(pc_empty_open()), a), "zero ideal not least");
        c.check(algebra_ideal_leq(a, ideal_of_open(pc_whole_open())), "unit ideal not greatest");
    }
}

const std::vector<std::pair<std::string, Suite>>& suite_table() {
    static const std::vector<std::pair<std::string, Suite>> table = {
        {"numberfield.multiplicativity", s_multiplicativity},
        {"numberfield.factor_roundtrip", s_factor_roundtrip},
        {"numberfield.denominator_independence", s_denominator_independence},
        {"numberfield.classgroup_axioms", s_classgroup_axioms},
        {"numberfield.principality_oracle", s_principality_oracle},
        {"primesets.boolean_laws", s_boolean_laws},
        {"primesets.subset_order", s_subset_order},
        {"primesets.closure_specialization", s_closure_specialization},
        {"primesets.split_infinite", s_split_infinite},
        {"adelic.superideal_multiplicative", s_superideal_multiplicative},
        {"adelic.equivalence_properties", s_equivalence_properties},
        {"adelic.valinterval_soundness", s_valinterval_soundness},
        {"dynamics.action_law", s_action_law},
        {"dynamics.closure_consistency", s_closure_consistency},
        {"dynamics.approximate_into", s_approximate_into},
        {"dynamics.stabilizer_conjugation", s_stabilizer_conjugation},
        {"dynamics.trivial_points", s_trivial_points},
        {"dynamics.ideal_order", s_ideal_order},
    };
    return table;
}

SuiteResult run_one(const Field& F, const std::string& name, Suite fn,
                    std::uint64_t seed) {
    Ctx c(F, name, seed);
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.out.passed = false;
        c.out.detail = std::string("exception: ") + e.what();
    }
    return c.out;
}

}  // namespace

std::vector<SuiteResult> run_selftests(const Field& F, std::uint64_t seed,
                                       bool parallel) {
    const auto& table = suite_table();
    std::vector<SuiteResult> results(table.size());
    if (parallel) {
        std::vector<std::future<SuiteResult>> futs;
        futs.reserve(table.size());
        for (const auto& [name, fn] : table) {
            Field copy = F;
            futs.push_back(std::async(std::launch::async,
                                      [copy = std::move(copy), name = name, fn, seed] {
                                          return run_one(copy, name, fn, seed);
                                      }));
        }
        for (std::size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < table.size(); ++i)
            results[i] = run_one(F, table[i].first, table[i].second, seed);
    }
    return results;
}

}  // namespace adelic
