#include <string>
#include <vector>

#include "doctest.h"

#include "adelic/primesets.hpp"

using namespace adelic;

namespace {

const Field& Q() {
    static Field F = Field::rationals();
    return F;
}

const Field& K5() {
    static Field F = Field::imag_quadratic(-5);
    return F;
}

}  // namespace

TEST_CASE("residue class membership over the rationals") {
    const Field& F = Q();
    PrimeSetExpr r41 = PrimeSetExpr::residue_class(4, {1});
    CHECK(ps_contains(r41, F.require_prime("P5"), F));
    CHECK_FALSE(ps_contains(r41, F.require_prime("P3"), F));
    CHECK_FALSE(ps_contains(r41, F.require_prime("P2"), F));
    CHECK(ps_contains(r41, F.require_prime("P13"), F));
}

TEST_CASE("residue refinement is a strict subset") {
    const Field& F = Q();
    PrimeSetExpr r41 = PrimeSetExpr::residue_class(4, {1});
    PrimeSetExpr r81 = PrimeSetExpr::residue_class(8, {1});
    CHECK(ps_subset(r81, r41, F));
    CHECK_FALSE(ps_subset(r41, r81, F));
}

TEST_CASE("splitting a residue class refines the modulus") {
    const Field& F = Q();
    PrimeSetExpr r41 = PrimeSetExpr::residue_class(4, {1});
    auto [s1, s2] = ps_split_infinite(r41, F);
    CHECK(ps_print(s1) == "(res 8 (1))");
    CHECK(ps_print(s2) == "(res 8 (5))");
    CHECK(ps_is_empty(PrimeSetExpr::intersect(s1, s2), F));
    CHECK(ps_equal(PrimeSetExpr::union_of(s1, s2), r41, F));
    CHECK(ps_cardinality(s1, F).infinite);
    CHECK(ps_cardinality(s2, F).infinite);
}

TEST_CASE("splitting the full set keeps the even prime explicit") {
    const Field& F = Q();
    auto [a1, a2] = ps_split_infinite(PrimeSetExpr::all(), F);
    CHECK(ps_print(a1) == "(union (res 4 (1)) (finite \"P2\"))");
    CHECK(ps_print(a2) == "(res 4 (3))");
    CHECK(ps_contains(a1, F.require_prime("P2"), F));
}

TEST_CASE("finite and cofinite cardinality") {
    const Field& F = Q();
    PrimeSetExpr fin = PrimeSetExpr::finite({"P2", "P7"});
    auto c = ps_cardinality(fin, F);
    CHECK_FALSE(c.infinite);
    CHECK(c.count == 2);
    CHECK(ps_cardinality(PrimeSetExpr::complement(fin), F).infinite);
    CHECK(ps_equal(PrimeSetExpr::complement(PrimeSetExpr::complement(fin)), fin, F));
}

TEST_CASE("complements of residue classes collapse to explicit sets") {
    const Field& F = Q();
    PrimeSetExpr odd = PrimeSetExpr::residue_class(2, {1});
    CHECK(ps_equal(PrimeSetExpr::complement(odd), PrimeSetExpr::finite({"P2"}), F));
    // a residue sharing a factor with the modulus pins down one prime
    PrimeSetExpr r105 = PrimeSetExpr::residue_class(10, {5});
    CHECK(ps_equal(r105, PrimeSetExpr::finite({"P5"}), F));
}

TEST_CASE("splitting filters partition the primes of a quadratic field") {
    const Field& F = K5();
    PrimeSetExpr sp = PrimeSetExpr::residue_class(1, {0}, SplitFilter::Split);
    PrimeSetExpr in = PrimeSetExpr::residue_class(1, {0}, SplitFilter::Inert);
    PrimeSetExpr ra = PrimeSetExpr::residue_class(1, {0}, SplitFilter::Ramified);
    CHECK(ps_contains(sp, F.require_prime("P3"), F));
    CHECK(ps_contains(sp, F.require_prime("P3'"), F));
    CHECK_FALSE(ps_contains(sp, F.require_prime("P11"), F));
    CHECK(ps_contains(in, F.require_prime("P11"), F));
    CHECK(ps_contains(ra, F.require_prime("P2"), F));
    CHECK(ps_contains(ra, F.require_prime("P5"), F));
    auto cr = ps_cardinality(ra, F);
    CHECK_FALSE(cr.infinite);
    CHECK(cr.count == 2);
    CHECK(ps_is_empty(PrimeSetExpr::intersect(sp, in), F));
    PrimeSetExpr all3 = PrimeSetExpr::union_of(PrimeSetExpr::union_of(sp, in), ra);
    CHECK(ps_equal(all3, PrimeSetExpr::all(), F));

    auto [q1, q2] = ps_split_infinite(sp, F);
    CHECK(ps_cardinality(q1, F).infinite);
    CHECK(ps_cardinality(q2, F).infinite);
    CHECK(ps_is_empty(PrimeSetExpr::intersect(q1, q2), F));
    CHECK(ps_equal(PrimeSetExpr::union_of(q1, q2), sp, F));
}

TEST_CASE("member enumeration and smallest member") {
    const Field& F = K5();
    PrimeSetExpr sp = PrimeSetExpr::residue_class(1, {0}, SplitFilter::Split);
    auto mem = ps_members_up_to(sp, F, 10);
    REQUIRE(mem.size() == 4);
    CHECK(mem[0].label == "P3");
    CHECK(mem[1].label == "P3'");
    CHECK(mem[2].label == "P7");
    CHECK(mem[3].label == "P7'");
    CHECK(ps_smallest_member(sp, F).label == "P3");
    CHECK(ps_smallest_member(PrimeSetExpr::all(), Q()).label == "P2");
}

TEST_CASE("expression parser round trips") {
    std::string txt = "(union (res 4 (1 3)) (not (finite \"P2\")))";
    PrimeSetExpr parsed = ps_parse(txt);
    std::string printed = ps_print(parsed);
    CHECK(printed == txt);
    CHECK(ps_print(ps_parse(printed)) == printed);
    CHECK(ps_print(ps_parse("empty")) == "empty");
    CHECK(ps_print(ps_parse("all")) == "all");
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(ps_parse(""), UsageError);
    CHECK_THROWS_AS(ps_parse("(union (res 4 (1))"), UsageError);
    CHECK_THROWS_AS(ps_parse("xyzzy"), UsageError);
    CHECK_THROWS_AS(ps_parse("(res 4 (1)) junk"), UsageError);
    CHECK_THROWS_AS(ps_parse("(res 4 (1) weird)"), UsageError);
}

TEST_CASE("modulus cap bounds residue arithmetic") {
    const Field& F = Q();
    CHECK_THROWS_AS(ps_is_empty(PrimeSetExpr::residue_class(2000000, {1}), F), DomainError);
    CHECK_THROWS_AS(ps_is_empty(PrimeSetExpr::residue_class(0, {0}), F), UsageError);
    // coprime moduli whose lcm overflows the cap are rejected at evaluation
    PrimeSetExpr big = PrimeSetExpr::intersect(PrimeSetExpr::residue_class(9973, {1}),
                                               PrimeSetExpr::residue_class(9967, {1}));
    CHECK_THROWS_AS(ps_is_empty(big, F), DomainError);
}

TEST_CASE("finite sets cannot be split into infinite halves") {
    const Field& F = Q();
    CHECK_THROWS_AS(ps_split_infinite(PrimeSetExpr::finite({"P2", "P3"}), F), DomainError);
    CHECK_THROWS_AS(ps_split_infinite(PrimeSetExpr::empty(), F), DomainError);
}

TEST_CASE("cofinite intersections stay symbolic") {
    const Field& F = Q();
    PrimeIdeal P2 = F.require_prime("P2");
    PrimeIdeal P3 = F.require_prime("P3");
    PrimeSetExpr co2 = PrimeSetExpr::complement(PrimeSetExpr::finite({"P2"}));
    PrimeSetExpr co3 = PrimeSetExpr::complement(PrimeSetExpr::finite({"P3"}));
    PrimeSetExpr both = PrimeSetExpr::intersect(co2, co3);
    CHECK(ps_cardinality(both, F).infinite);
    CHECK_FALSE(ps_contains(both, P2, F));
    CHECK_FALSE(ps_contains(both, P3, F));
    CHECK(ps_contains(both, F.require_prime("P5"), F));
    CHECK(ps_equal(PrimeSetExpr::complement(both),
                   PrimeSetExpr::finite({"P2", "P3"}), F));
}

TEST_CASE("opens in the power-cofinite topology form a lattice") {
    const Field& F = Q();
    PrimeIdeal P2 = F.require_prime("P2");
    PrimeIdeal P3 = F.require_prime("P3");
    auto U2 = pc_make({{P2}});
    auto U3 = pc_make({{P3}});
    auto U23 = pc_intersect(U2, U3);
    REQUIRE(U23.gens.size() == 1);
    CHECK(U23.gens[0].size() == 2);
    CHECK(pc_leq(U23, U2));
    CHECK_FALSE(pc_leq(U2, U23));
    CHECK(pc_equal(pc_union(U2, U23), U2));
    CHECK(pc_contains_point(pc_whole_open(), PrimeSetExpr::all(), F));
    CHECK_FALSE(pc_contains_point(pc_empty_open(), PrimeSetExpr::empty(), F));
    PrimeSetExpr odd = PrimeSetExpr::residue_class(2, {1});
    CHECK(pc_contains_point(U2, odd, F));
    CHECK_FALSE(pc_contains_point(U2, PrimeSetExpr::all(), F));
}

TEST_CASE("point closures are up-sets") {
    const Field& F = Q();
    PrimeSetExpr fin = PrimeSetExpr::finite({"P2", "P7"});
    auto cl = pc_point_closure(fin);
    CHECK(pc_closure_contains(cl, PrimeSetExpr::all(), F));
    CHECK(pc_closure_contains(cl, fin, F));
    CHECK_FALSE(pc_closure_contains(cl, PrimeSetExpr::finite({"P2"}), F));
    PrimeSetExpr codd = PrimeSetExpr::complement(PrimeSetExpr::residue_class(2, {1}));
    CHECK_FALSE(pc_closure_contains(cl, codd, F));
}
