#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"

#include "adelic/dynamics.hpp"

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

OmegaPoint unit_point(const Field& F) {
    return point_make(sketch_make(Element(0), {}, F), superideal_unit());
}

OmegaPoint const_point(const Field& F, Element r, SuperIdeal a) {
    return point_make(sketch_make(std::move(r), {}, F), std::move(a));
}

std::string exp_at(const SuperIdeal& a, const char* label, const Field& F) {
    return superideal_exp_at(a, F.require_prime(label), F).str();
}

bool transcript_has(const ApproxResult& res, const std::string& line) {
    return std::find(res.transcript.begin(), res.transcript.end(), line) !=
           res.transcript.end();
}

}  // namespace

TEST_CASE("the action scales the superideal and translates the sketch") {
    const Field& F = Q();
    OmegaPoint w01 = unit_point(F);

    OmegaPoint moved = act(ge_make(Element(1), Element(6)), w01, F);
    CHECK(F.element_str(moved.r.global) == "1");
    CHECK(exp_at(moved.a, "P2", F) == "1");
    CHECK(exp_at(moved.a, "P3", F) == "1");

    CHECK(points_equivalent(act(ge_identity(), w01, F), w01, F) == Tri::Yes);

    OmegaPoint w92 = act(ge_make(Element(9), Element(2)), w01, F);
    CHECK(F.element_str(w92.r.global) == "9");
    CHECK(exp_at(w92.a, "P2", F) == "1");
}

TEST_CASE("composition and inversion satisfy the group laws") {
    const Field& F = Q();
    OmegaPoint w92 = act(ge_make(Element(9), Element(2)), unit_point(F), F);
    GroupElement g1 = ge_make(F.parse_element("3/2"), Element(6));
    GroupElement g2 = ge_make(Element(5), F.parse_element("-1/3"));
    OmegaPoint lhs = act(g1, act(g2, w92, F), F);
    OmegaPoint rhs = act(ge_compose(g1, g2, F), w92, F);
    CHECK(points_equivalent(lhs, rhs, F) == Tri::Yes);
    CHECK(ge_equal(ge_compose(g1, ge_inverse(g1, F), F), ge_identity()));
    CHECK_THROWS_AS(ge_make(Element(1), Element(0)), DomainError);
}

TEST_CASE("orbit closure ordering follows vanishing-set containment") {
    const Field& F = Q();
    OmegaPoint w01 = unit_point(F);
    OmegaPoint w00 = const_point(F, Element(0), superideal_zero());
    CHECK(orbit_closure_contains(w01, w00, F));
    CHECK_FALSE(orbit_closure_contains(w00, w01, F));
    CHECK(ps_print(quasi_orbit(w01)) == "empty");
    CHECK(ps_print(quasi_orbit(w00)) == "all");
}

TEST_CASE("rational approximation into a basic neighborhood") {
    const Field& F = Q();
    BasicNeighborhood V;
    V.target = const_point(F, Element(0), superideal_of(Element(2), F));
    V.exact = {{F.require_prime("P2"), 1}};
    V.first = {{F.require_prime("P3"), 2}};

    ApproxResult res = approximate_into(unit_point(F), V, F);
    CHECK(F.element_str(res.g.k) == "2");
    CHECK(F.element_str(res.g.x) == "0");
    CHECK(transcript_has(res, "k = 2"));
    CHECK(transcript_has(res, "x = 0"));
    CHECK(transcript_has(res, "second coordinate at P2: exponent 1, required exactly 1 [ok]"));
    CHECK(transcript_has(
        res, "first coordinate at P3: difference valuation inf, required at least 2 [ok]"));

    V.target = const_point(F, Element(1), superideal_of(Element(2), F));
    res = approximate_into(unit_point(F), V, F);
    CHECK(F.element_str(res.g.k) == "2");
    CHECK(F.element_str(res.g.x) == "1");
}

TEST_CASE("a class obstruction is cleared by one auxiliary prime") {
    const Field& F = K5();
    BasicNeighborhood V;
    V.target = const_point(F, Element(0), superideal_of(Element{Rat(1), Rat(1)}, F));
    V.exact = {{F.require_prime("P2"), 1}};
    ApproxResult res = approximate_into(unit_point(F), V, F);
    CHECK(F.element_str(res.g.k) == "1+w");
    CHECK(F.element_str(res.g.x) == "0");
    CHECK(transcript_has(res, "auxiliary prime P3"));
    CHECK(transcript_has(res, "second coordinate at P2: exponent 1, required exactly 1 [ok]"));
}

TEST_CASE("unconstrained and floored approximations") {
    const Field& F = Q();
    BasicNeighborhood V;
    V.target = unit_point(F);
    ApproxResult res = approximate_into(unit_point(F), V, F);
    CHECK(F.element_str(res.g.k) == "1");
    CHECK(F.element_str(res.g.x) == "0");

    BasicNeighborhood W;
    W.target = const_point(F, Element(0), superideal_zero());
    W.floors = {{F.require_prime("P2"), 3}};
    res = approximate_into(unit_point(F), W, F);
    CHECK(F.element_str(res.g.k) == "8");
}

TEST_CASE("approximation rejects infeasible or symbolic inputs") {
    const Field& F = Q();
    BasicNeighborhood V;
    V.target = unit_point(F);
    V.exact = {{F.require_prime("P2"), 0}};

    // a symbolic first coordinate at a constrained prime cannot be verified
    OmegaPoint sym = point_make(
        sketch_make(Element(0),
                    {{PrimeSetExpr::finite({"P2"}),
                      LocalValue::generic(ExtInt::finite(0), false)}},
                    F),
        superideal_unit());
    CHECK_THROWS_AS(approximate_into(sym, V, F), InfeasibleSymbolic);

    // the target must lie in the orbit closure of the base
    BasicNeighborhood W;
    W.target = unit_point(F);
    OmegaPoint w00 = const_point(F, Element(0), superideal_zero());
    CHECK_THROWS_AS(approximate_into(w00, W, F), DomainError);
}

TEST_CASE("acting cannot silently merge symbolic and exact digits") {
    const Field& F = Q();
    OmegaPoint sym = point_make(
        sketch_make(Element(0),
                    {{PrimeSetExpr::finite({"P2"}),
                      LocalValue::generic(ExtInt::finite(0), false)}},
                    F),
        superideal_unit());
    // translation by valuation-0 data collides with the symbolic local value
    CHECK_THROWS_AS(act(ge_make(Element(1), Element(1)), sym, F), SymbolicCollision);
    // a translation of different valuation stays representable
    OmegaPoint moved = act(ge_make(Element(2), Element(1)), sym, F);
    CHECK(moved.r.overrides.size() == 1);
    CHECK_FALSE(moved.r.overrides[0].second.exact);
}

TEST_CASE("stabilizers of translates come in closed forms") {
    const Field& F = Q();
    OmegaPoint w01 = unit_point(F);
    OmegaPoint w00 = const_point(F, Element(0), superideal_zero());

    StabilizerDescription s = stabilizer(w01, F);
    CHECK(s.tag == StabTag::FullAffineOverR);
    REQUIRE(s.conjugator);
    CHECK(F.element_str(s.conjugator->x) == "0");
    CHECK(F.element_str(s.conjugator->k) == "1");

    s = stabilizer(w00, F);
    CHECK(s.tag == StabTag::MultiplicativeLine);
    REQUIRE(s.conjugator);
    CHECK(F.element_str(s.conjugator->x) == "0");
    CHECK(F.element_str(s.conjugator->k) == "1");

    s = stabilizer(const_point(F, Element(8), superideal_zero()), F);
    CHECK(s.tag == StabTag::MultiplicativeLine);
    REQUIRE(s.conjugator);
    CHECK(F.element_str(s.conjugator->x) == "8");

    OmegaPoint wmk = act(ge_make(F.parse_element("1/2"), Element(3)), w01, F);
    s = stabilizer(wmk, F);
    CHECK(s.tag == StabTag::FullAffineOverR);
    REQUIRE(s.conjugator);
    CHECK(F.element_str(s.conjugator->x) == "1/2");
    CHECK(F.element_str(s.conjugator->k) == "3");
}

TEST_CASE("stabilizer comparison factors through the normalizer") {
    const Field& F = Q();
    OmegaPoint wmk = act(ge_make(F.parse_element("1/2"), Element(3)), unit_point(F), F);
    StabilizerDescription got = stabilizer(wmk, F);
    StabilizerDescription expect{
        StabTag::FullAffineOverR, ge_make(F.parse_element("1/2"), Element(3)), {}};
    CHECK(same_stabilizer(got, expect, F) == Tri::Yes);

    // conjugating by (1/2, 1) fixes R x R^*, conjugating by (1/3, 1) does not
    StabilizerDescription aff0{StabTag::FullAffineOverR, ge_identity(), {}};
    StabilizerDescription affh{
        StabTag::FullAffineOverR, ge_make(F.parse_element("1/2"), Element(1)), {}};
    StabilizerDescription afft{
        StabTag::FullAffineOverR, ge_make(F.parse_element("1/3"), Element(1)), {}};
    CHECK(same_stabilizer(aff0, affh, F) == Tri::Yes);
    CHECK(same_stabilizer(aff0, afft, F) == Tri::No);

    OmegaPoint wline =
        act(ge_make(Element(8), Element(7)), const_point(F, Element(0), superideal_zero()), F);
    StabilizerDescription gotl = stabilizer(wline, F);
    StabilizerDescription expl{
        StabTag::MultiplicativeLine, ge_make(Element(8), Element(1)), {}};
    CHECK(same_stabilizer(gotl, expl, F) == Tri::Yes);
}

TEST_CASE("freely moving points exist over every vanishing set") {
    auto check_tp = [](const PrimeSetExpr& A, const Field& F) {
        OmegaPoint w = trivial_stabilizer_point(A, F);
        CHECK(ps_equal(quasi_orbit(w), A, F));
        CHECK(stabilizer(w, F).tag == StabTag::Trivial);
    };
    check_tp(PrimeSetExpr::finite({"P2"}), Q());
    check_tp(PrimeSetExpr::finite({"P2"}), K5());
    check_tp(PrimeSetExpr::complement(PrimeSetExpr::finite({"P2", "P5"})), Q());
    check_tp(PrimeSetExpr::residue_class(4, {1}), Q());
    check_tp(PrimeSetExpr::empty(), Q());
    check_tp(PrimeSetExpr::empty(), K5());
    check_tp(PrimeSetExpr::all(), Q());
}

TEST_CASE("the freeness witness has a dense orbit") {
    const Field& F = Q();
    OmegaPoint wit = essential_freeness_witness(F);
    CHECK(ps_print(quasi_orbit(wit)) == "empty");
    CHECK(orbit_closure_contains(wit, const_point(F, Element(0), superideal_zero()), F));
    CHECK(stabilizer(wit, F).tag == StabTag::Trivial);
}

TEST_CASE("exact unrealizable points report their residual symmetries") {
    const Field& F = Q();
    SuperIdeal a = superideal_make(
        {{PrimeSetExpr::residue_class(4, {1}), ExtInt::finite(1)},
         {PrimeSetExpr::complement(PrimeSetExpr::residue_class(4, {1})), ExtInt::finite(0)}},
        F);
    StabilizerDescription s = stabilizer(const_point(F, Element(0), a), F);
    CHECK(s.tag == StabTag::ConstraintSet);
    REQUIRE(s.constraints.size() == 2);
    CHECK(s.constraints[0] == "(x, k) = (0, 1)");
    CHECK(s.constraints[1] == "(x, k) = (0, -1)");
}

TEST_CASE("primitive ideals are ordered by vanishing-set containment") {
    const Field& F = Q();
    PrimIdealDescriptor Ie = primitive_ideal(PrimeSetExpr::empty());
    PrimIdealDescriptor I2 = primitive_ideal(PrimeSetExpr::finite({"P2"}));
    PrimIdealDescriptor I23 = primitive_ideal(PrimeSetExpr::finite({"P2", "P3"}));
    PrimIdealDescriptor Ia = primitive_ideal(PrimeSetExpr::all());
    CHECK(ideal_leq(Ie, I2, F));
    CHECK(ideal_leq(I2, I23, F));
    CHECK_FALSE(ideal_leq(I23, I2, F));
    CHECK(ideal_leq(Ie, Ia, F));
    CHECK(is_maximal(Ia, F));
    CHECK_FALSE(is_maximal(I2, F));
    CHECK(ideal_equal(I2, primitive_ideal(PrimeSetExpr::finite({"P2"})), F));
}

TEST_CASE("algebra ideals form a lattice under meet and join") {
    const Field& F = Q();
    AlgebraIdeal J2 = ideal_of_open(pc_make({{F.require_prime("P2")}}));
    AlgebraIdeal J3 = ideal_of_open(pc_make({{F.require_prime("P3")}}));
    AlgebraIdeal Jm = algebra_ideal_meet(J2, J3);
    CHECK(algebra_ideal_leq(Jm, J2));
    CHECK(algebra_ideal_leq(Jm, J3));
    CHECK(pc_equal(algebra_ideal_join(J2, Jm).open, J2.open));
}
