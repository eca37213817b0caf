#include <string>

#include "doctest.h"

#include "adelic/json_io.hpp"

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

TEST_CASE("superideals round trip through json") {
    const Field& F = K5();
    SuperIdeal a = superideal_of(F.parse_element("1+w"), F);
    Json ja = superideal_json(a);
    CHECK(ja.dump() ==
          "{\"pieces\":[{\"set\":\"(finite \\\"P2\\\")\",\"exp\":1},"
          "{\"set\":\"(finite \\\"P3\\\")\",\"exp\":1},"
          "{\"set\":\"(not (finite \\\"P2\\\" \\\"P3\\\"))\",\"exp\":0}]}");
    CHECK(superideal_equal(a, superideal_from_json(ja, F), F));
}

TEST_CASE("superideal shorthands expand to full piece lists") {
    CHECK(superideal_json(superideal_from_json(Json("unit"), K5())).dump() ==
          "{\"pieces\":[{\"set\":\"all\",\"exp\":0}]}");
    CHECK(superideal_json(superideal_from_json(Json("zero"), K5())).dump() ==
          "{\"pieces\":[{\"set\":\"all\",\"exp\":\"inf\"}]}");
    Json jel;
    jel["element"] = "6";
    CHECK(superideal_json(superideal_from_json(jel, Q())).dump() ==
          "{\"pieces\":[{\"set\":\"(finite \\\"P2\\\")\",\"exp\":1},"
          "{\"set\":\"(finite \\\"P3\\\")\",\"exp\":1},"
          "{\"set\":\"(not (finite \\\"P2\\\" \\\"P3\\\"))\",\"exp\":0}]}");
}

TEST_CASE("sketches serialize overrides and accept bare strings") {
    const Field& F = Q();
    AdeleSketch r = sketch_make(
        F.parse_element("0"),
        {{PrimeSetExpr::finite({"P2"}), LocalValue::generic(ExtInt::finite(0), false)}}, F);
    Json jr = sketch_json(r, F);
    CHECK(jr.dump() ==
          "{\"global\":\"0\",\"overrides\":[{\"set\":\"(finite \\\"P2\\\")\","
          "\"local\":{\"kind\":\"generic\",\"valuation\":0,\"notInK\":false}}]}");
    AdeleSketch r2 = sketch_from_json(jr, F);
    CHECK(F.element_str(r2.global) == "0");
    CHECK(r2.overrides.size() == 1);

    AdeleSketch r3 = sketch_from_json(Json("3/2"), F);
    CHECK(F.element_str(r3.global) == "3/2");
}

TEST_CASE("points round trip up to equivalence") {
    const Field& F = Q();
    AdeleSketch r = sketch_make(
        F.parse_element("0"),
        {{PrimeSetExpr::finite({"P2"}), LocalValue::generic(ExtInt::finite(0), false)}}, F);
    OmegaPoint w = point_make(r, superideal_unit());
    OmegaPoint w2 = point_from_json(point_json(w, F), F);
    CHECK(points_equivalent(w, w2, F) == Tri::Yes);
}

TEST_CASE("group elements round trip") {
    const Field& F = Q();
    GroupElement g = ge_make(F.parse_element("1/2"), F.parse_element("3"));
    Json jg = group_json(g, F);
    CHECK(jg.dump() == "{\"x\":\"1/2\",\"k\":\"3\"}");
    CHECK(ge_equal(g, group_from_json(jg, F)));
}

TEST_CASE("neighborhoods round trip with constraint lists") {
    const Field& F = Q();
    AdeleSketch r = sketch_make(
        F.parse_element("0"),
        {{PrimeSetExpr::finite({"P2"}), LocalValue::generic(ExtInt::finite(0), false)}}, F);
    OmegaPoint w = point_make(r, superideal_unit());
    Json jn;
    jn["target"] = point_json(w, F);
    jn["exact"] = Json::array({Json{{"prime", "P3"}, {"exp", 2}}});
    jn["first"] = Json::array({Json{{"prime", "P5"}, {"prec", 1}}});
    BasicNeighborhood V = neighborhood_from_json(jn, F);
    CHECK(neighborhood_json(V, F).dump() ==
          "{\"target\":{\"r\":{\"global\":\"0\",\"overrides\":[{\"set\":"
          "\"(finite \\\"P2\\\")\",\"local\":{\"kind\":\"generic\",\"valuation\":0,"
          "\"notInK\":false}}]},\"a\":{\"pieces\":[{\"set\":\"all\",\"exp\":0}]}},"
          "\"exact\":[{\"prime\":\"P3\",\"exp\":2}],"
          "\"first\":[{\"prime\":\"P5\",\"prec\":1}]}");
}

TEST_CASE("stabilizers, intervals and opens serialize to stable shapes") {
    const Field& F = Q();
    StabilizerDescription s;
    s.tag = StabTag::FullAffineOverR;
    s.conjugator = ge_identity();
    CHECK(stabilizer_json(s, F).dump() ==
          "{\"tag\":\"FullAffineOverR\",\"conjugator\":{\"x\":\"0\",\"k\":\"1\"}}");

    CHECK(interval_json(ValInterval::at_least(ExtInt::finite(0))).dump() ==
          "{\"lower\":0,\"exact\":false}");
    CHECK(interval_json(ValInterval::exactly(ExtInt::infinity())).dump() ==
          "{\"lower\":\"inf\",\"exact\":true}");

    PowerCofiniteOpen U = pc_make(
        {{F.require_prime("P2")}, {F.require_prime("P3"), F.require_prime("P5")}});
    Json ju = open_json(U);
    CHECK(ju.dump() == "{\"gens\":[[\"P2\"],[\"P3\",\"P5\"]]}");
    CHECK(pc_equal(U, open_from_json(ju, F)));
}

TEST_CASE("malformed json names the offending field") {
    const Field& F = Q();
    CHECK_THROWS_WITH_AS(superideal_from_json(Json{{"pieces", 3}}, F),
                         "field \"pieces\" must be an array", UsageError);
    CHECK_THROWS_WITH_AS(local_from_json(Json{{"kind", "weird"}}, F),
                         "field \"kind\" must be \"exact\" or \"generic\"", UsageError);
    CHECK_THROWS_WITH_AS(group_from_json(Json{{"x", "0"}}, F), "missing field \"k\"",
                         UsageError);
}
