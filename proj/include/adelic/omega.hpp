#pragma once

#include <utility>
#include <vector>

#include "adelic/primesets.hpp"

namespace adelic {

enum class Tri { Yes, No, Unknown };

std::string tri_name(Tri t);

/// Formal product over all prime ideals with exponents in Z cup {inf},
/// represented piecewise: finitely many (set, exponent) pieces that
/// partition the primes.  Exponent inf marks a vanishing local coordinate.
struct SuperIdeal {
    std::vector<std::pair<PrimeSetExpr, ExtInt>> pieces;
};

/// Validates the partition (pairwise disjoint, union All) and the finiteness
/// of every negative-exponent piece, drops empty pieces, and returns the
/// cleaned value.  Throws DomainError on violation.
SuperIdeal superideal_make(std::vector<std::pair<PrimeSetExpr, ExtInt>> pieces,
                           const Field& F);

SuperIdeal superideal_unit();
SuperIdeal superideal_zero();

/// Exponent v_P(k) on the support of k and 0 elsewhere.  k = 0 yields the
/// all-inf superideal only when allow_zero is set.
SuperIdeal superideal_of(const Element& k, const Field& F, bool allow_zero = false);

/// Piecewise exponent addition by v_P(k), with inf absorbing.  k = 0 rejected.
SuperIdeal superideal_mul(const Element& k, const SuperIdeal& a, const Field& F);

/// Union of the inf-exponent pieces.
PrimeSetExpr zero_set(const SuperIdeal& a);

ExtInt superideal_exp_at(const SuperIdeal& a, const PrimeIdeal& P, const Field& F);
bool superideal_equal(const SuperIdeal& a, const SuperIdeal& b, const Field& F);

/// Local first coordinate at one prime: either an exact field element or a
/// symbolic value carrying only its valuation and a genericity flag.
struct LocalValue {
    bool exact = true;
    Element value;            // meaningful when exact
    ExtInt valuation;         // meaningful when symbolic
    bool not_in_k = false;    // symbolic value known to avoid K

    static LocalValue exact_k(Element x) {
        LocalValue v;
        v.exact = true;
        v.value = std::move(x);
        return v;
    }
    /// Valuation inf collapses to the exact value 0; inf together with
    /// not_in_k is contradictory and rejected.
    static LocalValue generic(ExtInt val, bool not_in_k);

    bool operator==(const LocalValue& o) const {
        if (exact != o.exact) return false;
        if (exact) return value == o.value;
        return valuation == o.valuation && not_in_k == o.not_in_k;
    }
};

/// Finite adele presented as one global field element overridden on
/// pairwise disjoint prime sets.  Off the overrides the local value is the
/// global element itself.
struct AdeleSketch {
    Element global;
    std::vector<std::pair<PrimeSetExpr, LocalValue>> overrides;
};

/// Validates disjointness and the adele condition (symbolic negative
/// valuations only on finite sets); drops empty override sets.
AdeleSketch sketch_make(Element global,
                        std::vector<std::pair<PrimeSetExpr, LocalValue>> overrides,
                        const Field& F);

LocalValue sketch_local(const AdeleSketch& r, const PrimeIdeal& P, const Field& F);

/// Valuation of a local value at a specific prime (exact values computed,
/// symbolic values read off).
ExtInt local_valuation(const LocalValue& v, const PrimeIdeal& P, const Field& F);

/// A point of the orbit space: first coordinate sketch r and second
/// coordinate superideal a.
struct OmegaPoint {
    AdeleSketch r;
    SuperIdeal a;
};

OmegaPoint point_make(AdeleSketch r, SuperIdeal a);

/// Sound lower bound for a valuation; exact means equality holds.
struct ValInterval {
    ExtInt lower;          // finite or +inf
    bool minus_inf = false;
    bool exact = false;

    static ValInterval exactly(ExtInt v) { return ValInterval{v, false, true}; }
    static ValInterval at_least(ExtInt v) { return ValInterval{v, false, false}; }
};

/// Ultrametric valuation of r_P - s_P: exact when both sides are exact or
/// their valuations differ, otherwise an inexact lower bound at the common
/// valuation.
ValInterval local_sub(const AdeleSketch& r, const AdeleSketch& s, const PrimeIdeal& P,
                      const Field& F);

/// Decides the defining equivalence (same superideal and first coordinates
/// congruent modulo a Rhat, with equality required where the exponent is
/// inf).  Sound three-valued answer: Yes and No are never wrong, Unknown
/// only when symbolic locals leave the congruence undecided.  Points whose
/// sketches are fully exact never yield Unknown.  Throws
/// RefinementCapExceeded when the piece refinement grows past the cap.
Tri points_equivalent(const OmegaPoint& o1, const OmegaPoint& o2, const Field& F,
                      long refinement_cap = 256);

}  // namespace adelic
