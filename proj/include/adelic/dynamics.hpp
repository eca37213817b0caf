#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adelic/omega.hpp"

namespace adelic {

/// Element (x, k) of the affine group K x K^*, acting by t -> x + k t.
struct GroupElement {
    Element x;
    Element k;
};

GroupElement ge_make(Element x, Element k);  // rejects k = 0
GroupElement ge_identity();
GroupElement ge_compose(const GroupElement& g, const GroupElement& h, const Field& F);
GroupElement ge_inverse(const GroupElement& g, const Field& F);
bool ge_equal(const GroupElement& g, const GroupElement& h);

/// g applied to a point: first coordinate x + k r (exact parts exactly,
/// symbolic parts by valuation bookkeeping), second coordinate scaled by k.
/// Throws SymbolicCollision when a symbolic local value meets an exact
/// summand of the same valuation, since the sum's valuation is then
/// undetermined.
OmegaPoint act(const GroupElement& g, const OmegaPoint& w, const Field& F);

/// Orbit-closure criterion: the closure of the orbit of `base` contains
/// `target` iff the vanishing set of the base divides that of the target.
bool orbit_closure_contains(const OmegaPoint& base, const OmegaPoint& target,
                            const Field& F);

/// Basic open neighborhood of `target` = point_make(s, b): finitely many
/// exact exponent conditions v_P = v_P(b) off the vanishing set, exponent
/// floors on the vanishing set, and first-coordinate congruence precisions
/// v_P(c - s_P) >= m_P.
struct BasicNeighborhood {
    OmegaPoint target;
    std::vector<std::pair<PrimeIdeal, long>> exact;
    std::vector<std::pair<PrimeIdeal, long>> floors;
    std::vector<std::pair<PrimeIdeal, long>> first;
};

struct ApproxResult {
    GroupElement g;
    std::vector<std::string> transcript;  // the verified valuation checks
};

/// Constructs (x, k) moving `base` into V and verifies the move exactly;
/// the returned transcript records each check.  Requires the target to lie
/// in the orbit closure of the base and exact local data at every
/// constrained prime (InfeasibleSymbolic otherwise); k comes from an ideal
/// with prescribed valuations (with one auxiliary class-correcting prime
/// when needed), x from approximation over the constrained primes.
ApproxResult approximate_into(const OmegaPoint& base, const BasicNeighborhood& V,
                              const Field& F);

/// The quasi-orbit invariant of a point: the vanishing set of its second
/// coordinate.
PrimeSetExpr quasi_orbit(const OmegaPoint& w);

enum class StabTag { Trivial, FullAffineOverR, MultiplicativeLine, ConstraintSet, Unknown };

std::string stab_tag_name(StabTag t);

/// Description of the stabilizer subgroup of a point.
///   Trivial            only the identity.
///   FullAffineOverR    g (R x R^*) g^{-1} for the reported conjugator g.
///   MultiplicativeLine g ({0} x K^*) g^{-1} = {(x0(1-k), k)}, x0 = g.x.
///   ConstraintSet      an explicit finite list or residual symbolic
///                      constraints, one per string.
///   Unknown            the case analysis could not certify an answer.
struct StabilizerDescription {
    StabTag tag = StabTag::Unknown;
    std::optional<GroupElement> conjugator;
    std::vector<std::string> constraints;
};

/// Case analysis per the vanishing set: closed forms where the point is a
/// translate of a standard one, triviality certificates from genericity or
/// infinite-support valuation obstructions, explicit enumeration over the
/// finite unit group where the data is exact, Unknown otherwise.  Returned
/// closed forms are exact.
StabilizerDescription stabilizer(const OmegaPoint& w, const Field& F,
                                 long refinement_cap = 256);

/// Whether two descriptions denote the same subgroup; Unknown when either
/// side is Unknown or symbolic constraints cannot be compared.
Tri same_stabilizer(const StabilizerDescription& s1, const StabilizerDescription& s2,
                    const Field& F);

/// A point whose second coordinate vanishes exactly on A and whose
/// stabilizer is certifiably trivial.  For A = Empty an infinite auxiliary
/// family of primes is split in two; the default family (residues 1 mod 4
/// over Q, all split primes otherwise) can be overridden.
OmegaPoint trivial_stabilizer_point(const PrimeSetExpr& A, const Field& F,
                                    const std::optional<PrimeSetExpr>& family = std::nullopt);

/// Trivial-stabilizer point with dense orbit (empty vanishing set); the
/// postconditions are re-checked internally before returning.
OmegaPoint essential_freeness_witness(const Field& F);

// ---------------------------------------------------------------------------
// the primitive-ideal lattice, indexed by prime sets

struct PrimIdealDescriptor {
    PrimeSetExpr A;
};

PrimIdealDescriptor primitive_ideal(PrimeSetExpr A);
bool ideal_leq(const PrimIdealDescriptor& I, const PrimIdealDescriptor& J, const Field& F);
bool ideal_equal(const PrimIdealDescriptor& I, const PrimIdealDescriptor& J, const Field& F);
bool is_maximal(const PrimIdealDescriptor& I, const Field& F);

/// Ideals of the ambient algebra correspond to opens of the prime-set
/// space; the lattice operations mirror union and intersection.
struct AlgebraIdeal {
    PowerCofiniteOpen open;
};

AlgebraIdeal ideal_of_open(PowerCofiniteOpen U);
bool algebra_ideal_leq(const AlgebraIdeal& a, const AlgebraIdeal& b);
AlgebraIdeal algebra_ideal_meet(const AlgebraIdeal& a, const AlgebraIdeal& b);
AlgebraIdeal algebra_ideal_join(const AlgebraIdeal& a, const AlgebraIdeal& b);

}  // namespace adelic
