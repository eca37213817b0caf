#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adelic/numberfield.hpp"

namespace adelic {

enum class SplitFilter { Any, Split, Inert, Ramified };

std::string split_filter_name(SplitFilter f);

/// Immutable expression tree denoting a subset of the prime ideals of R.
/// Atoms are finite label sets and residue classes of the underlying
/// rational prime (optionally filtered by splitting type); operators are
/// union, intersection and complement.
class PrimeSetExpr {
  public:
    enum class Kind { Empty, All, Finite, Residue, Union, Intersect, Complement };

    PrimeSetExpr();  // Empty
    static PrimeSetExpr empty();
    static PrimeSetExpr all();
    static PrimeSetExpr finite(std::vector<std::string> labels);
    static PrimeSetExpr residue_class(long modulus, std::vector<long> residues,
                                      SplitFilter filter = SplitFilter::Any);
    static PrimeSetExpr union_of(PrimeSetExpr a, PrimeSetExpr b);
    static PrimeSetExpr intersect(PrimeSetExpr a, PrimeSetExpr b);
    static PrimeSetExpr complement(PrimeSetExpr a);

    Kind kind() const { return d_->kind; }
    const std::vector<std::string>& labels() const { return d_->labels; }
    long modulus() const { return d_->modulus; }
    const std::vector<long>& residues() const { return d_->residues; }
    SplitFilter filter() const { return d_->filter; }
    const std::vector<PrimeSetExpr>& children() const { return d_->children; }

  private:
    struct Data {
        Kind kind = Kind::Empty;
        std::vector<std::string> labels;
        long modulus = 1;
        std::vector<long> residues;
        SplitFilter filter = SplitFilter::Any;
        std::vector<PrimeSetExpr> children;
    };
    std::shared_ptr<const Data> d_;
    explicit PrimeSetExpr(Data d) : d_(std::make_shared<const Data>(std::move(d))) {}
};

/// Normal form: primes p coprime to the modulus are covered according to
/// p mod modulus; a finite list of explicit exceptions flips individual
/// prime ideals on (plus) or off (minus).  Primes dividing the modulus are
/// never residue-covered and appear in plus when they belong to the set.
/// modulus == 1 uses the single residue 0 to mean "every prime".
struct PrimeSetNF {
    long modulus = 1;
    std::vector<long> residues;      // sorted
    std::vector<PrimeIdeal> plus;    // sorted by (p, index)
    std::vector<PrimeIdeal> minus;   // sorted by (p, index)
};

struct Cardinality {
    bool infinite = false;
    long count = 0;  // meaningful when finite
};

PrimeSetNF ps_normalize(const PrimeSetExpr& e, const Field& F);
PrimeSetExpr ps_from_nf(const PrimeSetNF& nf);

bool ps_contains(const PrimeSetExpr& S, const PrimeIdeal& P, const Field& F);
Cardinality ps_cardinality(const PrimeSetExpr& S, const Field& F);
bool ps_is_empty(const PrimeSetExpr& S, const Field& F);
bool ps_subset(const PrimeSetExpr& S, const PrimeSetExpr& T, const Field& F);
bool ps_equal(const PrimeSetExpr& S, const PrimeSetExpr& T, const Field& F);

/// Partitions an infinite set into two disjoint infinite halves by a fixed
/// deterministic rule (residue refinement modulo 2M or 4M, exceptions
/// alternating).  Rejects finite sets.
std::pair<PrimeSetExpr, PrimeSetExpr> ps_split_infinite(const PrimeSetExpr& S, const Field& F);

/// Members with residue characteristic <= bound, in (p, index) order.
std::vector<PrimeIdeal> ps_members_up_to(const PrimeSetExpr& S, const Field& F, long bound);

/// Smallest member in (p, index) order; throws SearchExhausted for the
/// empty set (callers check cardinality first).
PrimeIdeal ps_smallest_member(const PrimeSetExpr& S, const Field& F);

std::string ps_print(const PrimeSetExpr& e);
PrimeSetExpr ps_parse(const std::string& text);

// ---------------------------------------------------------------------------
// power-cofinite topology on 2^P

/// Finite union of basic opens U_G = {T : T cap G = empty}, stored as the
/// antichain of inclusion-minimal generator sets G.
struct PowerCofiniteOpen {
    std::vector<std::vector<PrimeIdeal>> gens;
};

PowerCofiniteOpen pc_make(std::vector<std::vector<PrimeIdeal>> gens);
PowerCofiniteOpen pc_empty_open();
PowerCofiniteOpen pc_whole_open();
PowerCofiniteOpen pc_union(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V);
PowerCofiniteOpen pc_intersect(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V);
bool pc_leq(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V);
bool pc_equal(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V);
bool pc_contains_point(const PowerCofiniteOpen& U, const PrimeSetExpr& A, const Field& F);

/// Closure of the singleton {A} in the power-cofinite topology, i.e. the
/// up-set {T : T superset A}, kept symbolic and queried by subset tests.
struct PointClosure {
    PrimeSetExpr base;
};

PointClosure pc_point_closure(PrimeSetExpr A);
bool pc_closure_contains(const PointClosure& C, const PrimeSetExpr& T, const Field& F);

}  // namespace adelic
