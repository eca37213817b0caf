#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adelic/numeric.hpp"

namespace adelic {

enum class FieldKind { Rational, ImagQuadratic };

/// Element a + b*w of K, with w the integral basis generator:
/// w = sqrt(d) when d = 2,3 (mod 4) and w = (1+sqrt(d))/2 when d = 1 (mod 4).
/// For K = Q, b is always 0.  Coordinates are exact rationals.
struct Element {
    Rat a, b;

    Element() : a(0), b(0) {}
    Element(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {}
    explicit Element(long n) : a(n), b(0) {}

    bool operator==(const Element& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Element& o) const { return !(*this == o); }
    bool is_zero() const { return a == 0 && b == 0; }
};

/// Integral ideal of R.  For the quadratic case the lattice is stored in
/// lower-triangular Hermite normal form over the basis (1, w):
///   rows (A, 0) and (B, C)  with  C | A, C | B, A,C > 0, 0 <= B < A.
/// For K = Q an ideal is a single nonnegative rational generator (fractional
/// ideals of Z are allowed there).
struct Ideal {
    bool zero = false;
    Int A, B, C;  // quadratic HNF entries
    Rat q;        // rational-field generator

    bool operator==(const Ideal& o) const {
        return zero == o.zero && A == o.A && B == o.B && C == o.C && q == o.q;
    }
    bool operator!=(const Ideal& o) const { return !(*this == o); }
};

enum class SplitType { Split, Inert, Ramified };

std::string split_type_name(SplitType t);

/// A maximal ideal of R with its two-element presentation (p, pi).
/// label is "P<p>" for the first prime above p (ordered by the residue b of
/// pi = b + w) and "P<p>'" for the second one of a split prime.
struct PrimeIdeal {
    long p = 0;
    int index = 0;  // 0 or 1 (1 only for the conjugate of a split prime)
    int e = 1;      // ramification index
    int f = 1;      // residue degree
    Element pi;
    Ideal lattice;
    std::string label;

    Int norm() const {
        Int n(p);
        if (f == 2) n *= p;
        return n;
    }
    bool operator==(const PrimeIdeal& o) const { return p == o.p && index == o.index; }
    bool operator!=(const PrimeIdeal& o) const { return !(*this == o); }
    bool operator<(const PrimeIdeal& o) const {
        return p != o.p ? p < o.p : index < o.index;
    }
};

struct SplittingRecord {
    long p = 0;
    SplitType type = SplitType::Split;
    std::vector<PrimeIdeal> primes;  // one entry, or two for split p
};

/// Reduced binary quadratic form (a, b, c) of the field discriminant,
/// representing an ideal class.
struct Form {
    Int a, b, c;
    bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator!=(const Form& o) const { return !(*this == o); }
    bool operator<(const Form& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

/// The full class group as reduced forms with a composition table.
struct ClassGroup {
    Int disc;
    std::vector<Form> classes;            // sorted
    std::vector<std::vector<int>> table;  // table[i][j] = index of product
    int identity = 0;

    int size() const { return static_cast<int>(classes.size()); }
    int compose(int i, int j) const { return table[i][j]; }
    int inverse(int i) const;
    int power(int i, long n) const;
    int index_of(const Form& f) const;
};

struct UnitGroup {
    std::vector<Element> elements;  // all torsion units, lexicographically descending
};

struct PrincipalityResult {
    bool principal = false;
    Element generator;  // canonical associate when principal
};

/// K = Q or an imaginary quadratic field Q(sqrt(d)), d < 0 squarefree,
/// together with exact arithmetic in its ring of integers R = Z + Z*w.
/// All operations are pure; the splitting/class caches allow concurrent
/// reads with exclusive writes.
class Field {
  public:
    static Field rationals();
    static Field imag_quadratic(long d);

    FieldKind kind() const { return kind_; }
    long d() const { return d_; }
    long discriminant() const { return disc_; }
    /// 2 when w = (1+sqrt(d))/2, else 1.
    int integral_basis_denom() const { return half_ ? 2 : 1; }
    bool is_rational() const { return kind_ == FieldKind::Rational; }

    long search_bound() const { return search_bound_; }
    void set_search_bound(long b);

    // ---- element arithmetic ----
    Element add(const Element& x, const Element& y) const;
    Element sub(const Element& x, const Element& y) const;
    Element neg(const Element& x) const;
    Element mul(const Element& x, const Element& y) const;
    Element mul(const Rat& c, const Element& x) const;
    Element inv(const Element& x) const;
    Element div(const Element& x, const Element& y) const;
    Element conj(const Element& x) const;
    Rat norm(const Element& x) const;
    Rat trace(const Element& x) const;
    bool is_integral(const Element& x) const;
    /// Smallest positive integer m with m*x integral.
    Int denominator(const Element& x) const;
    Element omega() const;  // the basis generator w (0 for Q)
    bool is_unit(const Element& x) const;
    /// Canonical representative among the associates u*x, u a unit:
    /// the lexicographically largest coordinate pair.
    Element canonical_associate(const Element& x) const;

    std::string element_str(const Element& x) const;
    Element parse_element(const std::string& s) const;

    // ---- ideals ----
    Ideal zero_ideal() const;
    Ideal unit_ideal() const;
    Ideal principal_ideal(const Element& x) const;  // x integral
    /// HNF of the Z-module generated by the given integral elements,
    /// which must already be an R-module.
    Ideal ideal_from_gens(const std::vector<Element>& gens) const;
    Ideal mul_ideal(const Ideal& I, const Ideal& J) const;
    Ideal add_ideal(const Ideal& I, const Ideal& J) const;  // ideal gcd
    Ideal pow_ideal(const Ideal& I, long n) const;
    Rat ideal_norm(const Ideal& I) const;
    bool ideal_contains(const Ideal& I, const Element& x) const;
    bool ideal_subset(const Ideal& I, const Ideal& J) const;  // I subseteq J
    std::vector<Element> ideal_basis(const Ideal& I) const;
    /// Reduce x modulo the lattice of I to the canonical coset
    /// representative with coordinates in the fundamental box.
    Element reduce_mod(const Element& x, const Ideal& I) const;

    // ---- primes, factorization, valuations ----
    const SplittingRecord& factor_rational_prime(long p) const;
    std::optional<PrimeIdeal> prime_by_label(const std::string& label) const;
    PrimeIdeal require_prime(const std::string& label) const;
    /// All prime ideals with residue characteristic <= bound, in canonical
    /// (p, index) order.
    std::vector<PrimeIdeal> primes_up_to(long bound) const;

    std::vector<std::pair<PrimeIdeal, long>> factor_ideal(const Ideal& I) const;
    std::vector<std::pair<PrimeIdeal, long>> factor_element(const Element& x) const;

    long valuation(const Element& x, const PrimeIdeal& P) const;  // x != 0
    ExtInt valuation_ext(const Element& x, const PrimeIdeal& P) const;
    long valuation(const Ideal& I, const PrimeIdeal& P) const;  // I != 0

    // ---- class group, units, principality ----
    const ClassGroup& class_group() const;
    Form ideal_class(const Ideal& I) const;
    int ideal_class_index(const Ideal& I) const;
    PrincipalityResult is_principal(const Ideal& I) const;
    const UnitGroup& unit_group() const;

    /// Finds a prime Q outside `exclude` whose class is inverse to the class
    /// of prod P_j^{e_j}, and the canonical generator k of Q * prod P_j^{e_j}.
    /// Rational primes are searched in increasing order up to search_bound().
    /// `exclude` is a membership predicate over prime ideals.
    struct CofactorResult {
        PrimeIdeal Q;
        Element k;
    };
    CofactorResult principal_cofactor(
        const std::vector<PrimeIdeal>& primes, const std::vector<long>& exps,
        const std::function<bool(const PrimeIdeal&)>& exclude) const;

    /// Element with exact valuation e_j at P_j and 0 everywhere else, if the
    /// class obstruction vanishes (exponents may be negative).
    std::optional<Element> element_with_valuations(
        const std::vector<PrimeIdeal>& primes, const std::vector<long>& exps) const;

    /// CRT over R: an element x with v_{P_i}(x - t_i) >= m_i for pairwise
    /// distinct primes P_i; the t_i may be non-integral.
    Element crt_approximate(const std::vector<PrimeIdeal>& primes,
                            const std::vector<Element>& targets,
                            const std::vector<long>& precisions) const;

    // ---- cache file I/O (JSON, versioned) ----
    /// Merges any matching per-discriminant record from the file; silently
    /// recomputes on schema or checksum mismatch.
    void load_cache(const std::string& path) const;
    /// Writes the current splitting/class tables through to the file,
    /// merging with records of other discriminants already present.
    void save_cache(const std::string& path) const;

  private:
    Field() = default;

    FieldKind kind_ = FieldKind::Rational;
    long d_ = 0;
    long disc_ = 1;
    bool half_ = false;  // w = (1+sqrt d)/2
    long search_bound_ = 1000;

    // Copies of a Field share one cache; all cached data is immutable once
    // computed, so sharing is safe.
    std::shared_ptr<struct FieldCache> cache_;

    SplittingRecord compute_splitting(long p) const;
};

/// Trial-division factorization of |n|, n != 0, as (prime, multiplicity)
/// pairs in increasing prime order.
std::vector<std::pair<long, long>> factor_int(Int n);

/// Reduction of an arbitrary form of discriminant D < 0 to the canonical
/// reduced representative.
Form reduce_form(Form f, const Int& D);
/// Gauss composition of two forms of the same discriminant (result reduced).
Form compose_forms(const Form& f1, const Form& f2, const Int& D);
/// All reduced forms of discriminant D < 0, sorted.
std::vector<Form> reduced_forms(const Int& D);

}  // namespace adelic
