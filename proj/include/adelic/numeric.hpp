#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

namespace adelic {

using Int = mpz_class;
using Rat = mpq_class;

// ---- error taxonomy -------------------------------------------------------
// DomainError maps to CLI exit code 1, UsageError to exit code 2.

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SearchExhausted : DomainError {
    using DomainError::DomainError;
};
struct InfeasibleSymbolic : DomainError {
    using DomainError::DomainError;
};
struct RefinementCapExceeded : DomainError {
    using DomainError::DomainError;
};
struct SymbolicCollision : DomainError {
    using DomainError::DomainError;
};

// ---- small integer helpers ------------------------------------------------

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_of(long n) { return Rat(n); }

/// Returns gcd(a,b) and sets u,v such that a*u + b*v = gcd(a,b).
inline Int ext_gcd(const Int& a, const Int& b, Int& u, Int& v) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// Exact division; throws if b does not divide a.
inline Int divexact(const Int& a, const Int& b) {
    if (b == 0 || a % b != 0) throw DomainError("divexact: not divisible");
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Floor-mod with result in [0, |m|).
inline Int mod_pos(const Int& a, const Int& m) {
    Int r, am(abs(m));
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), am.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
    if (root) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
    return true;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline bool is_prime(unsigned long n) { return is_prime(Int(n)); }

inline Int next_prime(const Int& n) {
    Int p;
    mpz_nextprime(p.get_mpz_t(), n.get_mpz_t());
    return p;
}

/// Kronecker symbol (a/n).
inline int kronecker(const Int& a, unsigned long n) {
    return mpz_kronecker_ui(a.get_mpz_t(), n);
}

inline long to_long(const Int& n) {
    if (!n.fits_slong_p()) throw DomainError("integer out of range for long");
    return n.get_si();
}

/// Square root of a modulo an odd prime p (Tonelli-Shanks), or nullopt if a
/// is a non-residue.  p must fit well below 2^62 so products fit __int128.
std::optional<unsigned long> sqrt_mod_prime(unsigned long a, unsigned long p);

// ---- Z ∪ {+inf} -----------------------------------------------------------

/// Extended integer used for valuations and superideal exponents.
struct ExtInt {
    long v = 0;
    bool inf = false;

    static ExtInt finite(long x) { return {x, false}; }
    static ExtInt infinity() { return {0, true}; }

    bool operator==(const ExtInt& o) const { return inf == o.inf && (inf || v == o.v); }
    bool operator!=(const ExtInt& o) const { return !(*this == o); }
    bool operator<(const ExtInt& o) const {
        if (inf) return false;
        if (o.inf) return true;
        return v < o.v;
    }
    bool operator<=(const ExtInt& o) const { return *this < o || *this == o; }
    bool operator>=(const ExtInt& o) const { return !(*this < o); }
    bool operator>(const ExtInt& o) const { return o < *this; }

    ExtInt operator+(const ExtInt& o) const {
        if (inf || o.inf) return infinity();
        return finite(v + o.v);
    }

    std::string str() const { return inf ? "inf" : std::to_string(v); }
};

inline ExtInt min(const ExtInt& a, const ExtInt& b) { return a < b ? a : b; }

}  // namespace adelic
