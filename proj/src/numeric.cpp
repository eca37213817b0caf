#include "adelic/numeric.hpp"

namespace adelic {

namespace {

unsigned long mulmod(unsigned long a, unsigned long b, unsigned long m) {
    return static_cast<unsigned long>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

unsigned long powmod(unsigned long a, unsigned long e, unsigned long m) {
    unsigned long r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

std::optional<unsigned long> sqrt_mod_prime(unsigned long a, unsigned long p) {
    a %= p;
    if (p == 2) return a;
    if (a == 0) return 0ul;
    if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);

    // Tonelli-Shanks.  Write p-1 = q * 2^s with q odd.
    unsigned long q = p - 1;
    unsigned s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }

    unsigned long z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;

    unsigned long m = s;
    unsigned long c = powmod(z, q, p);
    unsigned long t = powmod(a, q, p);
    unsigned long r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        unsigned long i = 0;
        unsigned long t2 = t;
        while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
        unsigned long b = powmod(c, 1ul << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

}  // namespace adelic
