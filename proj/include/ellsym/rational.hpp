// Exact rational scalars on top of GMP, plus the handful of integer
// helpers the rest of the library needs.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellsym {

using Int = mpz_class;
using Rat = mpq_class;

struct InvalidPrime : std::runtime_error {
    explicit InvalidPrime(const std::string& msg) : std::runtime_error(msg) {}
};

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "n", "-n", "n/d".
inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::runtime_error("cannot parse rational: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat b = base;
    bool neg = e < 0;
    unsigned long ue = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rat num, den;
    mpz_pow_ui(num.get_num_mpz_t(), b.get_num_mpz_t(), ue);
    mpz_pow_ui(num.get_den_mpz_t(), b.get_den_mpz_t(), ue);
    num.canonicalize();
    if (!neg) return num;
    if (is_zero(num)) throw std::runtime_error("0^negative");
    return Rat(1) / num;
}

inline Int int_pow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline bool is_odd_prime_l(long l) {
    if (l < 3 || l % 2 == 0) return false;
    return is_probable_prime(Int(l));
}

// Exact integer k-th root when it exists.
inline bool perfect_root(const Int& n, unsigned long k, Int& root) {
    Int r;
    int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    if (exact) root = r;
    return exact != 0;
}

inline long smallest_prime_factor(long n) {
    if (n < 2) throw std::runtime_error("smallest_prime_factor: n < 2");
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

inline long mod_inverse_long(long a, long m) {
    long t = 0, newt = 1, r = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
        long q = r / newr;
        long tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (r != 1) throw std::runtime_error("mod_inverse_long: not invertible");
    return ((t % m) + m) % m;
}

} // namespace ellsym
