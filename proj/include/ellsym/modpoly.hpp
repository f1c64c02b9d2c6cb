// Polynomials over F_p (word-sized p) and over Z/p^k: the modular kernels
// behind rational factorization, Hensel lifting, and p-adic root lifting.
#pragma once

#include "rational.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ellsym {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod_u64(uint64_t a, uint64_t p) { return powmod_u64(a % p, p - 2, p); }

// Dense polynomial over F_p, ascending coefficients, no trailing zeros.
struct ModPoly {
    std::vector<uint64_t> c;
    uint64_t p = 0;

    ModPoly() = default;
    ModPoly(std::vector<uint64_t> cs, uint64_t prime) : c(std::move(cs)), p(prime) { trim(); }

    static ModPoly zero(uint64_t p) { return ModPoly({}, p); }
    static ModPoly one(uint64_t p) { return ModPoly({1 % p}, p); }
    static ModPoly x(uint64_t p) { return ModPoly({0, 1}, p); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    uint64_t lc() const { return c.back(); }
    uint64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<size_t>(i)] : 0;
    }
};

inline ModPoly mp_add(const ModPoly& a, const ModPoly& b) {
    std::vector<uint64_t> v(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) {
        uint64_t s = 0;
        if (i < a.c.size()) s += a.c[i];
        if (i < b.c.size()) s += b.c[i];
        v[i] = s % a.p;
    }
    return ModPoly(std::move(v), a.p);
}

inline ModPoly mp_sub(const ModPoly& a, const ModPoly& b) {
    std::vector<uint64_t> v(std::max(a.c.size(), b.c.size()), 0);
    uint64_t p = a.p ? a.p : b.p;
    for (size_t i = 0; i < v.size(); ++i) {
        uint64_t x = i < a.c.size() ? a.c[i] : 0;
        uint64_t y = i < b.c.size() ? b.c[i] : 0;
        v[i] = (x + p - y) % p;
    }
    return ModPoly(std::move(v), p);
}

inline ModPoly mp_mul(const ModPoly& a, const ModPoly& b) {
    if (a.is_zero() || b.is_zero()) return ModPoly::zero(a.p ? a.p : b.p);
    std::vector<uint64_t> v(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            v[i + j] = (v[i + j] + mulmod_u64(a.c[i], b.c[j], a.p)) % a.p;
    }
    return ModPoly(std::move(v), a.p);
}

inline ModPoly mp_scale(const ModPoly& a, uint64_t s) {
    ModPoly r = a;
    for (auto& x : r.c) x = mulmod_u64(x, s % a.p, a.p);
    r.trim();
    return r;
}

inline void mp_divrem(const ModPoly& a, const ModPoly& b, ModPoly& q, ModPoly& r) {
    uint64_t p = a.p ? a.p : b.p;
    q = ModPoly::zero(p);
    r = a;
    if (b.is_zero()) throw std::runtime_error("mp_divrem by zero");
    uint64_t binv = invmod_u64(b.lc(), p);
    int db = b.degree();
    std::vector<uint64_t> qv;
    if (r.degree() >= db) qv.assign(static_cast<size_t>(r.degree() - db) + 1, 0);
    while (!r.is_zero() && r.degree() >= db) {
        uint64_t f = mulmod_u64(r.lc(), binv, p);
        int k = r.degree() - db;
        qv[static_cast<size_t>(k)] = f;
        std::vector<uint64_t> rv = r.c;
        rv.pop_back();
        for (int i = 0; i < db; ++i) {
            size_t idx = static_cast<size_t>(k + i);
            rv[idx] = (rv[idx] + p - mulmod_u64(f, b.c[static_cast<size_t>(i)], p)) % p;
        }
        r = ModPoly(std::move(rv), p);
    }
    q = ModPoly(std::move(qv), p);
}

inline ModPoly mp_rem(const ModPoly& a, const ModPoly& b) {
    ModPoly q, r;
    mp_divrem(a, b, q, r);
    return r;
}

inline ModPoly mp_quo(const ModPoly& a, const ModPoly& b) {
    ModPoly q, r;
    mp_divrem(a, b, q, r);
    return q;
}

inline ModPoly mp_monic(const ModPoly& a) {
    if (a.is_zero()) return a;
    return mp_scale(a, invmod_u64(a.lc(), a.p));
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b) {
    while (!b.is_zero()) {
        ModPoly r = mp_rem(a, b);
        a = b;
        b = r;
    }
    return a.is_zero() ? a : mp_monic(a);
}

// g = gcd = s*a + t*b with g monic.
inline ModPoly mp_ext_gcd(ModPoly a, ModPoly b, ModPoly& s, ModPoly& t) {
    uint64_t p = a.p ? a.p : b.p;
    ModPoly s0 = ModPoly::one(p), s1 = ModPoly::zero(p);
    ModPoly t0 = ModPoly::zero(p), t1 = ModPoly::one(p);
    while (!b.is_zero()) {
        ModPoly q, r;
        mp_divrem(a, b, q, r);
        a = b; b = r;
        ModPoly ns = mp_sub(s0, mp_mul(q, s1)); s0 = s1; s1 = ns;
        ModPoly nt = mp_sub(t0, mp_mul(q, t1)); t0 = t1; t1 = nt;
    }
    if (a.is_zero()) { s = s0; t = t0; return a; }
    uint64_t inv = invmod_u64(a.lc(), p);
    s = mp_scale(s0, inv);
    t = mp_scale(t0, inv);
    return mp_monic(a);
}

inline ModPoly mp_powmod(ModPoly base, Int e, const ModPoly& mod) {
    uint64_t p = mod.p;
    ModPoly result = ModPoly::one(p);
    base = mp_rem(base, mod);
    while (sgn(e) > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mp_rem(mp_mul(result, base), mod);
        base = mp_rem(mp_mul(base, base), mod);
        e >>= 1;
    }
    return result;
}

inline ModPoly mp_derivative(const ModPoly& a) {
    if (a.c.size() <= 1) return ModPoly::zero(a.p);
    std::vector<uint64_t> v(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i)
        v[i - 1] = mulmod_u64(a.c[i], i % a.p, a.p);
    return ModPoly(std::move(v), a.p);
}

// Distinct-degree then equal-degree (Cantor-Zassenhaus) factorization of a
// squarefree monic polynomial over F_p, odd p. Deterministically seeded.
inline void mp_edf(const ModPoly& f, int d, std::mt19937_64& rng, std::vector<ModPoly>& out) {
    if (f.degree() == d) {
        out.push_back(mp_monic(f));
        return;
    }
    uint64_t p = f.p;
    Int exppow = (int_pow(Int(static_cast<long>(p)), static_cast<unsigned long>(d)) - 1) / 2;
    while (true) {
        std::vector<uint64_t> rc(static_cast<size_t>(f.degree()), 0);
        for (auto& x : rc) x = rng() % p;
        ModPoly r(std::move(rc), p);
        if (r.is_zero()) continue;
        ModPoly s = mp_powmod(r, exppow, f);
        ModPoly g = mp_gcd(mp_sub(s, ModPoly::one(p)), f);
        if (!g.is_zero() && g.degree() > 0 && g.degree() < f.degree()) {
            mp_edf(g, d, rng, out);
            mp_edf(mp_quo(f, g), d, rng, out);
            return;
        }
    }
}

inline std::vector<ModPoly> mp_factor_squarefree(const ModPoly& f_in) {
    ModPoly f = mp_monic(f_in);
    uint64_t p = f.p;
    std::mt19937_64 rng(0x5eedULL * p + static_cast<uint64_t>(f.degree()));
    std::vector<ModPoly> out;
    ModPoly h = ModPoly::x(p);
    int d = 0;
    while (f.degree() > 0) {
        ++d;
        if (2 * d > f.degree()) {
            out.push_back(f);
            break;
        }
        h = mp_powmod(h, Int(static_cast<long>(p)), f);
        ModPoly g = mp_gcd(mp_sub(h, ModPoly::x(p)), f);
        if (!g.is_zero() && g.degree() > 0) {
            mp_edf(g, d, rng, out);
            f = mp_quo(f, g);
            h = mp_rem(h, f);
        }
    }
    return out;
}

// ---- Z/m arithmetic on polynomials (m an Int, typically p^k) ----

inline Int mod_sym(const Int& a, const Int& m) {
    Int r = a % m;
    if (sgn(r) < 0) r += m;
    if (r * 2 > m) r -= m;
    return r;
}

inline Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (sgn(r) < 0) r += m;
    return r;
}

struct ZmPoly {
    std::vector<Int> c; // reduced mod m, in [0, m)
    void trim() {
        while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
};

inline ZmPoly zm_reduce(std::vector<Int> v, const Int& m) {
    for (auto& x : v) x = mod_pos(x, m);
    ZmPoly r{std::move(v)};
    r.trim();
    return r;
}

inline ZmPoly zm_add(const ZmPoly& a, const ZmPoly& b, const Int& m) {
    std::vector<Int> v(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < v.size(); ++i) {
        if (i < a.c.size()) v[i] += a.c[i];
        if (i < b.c.size()) v[i] += b.c[i];
    }
    return zm_reduce(std::move(v), m);
}

inline ZmPoly zm_sub(const ZmPoly& a, const ZmPoly& b, const Int& m) {
    std::vector<Int> v(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < v.size(); ++i) {
        if (i < a.c.size()) v[i] += a.c[i];
        if (i < b.c.size()) v[i] -= b.c[i];
    }
    return zm_reduce(std::move(v), m);
}

inline ZmPoly zm_mul(const ZmPoly& a, const ZmPoly& b, const Int& m) {
    if (a.is_zero() || b.is_zero()) return ZmPoly{};
    std::vector<Int> v(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (sgn(a.c[i]) == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
    }
    return zm_reduce(std::move(v), m);
}

// Division by a monic divisor over Z/m.
inline void zm_divrem_monic(const ZmPoly& a, const ZmPoly& b, const Int& m, ZmPoly& q, ZmPoly& r) {
    r = a;
    q = ZmPoly{};
    int db = b.degree();
    if (db < 0) throw std::runtime_error("zm_divrem_monic by zero");
    std::vector<Int> qv;
    if (r.degree() >= db) qv.assign(static_cast<size_t>(r.degree() - db) + 1, Int(0));
    while (!r.is_zero() && r.degree() >= db) {
        Int f = r.c.back();
        int k = r.degree() - db;
        qv[static_cast<size_t>(k)] = f;
        std::vector<Int> rv = r.c;
        rv.pop_back();
        for (int i = 0; i < db; ++i)
            rv[static_cast<size_t>(k + i)] =
                mod_pos(rv[static_cast<size_t>(k + i)] - f * b.c[static_cast<size_t>(i)], m);
        ZmPoly rr{std::move(rv)};
        rr.trim();
        r = rr;
    }
    q = zm_reduce(std::move(qv), m);
}

inline ZmPoly zm_rem_monic(const ZmPoly& a, const ZmPoly& b, const Int& m) {
    ZmPoly q, r;
    zm_divrem_monic(a, b, m, q, r);
    return r;
}

inline ZmPoly zm_from_mod(const ModPoly& a) {
    std::vector<Int> v;
    v.reserve(a.c.size());
    for (uint64_t x : a.c) v.emplace_back(static_cast<unsigned long>(x));
    ZmPoly r{std::move(v)};
    r.trim();
    return r;
}

} // namespace ellsym
