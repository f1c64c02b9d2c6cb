// Factorization over Q: Yun squarefree decomposition, then Zassenhaus
// (factor mod p, all-monic quadratic Hensel lifting, subset recombination
// with degree-pattern pruning across several primes).
#pragma once

#include "modpoly.hpp"
#include "poly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace ellsym {

// Squarefree decomposition in characteristic zero: f = lc * prod f_i^i with
// the f_i monic, squarefree, pairwise coprime. Works over any exact field.
template <class T>
std::vector<std::pair<Poly<T>, int>> yun_squarefree(const Poly<T>& f_in) {
    if (f_in.is_zero()) throw ZeroPolynomial();
    std::vector<std::pair<Poly<T>, int>> out;
    Poly<T> f = f_in.monic();
    if (f.degree() == 0) return out;
    Poly<T> fp = f.derivative();
    Poly<T> a = poly_gcd(f, fp);
    Poly<T> b = f / a;
    Poly<T> c = fp / a;
    int i = 1;
    while (b.degree() > 0) {
        Poly<T> d = c - b.derivative();
        Poly<T> g = poly_gcd(b, d);
        if (g.degree() > 0) out.emplace_back(g.monic(), i);
        b = b / g;
        c = d / g;
        ++i;
    }
    return out;
}

namespace detail {

using ZPoly = std::vector<Int>; // ascending, trailing zeros trimmed

inline void zp_trim(ZPoly& a) {
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

inline int zp_degree(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly v(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) v[i + j] += a[i] * b[j];
    zp_trim(v);
    return v;
}

// Exact division by a monic divisor; returns false if not divisible.
inline bool zp_divide_monic(const ZPoly& a, const ZPoly& b, ZPoly& q) {
    ZPoly r = a;
    int db = zp_degree(b);
    if (db < 0) return false;
    q.assign(zp_degree(r) >= db ? static_cast<size_t>(zp_degree(r) - db) + 1 : 0, Int(0));
    while (!r.empty() && zp_degree(r) >= db) {
        Int f = r.back();
        int k = zp_degree(r) - db;
        q[static_cast<size_t>(k)] = f;
        r.pop_back();
        for (int i = 0; i < db; ++i) r[static_cast<size_t>(k + i)] -= f * b[static_cast<size_t>(i)];
        zp_trim(r);
    }
    return r.empty();
}

inline ModPoly zp_mod(const ZPoly& a, uint64_t p) {
    std::vector<uint64_t> v(a.size());
    Int pm(static_cast<unsigned long>(p));
    for (size_t i = 0; i < a.size(); ++i) {
        Int x = a[i] % pm;
        if (sgn(x) < 0) x += pm;
        v[i] = x.get_ui();
    }
    return ModPoly(std::move(v), p);
}

inline ZmPoly zp_modm(const ZPoly& a, const Int& m) {
    std::vector<Int> v(a.begin(), a.end());
    return zm_reduce(std::move(v), m);
}

inline ZPoly zp_from_zm_sym(const ZmPoly& a, const Int& m) {
    ZPoly v(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) v[i] = mod_sym(a.c[i], m);
    zp_trim(v);
    return v;
}

// Quadratic lift of a monic pair: f = G*H (mod m) with sG + tH = 1 (mod m),
// all monic invariants kept; returns the data modulo m^2.
struct HenselPair {
    ZmPoly g, h, s, t;
};

inline HenselPair hensel_step(const ZPoly& f, const HenselPair& in, const Int& m) {
    Int m2 = m * m;
    ZmPoly fz = zp_modm(f, m2);
    ZmPoly G = zm_reduce(std::vector<Int>(in.g.c), m2);
    ZmPoly H = zm_reduce(std::vector<Int>(in.h.c), m2);
    ZmPoly S = zm_reduce(std::vector<Int>(in.s.c), m2);
    ZmPoly T = zm_reduce(std::vector<Int>(in.t.c), m2);

    // E = (f - G*H)/m, solved as u*H + v*G = E with u = T*E mod G.
    ZmPoly diff = zm_sub(fz, zm_mul(G, H, m2), m2);
    std::vector<Int> ev(diff.c.size());
    for (size_t i = 0; i < diff.c.size(); ++i) ev[i] = mod_sym(diff.c[i], m2) / m;
    ZmPoly E = zm_reduce(std::move(ev), m);
    ZmPoly q, u;
    zm_divrem_monic(zm_mul(T, E, m), G, m, q, u);
    ZmPoly num = zm_sub(E, zm_mul(u, H, m), m);
    ZmPoly v, rem;
    zm_divrem_monic(num, G, m, v, rem);
    if (!rem.is_zero()) throw std::runtime_error("hensel_step: inexact cofactor division");

    HenselPair out;
    std::vector<Int> gc = G.c;
    for (size_t i = 0; i < u.c.size(); ++i) gc[i] = mod_pos(gc[i] + m * u.c[i], m2);
    std::vector<Int> hc = H.c;
    for (size_t i = 0; i < v.c.size(); ++i) hc[i] = mod_pos(hc[i] + m * v.c[i], m2);
    out.g = zm_reduce(std::move(gc), m2);
    out.h = zm_reduce(std::move(hc), m2);

    // Refresh the Bezout pair: sigma = S*B mod H, tau = (B - sigma*G)/H.
    ZmPoly one = zm_reduce({Int(1)}, m2);
    ZmPoly bb = zm_sub(one, zm_add(zm_mul(S, out.g, m2), zm_mul(T, out.h, m2), m2), m2);
    std::vector<Int> bv(bb.c.size());
    for (size_t i = 0; i < bb.c.size(); ++i) bv[i] = mod_sym(bb.c[i], m2) / m;
    ZmPoly B = zm_reduce(std::move(bv), m);
    ZmPoly q2, sigma;
    zm_divrem_monic(zm_mul(S, B, m), out.h, m, q2, sigma);
    ZmPoly num2 = zm_sub(B, zm_mul(sigma, out.g, m), m);
    ZmPoly tau, rem2;
    zm_divrem_monic(num2, out.h, m, tau, rem2);
    if (!rem2.is_zero()) throw std::runtime_error("hensel_step: inexact bezout division");
    std::vector<Int> sc = S.c, tc = T.c;
    sc.resize(std::max(sc.size(), sigma.c.size()), Int(0));
    tc.resize(std::max(tc.size(), tau.c.size()), Int(0));
    for (size_t i = 0; i < sigma.c.size(); ++i) sc[i] = mod_pos(sc[i] + m * sigma.c[i], m2);
    for (size_t i = 0; i < tau.c.size(); ++i) tc[i] = mod_pos(tc[i] + m * tau.c[i], m2);
    out.s = zm_reduce(std::move(sc), m2);
    out.t = zm_reduce(std::move(tc), m2);
    return out;
}

// Lift the monic factorization f = prod(leaves) (mod p) to mod target.
inline void hensel_tree(const ZPoly& f, const std::vector<ModPoly>& leaves, size_t lo, size_t hi,
                        uint64_t p, const Int& target, std::vector<ZmPoly>& out) {
    if (hi - lo == 1) {
        out.push_back(zp_modm(f, target));
        return;
    }
    size_t mid = lo + (hi - lo) / 2;
    ModPoly g0 = ModPoly::one(p), h0 = ModPoly::one(p);
    for (size_t i = lo; i < mid; ++i) g0 = mp_mul(g0, leaves[i]);
    for (size_t i = mid; i < hi; ++i) h0 = mp_mul(h0, leaves[i]);
    ModPoly s0, t0;
    ModPoly gg = mp_ext_gcd(g0, h0, s0, t0);
    if (gg.degree() != 0) throw std::runtime_error("hensel_tree: factors not coprime");

    HenselPair pair{zm_from_mod(g0), zm_from_mod(h0), zm_from_mod(s0), zm_from_mod(t0)};
    Int m(static_cast<unsigned long>(p));
    while (m < target) {
        pair = hensel_step(f, pair, m);
        m = m * m;
    }
    // reduce to the target modulus and recurse on both halves
    ZPoly gz = zp_from_zm_sym(pair.g, m);
    ZPoly hz = zp_from_zm_sym(pair.h, m);
    hensel_tree(gz, leaves, lo, mid, p, target, out);
    hensel_tree(hz, leaves, mid, hi, p, target, out);
}

inline Int zp_norm2_sq(const ZPoly& f) {
    Int s(0);
    for (const auto& c : f) s += c * c;
    return s;
}

// Coefficient bound for monic divisors of a monic f (Landau-Mignotte).
inline Int mignotte_bound(const ZPoly& f) {
    Int n2 = zp_norm2_sq(f);
    Int root;
    mpz_sqrt(root.get_mpz_t(), n2.get_mpz_t());
    root += 1;
    return (root << static_cast<unsigned long>(zp_degree(f) + 1)) + 1;
}

struct ModularData {
    uint64_t p = 0;
    std::vector<ModPoly> factors;
};

// All subset-sum achievable degrees as a bitset.
inline std::vector<bool> degree_set(const std::vector<ModPoly>& factors, int n) {
    std::vector<bool> dp(static_cast<size_t>(n) + 1, false);
    dp[0] = true;
    for (const auto& f : factors) {
        int d = f.degree();
        for (int k = n; k >= d; --k)
            if (dp[static_cast<size_t>(k - d)]) dp[static_cast<size_t>(k)] = true;
    }
    return dp;
}

// Factor a monic squarefree integer polynomial into monic irreducibles.
inline std::vector<ZPoly> zassenhaus_monic(ZPoly f) {
    std::vector<ZPoly> result;
    int n = zp_degree(f);
    if (n <= 0) return result;
    if (n == 1) {
        result.push_back(f);
        return result;
    }

    // Collect a few usable primes; keep intersected degree patterns.
    std::vector<ModularData> tried;
    std::vector<bool> allowed(static_cast<size_t>(n) + 1, true);
    uint64_t p = 2;
    int found = 0;
    while (found < 4) {
        p = p == 2 ? 3 : p + 2;
        if (!is_probable_prime(Int(static_cast<unsigned long>(p)))) continue;
        ModPoly fp = zp_mod(f, p);
        if (fp.degree() != n) continue; // monic, so only p | nothing; kept for safety
        ModPoly g = mp_gcd(fp, mp_derivative(fp));
        if (g.degree() != 0) continue; // not squarefree mod p
        ModularData md;
        md.p = p;
        md.factors = mp_factor_squarefree(fp);
        auto ds = degree_set(md.factors, n);
        for (int k = 0; k <= n; ++k)
            if (!ds[static_cast<size_t>(k)]) allowed[static_cast<size_t>(k)] = false;
        tried.push_back(std::move(md));
        ++found;
        if (tried.back().factors.size() == 1) break; // irreducible certificate
    }

    bool maybe_reducible = false;
    for (int k = 1; k < n; ++k)
        if (allowed[static_cast<size_t>(k)]) maybe_reducible = true;
    const ModularData* best = &tried[0];
    for (const auto& md : tried)
        if (md.factors.size() < best->factors.size()) best = &md;
    if (!maybe_reducible || best->factors.size() == 1) {
        result.push_back(f);
        return result;
    }

    // Hensel-lift the chosen factorization far enough to recognize factors.
    Int bound = mignotte_bound(f);
    Int target(static_cast<unsigned long>(best->p));
    while (target <= bound * 2) target *= target;
    std::vector<ZmPoly> lifted_zm;
    hensel_tree(f, best->factors, 0, best->factors.size(), best->p, target, lifted_zm);
    std::vector<ZPoly> lifted;
    for (auto& g : lifted_zm) lifted.push_back(zp_from_zm_sym(g, target));

    // Secondary prime for cheap divisibility rejection.
    uint64_t q = 0;
    for (const auto& md : tried)
        if (md.p != best->p) { q = md.p; break; }

    std::vector<int> live(lifted.size());
    for (size_t i = 0; i < live.size(); ++i) live[i] = static_cast<int>(i);

    auto try_subset = [&](const std::vector<int>& idx) -> bool {
        int dsum = 0;
        for (int i : idx) dsum += zp_degree(lifted[static_cast<size_t>(i)]);
        if (dsum <= 0 || dsum >= zp_degree(f)) return false;
        if (!allowed[static_cast<size_t>(dsum)]) return false;
        // candidate = product of lifted factors, symmetric residues
        ZmPoly prod = zm_reduce({Int(1)}, target);
        for (int i : idx) prod = zm_mul(prod, zp_modm(lifted[static_cast<size_t>(i)], target), target);
        ZPoly cand = zp_from_zm_sym(prod, target);
        // trailing coefficient must divide f(0) for monic factors
        if (sgn(f[0]) != 0 && sgn(cand[0]) != 0 && !mpz_divisible_p(f[0].get_mpz_t(), cand[0].get_mpz_t()))
            return false;
        if (q) {
            ModPoly fr = mp_rem(zp_mod(f, q), zp_mod(cand, q));
            if (!fr.is_zero()) return false;
        }
        ZPoly quo;
        if (!zp_divide_monic(f, cand, quo)) return false;
        result.push_back(cand);
        f = quo;
        return true;
    };

    size_t card = 1;
    while (2 * card <= live.size()) {
        bool advanced = false;
        // iterate cardinality-card subsets of live in lexicographic order
        std::vector<size_t> pos(card);
        for (size_t i = 0; i < card; ++i) pos[i] = i;
        while (true) {
            std::vector<int> idx(card);
            for (size_t i = 0; i < card; ++i) idx[i] = live[pos[i]];
            if (try_subset(idx)) {
                std::vector<int> next;
                for (int i : live)
                    if (std::find(idx.begin(), idx.end(), i) == idx.end()) next.push_back(i);
                live = std::move(next);
                advanced = true;
                break;
            }
            // next combination
            size_t i = card;
            while (i-- > 0) {
                if (pos[i] != i + live.size() - card) {
                    ++pos[i];
                    for (size_t j = i + 1; j < card; ++j) pos[j] = pos[j - 1] + 1;
                    break;
                }
                if (i == 0) { i = SIZE_MAX; break; }
            }
            if (i == SIZE_MAX) break;
        }
        if (!advanced) ++card;
    }
    if (zp_degree(f) > 0) result.push_back(f);
    return result;
}

} // namespace detail

struct QFactorization {
    Rat lc{1};
    std::vector<std::pair<QPoly, int>> factors; // monic irreducible, multiplicity
};

// Full factorization over Q. The returned factors are monic irreducible and
// lc * prod factors^mult reproduces the input exactly.
inline QFactorization factor_rational(const QPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial();
    QFactorization out;
    out.lc = f.lc();
    if (f.degree() == 0) return out;
    QPoly monic = f.monic();
    auto parts = yun_squarefree(monic);
    for (auto& [part, mult] : parts) {
        // scale x -> x/D so the monic polynomial has integer coefficients
        Int d(1);
        for (const auto& c : part.coeffs()) d = lcm(d, Int(c.get_den()));
        int n = part.degree();
        detail::ZPoly F(static_cast<size_t>(n) + 1);
        Int dpow(1);
        for (int i = n; i >= 0; --i) {
            Rat ci = part[i] * Rat(dpow);
            if (ci.get_den() != 1) throw std::runtime_error("factor_rational: scaling failed");
            F[static_cast<size_t>(i)] = Int(ci.get_num());
            dpow *= d;
        }
        for (auto& g : detail::zassenhaus_monic(std::move(F))) {
            int dg = detail::zp_degree(g);
            std::vector<Rat> v(static_cast<size_t>(dg) + 1);
            Int dp(1);
            for (int i = dg; i >= 0; --i) {
                v[static_cast<size_t>(i)] = Rat(g[static_cast<size_t>(i)]) / Rat(dp);
                dp *= d;
            }
            out.factors.emplace_back(QPoly(std::move(v)), mult);
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        for (int i = a.first.degree(); i >= 0; --i) {
            int c = cmp(a.first[i], b.first[i]);
            if (c != 0) return c < 0;
        }
        return a.second < b.second;
    });
    return out;
}

inline bool is_irreducible_q(const QPoly& f) {
    auto fac = factor_rational(f);
    return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

} // namespace ellsym
