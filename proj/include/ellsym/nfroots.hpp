// l-th roots in number fields and fixed fields of automorphism groups.
//
// Root extraction runs in three layers:
//   1. finite-field disproof: if a is an l-th power, it is one in every
//      good residue field, so a failed local power test settles "no";
//   2. witness recovery: a local root is Newton-lifted p-adically in
//      Z[z]/(p^k, M) and rationally reconstructed, trying the finitely
//      many mu_l-twists per local component; any candidate is verified
//      exactly before being returned;
//   3. fallback: factor t^l - a by Trager, which is complete but slower.
// The layering is only a strategy; every answer is exact.
#pragma once

#include "nffactor.hpp"

#include <optional>

namespace ellsym {

namespace detail {

struct FqCtx {
    ModPoly modulus; // irreducible over F_p
    uint64_t p;
    Int q;       // p^deg
    int degree;
};

inline ModPoly fq_mul(const FqCtx& F, const ModPoly& a, const ModPoly& b) {
    return mp_rem(mp_mul(a, b), F.modulus);
}
inline ModPoly fq_pow(const FqCtx& F, const ModPoly& a, const Int& e) {
    if (sgn(e) < 0) {
        ModPoly inv = mp_powmod(a, F.q - 2, F.modulus);
        return mp_powmod(inv, -e, F.modulus);
    }
    return mp_powmod(a, e, F.modulus);
}
inline bool fq_is_one(const ModPoly& a) { return a.degree() == 0 && a.c[0] == 1; }

// One l-th root in F_q, assuming the power test passed (Adleman-Manders-
// Miller when l | q-1, plain exponent inversion otherwise).
inline std::optional<ModPoly> fq_lth_root(const FqCtx& F, const ModPoly& a, long l) {
    Int qm1 = F.q - 1;
    Int lz(l);
    if (qm1 % lz != 0) {
        // x -> x^l is a bijection
        Int e;
        Int u = qm1;
        if (!mpz_invert(e.get_mpz_t(), lz.get_mpz_t(), u.get_mpz_t()))
            return std::nullopt;
        return fq_pow(F, a, e);
    }
    if (!fq_is_one(fq_pow(F, a, qm1 / lz))) return std::nullopt;
    // q - 1 = l^v * u with l coprime to u
    int v = 0;
    Int u = qm1;
    while (u % lz == 0) { u /= lz; ++v; }
    // non-residue for the Sylow generator
    ModPoly rho;
    bool found = false;
    for (uint64_t j = 0; j < 200 && !found; ++j) {
        std::vector<uint64_t> cs = {j % F.p, 1};
        ModPoly cand(std::move(cs), F.p);
        cand = mp_rem(cand, F.modulus);
        if (cand.is_zero()) continue;
        if (!fq_is_one(fq_pow(F, cand, qm1 / lz))) { rho = cand; found = true; }
    }
    if (!found) {
        for (uint64_t j = 2; j < F.p && !found; ++j) {
            ModPoly cand({j}, F.p);
            if (!fq_is_one(fq_pow(F, cand, qm1 / lz))) { rho = cand; found = true; }
        }
    }
    if (!found) return std::nullopt; // defensive; should not happen
    ModPoly g = fq_pow(F, rho, u);   // order l^v
    Int alpha;
    if (!mpz_invert(alpha.get_mpz_t(), lz.get_mpz_t(), u.get_mpz_t())) return std::nullopt;
    ModPoly x = fq_pow(F, a, alpha);
    ModPoly b = fq_mul(F, fq_pow(F, x, lz), fq_pow(F, a, qm1 - 1)); // x^l * a^{-1}
    // discrete log of b in <g> (order l^v), base-l digits
    ModPoly gamma = fq_pow(F, g, int_pow(lz, static_cast<unsigned long>(v - 1)));
    std::vector<ModPoly> table;
    ModPoly t = ModPoly::one(F.p);
    for (long j = 0; j < l; ++j) { table.push_back(t); t = fq_mul(F, t, gamma); }
    Int e(0), lpow(1);
    for (int i = 0; i < v; ++i) {
        ModPoly h = fq_mul(F, b, fq_pow(F, g, qm1 - (e % int_pow(lz, static_cast<unsigned long>(v)))));
        h = fq_pow(F, h, int_pow(lz, static_cast<unsigned long>(v - 1 - i)));
        long digit = -1;
        for (long j = 0; j < l; ++j)
            if (h.c == table[static_cast<size_t>(j)].c && h.degree() == table[static_cast<size_t>(j)].degree()) { digit = j; break; }
        if (digit < 0) return std::nullopt;
        e += lpow * digit;
        lpow *= lz;
    }
    if (e % lz != 0) return std::nullopt; // not an l-th power after all
    ModPoly corr = fq_pow(F, g, int_pow(lz, static_cast<unsigned long>(v)) - e / lz);
    return fq_mul(F, x, corr);
}

struct PadicPrime {
    uint64_t p = 0;
    std::vector<ModPoly> factors;   // of the scaled integer defining polynomial
    std::vector<ModPoly> a_components;
};

// Rational reconstruction: c = n/d mod m with |n|, |d| <= sqrt(m/2).
inline bool rational_reconstruct(const Int& c, const Int& m, Rat& out) {
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(m / 2).get_mpz_t());
    Int r0 = m, r1 = mod_pos(c, m);
    Int t0(0), t1(1);
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1; r0 = r1; r1 = r2;
        Int t2 = t0 - q * t1; t0 = t1; t1 = t2;
    }
    if (sgn(t1) == 0) return false;
    Int n = r1, d = t1;
    if (sgn(d) < 0) { d = -d; n = -n; }
    if (d > bound) return false;
    Int g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (g != 1) return false;
    out = Rat(n) / Rat(d);
    return true;
}

} // namespace detail

struct LthPowerResult {
    bool is_power = false;
    NFElem root; // valid when is_power
};

// Root of t^l = a in the field of a, if one exists (Trager route).
inline std::optional<NFElem> lth_root_via_factor(const NFElem& a, long l, const FieldPtr& field) {
    std::vector<NFElem> pc(static_cast<size_t>(l) + 1);
    pc[0] = -a;
    pc[static_cast<size_t>(l)] = NFElem(1L);
    auto roots = roots_in_field(Poly<NFElem>(std::move(pc)), field);
    if (roots.empty()) return std::nullopt;
    return roots.front();
}

inline LthPowerResult lth_power_test(const NFElem& a_in, long l, const FieldPtr& field) {
    if (l < 2) throw std::runtime_error("lth_power_test: l must be >= 2");
    if (a_in.is_zero()) throw ZeroElement();
    NFElem a = nf_lift(a_in, field);

    if (!field) {
        const Rat& r = a.rat();
        if (l % 2 == 0 && sgn(r) < 0) return {};
        Int num = r.get_num(), den = r.get_den();
        bool neg = sgn(num) < 0;
        if (neg) num = -num;
        Int rn, rd;
        if (!perfect_root(num, static_cast<unsigned long>(l), rn)) return {};
        if (!perfect_root(den, static_cast<unsigned long>(l), rd)) return {};
        Rat root = Rat(neg ? -rn : rn) / Rat(rd);
        return {true, NFElem(root)};
    }

    const Flattening& flat = flattening_of(field);
    const int n = flat.abs->degree();
    const QPoly M = detail::defining_as_qpoly(flat.abs);

    // scale the generator so the defining polynomial has integer coefficients
    Int dm(1);
    for (const auto& c : M.coeffs()) dm = lcm(dm, Int(c.get_den()));
    detail::ZPoly mz(static_cast<size_t>(n) + 1);
    {
        Int dpow(1);
        for (int i = n; i >= 0; --i) {
            Rat ci = M[i] * Rat(dpow);
            mz[static_cast<size_t>(i)] = Int(ci.get_num());
            dpow *= dm;
        }
    }

    // integral coordinates of A = a * d^l with respect to the scaled basis
    NFElem a_abs = to_abs(a, flat);
    std::vector<Rat> q(static_cast<size_t>(n));
    {
        Int dpow(1);
        for (int j = 0; j < n; ++j) {
            Rat cj;
            if (!a_abs.coeffs()[static_cast<size_t>(j)].rational_value(cj))
                throw std::runtime_error("lth_power_test: bad abs coords");
            q[static_cast<size_t>(j)] = cj / Rat(dpow);
            dpow *= dm;
        }
    }
    Int dscale(1);
    for (const auto& c : q) dscale = lcm(dscale, Int(c.get_den()));
    Int dl = int_pow(dscale, static_cast<unsigned long>(l));
    std::vector<Int> acoords(static_cast<size_t>(n));
    size_t maxbits = 1;
    for (int j = 0; j < n; ++j) {
        Rat v = q[static_cast<size_t>(j)] * Rat(dl);
        acoords[static_cast<size_t>(j)] = Int(v.get_num());
        maxbits = std::max(maxbits, mpz_sizeinbase(acoords[static_cast<size_t>(j)].get_mpz_t(), 2));
    }

    // finite-field stage
    std::vector<detail::PadicPrime> usable;
    uint64_t p = 2;
    int scanned = 0;
    while (usable.size() < 24 && scanned < 600) {
        p += 1 + (p & 1);
        ++scanned;
        if (!is_probable_prime(Int(static_cast<unsigned long>(p)))) continue;
        if (static_cast<long>(p) == l) continue;
        ModPoly mp_ = detail::zp_mod(mz, p);
        if (mp_.degree() != n) continue;
        if (mp_gcd(mp_, mp_derivative(mp_)).degree() != 0) continue;
        detail::ZPoly az(acoords.begin(), acoords.end());
        detail::zp_trim(az);
        ModPoly ap = detail::zp_mod(az, p);
        if (mp_gcd(ap, mp_).degree() != 0) continue; // a not a unit mod p
        detail::PadicPrime pd;
        pd.p = p;
        pd.factors = mp_factor_squarefree(mp_);
        std::sort(pd.factors.begin(), pd.factors.end(),
                  [](const ModPoly& x, const ModPoly& y) { return x.c < y.c; });
        bool ok = true;
        for (const auto& mi : pd.factors) {
            detail::FqCtx F{mi, p, int_pow(Int(static_cast<unsigned long>(p)), static_cast<unsigned long>(mi.degree())), mi.degree()};
            ModPoly ai = mp_rem(ap, mi);
            pd.a_components.push_back(ai);
            Int g = gcd(Int(l), F.q - 1);
            if (g == 1) continue;
            if (!detail::fq_is_one(detail::fq_pow(F, ai, (F.q - 1) / g))) { ok = false; break; }
        }
        if (!ok) return {}; // sound disproof
        usable.push_back(std::move(pd));
    }
    if (usable.empty()) {
        auto r = lth_root_via_factor(a, l, field);
        if (!r) return {};
        return {true, *r};
    }

    // witness recovery at the prime with the fewest factors
    const detail::PadicPrime* best = &usable[0];
    for (const auto& u : usable)
        if (u.factors.size() < best->factors.size()) best = &u;

    auto fallback = [&]() -> LthPowerResult {
        auto r = lth_root_via_factor(a, l, field);
        if (!r) return {};
        return {true, *r};
    };

    const uint64_t pp = best->p;
    const size_t nf = best->factors.size();
    std::vector<detail::FqCtx> ctxs;
    std::vector<ModPoly> base_roots;
    std::vector<ModPoly> twist_gens; // order gcd(l, q-1) element, or 1
    std::vector<long> twist_counts;
    double combo_estimate = 1;
    for (size_t i = 0; i < nf; ++i) {
        detail::FqCtx F{best->factors[i], pp,
                        int_pow(Int(static_cast<unsigned long>(pp)), static_cast<unsigned long>(best->factors[i].degree())),
                        best->factors[i].degree()};
        auto root = detail::fq_lth_root(F, best->a_components[i], l);
        if (!root) return fallback();
        ctxs.push_back(F);
        base_roots.push_back(*root);
        Int g = gcd(Int(l), F.q - 1);
        long tc = static_cast<long>(g.get_si());
        twist_counts.push_back(tc);
        combo_estimate *= static_cast<double>(tc);
        if (tc > 1) {
            // an element of exact order l in F_q (l prime, l | q-1)
            ModPoly w;
            for (uint64_t j = 0;; ++j) {
                ModPoly cand({j % pp, 1}, pp);
                cand = mp_rem(cand, F.modulus);
                if (cand.is_zero()) continue;
                ModPoly t = detail::fq_pow(F, cand, (F.q - 1) / Int(l));
                if (!detail::fq_is_one(t)) { w = t; break; }
                if (j > 400) return fallback();
            }
            twist_gens.push_back(w);
        } else {
            twist_gens.push_back(ModPoly::one(pp));
        }
    }
    if (combo_estimate > 20000.0) return fallback();

    // idempotents for CRT in F_p[z]/(M)
    ModPoly mzp = detail::zp_mod(mz, pp);
    std::vector<ModPoly> idem;
    for (size_t i = 0; i < nf; ++i) {
        ModPoly qi = ModPoly::one(pp);
        for (size_t j = 0; j < nf; ++j)
            if (j != i) qi = mp_mul(qi, best->factors[j]);
        ModPoly s, t;
        ModPoly g = mp_ext_gcd(mp_rem(qi, best->factors[i]), best->factors[i], s, t);
        if (g.degree() != 0) return fallback();
        idem.push_back(mp_rem(mp_mul(qi, s), mzp));
    }

    // enumerate twist combinations
    std::vector<long> combo(nf, 0);
    std::vector<ModPoly> candidates;
    while (true) {
        ModPoly r = ModPoly::zero(pp);
        for (size_t i = 0; i < nf; ++i) {
            ModPoly tw = base_roots[i];
            for (long j = 0; j < combo[i]; ++j) tw = detail::fq_mul(ctxs[i], tw, twist_gens[i]);
            r = mp_add(r, mp_rem(mp_mul(idem[i], tw), mzp));
        }
        candidates.push_back(r);
        size_t i = 0;
        while (i < nf) {
            if (++combo[i] < twist_counts[i]) break;
            combo[i] = 0;
            ++i;
        }
        if (i == nf) break;
    }

    // Newton-lift the candidates with doubling precision, reconstructing at
    // every rung; any reconstruction is verified exactly.
    struct Lift {
        ZmPoly r, w;
        bool dead = false;
    };
    Int modulus(static_cast<unsigned long>(pp));
    ZmPoly mzm = detail::zp_modm(mz, modulus);
    std::vector<Lift> lifts;
    for (const auto& c : candidates) {
        Lift L;
        L.r = zm_from_mod(c);
        // derivative l * r^(l-1) must be invertible mod p
        ModPoly der = ModPoly::one(pp);
        for (long j = 0; j < l - 1; ++j) der = mp_rem(mp_mul(der, c), mzp);
        der = mp_scale(der, static_cast<uint64_t>(l % static_cast<long>(pp)));
        ModPoly s, t;
        ModPoly g = mp_ext_gcd(der, mzp, s, t);
        if (g.degree() != 0) { L.dead = true; }
        else L.w = zm_from_mod(s);
        lifts.push_back(std::move(L));
    }

    const size_t cap_bits = maxbits + 8192;

    size_t bits = mpz_sizeinbase(modulus.get_mpz_t(), 2);
    while (bits <= cap_bits) {
        // try reconstruction at the current precision
        for (auto& L : lifts) {
            if (L.dead) continue;
            std::vector<Rat> rc(static_cast<size_t>(n), Rat(0));
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                Int cj = j < static_cast<int>(L.r.c.size()) ? L.r.c[static_cast<size_t>(j)] : Int(0);
                Rat out;
                if (!detail::rational_reconstruct(cj, modulus, out)) ok = false;
                else rc[static_cast<size_t>(j)] = out;
            }
            if (!ok) continue;
            // candidate root of A in scaled coordinates; undo both scalings
            std::vector<Rat> gamma_coords(static_cast<size_t>(n));
            Int dpow(1);
            for (int j = 0; j < n; ++j) {
                gamma_coords[static_cast<size_t>(j)] = rc[static_cast<size_t>(j)] * Rat(dpow);
                dpow *= dm;
            }
            std::vector<NFElem> av(gamma_coords.size());
            for (size_t j = 0; j < gamma_coords.size(); ++j) av[j] = NFElem(gamma_coords[j]);
            NFElem cand_abs(flat.abs, std::move(av));
            NFElem cand = from_abs(cand_abs, flat) / NFElem(Rat(dscale));
            if (cand.pow(l) == a) return {true, cand};
        }
        // double the precision
        Int m2 = modulus * modulus;
        ZmPoly mz2 = detail::zp_modm(mz, m2);
        for (auto& L : lifts) {
            if (L.dead) continue;
            std::vector<Int> rv = L.r.c, wv = L.w.c;
            ZmPoly r2 = zm_reduce(std::move(rv), m2);
            ZmPoly w2 = zm_reduce(std::move(wv), m2);
            ZmPoly mzm2 = mz2;
            // r' = r - (r^l - A) * w
            ZmPoly rl = zm_reduce({Int(1)}, m2);
            for (long j = 0; j < l; ++j) rl = zm_rem_monic(zm_mul(rl, r2, m2), mzm2, m2);
            ZmPoly err = zm_sub(rl, detail::zp_modm(detail::ZPoly(acoords.begin(), acoords.end()), m2), m2);
            r2 = zm_sub(r2, zm_rem_monic(zm_mul(err, w2, m2), mzm2, m2), m2);
            // w' = w (2 - v w), v = l * r'^(l-1)
            ZmPoly v = zm_reduce({Int(l)}, m2);
            for (long j = 0; j < l - 1; ++j) v = zm_rem_monic(zm_mul(v, r2, m2), mzm2, m2);
            ZmPoly two = zm_reduce({Int(2)}, m2);
            ZmPoly corr = zm_sub(two, zm_rem_monic(zm_mul(v, w2, m2), mzm2, m2), m2);
            w2 = zm_rem_monic(zm_mul(w2, corr, m2), mzm2, m2);
            L.r = std::move(r2);
            L.w = std::move(w2);
        }
        modulus = m2;
        mzm = detail::zp_modm(mz, modulus);
        bits = mpz_sizeinbase(modulus.get_mpz_t(), 2);
    }
    return fallback();
}

// Spec-facing wrapper: true iff t^l - a has a root in a's field.
inline LthPowerResult is_lth_power(const NFElem& a, long l, const FieldPtr& field) {
    return lth_power_test(a, l, field);
}

inline std::optional<NFElem> sqrt_in_field(const NFElem& a, const FieldPtr& field) {
    if (a.is_zero()) return NFElem(Rat(0));
    auto r = lth_power_test(a, 2, field);
    if (!r.is_power) return std::nullopt;
    return r.root;
}

// ---- fixed fields ----

// A subfield K' of L presented by a primitive element, together with the
// Galois group of L over it and exact descent/lift maps.
struct Subfield {
    FieldPtr L;
    FieldPtr field;                 // K' as an extension of L's base
    NFElem gen_in_L;
    std::vector<FieldAut> galois_over; // Gal(L/K')
    std::vector<std::vector<NFElem>> power_cols; // rel coords over base of gen powers

    NFElem lift(const NFElem& e) const {
        if (e.is_rational()) return e;
        if (e.field() == L || e.field()->is_ancestor_of(L.get())) return nf_lift(e, L);
        if (e.field() == field) {
            NFElem acc;
            const auto& cs = e.coeffs();
            for (size_t i = cs.size(); i-- > 0;) acc = acc * gen_in_L + cs[i];
            return acc;
        }
        throw TowerMismatch("Subfield::lift: unrelated element");
    }

    NFElem descend(const NFElem& e_in) const {
        NFElem e = nf_lift(e_in, L);
        auto coords = nf_rel_coords(e, L, L->base());
        auto res = express_in_span(power_cols, coords);
        if (!res.consistent) throw NotInSubfield();
        if (field == L->base())
            return res.solution.empty() ? NFElem(Rat(0)) : res.solution[0];
        return field->element(res.solution);
    }

    bool contains(const NFElem& e_in) const {
        NFElem e = nf_lift(e_in, L);
        auto coords = nf_rel_coords(e, L, L->base());
        return express_in_span(power_cols, coords).consistent;
    }
};

// Fixed field of a subgroup H of Aut(L / base). The primitive element is
// found from the deterministic candidate sequence tr_H((gamma + j*zeta)^k).
inline Subfield fixed_field(const FieldPtr& L, std::vector<FieldAut> H, const std::string& gen_name) {
    if (H.empty()) throw NotAGroup();
    // group check: contains identity, closed under composition
    bool has_id = false;
    for (const auto& g : H) has_id = has_id || is_identity_aut(g);
    if (!has_id) throw NotAGroup();
    for (const auto& g : H)
        for (const auto& h : H) {
            FieldAut gh = compose_aut(g, h);
            bool inside = false;
            for (const auto& k : H) inside = inside || (k == gh);
            if (!inside) throw NotAGroup();
        }
    const int n = L->degree();
    const int hs = static_cast<int>(H.size());
    if (n % hs != 0) throw NotAGroup();
    const int m = n / hs;

    FieldPtr K = L->base();
    NFElem zeta = K ? nf_lift(K->gen(), L) : NFElem(1L);
    NFElem gamma = L->gen();

    NFElem chosen;
    Poly<NFElem> defining;
    bool found = false;
    for (long j = 0; j <= 4 * n && !found; ++j) {
        NFElem base_el = gamma + NFElem(Rat(j)) * zeta;
        NFElem pw(Rat(1));
        for (int k = 1; k <= n && !found; ++k) {
            pw = pw * base_el;
            NFElem tr;
            for (const auto& h : H) tr = tr + apply_aut(h, pw);
            if (tr.is_zero()) continue;
            Poly<NFElem> mp = min_poly(tr, L, K);
            if (mp.degree() == m) {
                chosen = tr;
                defining = mp;
                found = true;
            }
        }
    }
    if (!found) throw std::runtime_error("fixed_field: no primitive invariant found");

    Subfield out;
    out.L = L;
    out.field = (m == 1) ? K : NumberField::create_trusted(K, defining, gen_name);
    out.gen_in_L = chosen;
    out.galois_over = std::move(H);
    NFElem p(Rat(1));
    for (int i = 0; i < m; ++i) {
        out.power_cols.push_back(nf_rel_coords(p, L, K));
        p = p * chosen;
    }
    return out;
}

} // namespace ellsym
