// Factorization and root-finding over number fields.
//
// Factoring follows Trager: flatten the tower to an absolute field Q(G),
// take the norm N_s(x) = Res_z(M(z), f(x - s z)) for the first shift s in
// 0, 1, -1, 2, ... making it squarefree, factor N_s over Q, and pull the
// factors back by gcd. l-th power tests use finite-field disproofs and a
// p-adic Newton lift with rational reconstruction for witnesses; the Trager
// route on t^l - a remains as the completing fallback.
#pragma once

#include "numfield.hpp"
#include "qfactor.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

namespace ellsym {

struct ReduciblePolynomial : std::runtime_error {
    Poly<NFElem> factor;
    explicit ReduciblePolynomial(Poly<NFElem> f)
        : std::runtime_error("polynomial is reducible"), factor(std::move(f)) {}
};
struct NotMonic : std::runtime_error {
    NotMonic() : std::runtime_error("polynomial must be normalized to monic first") {}
};
struct NotAGroup : std::runtime_error {
    NotAGroup() : std::runtime_error("automorphism set is not a group") {}
};
struct NotInSubfield : std::runtime_error {
    NotInSubfield() : std::runtime_error("element does not lie in the subfield") {}
};

// ---- flattening a tower to an absolute field over Q ----

struct Flattening {
    FieldPtr original;
    FieldPtr abs;             // field with base Q; equals original when already absolute
    bool identity = false;
    NFElem abs_gen_in_tower;  // element of original mapping to abs generator
    // column-major change of bases between the tower monomial coordinates
    // and the powers of the absolute generator
    std::vector<std::vector<Rat>> gamma_power_coords; // N columns: coords of Gamma^j
    std::vector<std::vector<Rat>> inv;                // inverse matrix rows (N x N)
};

inline std::vector<Rat> nf_abs_coords(const NFElem& e, const FieldPtr& f) {
    auto v = nf_rel_coords(e, f, nullptr);
    std::vector<Rat> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        Rat r;
        if (!v[i].rational_value(r)) throw std::runtime_error("nf_abs_coords: non-rational leaf");
        out[i] = r;
    }
    return out;
}

inline NFElem nf_from_abs_coords_rec(const std::vector<Rat>& coords, size_t& pos, const FieldPtr& f) {
    if (!f) return NFElem(coords[pos++]);
    std::vector<NFElem> v(static_cast<size_t>(f->degree()));
    for (int i = 0; i < f->degree(); ++i) v[static_cast<size_t>(i)] = nf_from_abs_coords_rec(coords, pos, f->base());
    return NFElem(f, std::move(v));
}

inline NFElem nf_from_abs_coords(const std::vector<Rat>& coords, const FieldPtr& f) {
    size_t pos = 0;
    NFElem e = nf_from_abs_coords_rec(coords, pos, f);
    if (pos != coords.size()) throw std::runtime_error("nf_from_abs_coords: length mismatch");
    return e;
}

namespace detail {

inline std::vector<std::vector<Rat>> invert_matrix(std::vector<std::vector<Rat>> m) {
    const size_t n = m.size();
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && sgn(m[piv][c]) == 0) ++piv;
        if (piv == n) throw std::runtime_error("invert_matrix: singular");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        Rat d = m[c][c];
        for (size_t j = 0; j < n; ++j) { m[c][j] /= d; inv[c][j] /= d; }
        for (size_t i = 0; i < n; ++i) {
            if (i == c || sgn(m[i][c]) == 0) continue;
            Rat f = m[i][c];
            for (size_t j = 0; j < n; ++j) { m[i][j] -= f * m[c][j]; inv[i][j] -= f * inv[c][j]; }
        }
    }
    return inv;
}

} // namespace detail

inline const Flattening& flattening_of(const FieldPtr& f) {
    if (!f) throw TowerMismatch("flattening_of: Q has no flattening");
    if (f->flat_cache_) return *f->flat_cache_;
    auto flat = std::make_shared<Flattening>();
    flat->original = f;
    const int n_abs = f->abs_degree();
    if (!f->base()) {
        flat->abs = f;
        flat->identity = true;
        flat->abs_gen_in_tower = f->gen();
    } else {
        // candidate primitive elements: gen + c * (absolute generator of base)
        NFElem theta_base = nf_lift(flattening_of(f->base()).abs_gen_in_tower, f);
        for (long c = 0;; c = c > 0 ? -c : -c + 1) {
            NFElem gamma = f->gen() + NFElem(Rat(c)) * theta_base;
            std::vector<std::vector<Rat>> cols;
            NFElem p(Rat(1));
            bool primitive = true;
            for (int m = 0; m < n_abs; ++m) {
                cols.push_back(nf_abs_coords(p, f));
                if (m > 0) {
                    std::vector<std::vector<Rat>> head(cols.begin(), cols.end() - 1);
                    if (express_in_span(head, cols.back()).consistent) { primitive = false; break; }
                }
                p = p * gamma;
            }
            if (!primitive) continue;
            auto top = nf_abs_coords(p, f); // gamma^n_abs
            auto dep = express_in_span(cols, top);
            if (!dep.consistent) throw std::runtime_error("flattening_of: inconsistent tower");
            std::vector<NFElem> mp(static_cast<size_t>(n_abs) + 1);
            for (int i = 0; i < n_abs; ++i) mp[static_cast<size_t>(i)] = NFElem(-dep.solution[static_cast<size_t>(i)]);
            mp[static_cast<size_t>(n_abs)] = NFElem(1L);
            flat->abs = NumberField::create_trusted(nullptr, Poly<NFElem>(std::move(mp)), "g");
            flat->abs_gen_in_tower = gamma;
            // matrix with columns gamma^j (tower coords); invert for to-abs map
            std::vector<std::vector<Rat>> m(static_cast<size_t>(n_abs), std::vector<Rat>(static_cast<size_t>(n_abs)));
            for (int j = 0; j < n_abs; ++j)
                for (int i = 0; i < n_abs; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
            flat->gamma_power_coords = cols;
            flat->inv = detail::invert_matrix(std::move(m));
            break;
        }
    }
    f->flat_cache_ = flat;
    return *f->flat_cache_;
}

inline NFElem to_abs(const NFElem& e, const Flattening& flat) {
    if (flat.identity) return nf_lift(e, flat.abs);
    auto coords = nf_abs_coords(nf_lift(e, flat.original), flat.original);
    const size_t n = coords.size();
    std::vector<NFElem> out(n);
    for (size_t i = 0; i < n; ++i) {
        Rat acc(0);
        for (size_t j = 0; j < n; ++j) acc += flat.inv[i][j] * coords[j];
        out[i] = NFElem(acc);
    }
    return NFElem(flat.abs, std::move(out));
}

inline NFElem from_abs(const NFElem& e_abs, const Flattening& flat) {
    if (flat.identity) return e_abs;
    NFElem e = nf_lift(e_abs, flat.abs);
    const size_t n = flat.gamma_power_coords.size();
    std::vector<Rat> coords(n, Rat(0));
    for (size_t j = 0; j < n; ++j) {
        Rat cj;
        if (!e.coeffs()[j].rational_value(cj)) throw std::runtime_error("from_abs: bad element");
        if (sgn(cj) == 0) continue;
        for (size_t i = 0; i < n; ++i) coords[i] += cj * flat.gamma_power_coords[j][i];
    }
    return nf_from_abs_coords(coords, flat.original);
}

// ---- Trager factorization ----

struct NFFactorization {
    NFElem lc;
    std::vector<std::pair<Poly<NFElem>, int>> factors; // monic irreducible, multiplicity
};

namespace detail {

inline QPoly nfq_to_qpoly(const NFElem& e_abs) {
    // element of an absolute field -> its representative polynomial over Q
    std::vector<Rat> v;
    for (const auto& c : e_abs.coeffs()) {
        Rat r;
        if (!c.rational_value(r)) throw std::runtime_error("nfq_to_qpoly: nested coefficient");
        v.push_back(r);
    }
    return QPoly(std::move(v));
}

inline QPoly defining_as_qpoly(const FieldPtr& abs) {
    std::vector<Rat> v;
    for (int i = 0; i <= abs->degree(); ++i) {
        Rat r;
        if (!abs->defining()[i].rational_value(r)) throw std::runtime_error("non-absolute defining polynomial");
        v.push_back(r);
    }
    return QPoly(std::move(v));
}

// Monic squarefree factorization over the absolute field `abs`.
inline std::vector<Poly<NFElem>> trager_squarefree(const Poly<NFElem>& part, const FieldPtr& abs) {
    std::vector<Poly<NFElem>> out;
    if (part.degree() == 1) {
        out.push_back(part);
        return out;
    }
    const QPoly M = defining_as_qpoly(abs);
    const int n = abs->degree();
    const int d = part.degree();

    // coefficients of `part` as z-polynomials
    std::vector<QPoly> cz;
    for (int i = 0; i <= d; ++i) cz.push_back(nfq_to_qpoly(nf_lift(part[i], abs)));

    QPoly norm;
    long shift = 0;
    for (long trial = 0;; trial = trial > 0 ? -trial : -trial + 1) {
        // B_s(x, z) = part(x - s z) as a polynomial in x over Q[z]
        Poly<QPoly> xz(std::vector<QPoly>{QPoly(std::vector<Rat>{Rat(0), Rat(-trial)}), QPoly(Rat(1))});
        Poly<QPoly> bs;
        for (int i = d; i >= 0; --i) bs = bs * xz + Poly<QPoly>(cz[static_cast<size_t>(i)]);
        const int dn = d * n;
        std::vector<Rat> xs, ys;
        for (int x0 = 0; x0 <= dn; ++x0) {
            QPoly gz; // B_s(x0, z)
            Rat xr(x0);
            for (int i = bs.degree(); i >= 0; --i) gz = gz * QPoly(xr) + bs[i];
            xs.emplace_back(x0);
            ys.push_back(poly_resultant_monic(M, gz));
        }
        QPoly cand = qpoly_interpolate(xs, ys);
        if (poly_gcd(cand, cand.derivative()).degree() == 0) {
            norm = cand;
            shift = trial;
            break;
        }
    }

    auto qfac = factor_rational(norm);
    if (qfac.factors.size() == 1) {
        out.push_back(part);
        return out;
    }
    Poly<NFElem> xshift(std::vector<NFElem>{NFElem(Rat(shift)) * abs->gen(), NFElem(1L)});
    for (auto& [nj, mult] : qfac.factors) {
        (void)mult;
        Poly<NFElem> njx = nj.map([](const Rat& r) { return NFElem(r); }).compose(xshift);
        Poly<NFElem> g = poly_gcd(part, njx);
        if (g.degree() > 0) out.push_back(g.monic());
    }
    // consistency: factors multiply back to part
    Poly<NFElem> prod(NFElem(1L));
    for (const auto& g : out) prod = prod * g;
    if (!(prod == part)) throw std::runtime_error("trager: factor product mismatch");
    return out;
}

} // namespace detail

inline bool nf_poly_less(const Poly<NFElem>& a, const Poly<NFElem>& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        int c = nf_cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

// Factor a polynomial with coefficients in `field` (or Q when field is null)
// into monic irreducibles with multiplicities.
inline NFFactorization factor_nf(const Poly<NFElem>& f, const FieldPtr& field) {
    if (f.is_zero()) throw ZeroPolynomial();
    NFFactorization out;
    out.lc = f.lc();
    if (f.degree() == 0) return out;

    if (!field) {
        QPoly qf = f.map([](const NFElem& e) { Rat r; if (!e.rational_value(r)) throw TowerMismatch("factor over Q of non-rational poly"); return r; });
        auto qfac = factor_rational(qf);
        for (auto& [g, m] : qfac.factors)
            out.factors.emplace_back(g.map([](const Rat& r) { return NFElem(r); }), m);
        return out;
    }

    const Flattening& flat = flattening_of(field);
    Poly<NFElem> fa = f.map([&](const NFElem& e) { return to_abs(nf_lift(e, field), flat); }).monic();
    for (auto& [part, mult] : yun_squarefree(fa)) {
        for (auto& g : detail::trager_squarefree(part, flat.abs)) {
            Poly<NFElem> back = g.map([&](const NFElem& e) { return from_abs(e, flat); });
            out.factors.emplace_back(std::move(back), mult);
        }
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return nf_poly_less(a.first, b.first); });
    return out;
}

inline bool is_irreducible_nf(const Poly<NFElem>& f, const FieldPtr& field) {
    auto fac = factor_nf(f, field);
    return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

// Roots of f in `field`, canonically ordered.
inline std::vector<NFElem> roots_in_field(const Poly<NFElem>& f, const FieldPtr& field) {
    std::vector<NFElem> roots;
    for (auto& [g, m] : factor_nf(f, field).factors) {
        (void)m;
        if (g.degree() == 1) roots.push_back(-g[0]);
    }
    std::sort(roots.begin(), roots.end(), [](const NFElem& a, const NFElem& b) { return nf_cmp(a, b) < 0; });
    return roots;
}

// ---- field constructors ----

inline FieldPtr NumberField::create(FieldPtr base, Poly<NFElem> defining, std::string gen_name,
                                    Check check) {
    if (defining.degree() < 1) throw std::runtime_error("defining polynomial must be nonconstant");
    if (check == Check::kVerifyIrreducible) {
        auto fac = factor_nf(defining, base);
        if (fac.factors.size() != 1 || fac.factors[0].second != 1)
            throw ReduciblePolynomial(fac.factors[0].first);
    }
    return create_trusted(std::move(base), std::move(defining), std::move(gen_name));
}

// Q(zeta_l) for an odd prime l; the defining polynomial is the l-th
// cyclotomic polynomial 1 + z + ... + z^(l-1).
inline FieldPtr cyclotomic_field(long l) {
    if (!is_odd_prime_l(l)) throw InvalidPrime("l must be an odd prime, got " + std::to_string(l));
    std::vector<NFElem> v(static_cast<size_t>(l - 1), NFElem(1L));
    v.push_back(NFElem(1L));
    return NumberField::create(nullptr, Poly<NFElem>(std::move(v)), "z");
}

// Extension of `base` by a monic polynomial h. Degree-1 inputs return the
// base itself; reducible inputs raise ReduciblePolynomial carrying a factor.
inline FieldPtr extend(const FieldPtr& base, const Poly<NFElem>& h, const std::string& gen_name) {
    if (h.is_zero() || h.degree() < 1) throw std::runtime_error("extend: degenerate polynomial");
    NFElem lc = h.lc();
    Rat r;
    bool monic = lc.rational_value(r) && r == 1;
    if (!monic) throw NotMonic();
    if (h.degree() == 1) return base;
    auto fac = factor_nf(h, base);
    if (fac.factors.size() != 1 || fac.factors[0].second != 1) {
        for (auto& [g, m] : fac.factors) {
            (void)m;
            if (g.degree() < h.degree()) throw ReduciblePolynomial(g);
        }
        throw ReduciblePolynomial(fac.factors[0].first);
    }
    return NumberField::create_trusted(base, h, gen_name);
}

} // namespace ellsym
