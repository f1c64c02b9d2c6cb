// Construction of the l-division field L = K(E[l]) as a simple extension
// of K = Q(zeta_l), its Galois group as explicit automorphisms, the mod-l
// representation on a torsion basis, and the sigma-adapted basis with
// Q = sigma(P).
#pragma once

#include "miller.hpp"
#include "modl.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace ellsym {

struct NotDivisionField : std::runtime_error {
    NotDivisionField() : std::runtime_error("not all l-torsion is rational over the given field") {}
};
struct NotABasis : std::runtime_error {
    NotABasis() : std::runtime_error("the given points do not span E[l]") {}
};

// ---- relative flattening: collapse a tower over K to a simple extension ----

struct RelFlattening {
    FieldPtr tower;    // original field (a tower over base)
    FieldPtr base;     // K
    FieldPtr simple;   // K(gamma); equals tower when it is already simple over K
    bool identity = false;
    NFElem gamma_in_tower;
    std::vector<std::vector<NFElem>> power_cols; // rel coords over base of gamma powers

    NFElem to_simple(const NFElem& e) const {
        if (identity) return nf_lift(e, simple);
        auto res = express_in_span(power_cols, nf_rel_coords(nf_lift(e, tower), tower, base));
        if (!res.consistent) throw std::runtime_error("RelFlattening: element escaped");
        return simple->element(res.solution);
    }
    NFElem from_simple(const NFElem& e_in) const {
        if (identity) return e_in;
        NFElem e = nf_lift(e_in, simple);
        NFElem acc;
        const auto& cs = e.coeffs();
        for (size_t i = cs.size(); i-- > 0;) acc = acc * gamma_in_tower + nf_lift(cs[i], tower);
        return acc;
    }
};

inline RelFlattening flatten_relative(const FieldPtr& tower, const FieldPtr& base) {
    RelFlattening out;
    out.tower = tower;
    out.base = base;
    if (tower == base || tower->base() == base) {
        out.simple = tower;
        out.identity = true;
        return out;
    }
    const int n = rel_degree(tower, base);
    // candidates: top generator plus small multiples of the lower generators
    std::vector<NFElem> lower_gens;
    for (FieldPtr f = tower->base(); f != base; f = f->base()) lower_gens.push_back(nf_lift(f->gen(), tower));
    for (long c = 1;; ++c) {
        NFElem gamma = tower->gen();
        long w = c;
        for (const auto& g : lower_gens) {
            gamma = gamma + NFElem(Rat(w)) * g;
            w *= c;
        }
        Poly<NFElem> mp = min_poly(gamma, tower, base);
        if (mp.degree() != n) continue;
        out.simple = NumberField::create_trusted(base, mp, "u");
        out.gamma_in_tower = gamma;
        NFElem p(Rat(1));
        for (int i = 0; i < n; ++i) {
            out.power_cols.push_back(nf_rel_coords(p, tower, base));
            p = p * gamma;
        }
        return out;
    }
}

// ---- division field data ----

struct DivisionFieldData {
    long l = 0;
    FieldPtr K; // Q(zeta_l)
    FieldPtr L; // simple extension of K (possibly K itself)
    int degree = 1;
    Curve curve_K{nullptr, NFElem(), NFElem(1L)};
    std::vector<Point> torsion;  // the l^2 - 1 nonzero points over L, canonical order
    std::vector<FieldAut> autos; // Gal(L/K), identity first, canonical order
    NFElem zeta_in_L;
    std::vector<std::vector<int>> mult_table;
    std::vector<int> inverse_idx;
    std::vector<int> order_of;

    Curve curve_L() const { return curve_K.base_change(L); }

    const FieldAut& identity() const { return autos[0]; }

    int index_of(const FieldAut& g) const {
        for (size_t i = 0; i < autos.size(); ++i)
            if (autos[i] == g) return static_cast<int>(i);
        throw std::runtime_error("automorphism not in the group");
    }

    Point apply(const FieldAut& g, const Point& p) const {
        if (p.infinity) return p;
        return Point(apply_aut(g, p.x), apply_aut(g, p.y));
    }
};

namespace detail {

// All l-torsion points with coordinates in `cur`, given the factorization
// of the division polynomial over K.
inline std::vector<Point> torsion_over(const Curve& e_k, const FieldPtr& cur,
                                       const std::vector<Poly<NFElem>>& k_factors) {
    std::vector<Point> pts;
    Curve e = e_k.base_change(cur);
    for (const auto& h : k_factors) {
        Poly<NFElem> hl = h.map([&](const NFElem& c) { return nf_lift(c, cur); });
        for (const auto& x0 : roots_in_field(hl, cur)) {
            NFElem c = e.rhs(x0);
            if (c.is_zero()) { // 2-torsion x-coordinate cannot be l-torsion for odd l
                continue;
            }
            auto y0 = sqrt_in_field(c, cur);
            if (!y0) continue;
            pts.emplace_back(x0, *y0);
            pts.emplace_back(x0, -*y0);
        }
    }
    std::sort(pts.begin(), pts.end(), point_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// The next deterministic extension step: a missing y-coordinate first
// (degree 2), else a root of the smallest-degree irreducible factor.
inline FieldPtr extend_tower_step(const Curve& e_k, const FieldPtr& cur,
                                  const std::vector<Poly<NFElem>>& k_factors, int step_idx) {
    Curve e = e_k.base_change(cur);
    std::optional<NFElem> missing_y;
    Poly<NFElem> best_factor;
    for (const auto& h : k_factors) {
        Poly<NFElem> hl = h.map([&](const NFElem& c) { return nf_lift(c, cur); });
        auto fac = factor_nf(hl, cur);
        for (const auto& [g, m] : fac.factors) {
            (void)m;
            if (g.degree() == 1) {
                NFElem x0 = -g[0];
                NFElem c = e.rhs(x0);
                if (c.is_zero()) continue;
                if (!missing_y && !lth_power_test(c, 2, cur).is_power) missing_y = c;
            } else if (best_factor.is_zero() || g.degree() < best_factor.degree() ||
                       (g.degree() == best_factor.degree() && nf_poly_less(g, best_factor))) {
                best_factor = g;
            }
        }
    }
    std::string name = "t" + std::to_string(step_idx);
    if (missing_y) {
        Poly<NFElem> q(std::vector<NFElem>{-*missing_y, cur->zero(), NFElem(1L) + cur->zero()});
        return NumberField::create_trusted(cur, q, name);
    }
    if (best_factor.is_zero()) throw NotDivisionField();
    return NumberField::create_trusted(cur, best_factor, name);
}

} // namespace detail

// All nonzero l-torsion points of a curve over its field of definition;
// raises NotDivisionField when fewer than l^2 - 1 exist.
inline std::vector<Point> lth_torsion(const Curve& e, long l) {
    Poly<NFElem> psi = division_polynomial(e, l);
    // factor over the bottom of the tower first to keep the Trager norms small
    std::vector<Poly<NFElem>> k_factors;
    FieldPtr base = e.field && e.field->base() ? e.field->base() : e.field;
    Curve e_base(base ? base : e.field, NFElem(0L), NFElem(1L));
    {
        Poly<NFElem> psi_b = psi;
        auto fac = factor_nf(psi_b, base);
        for (auto& [g, m] : fac.factors) {
            (void)m;
            k_factors.push_back(g);
        }
    }
    Curve ek(base, nf_lift(e.a4, base), nf_lift(e.a6, base));
    auto pts = detail::torsion_over(ek, e.field, k_factors);
    if (static_cast<long>(pts.size()) != l * l - 1) throw NotDivisionField();
    for (const auto& p : pts)
        if (!(scalar_mul(e, l, p) == Point::at_infinity())) throw NotDivisionField();
    return pts;
}

// Construct L = K(E[l]) with its Galois group. Requires l coprime to
// [L:K]; the case l | [L:K] is outside the corestriction construction.
inline DivisionFieldData division_field(const Curve& e_k, long l) {
    if (!is_odd_prime_l(l)) throw InvalidPrime("division_field: l must be an odd prime");
    const FieldPtr K = e_k.field;
    DivisionFieldData out;
    out.l = l;
    out.K = K;
    out.curve_K = e_k;

    Poly<NFElem> psi = division_polynomial(e_k, l);
    std::vector<Poly<NFElem>> k_factors;
    for (auto& [g, m] : factor_nf(psi, K).factors) {
        (void)m;
        k_factors.push_back(g);
    }

    FieldPtr cur = K;
    std::vector<Point> pts;
    const long want = l * l - 1;
    for (int step = 1;; ++step) {
        pts = detail::torsion_over(e_k, cur, k_factors);
        if (static_cast<long>(pts.size()) == want) break;
        if (rel_degree(cur, K) > 24) throw std::runtime_error("division_field: tower runaway");
        cur = detail::extend_tower_step(e_k, cur, k_factors, step);
    }

    // collapse the tower to a simple extension of K
    RelFlattening flat = flatten_relative(cur, K);
    out.L = flat.simple;
    out.degree = rel_degree(cur, K);
    if (out.degree % l == 0)
        throw OutOfScope("l divides [L:K]; this construction requires l coprime to [L:K]");
    out.torsion.clear();
    for (const auto& p : pts)
        out.torsion.emplace_back(flat.to_simple(p.x), flat.to_simple(p.y));
    std::sort(out.torsion.begin(), out.torsion.end(), point_less);
    out.zeta_in_L = nf_lift(K->gen(), out.L);

    // Galois group: roots of the defining polynomial inside L
    if (out.L == K) {
        out.autos = {FieldAut{K, K->gen()}};
    } else {
        auto roots = roots_in_field(out.L->defining(), out.L);
        if (static_cast<int>(roots.size()) != out.degree)
            throw std::runtime_error("division_field: L/K is not Galois (internal error)");
        for (const auto& r : roots) out.autos.push_back(FieldAut{out.L, r});
        std::stable_sort(out.autos.begin(), out.autos.end(), [&](const FieldAut& a, const FieldAut& b) {
            bool ia = is_identity_aut(a), ib = is_identity_aut(b);
            if (ia != ib) return ia;
            return nf_cmp(a.gen_image, b.gen_image) < 0;
        });
    }

    // each automorphism must permute the torsion set
    for (const auto& g : out.autos)
        for (const auto& p : out.torsion) {
            Point ip = out.apply(g, p);
            if (!std::binary_search(out.torsion.begin(), out.torsion.end(), ip, point_less))
                throw std::runtime_error("division_field: torsion not stable under Galois");
        }

    const int n = static_cast<int>(out.autos.size());
    out.mult_table.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.mult_table[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                out.index_of(compose_aut(out.autos[static_cast<size_t>(i)], out.autos[static_cast<size_t>(j)]));
    out.inverse_idx.assign(static_cast<size_t>(n), 0);
    out.order_of.assign(static_cast<size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (out.mult_table[static_cast<size_t>(i)][static_cast<size_t>(j)] == 0) out.inverse_idx[static_cast<size_t>(i)] = j;
        int k = 1, x = i;
        while (x != 0) { x = out.mult_table[static_cast<size_t>(x)][static_cast<size_t>(i)]; ++k; }
        out.order_of[static_cast<size_t>(i)] = (i == 0) ? 1 : k;
    }
    return out;
}

// ---- the mod-l representation ----

struct TorsionBasis {
    Point p, q;
};

struct RepresentationData {
    TorsionBasis basis;
    std::vector<MatModL> matrices; // aligned with DivisionFieldData::autos
    long kappa = 1;                // e(P,Q) = zeta^kappa
    GroupImage image;              // closure of the matrices (the full image)
};

namespace detail {

// coordinates of every aP + bQ; fails when P,Q are dependent
inline std::map<Point, std::pair<long, long>, bool (*)(const Point&, const Point&)>
combination_table(const Curve& e, const Point& p, const Point& q, long l) {
    std::map<Point, std::pair<long, long>, bool (*)(const Point&, const Point&)> tab(point_less);
    Point pa = Point::at_infinity();
    for (long a = 0; a < l; ++a) {
        Point pb = pa;
        for (long b = 0; b < l; ++b) {
            if (!tab.emplace(pb, std::make_pair(a, b)).second) throw NotABasis();
            pb = add(e, pb, q);
        }
        pa = add(e, pa, p);
    }
    return tab;
}

} // namespace detail

inline RepresentationData representation(const DivisionFieldData& d, const TorsionBasis& basis) {
    Curve e = d.curve_L();
    auto tab = detail::combination_table(e, basis.p, basis.q, d.l);
    RepresentationData rep;
    rep.basis = basis;
    for (const auto& g : d.autos) {
        Point ip = d.apply(g, basis.p);
        Point iq = d.apply(g, basis.q);
        auto itp = tab.find(ip), itq = tab.find(iq);
        if (itp == tab.end() || itq == tab.end())
            throw std::runtime_error("representation: image escaped the combination table");
        auto [a, c] = itp->second;
        auto [b, dd] = itq->second;
        MatModL m(a, b, c, dd, d.l);
        if (m.det() != 1) throw NotSL2();
        rep.matrices.push_back(m);
    }
    // homomorphism property on all pairs, and injectivity
    const int n = static_cast<int>(d.autos.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MatModL lhs = rep.matrices[static_cast<size_t>(i)] * rep.matrices[static_cast<size_t>(j)];
            if (!(lhs == rep.matrices[static_cast<size_t>(d.mult_table[static_cast<size_t>(i)][static_cast<size_t>(j)])]))
                throw std::runtime_error("representation: not a homomorphism");
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rep.matrices[static_cast<size_t>(i)] == rep.matrices[static_cast<size_t>(j)])
                throw std::runtime_error("representation: not injective");

    // pairing exponent
    auto ctx = FFContext::make(e, d.L);
    NFElem w = weil_pairing(ctx, basis.p, basis.q, d.l, d.torsion);
    NFElem zp(Rat(1));
    long kappa = -1;
    for (long k = 0; k < d.l; ++k) {
        if (w == zp) { kappa = k; break; }
        zp = zp * d.zeta_in_L;
    }
    if (kappa <= 0) throw NotABasis(); // pairing of a basis is primitive
    rep.kappa = kappa;
    std::vector<MatModL> gens = rep.matrices;
    rep.image = classify_closure(gens, d.l);
    if (rep.image.order() != n) throw std::runtime_error("representation: image order mismatch");
    return rep;
}

// ---- sigma-adapted basis ----

struct SigmaBasisData {
    int sigma_idx = 0;        // index into autos
    TorsionBasis basis;       // Q = sigma(P)
    RepresentationData rep;
};

enum class SigmaBasisStatus { Ok, FallbackOrder2, NoActionNeeded };

struct SigmaBasisResult {
    SigmaBasisStatus status = SigmaBasisStatus::Ok;
    std::optional<SigmaBasisData> data;
};

// Pick sigma of maximal order > 2 and a basis (P, sigma(P)); the matrix of
// sigma in that basis is the rational canonical form [[0,-1],[1,tr]].
inline SigmaBasisResult choose_sigma_basis(const DivisionFieldData& d) {
    if (d.degree == 1) return {SigmaBasisStatus::NoActionNeeded, std::nullopt};
    int best = -1;
    for (size_t i = 0; i < d.autos.size(); ++i) {
        if (d.order_of[i] <= 2) continue;
        if (best < 0 || d.order_of[i] > d.order_of[static_cast<size_t>(best)]) best = static_cast<int>(i);
    }
    if (best < 0) return {SigmaBasisStatus::FallbackOrder2, std::nullopt};

    Curve e = d.curve_L();
    const FieldAut& sigma = d.autos[static_cast<size_t>(best)];
    for (const auto& p : d.torsion) {
        Point q = d.apply(sigma, p);
        // independence: q not in <p>
        bool dep = false;
        Point m = Point::at_infinity();
        for (long k = 0; k < d.l; ++k) {
            if (m == q) { dep = true; break; }
            m = add(e, m, p);
        }
        if (dep) continue;
        SigmaBasisData data;
        data.sigma_idx = best;
        data.basis = TorsionBasis{p, q};
        data.rep = representation(d, data.basis);
        const MatModL& ms = data.rep.matrices[static_cast<size_t>(best)];
        MatModL expect(0, (d.l - 1), 1, ms.trace(), d.l);
        if (!(ms == expect)) throw std::runtime_error("choose_sigma_basis: matrix is not in canonical form");
        return {SigmaBasisStatus::Ok, std::move(data)};
    }
    throw std::runtime_error("choose_sigma_basis: no independent image found");
}

// Extensions of z -> z^j on K to automorphisms of L over Q (used for
// conjugacy comparisons across the base field).
struct AbsAut {
    long zeta_power = 1;  // action on K: z -> z^j
    NFElem gen_image;     // image of L's generator
};

inline NFElem apply_abs_aut(const DivisionFieldData& d, const AbsAut& g, const NFElem& e_in) {
    NFElem e = nf_lift(e_in, d.L);
    if (d.L == d.K) {
        // element over K: map coefficients of powers of zeta
        NFElem zp = d.K->gen().pow(g.zeta_power);
        NFElem acc;
        const auto& cs = e.coeffs();
        for (size_t i = cs.size(); i-- > 0;) acc = acc * zp + cs[i];
        return acc;
    }
    NFElem zp = nf_lift(d.K->gen().pow(g.zeta_power), d.L);
    NFElem acc;
    const auto& cs = e.coeffs(); // coefficients over K
    for (size_t i = cs.size(); i-- > 0;) {
        // map the K-coefficient, then Horner in the generator image
        NFElem ci = cs[i];
        NFElem mapped;
        const auto& kcs = nf_lift(ci, d.K).coeffs();
        for (size_t j = kcs.size(); j-- > 0;) mapped = mapped * zp + kcs[j];
        acc = acc * g.gen_image + mapped;
    }
    return acc;
}

inline std::vector<AbsAut> absolute_automorphisms(const DivisionFieldData& d) {
    std::vector<AbsAut> out;
    for (long j = 1; j < d.l; ++j) {
        if (d.L == d.K) {
            out.push_back(AbsAut{j, d.K->gen().pow(j)});
            continue;
        }
        // twist the defining polynomial's K-coefficients by z -> z^j
        NFElem zp = d.K->gen().pow(j);
        auto twist_k = [&](const NFElem& c) {
            NFElem acc;
            const auto& kcs = nf_lift(c, d.K).coeffs();
            for (size_t t = kcs.size(); t-- > 0;) acc = acc * zp + kcs[t];
            return acc;
        };
        Poly<NFElem> mtw = d.L->defining().map(twist_k);
        for (const auto& r : roots_in_field(mtw, d.L)) out.push_back(AbsAut{j, r});
    }
    return out;
}

} // namespace ellsym
