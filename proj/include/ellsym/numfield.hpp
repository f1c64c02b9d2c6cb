// Number fields as explicit towers. A NumberField is an extension of its
// base by a monic irreducible defining polynomial; the base chain bottoms
// out at Q (a null base pointer). Elements are dense coefficient vectors
// over the immediate base, always reduced modulo the defining polynomial,
// so equality is coefficient-wise. Everything is immutable after
// construction.
#pragma once

#include "mat.hpp"
#include "poly.hpp"
#include "rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ellsym {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;
struct Flattening;

struct TowerMismatch : std::runtime_error {
    explicit TowerMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct ZeroElement : std::runtime_error {
    ZeroElement() : std::runtime_error("zero element not allowed here") {}
};
struct DivisionByZero : std::runtime_error {
    DivisionByZero() : std::runtime_error("division by zero") {}
};

class NFElem {
public:
    NFElem() : rat_(0) {}
    NFElem(Rat r) : rat_(std::move(r)) {}          // NOLINT: implicit by design
    NFElem(long n) : rat_(n) {}                    // NOLINT
    NFElem(int n) : rat_(static_cast<long>(n)) {}  // NOLINT
    NFElem(FieldPtr f, std::vector<NFElem> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {}

    bool is_rational() const { return field_ == nullptr; }
    const FieldPtr& field() const { return field_; }
    const Rat& rat() const {
        if (!is_rational()) throw TowerMismatch("element is not rational");
        return rat_;
    }
    const std::vector<NFElem>& coeffs() const { return c_; }

    bool is_zero() const {
        if (is_rational()) return sgn(rat_) == 0;
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }

    // Drop to the base field when the representation allows it.
    NFElem demote() const;

    // True if the element actually lies in Q (after demotion along the tower).
    bool rational_value(Rat& out) const {
        if (is_rational()) { out = rat_; return true; }
        for (size_t i = 1; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return false;
        return c_.empty() ? (out = 0, true) : c_[0].rational_value(out);
    }

    friend NFElem operator+(const NFElem& a, const NFElem& b);
    friend NFElem operator-(const NFElem& a, const NFElem& b);
    friend NFElem operator*(const NFElem& a, const NFElem& b);
    friend NFElem operator/(const NFElem& a, const NFElem& b);
    NFElem operator-() const;
    NFElem inverse() const;
    NFElem pow(const Int& e) const;
    NFElem pow(long e) const { return pow(Int(e)); }

    friend bool operator==(const NFElem& a, const NFElem& b);
    friend bool operator!=(const NFElem& a, const NFElem& b) { return !(a == b); }

private:
    friend class NumberField;
    FieldPtr field_; // null => rational constant
    Rat rat_;        // used when field_ is null
    std::vector<NFElem> c_; // used otherwise; length == field_->degree()
};

inline bool el_is_zero(const NFElem& e) { return e.is_zero(); }

class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    enum class Check { kVerifyIrreducible, kTrusted };

    // Defined in nffactor.hpp (needs factorization for the irreducibility check).
    static FieldPtr create(FieldPtr base, Poly<NFElem> defining, std::string gen_name,
                           Check check = Check::kVerifyIrreducible);

    static FieldPtr create_trusted(FieldPtr base, Poly<NFElem> defining, std::string gen_name) {
        auto f = std::shared_ptr<NumberField>(new NumberField());
        f->base_ = std::move(base);
        f->def_ = std::move(defining);
        f->deg_ = f->def_.degree();
        f->name_ = std::move(gen_name);
        return f;
    }

    int degree() const { return deg_; }
    const FieldPtr& base() const { return base_; }
    const Poly<NFElem>& defining() const { return def_; }
    const std::string& gen_name() const { return name_; }

    int abs_degree() const {
        int d = deg_;
        for (const NumberField* f = base_.get(); f; f = f->base_.get()) d *= f->deg_;
        return d;
    }

    NFElem zero() const { return element({}); }
    NFElem one() const { return element({NFElem(1L)}); }
    NFElem gen() const {
        std::vector<NFElem> v(static_cast<size_t>(deg_));
        v[1 % deg_] = NFElem(1L);
        if (deg_ == 1) v[0] = base_elem_from(def_[0]) * NFElem(-1L); // z = -c for z + c
        return NFElem(shared_from_this(), std::move(v));
    }

    // Build an element from coefficients over the base (short vectors padded).
    NFElem element(std::vector<NFElem> coeffs) const {
        coeffs.resize(static_cast<size_t>(deg_));
        return NFElem(shared_from_this(), std::move(coeffs));
    }

    bool is_ancestor_of(const NumberField* other) const {
        for (const NumberField* f = other; f; f = f->base_.get())
            if (f == this) return true;
        return false;
    }

    // Lazily built absolute representation; see nffactor.hpp.
    mutable std::shared_ptr<const Flattening> flat_cache_;

private:
    NumberField() = default;
    NFElem base_elem_from(const NFElem& e) const { return e; }

    FieldPtr base_;
    Poly<NFElem> def_;
    int deg_ = 0;
    std::string name_;
};

// ---- coercion along the tower ----

// Lift an element of an ancestor field (or Q) into `target`.
inline NFElem nf_lift(const NFElem& e, const FieldPtr& target) {
    if (!target) {
        if (!e.is_rational()) throw TowerMismatch("cannot lower field element to Q");
        return e;
    }
    if (e.field() == target) return e;
    std::vector<FieldPtr> chain; // target down to just above e's field
    FieldPtr f = target;
    while (f != e.field()) {
        if (!f) throw TowerMismatch("element field is not an ancestor of target");
        chain.push_back(f);
        f = f->base();
    }
    NFElem cur = e;
    for (size_t i = chain.size(); i-- > 0;) {
        std::vector<NFElem> v(static_cast<size_t>(chain[i]->degree()));
        v[0] = cur;
        cur = NFElem(chain[i], std::move(v));
    }
    return cur;
}

// Lower an element's representation to an ancestor field when its value
// actually lies there.
inline std::optional<NFElem> nf_try_lower(NFElem e, const FieldPtr& target) {
    if (e.is_rational()) return nf_lift(e, target);
    while (e.field() != target) {
        NFElem d = e.demote();
        if (d.is_rational()) return nf_lift(d, target);
        if (d.field() == e.field()) return std::nullopt;
        e = d;
    }
    return e;
}

inline void nf_align(NFElem& a, NFElem& b) {
    if (a.field() == b.field()) return;
    if (!a.field()) { a = nf_lift(a, b.field()); return; }
    if (!b.field()) { b = nf_lift(b, a.field()); return; }
    if (a.field()->is_ancestor_of(b.field().get())) { a = nf_lift(a, b.field()); return; }
    if (b.field()->is_ancestor_of(a.field().get())) { b = nf_lift(b, a.field()); return; }
    throw TowerMismatch("elements live in unrelated fields");
}

inline NFElem NFElem::demote() const {
    if (is_rational()) return *this;
    for (size_t i = 1; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return *this;
    return c_.empty() ? NFElem(Rat(0)) : c_[0];
}

inline NFElem NFElem::operator-() const {
    if (is_rational()) return NFElem(-rat_);
    std::vector<NFElem> v(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = -c_[i];
    return NFElem(field_, std::move(v));
}

inline NFElem operator+(const NFElem& a, const NFElem& b) {
    NFElem x = a, y = b;
    nf_align(x, y);
    if (x.is_rational()) return NFElem(x.rat_ + y.rat_);
    std::vector<NFElem> v(x.c_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = x.c_[i] + y.c_[i];
    return NFElem(x.field_, std::move(v));
}

inline NFElem operator-(const NFElem& a, const NFElem& b) { return a + (-b); }

namespace detail {
// Reduce a coefficient vector (over base of f) modulo f's defining polynomial.
inline void nf_reduce(std::vector<NFElem>& v, const NumberField& f) {
    const auto& def = f.defining();
    const int n = f.degree();
    for (int k = static_cast<int>(v.size()) - 1; k >= n; --k) {
        NFElem top = v[static_cast<size_t>(k)];
        if (top.is_zero()) { v.pop_back(); continue; }
        v.pop_back();
        for (int i = 0; i < n; ++i)
            v[static_cast<size_t>(k - n + i)] =
                v[static_cast<size_t>(k - n + i)] - top * def[i];
    }
    v.resize(static_cast<size_t>(n));
}
} // namespace detail

inline NFElem operator*(const NFElem& a, const NFElem& b) {
    NFElem x = a, y = b;
    nf_align(x, y);
    if (x.is_rational()) return NFElem(x.rat_ * y.rat_);
    const size_t n = x.c_.size();
    std::vector<NFElem> v(2 * n - 1);
    for (size_t i = 0; i < n; ++i) {
        if (x.c_[i].is_zero()) continue;
        for (size_t j = 0; j < n; ++j) {
            if (y.c_[j].is_zero()) continue;
            v[i + j] = v[i + j] + x.c_[i] * y.c_[j];
        }
    }
    detail::nf_reduce(v, *x.field_);
    return NFElem(x.field_, std::move(v));
}

inline NFElem NFElem::inverse() const {
    if (is_rational()) {
        if (sgn(rat_) == 0) throw DivisionByZero();
        return NFElem(Rat(1) / rat_);
    }
    if (is_zero()) throw DivisionByZero();
    // extended Euclid in base[z] against the defining polynomial
    Poly<NFElem> a{std::vector<NFElem>(c_)};
    const Poly<NFElem>& m = field_->defining();
    Poly<NFElem> s, t;
    Poly<NFElem> g = poly_ext_gcd(m, a, s, t);
    if (g.degree() != 0)
        throw std::runtime_error("NFElem::inverse: defining polynomial not irreducible?");
    // g is monic constant 1; t * a == 1 (mod m)
    std::vector<NFElem> v(t.coeffs());
    v.resize(c_.size());
    return NFElem(field_, std::move(v));
}

inline NFElem operator/(const NFElem& a, const NFElem& b) {
    NFElem x = a, y = b;
    nf_align(x, y);
    if (x.is_rational()) {
        if (sgn(y.rat_) == 0) throw DivisionByZero();
        return NFElem(x.rat_ / y.rat_);
    }
    return x * y.inverse();
}

inline NFElem NFElem::pow(const Int& e) const {
    if (sgn(e) < 0) return inverse().pow(-e);
    NFElem base = *this;
    NFElem result(Rat(1));
    Int k = e;
    while (sgn(k) > 0) {
        if (mpz_odd_p(k.get_mpz_t())) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

inline bool operator==(const NFElem& a, const NFElem& b) {
    NFElem x = a, y = b;
    try {
        nf_align(x, y);
    } catch (const TowerMismatch&) {
        return false;
    }
    if (x.is_rational()) return x.rat_ == y.rat_;
    for (size_t i = 0; i < x.c_.size(); ++i)
        if (!(x.c_[i] == y.c_[i])) return false;
    return true;
}

// Canonical total order (lexicographic over the serialized coefficient
// vectors); used for reproducible point and automorphism orderings.
inline int nf_cmp(const NFElem& a, const NFElem& b) {
    NFElem x = a, y = b;
    nf_align(x, y);
    if (x.is_rational()) return cmp(x.rat(), y.rat());
    for (size_t i = 0; i < x.coeffs().size(); ++i) {
        int c = nf_cmp(x.coeffs()[i], y.coeffs()[i]);
        if (c != 0) return c;
    }
    return 0;
}

// ---- relative coordinates ----

// Coordinates of e (living in `field`, an extension of `sub`) with respect
// to the monomial basis of the tower segment between sub and field.
inline void nf_rel_coords(const NFElem& e_in, const FieldPtr& field, const FieldPtr& sub,
                          std::vector<NFElem>& out) {
    NFElem e = nf_lift(e_in, field);
    if (field == sub) {
        out.push_back(e);
        return;
    }
    if (!field) throw TowerMismatch("nf_rel_coords: sub is not below field");
    for (const auto& c : e.coeffs()) nf_rel_coords(c, field->base(), sub, out);
}

inline std::vector<NFElem> nf_rel_coords(const NFElem& e, const FieldPtr& field,
                                         const FieldPtr& sub) {
    std::vector<NFElem> out;
    nf_rel_coords(e, field, sub, out);
    return out;
}

inline int rel_degree(const FieldPtr& field, const FieldPtr& sub) {
    int d = 1;
    const NumberField* f = field.get();
    while (f != sub.get()) {
        if (!f) throw TowerMismatch("rel_degree: sub is not below field");
        d *= f->degree();
        f = f->base().get();
    }
    return d;
}

// Minimal polynomial of a over an ancestor field, by linear algebra on the
// relative power basis. The result is monic and irreducible by minimality.
inline Poly<NFElem> min_poly(const NFElem& a, const FieldPtr& field, const FieldPtr& sub) {
    if (!field) {
        if (sub || !a.is_rational()) throw TowerMismatch("min_poly: bad Q-level call");
        return Poly<NFElem>(std::vector<NFElem>{-a, NFElem(1L)});
    }
    if (!a.is_rational() && a.field() != field && !a.field()->is_ancestor_of(field.get()))
        throw TowerMismatch("min_poly: element does not live in the given field");
    if (!sub.get() || sub->is_ancestor_of(field.get()) || sub == field) {
        // ok (Q or genuine ancestor)
    } else {
        throw TowerMismatch("min_poly: subfield is not in the tower");
    }
    const int r = rel_degree(field, sub);
    std::vector<std::vector<NFElem>> cols;
    NFElem p(Rat(1));
    NFElem al = nf_lift(a, field);
    for (int m = 0; m <= r; ++m) {
        cols.push_back(nf_rel_coords(p, field, sub));
        if (m < r) p = p * al;
    }
    for (int m = 1; m <= r; ++m) {
        std::vector<std::vector<NFElem>> head(cols.begin(), cols.begin() + m);
        auto res = express_in_span(head, cols[static_cast<size_t>(m)]);
        if (!res.consistent) continue;
        std::vector<NFElem> pc(static_cast<size_t>(m) + 1);
        for (int i = 0; i < m; ++i) pc[static_cast<size_t>(i)] = -res.solution[static_cast<size_t>(i)];
        pc[static_cast<size_t>(m)] = NFElem(1L);
        return Poly<NFElem>(std::move(pc));
    }
    throw std::runtime_error("min_poly: no dependency found (corrupt tower)");
}

// Norm of a from `field` down to the ancestor `sub`, via the minimal
// polynomial: the norm is (-1)^r * (constant term)^(r/m) up to the sign
// convention folded in below.
inline NFElem field_norm(const NFElem& a, const FieldPtr& field, const FieldPtr& sub) {
    NFElem al = nf_lift(a, field);
    if (al.is_zero()) {
        return NFElem(Rat(0));
    }
    Poly<NFElem> mp = min_poly(al, field, sub);
    const int r = rel_degree(field, sub);
    const int m = mp.degree();
    NFElem c0 = mp[0];
    // product of roots of mp = (-1)^m * c0; norm = (product)^(r/m)
    NFElem prod = (m % 2 == 0) ? c0 : -c0;
    return prod.pow(static_cast<long>(r / m));
}

// An automorphism of L fixing its base field, given by the generator image.
struct FieldAut {
    FieldPtr L;
    NFElem gen_image;

    friend bool operator==(const FieldAut& a, const FieldAut& b) {
        return a.L == b.L && a.gen_image == b.gen_image;
    }
};

inline NFElem apply_aut(const FieldAut& g, const NFElem& e) {
    if (e.is_rational()) return e;
    if (e.field() != g.L) {
        if (e.field()->is_ancestor_of(g.L.get())) return e; // base is fixed
        throw TowerMismatch("apply_aut: element not in the automorphism's field");
    }
    NFElem acc;
    const auto& cs = e.coeffs();
    for (size_t i = cs.size(); i-- > 0;) acc = acc * g.gen_image + cs[i];
    return acc;
}

inline FieldAut compose_aut(const FieldAut& g, const FieldAut& h) {
    // (g o h)(x) = g(h(x))
    return FieldAut{g.L, apply_aut(g, h.gen_image)};
}

inline bool is_identity_aut(const FieldAut& g) { return g.gen_image == g.L->gen(); }

} // namespace ellsym
