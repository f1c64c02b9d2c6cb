// Short Weierstrass curves y^2 = x^3 + a4 x + a6 over a number field:
// exact affine group law, scalar multiples, and division polynomials.
#pragma once

#include "numfield.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace ellsym {

struct CurveMismatch : std::runtime_error {
    CurveMismatch() : std::runtime_error("points lie on different curves") {}
};
struct SingularCurve : std::runtime_error {
    SingularCurve() : std::runtime_error("discriminant vanishes") {}
};
struct NotTorsion : std::runtime_error {
    NotTorsion() : std::runtime_error("point is not l-torsion") {}
};

struct Curve {
    FieldPtr field; // field of definition of the coefficients
    NFElem a4, a6;

    Curve(FieldPtr f, NFElem a4_, NFElem a6_) : field(std::move(f)), a4(std::move(a4_)), a6(std::move(a6_)) {
        NFElem d = NFElem(4L) * a4.pow(3L) + NFElem(27L) * a6.pow(2L);
        if (d.is_zero()) throw SingularCurve();
    }

    NFElem rhs(const NFElem& x) const { return x.pow(3L) + a4 * x + a6; }

    // Same equation over a larger constant field.
    Curve base_change(const FieldPtr& bigger) const {
        return Curve(bigger, nf_lift(a4, bigger), nf_lift(a6, bigger));
    }

    friend bool operator==(const Curve& a, const Curve& b) {
        return a.a4 == b.a4 && a.a6 == b.a6;
    }
};

struct Point {
    bool infinity = true;
    NFElem x, y;

    Point() = default;
    Point(NFElem x_, NFElem y_) : infinity(false), x(std::move(x_)), y(std::move(y_)) {}

    static Point at_infinity() { return Point(); }

    friend bool operator==(const Point& p, const Point& q) {
        if (p.infinity || q.infinity) return p.infinity == q.infinity;
        return p.x == q.x && p.y == q.y;
    }
    friend bool operator!=(const Point& p, const Point& q) { return !(p == q); }
};

// Canonical order: infinity first, then lexicographic on (x, y) coordinates.
inline bool point_less(const Point& p, const Point& q) {
    if (p.infinity != q.infinity) return p.infinity;
    if (p.infinity) return false;
    int cx = nf_cmp(p.x, q.x);
    if (cx != 0) return cx < 0;
    return nf_cmp(p.y, q.y) < 0;
}

inline bool on_curve(const Curve& e, const Point& p) {
    if (p.infinity) return true;
    return (p.y * p.y - e.rhs(p.x)).is_zero();
}

inline Point negate(const Point& p) {
    if (p.infinity) return p;
    return Point(p.x, -p.y);
}

inline Point add(const Curve& e, const Point& p, const Point& q) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    if (p.x == q.x) {
        if ((p.y + q.y).is_zero()) return Point::at_infinity();
        // doubling
        NFElem lam = (NFElem(3L) * p.x * p.x + e.a4) / (NFElem(2L) * p.y);
        NFElem x3 = lam * lam - p.x - q.x;
        NFElem y3 = lam * (p.x - x3) - p.y;
        return Point(x3, y3);
    }
    NFElem lam = (q.y - p.y) / (q.x - p.x);
    NFElem x3 = lam * lam - p.x - q.x;
    NFElem y3 = lam * (p.x - x3) - p.y;
    return Point(x3, y3);
}

inline Point sub(const Curve& e, const Point& p, const Point& q) { return add(e, p, negate(q)); }

inline Point scalar_mul(const Curve& e, long n, const Point& p) {
    if (n < 0) return scalar_mul(e, -n, negate(p));
    Point acc = Point::at_infinity();
    Point base = p;
    while (n > 0) {
        if (n & 1) acc = add(e, acc, base);
        base = add(e, base, base);
        n >>= 1;
    }
    return acc;
}

// Division polynomials. psi_m is y * (polynomial in x) for even m and a
// polynomial in x for odd m; the pair (poly, has_y) captures both, with
// y^2 reduced to the curve equation throughout.
namespace detail {

struct PsiElem {
    Poly<NFElem> p;
    int ydeg = 0; // 0 or 1
};

inline PsiElem psi_mul(const Curve& e, const PsiElem& a, const PsiElem& b) {
    Poly<NFElem> prod = a.p * b.p;
    int yd = a.ydeg + b.ydeg;
    if (yd == 2) {
        Poly<NFElem> rhs(std::vector<NFElem>{e.a6, e.a4, NFElem(0L), NFElem(1L)});
        return {prod * rhs, 0};
    }
    return {prod, yd};
}

inline PsiElem psi_sub(const PsiElem& a, const PsiElem& b) {
    if (a.ydeg != b.ydeg) throw std::runtime_error("psi_sub: parity mismatch");
    return {a.p - b.p, a.ydeg};
}

} // namespace detail

class DivisionPolynomials {
public:
    explicit DivisionPolynomials(const Curve& e) : e_(e) {
        using detail::PsiElem;
        Poly<NFElem> one(NFElem(1L));
        psi_.push_back({Poly<NFElem>(), 0});                          // psi_0 = 0
        psi_.push_back({one, 0});                                     // psi_1 = 1
        psi_.push_back({Poly<NFElem>(NFElem(2L)), 1});                // psi_2 = 2y
        // psi_3 = 3x^4 + 6 a4 x^2 + 12 a6 x - a4^2
        psi_.push_back({Poly<NFElem>(std::vector<NFElem>{-(e.a4 * e.a4), NFElem(12L) * e.a6,
                                                         NFElem(6L) * e.a4, NFElem(0L), NFElem(3L)}),
                        0});
        // psi_4 = 4y (x^6 + 5 a4 x^4 + 20 a6 x^3 - 5 a4^2 x^2 - 4 a4 a6 x - 8 a6^2 - a4^3)
        psi_.push_back({Poly<NFElem>(std::vector<NFElem>{
                            NFElem(-8L) * e.a6 * e.a6 - e.a4.pow(3L), NFElem(-4L) * e.a4 * e.a6,
                            NFElem(-5L) * e.a4 * e.a4, NFElem(20L) * e.a6, NFElem(5L) * e.a4,
                            NFElem(0L), NFElem(1L)}) * NFElem(4L),
                        1});
    }

    // psi_m as (polynomial, y-degree in {0,1})
    const detail::PsiElem& psi(int m) {
        using detail::PsiElem;
        while (static_cast<int>(psi_.size()) <= m) {
            int k = static_cast<int>(psi_.size());
            int n = k / 2;
            if (k % 2 == 1) {
                PsiElem a = detail::psi_mul(e_, psi(n + 2), detail::psi_mul(e_, psi(n), detail::psi_mul(e_, psi(n), psi(n))));
                PsiElem b = detail::psi_mul(e_, psi(n - 1), detail::psi_mul(e_, psi(n + 1), detail::psi_mul(e_, psi(n + 1), psi(n + 1))));
                psi_.push_back(detail::psi_sub(a, b));
            } else {
                PsiElem a = detail::psi_mul(e_, psi(n + 2), detail::psi_mul(e_, psi(n - 1), psi(n - 1)));
                PsiElem b = detail::psi_mul(e_, psi(n - 2), detail::psi_mul(e_, psi(n + 1), psi(n + 1)));
                PsiElem diff = detail::psi_sub(a, b);
                PsiElem prod = detail::psi_mul(e_, psi(n), diff);
                // psi_2n = prod/(2y); with y^2 already reduced, prod = 2 (x^3+a4x+a6) h
                if (prod.ydeg != 0) throw std::runtime_error("psi recurrence parity error");
                Poly<NFElem> rhs(std::vector<NFElem>{e_.a6, e_.a4, NFElem(0L), NFElem(1L)});
                Poly<NFElem> q, r;
                divrem(prod.p, rhs, q, r);
                if (!r.is_zero()) throw std::runtime_error("psi recurrence: inexact division");
                psi_.push_back({q * NFElem(Rat(1, 2)), 1});
            }
        }
        return psi_[static_cast<size_t>(m)];
    }

private:
    Curve e_;
    std::vector<detail::PsiElem> psi_;
};

// The monic-normalized l-division polynomial in x, degree (l^2 - 1)/2 for
// odd l; its roots are the x-coordinates of the nonzero l-torsion.
inline Poly<NFElem> division_polynomial(const Curve& e, long l) {
    if (l < 3 || l % 2 == 0) throw InvalidPrime("division_polynomial: l must be odd and >= 3");
    DivisionPolynomials dp(e);
    auto psi = dp.psi(static_cast<int>(l));
    if (psi.ydeg != 0) throw std::runtime_error("odd division polynomial has a y part");
    return psi.p;
}

} // namespace ellsym
