// Dense univariate polynomials over an exact field-like coefficient type.
// Coefficients are stored by ascending degree with no trailing zeros; the
// zero polynomial has an empty coefficient vector.
//
// The coefficient type T must provide +, -, *, /, ==, a default constructor
// giving zero, and an el_is_zero(t) overload. Mixed-field coefficients are
// the caller's concern (NFElem coerces along its tower).
#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ellsym {

inline bool el_is_zero(const Rat& r) { return sgn(r) == 0; }

template <class T>
class Poly;
template <class T>
bool el_is_zero(const Poly<T>& p) { return p.is_zero(); }

struct ZeroPolynomial : std::runtime_error {
    ZeroPolynomial() : std::runtime_error("operation undefined for the zero polynomial") {}
};

template <class T>
class Poly {
public:
    Poly() = default;
    explicit Poly(T c) { c_.push_back(std::move(c)); normalize(); }
    explicit Poly(std::vector<T> cs) : c_(std::move(cs)) { normalize(); }

    static Poly zero() { return Poly(); }
    static Poly one(const T& model) { return Poly(model - model + unit_like(model)); }
    // t^k
    static Poly monomial(const T& coeff, int k) {
        std::vector<T> v(static_cast<size_t>(k) + 1, T());
        v[static_cast<size_t>(k)] = coeff;
        return Poly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const std::vector<T>& coeffs() const { return c_; }

    const T& operator[](int i) const {
        static const T zero_t{};
        if (i < 0 || i >= static_cast<int>(c_.size())) return zero_t;
        return c_[static_cast<size_t>(i)];
    }

    const T& lc() const {
        if (is_zero()) throw ZeroPolynomial();
        return c_.back();
    }

    // Index and value of the lowest nonzero term.
    int low_degree() const {
        if (is_zero()) throw ZeroPolynomial();
        for (size_t i = 0; i < c_.size(); ++i)
            if (!el_is_zero(c_[i])) return static_cast<int>(i);
        throw ZeroPolynomial();
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& c : r.c_) c = T() - c;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> v(std::max(a.c_.size(), b.c_.size()), T());
        for (size_t i = 0; i < v.size(); ++i) {
            if (i < a.c_.size()) v[i] = v[i] + a.c_[i];
            if (i < b.c_.size()) v[i] = v[i] + b.c_[i];
        }
        return Poly(std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> v(a.c_.size() + b.c_.size() - 1, T());
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (el_is_zero(a.c_[i])) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(std::move(v));
    }

    friend Poly operator*(const Poly& a, const T& s) {
        Poly r = a;
        for (auto& c : r.c_) c = c * s;
        r.normalize();
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }

    // Multiply by t^k.
    Poly shift_up(int k) const {
        if (is_zero()) return *this;
        std::vector<T> v(c_.size() + static_cast<size_t>(k), T());
        for (size_t i = 0; i < c_.size(); ++i) v[i + static_cast<size_t>(k)] = c_[i];
        return Poly(std::move(v));
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<T> v(c_.size() - 1, T());
        for (size_t i = 1; i < c_.size(); ++i) {
            T k = c_[i];
            T acc = T();
            for (size_t j = 0; j < i; ++j) acc = acc + k; // i * c_[i] without requiring int*T
            v[i - 1] = acc;
        }
        return Poly(std::move(v));
    }

    T eval(const T& x) const {
        T acc = T();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // Evaluate with coefficients mapped through f (used for Galois twists
    // and tower embeddings).
    template <class U, class F>
    U eval_mapped(const U& x, F&& f) const {
        U acc = U();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + f(c_[i]);
        return acc;
    }

    template <class F>
    auto map(F&& f) const {
        using U = decltype(f(std::declval<T>()));
        std::vector<U> v;
        v.reserve(c_.size());
        for (const auto& c : c_) v.push_back(f(c));
        return Poly<U>(std::move(v));
    }

    Poly monic() const {
        if (is_zero()) throw ZeroPolynomial();
        const T& l = lc();
        Poly r = *this;
        for (auto& c : r.c_) c = c / l;
        return r;
    }

    // Composition p(q(t)).
    Poly compose(const Poly& q) const {
        Poly acc;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * q + Poly(c_[i]);
        return acc;
    }

    friend void divrem(const Poly& a, const Poly& b, Poly& q, Poly& r) {
        if (b.is_zero()) throw ZeroPolynomial();
        q = Poly();
        r = a;
        const T& bl = b.lc();
        int db = b.degree();
        std::vector<T> qv;
        if (r.degree() >= db) qv.assign(static_cast<size_t>(r.degree() - db) + 1, T());
        while (!r.is_zero() && r.degree() >= db) {
            T f = r.lc() / bl;
            int k = r.degree() - db;
            qv[static_cast<size_t>(k)] = f;
            // r -= f * t^k * b, trimming the leading term exactly
            std::vector<T> rv = r.c_;
            rv.pop_back();
            for (int i = 0; i < db; ++i) {
                size_t idx = static_cast<size_t>(k + i);
                rv[idx] = rv[idx] - f * b.c_[static_cast<size_t>(i)];
            }
            r = Poly(std::move(rv));
        }
        q = Poly(std::move(qv));
    }

    friend Poly operator/(const Poly& a, const Poly& b) {
        Poly q, r;
        divrem(a, b, q, r);
        return q;
    }
    friend Poly operator%(const Poly& a, const Poly& b) {
        Poly q, r;
        divrem(a, b, q, r);
        return r;
    }

private:
    template <class U>
    static U unit_like(const U& model) {
        return model / model; // only called with nonzero model
    }

    void normalize() {
        while (!c_.empty() && el_is_zero(c_.back())) c_.pop_back();
    }

    std::vector<T> c_;
};

// Monic gcd by the Euclidean algorithm; returns zero iff both inputs are zero.
template <class T>
Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
    while (!b.is_zero()) {
        Poly<T> r = a % b;
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a.monic();
}

// Monic g = gcd(a,b) together with s, t such that s*a + t*b = g.
template <class T>
Poly<T> poly_ext_gcd(Poly<T> a, Poly<T> b, Poly<T>& s, Poly<T>& t) {
    Poly<T> s0(std::vector<T>{}), s1(std::vector<T>{});
    bool have_one = false;
    T one{};
    if (!a.is_zero()) { one = a.lc() / a.lc(); have_one = true; }
    else if (!b.is_zero()) { one = b.lc() / b.lc(); have_one = true; }
    if (!have_one) { s = Poly<T>(); t = Poly<T>(); return Poly<T>(); }
    s0 = Poly<T>(one);
    Poly<T> t0, t1(one);
    while (!b.is_zero()) {
        Poly<T> q, r;
        divrem(a, b, q, r);
        a = b; b = r;
        Poly<T> ns = s0 - q * s1; s0 = s1; s1 = ns;
        Poly<T> nt = t0 - q * t1; t0 = t1; t1 = nt;
    }
    T inv = one / a.lc();
    s = s0 * inv;
    t = t0 * inv;
    return a.monic();
}

template <class T>
Poly<T> poly_pow_mod(Poly<T> base, Int e, const Poly<T>& mod) {
    Poly<T> result(base.lc() / base.lc()); // 1
    base = base % mod;
    while (sgn(e) > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = (result * base) % mod;
        base = (base * base) % mod;
        e >>= 1;
    }
    return result;
}

// Resultant of a monic polynomial m with arbitrary g: res = prod g(roots of m).
// Computed by the Euclidean recurrence; exact over any field type.
template <class T>
T poly_resultant_monic(const Poly<T>& m, const Poly<T>& g) {
    if (m.is_zero()) throw ZeroPolynomial();
    T one = m.lc() / m.lc();
    // res(m, g) with m monic: multiplicative Euclid
    Poly<T> a = m, b = g;
    T acc = one;
    bool swapped = false; // track (-1)^(da*db) factors
    int sign = 1;
    while (true) {
        if (b.is_zero()) {
            if (a.degree() == 0) break; // res with nonzero constant handled below
            return T(); // common factor => resultant 0
        }
        if (b.degree() == 0) {
            // res(a, c) = c^{deg a}
            T c = b.lc();
            T p = one;
            for (int i = 0; i < a.degree(); ++i) p = p * c;
            acc = acc * p;
            break;
        }
        Poly<T> r = a % b;
        int da = a.degree(), db = b.degree(), dr = r.is_zero() ? -1 : r.degree();
        // res(a,b) = (-1)^{da·db} lc(b)^{da-dr} res(b,r)
        if ((da % 2) && (db % 2)) sign = -sign;
        T lb = b.lc();
        T p = one;
        for (int i = 0; i < da - (dr < 0 ? 0 : dr); ++i) p = p * lb;
        acc = acc * p;
        if (r.is_zero()) {
            if (db > 0) return T(); // nonconstant common factor
            break;
        }
        a = b;
        b = r;
    }
    if (sign < 0) acc = T() - acc;
    return acc;
}

using QPoly = Poly<Rat>;

inline QPoly qpoly_from_longs(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return QPoly(std::move(v));
}

// Lagrange interpolation through (xs[i], ys[i]).
inline QPoly qpoly_interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
    assert(xs.size() == ys.size());
    QPoly acc;             // running interpolant (Newton form, expanded)
    QPoly basis(Rat(1));   // prod (t - xs[j]) for j < i
    for (size_t i = 0; i < xs.size(); ++i) {
        Rat bi = basis.eval(xs[i]);
        Rat resid = ys[i] - acc.eval(xs[i]);
        acc = acc + basis * (resid / bi);
        basis = basis * QPoly(std::vector<Rat>{-xs[i], Rat(1)});
    }
    return acc;
}

} // namespace ellsym
