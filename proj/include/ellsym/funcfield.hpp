// Arithmetic in the function field F(E) = F(x)[y]/(y^2 - x^3 - a4 x - a6)
// of a curve over a number field F. Elements are kept in the canonical
// form a(x) + b(x) y with reduced rational-function coefficients and monic
// denominators, so equality is representation equality.
#pragma once

#include "curve.hpp"
#include "nfroots.hpp"

#include <memory>
#include <utility>

namespace ellsym {

struct FFContext {
    FieldPtr field;
    NFElem a4, a6;
    Poly<NFElem> rhs; // x^3 + a4 x + a6

    static std::shared_ptr<const FFContext> make(const Curve& e, const FieldPtr& field) {
        auto c = std::make_shared<FFContext>();
        c->field = field;
        c->a4 = nf_lift(e.a4, field);
        c->a6 = nf_lift(e.a6, field);
        c->rhs = Poly<NFElem>(std::vector<NFElem>{c->a6, c->a4, NFElem(0L), NFElem(1L)});
        return c;
    }
    Curve curve() const { return Curve(field, a4, a6); }
};
using FFCtxPtr = std::shared_ptr<const FFContext>;

// Reduced rational function in x over a number field.
struct RatFunc {
    Poly<NFElem> num;
    Poly<NFElem> den{NFElem(1L)};

    RatFunc() = default;
    RatFunc(Poly<NFElem> n, Poly<NFElem> d) : num(std::move(n)), den(std::move(d)) { reduce(); }
    explicit RatFunc(Poly<NFElem> n) : num(std::move(n)) {}
    explicit RatFunc(NFElem c) : num(Poly<NFElem>(std::move(c))) {}

    bool is_zero() const { return num.is_zero(); }
    bool is_poly() const { return den.degree() == 0; }

    void reduce() {
        if (den.is_zero()) throw DivisionByZero();
        if (num.is_zero()) { den = Poly<NFElem>(NFElem(1L)); return; }
        Poly<NFElem> g = poly_gcd(num, den);
        if (g.degree() > 0) { num = num / g; den = den / g; }
        NFElem lc = den.lc();
        num = num * lc.inverse();
        den = den * lc.inverse();
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.num, a.den * b.den);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw DivisionByZero();
        return RatFunc(a.num * b.den, a.den * b.num);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num = -r.num;
        return r;
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num == b.num && a.den == b.den;
    }
    template <class F>
    RatFunc map_coeffs(F&& f) const {
        return RatFunc(num.map(f), den.map(f));
    }
};

class FFElem {
public:
    FFElem() = default;
    FFElem(FFCtxPtr ctx, RatFunc a, RatFunc b) : ctx_(std::move(ctx)), a_(std::move(a)), b_(std::move(b)) {}
    FFElem(FFCtxPtr ctx, NFElem constant) : ctx_(std::move(ctx)), a_(RatFunc(std::move(constant))) {}

    static FFElem constant(FFCtxPtr ctx, NFElem c) { return FFElem(std::move(ctx), std::move(c)); }
    static FFElem x_var(FFCtxPtr ctx) {
        return FFElem(std::move(ctx), RatFunc(Poly<NFElem>(std::vector<NFElem>{NFElem(0L), NFElem(1L)})), RatFunc());
    }
    static FFElem y_var(FFCtxPtr ctx) {
        return FFElem(std::move(ctx), RatFunc(), RatFunc(NFElem(1L)));
    }

    const FFCtxPtr& ctx() const { return ctx_; }
    const RatFunc& a() const { return a_; }
    const RatFunc& b() const { return b_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_constant() const {
        return b_.is_zero() && a_.is_poly() && a_.num.degree() <= 0;
    }
    NFElem constant_value() const {
        if (!is_constant()) throw std::runtime_error("FFElem: not a constant");
        return a_.num.is_zero() ? NFElem(Rat(0)) : a_.num[0];
    }

    FFElem conj() const { return FFElem(ctx_, a_, -b_); }

    // a^2 - b^2 (x^3 + a4 x + a6), a rational function in x alone
    RatFunc norm_x() const {
        return a_ * a_ - b_ * b_ * RatFunc(ctx_->rhs);
    }

    friend void ff_align(FFElem& u, FFElem& v) {
        if (!u.ctx_ && !v.ctx_) return;
        if (!u.ctx_) { u.ctx_ = v.ctx_; return; }
        if (!v.ctx_) { v.ctx_ = u.ctx_; return; }
        if (u.ctx_->field == v.ctx_->field) return;
        auto lift_into = [](FFElem& e, const FFCtxPtr& c) {
            auto f = [&](const NFElem& t) { return nf_lift(t, c->field); };
            e = FFElem(c, e.a_.map_coeffs(f), e.b_.map_coeffs(f));
        };
        if (u.ctx_->field && v.ctx_->field && u.ctx_->field->is_ancestor_of(v.ctx_->field.get())) {
            lift_into(u, v.ctx_);
            return;
        }
        if (u.ctx_->field && v.ctx_->field && v.ctx_->field->is_ancestor_of(u.ctx_->field.get())) {
            lift_into(v, u.ctx_);
            return;
        }
        throw TowerMismatch("function-field elements over unrelated constant fields");
    }

    friend FFElem operator+(const FFElem& x, const FFElem& y) {
        FFElem u = x, v = y;
        ff_align(u, v);
        return FFElem(u.ctx_, u.a_ + v.a_, u.b_ + v.b_);
    }
    friend FFElem operator-(const FFElem& x, const FFElem& y) {
        FFElem u = x, v = y;
        ff_align(u, v);
        return FFElem(u.ctx_, u.a_ - v.a_, u.b_ - v.b_);
    }
    FFElem operator-() const { return FFElem(ctx_, -a_, -b_); }

    friend FFElem operator*(const FFElem& x, const FFElem& y) {
        FFElem u = x, v = y;
        ff_align(u, v);
        // (a1 + b1 y)(a2 + b2 y) = a1 a2 + b1 b2 rhs + (a1 b2 + a2 b1) y
        RatFunc rhs = u.ctx_ ? RatFunc(u.ctx_->rhs) : RatFunc(Poly<NFElem>());
        return FFElem(u.ctx_, u.a_ * v.a_ + u.b_ * v.b_ * rhs, u.a_ * v.b_ + v.a_ * u.b_);
    }

    FFElem inverse() const {
        if (is_zero()) throw DivisionByZero();
        RatFunc n = norm_x();
        return FFElem(ctx_, a_ / n, -(b_ / n));
    }

    friend FFElem operator/(const FFElem& x, const FFElem& y) { return x * y.inverse(); }

    friend bool operator==(const FFElem& x, const FFElem& y) {
        FFElem u = x, v = y;
        ff_align(u, v);
        return u.a_ == v.a_ && u.b_ == v.b_;
    }

    FFElem pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        FFElem acc = FFElem(ctx_, NFElem(1L));
        FFElem base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    template <class F>
    FFElem map_coeffs(const FFCtxPtr& new_ctx, F&& f) const {
        return FFElem(new_ctx, a_.map_coeffs(f), b_.map_coeffs(f));
    }

    // Evaluate at an affine point with coordinates in (an extension of) the
    // constant field.
    NFElem eval(const Point& p) const {
        if (p.infinity) throw std::runtime_error("FFElem::eval at infinity");
        auto ev = [&](const RatFunc& r) {
            NFElem dn = r.den.eval(p.x);
            if (dn.is_zero()) throw DivisionByZero();
            return r.num.eval(p.x) / dn;
        };
        return ev(a_) + ev(b_) * p.y;
    }

private:
    FFCtxPtr ctx_;
    RatFunc a_, b_;
};

inline bool el_is_zero(const FFElem& e) { return e.is_zero(); }

// Galois action through the coefficients; x and y are fixed.
inline FFElem coeff_galois(const FieldAut& g, const FFElem& e) {
    return e.map_coeffs(e.ctx(), [&](const NFElem& c) { return apply_aut(g, c); });
}

// Norm of e from L(E) down to the fixed field of H: the product of the
// H-conjugates. The result's coefficients are H-invariant.
inline FFElem ff_norm_ambient(const FFElem& e, const std::vector<FieldAut>& h) {
    FFElem acc = FFElem(e.ctx(), NFElem(1L));
    for (const auto& g : h) acc = acc * coeff_galois(g, e);
    return acc;
}

// Descend an element of L(E) whose coefficients lie in the subfield K',
// producing an element over K'(E).
inline FFElem ff_descend(const FFElem& e, const Subfield& sub, const FFCtxPtr& sub_ctx) {
    return e.map_coeffs(sub_ctx, [&](const NFElem& c) { return sub.descend(c); });
}

inline FFElem ff_lift(const FFElem& e, const Subfield& sub, const FFCtxPtr& amb_ctx) {
    return e.map_coeffs(amb_ctx, [&](const NFElem& c) { return sub.lift(c); });
}

// Norm down to K'(E) with verified coefficient descent.
inline FFElem ff_norm(const FFElem& e, const Subfield& sub, const FFCtxPtr& sub_ctx) {
    return ff_descend(ff_norm_ambient(e, sub.galois_over), sub, sub_ctx);
}

// Write e, whose constants lie in K'(alpha), as a polynomial f of minimal
// degree with coefficients in K'(E) such that f(alpha) = e. `h` is
// Gal(L/K'); alpha is a constant of L of degree m over K'.
inline Poly<FFElem> express_in_power_basis(const FFElem& e, const NFElem& alpha,
                                           const std::vector<FieldAut>& h) {
    // orbit of alpha under H determines m and the Vandermonde system
    std::vector<FieldAut> reps;
    std::vector<NFElem> images;
    for (const auto& g : h) {
        NFElem im = apply_aut(g, alpha);
        bool seen = false;
        for (const auto& o : images) seen = seen || (o == im);
        if (!seen) {
            images.push_back(im);
            reps.push_back(g);
        }
    }
    const size_t m = images.size();
    const FFCtxPtr& ctx = e.ctx();
    std::vector<std::vector<FFElem>> rows(m, std::vector<FFElem>(m));
    std::vector<FFElem> rhs(m);
    for (size_t i = 0; i < m; ++i) {
        FFElem p = FFElem(ctx, NFElem(1L));
        FFElem im = FFElem::constant(ctx, images[i]);
        for (size_t j = 0; j < m; ++j) {
            rows[i][j] = p;
            p = p * im;
        }
        rhs[i] = coeff_galois(reps[i], e);
    }
    auto res = solve_linear(rows, rhs);
    if (!res.consistent) throw NotInSubfield();
    // the Vandermonde system is always solvable over L(E); membership in
    // K'(alpha)(E) is exactly H-invariance of the solved coefficients
    for (const auto& f : res.solution)
        for (const auto& g : h)
            if (!(coeff_galois(g, f) == f)) throw NotInSubfield();
    std::vector<FFElem> coeffs = res.solution;
    return Poly<FFElem>(std::move(coeffs));
}

} // namespace ellsym
