// 2x2 matrix groups over F_l at desk scale (l <= 13): subgroup closure,
// containment classification against the Borel/Cartan taxonomy, matrix
// sums, rational canonical forms, and the symbol-length bound rules.
#pragma once

#include "rational.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellsym {

struct NotSL2 : std::runtime_error {
    NotSL2() : std::runtime_error("matrix is not in SL2(F_l)") {}
};
struct TrivialGroup : std::runtime_error {
    TrivialGroup() : std::runtime_error("group must be nontrivial") {}
};
struct ScalarMatrix : std::runtime_error {
    ScalarMatrix() : std::runtime_error("scalar matrices have no cyclic vector") {}
};
struct OutOfScope : std::runtime_error {
    explicit OutOfScope(const std::string& m) : std::runtime_error(m) {}
};
struct DeskScaleLimit : std::runtime_error {
    explicit DeskScaleLimit(const std::string& m) : std::runtime_error(m) {}
};

// Row-major [[a,b],[c,d]] with entries reduced into [0, l).
struct MatModL {
    std::array<long, 4> e{0, 0, 0, 0};
    long l = 0;

    MatModL() = default;
    MatModL(long a, long b, long c, long d, long mod) : l(mod) {
        e = {norm(a), norm(b), norm(c), norm(d)};
    }

    long norm(long x) const { return ((x % l) + l) % l; }
    long det() const { return ((e[0] * e[3] - e[1] * e[2]) % l + l) % l; }
    long trace() const { return (e[0] + e[3]) % l; }
    bool is_scalar() const { return e[1] == 0 && e[2] == 0 && e[0] == e[3]; }

    static MatModL identity(long l) { return MatModL(1, 0, 0, 1, l); }

    friend MatModL operator*(const MatModL& a, const MatModL& b) {
        return MatModL(a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
                       a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3], a.l);
    }
    friend bool operator==(const MatModL& a, const MatModL& b) { return a.l == b.l && a.e == b.e; }
    friend bool operator<(const MatModL& a, const MatModL& b) { return a.e < b.e; }

    MatModL inverse() const {
        long d = det();
        if (d == 0) throw NotSL2();
        long di = mod_inverse_long(d, l);
        return MatModL(e[3] * di, (l - e[1]) * di, (l - e[2]) * di, e[0] * di, l);
    }

    int order() const {
        MatModL m = *this;
        MatModL id = identity(l);
        int k = 1;
        while (!(m == id)) {
            m = m * *this;
            ++k;
            if (k > l * l * l) throw std::runtime_error("order: not invertible");
        }
        return k;
    }
};

enum class GroupClass {
    Trivial,
    Borel,
    SplitCartan,
    NonsplitCartan,
    NormalizerSplit,
    NormalizerNonsplit,
    S4Type,
    FullSL2,
    Other,
};

inline const char* group_class_name(GroupClass c) {
    switch (c) {
        case GroupClass::Trivial: return "Trivial";
        case GroupClass::Borel: return "Borel";
        case GroupClass::SplitCartan: return "SplitCartan";
        case GroupClass::NonsplitCartan: return "NonsplitCartan";
        case GroupClass::NormalizerSplit: return "NormalizerSplit";
        case GroupClass::NormalizerNonsplit: return "NormalizerNonsplit";
        case GroupClass::S4Type: return "S4Type";
        case GroupClass::FullSL2: return "FullSL2";
        case GroupClass::Other: return "Other";
    }
    return "?";
}

struct GroupImage {
    long l = 0;
    std::vector<MatModL> generators;
    std::vector<MatModL> elements; // sorted closure, contains identity
    GroupClass classification = GroupClass::Other;
    long order() const { return static_cast<long>(elements.size()); }
    bool contains(const MatModL& m) const {
        return std::binary_search(elements.begin(), elements.end(), m);
    }
};

inline long sl2_order(long l) { return l * (l - 1) * (l + 1); }

// Breadth-first closure of the generated subgroup. All generators must
// have determinant 1.
inline GroupImage closure(const std::vector<MatModL>& gens, long l) {
    for (const auto& g : gens)
        if (g.det() != 1) throw NotSL2();
    GroupImage G;
    G.l = l;
    G.generators = gens;
    std::set<MatModL> seen;
    std::vector<MatModL> frontier;
    MatModL id = MatModL::identity(l);
    seen.insert(id);
    frontier.push_back(id);
    while (!frontier.empty()) {
        std::vector<MatModL> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                MatModL y = x * g;
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    G.elements.assign(seen.begin(), seen.end());
    return G;
}

// Entrywise sum of all elements, as a matrix over F_l.
inline MatModL matrix_sum(const GroupImage& g) {
    MatModL s(0, 0, 0, 0, g.l);
    for (const auto& m : g.elements)
        s = MatModL(s.e[0] + m.e[0], s.e[1] + m.e[1], s.e[2] + m.e[2], s.e[3] + m.e[3], g.l);
    return s;
}

namespace detail {

inline long smallest_nonresidue(long l) {
    for (long e = 2; e < l; ++e) {
        bool sq = false;
        for (long x = 1; x < l; ++x)
            if ((x * x) % l == e) { sq = true; break; }
        if (!sq) return e;
    }
    throw std::runtime_error("no non-residue found");
}

inline std::vector<MatModL> all_gl2(long l) {
    std::vector<MatModL> out;
    for (long a = 0; a < l; ++a)
        for (long b = 0; b < l; ++b)
            for (long c = 0; c < l; ++c)
                for (long d = 0; d < l; ++d) {
                    MatModL m(a, b, c, d, l);
                    if (m.det() != 0) out.push_back(m);
                }
    return out;
}

// model subgroups of GL2 (as predicates on matrices)
inline bool in_borel(const MatModL& m) { return m.e[2] == 0; }
inline bool in_diagonal(const MatModL& m) { return m.e[1] == 0 && m.e[2] == 0; }
inline bool in_nonsplit(const MatModL& m, long eps) {
    // [[a, eps*b],[b, a]]
    return m.e[0] == m.e[3] && m.e[1] == (eps * m.e[2]) % m.l;
}
inline bool in_normalizer_split(const MatModL& m) {
    bool diag = in_diagonal(m);
    bool anti = m.e[0] == 0 && m.e[3] == 0;
    return diag || anti;
}
inline bool in_normalizer_nonsplit(const MatModL& m, long eps) {
    // C union J*C with J = [[1,0],[0,-1]]
    if (in_nonsplit(m, eps)) return true;
    MatModL j(1, 0, 0, m.l - 1, m.l);
    return in_nonsplit(j * m, eps);
}

template <class Pred>
bool conjugate_into(const GroupImage& g, const std::vector<MatModL>& gl2, Pred&& pred) {
    for (const auto& t : gl2) {
        MatModL ti = t.inverse();
        bool ok = true;
        for (const auto& m : g.elements) {
            if (!pred(ti * m * t)) { ok = false; break; }
        }
        if (ok) return true;
    }
    return false;
}

// multiset of element orders of the projective image
inline std::multiset<int> projective_order_profile(const GroupImage& g) {
    // PG = G / (G intersect scalars)
    std::vector<MatModL> scalars;
    for (long a = 1; a < g.l; ++a) {
        MatModL s(a, 0, 0, a, g.l);
        if (g.contains(s)) scalars.push_back(s);
    }
    std::set<MatModL> seen;
    std::multiset<int> profile;
    for (const auto& m : g.elements) {
        bool have = false;
        for (const auto& s : scalars)
            if (seen.count(s * m)) { have = true; break; }
        if (have) continue;
        seen.insert(m);
        // order of the class in PG
        MatModL x = m;
        int k = 1;
        auto is_scalar_mat = [&](const MatModL& y) { return y.e[1] == 0 && y.e[2] == 0 && y.e[0] == y.e[3]; };
        while (!is_scalar_mat(x)) {
            x = x * m;
            ++k;
        }
        profile.insert(k);
    }
    return profile;
}

} // namespace detail

// Containment profile against the explicit models, decided by exhaustive
// conjugation over GL2(F_l).
struct ContainmentProfile {
    bool borel = false;
    bool split_cartan = false;
    bool nonsplit_cartan = false;
    bool normalizer_split = false;
    bool normalizer_nonsplit = false;
};

inline ContainmentProfile containment_profile(const GroupImage& g) {
    if (g.l > 13) throw DeskScaleLimit("classification is exhaustive only for l <= 13");
    auto gl2 = detail::all_gl2(g.l);
    long eps = detail::smallest_nonresidue(g.l);
    ContainmentProfile p;
    p.split_cartan = detail::conjugate_into(g, gl2, detail::in_diagonal);
    p.nonsplit_cartan =
        detail::conjugate_into(g, gl2, [&](const MatModL& m) { return detail::in_nonsplit(m, eps); });
    p.borel = p.split_cartan || detail::conjugate_into(g, gl2, detail::in_borel);
    p.normalizer_split = p.split_cartan || detail::conjugate_into(g, gl2, detail::in_normalizer_split);
    p.normalizer_nonsplit = p.nonsplit_cartan ||
        detail::conjugate_into(g, gl2, [&](const MatModL& m) { return detail::in_normalizer_nonsplit(m, eps); });
    return p;
}

// Single classification tag. Containments overlap (a split torus sits in a
// Borel and in normalizers); ties go to the most specific model in the
// order below, Cartans before Borel before normalizers.
inline GroupClass classify(const GroupImage& g) {
    if (g.order() == sl2_order(g.l)) return GroupClass::FullSL2;
    if (g.order() == 1) return GroupClass::Trivial;
    auto p = containment_profile(g);
    if (p.split_cartan) return GroupClass::SplitCartan;
    if (p.nonsplit_cartan) return GroupClass::NonsplitCartan;
    if (p.borel) return GroupClass::Borel;
    if (p.normalizer_split) return GroupClass::NormalizerSplit;
    if (p.normalizer_nonsplit) return GroupClass::NormalizerNonsplit;
    auto prof = detail::projective_order_profile(g);
    std::multiset<int> s4{1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4};
    if (prof == s4) return GroupClass::S4Type;
    return GroupClass::Other;
}

inline GroupImage classify_closure(const std::vector<MatModL>& gens, long l) {
    GroupImage g = closure(gens, l);
    g.classification = classify(g);
    return g;
}

// Rational canonical pair: B = [[0,-1],[1,tr]] and invertible T with
// T s T^{-1} = B; the new basis is (v, s v), so the image of the first
// basis vector is the second.
inline std::pair<MatModL, MatModL> rational_canonical_basis(const MatModL& s) {
    if (s.is_scalar()) throw ScalarMatrix();
    long l = s.l;
    MatModL b(0, l - 1, 1, s.trace(), l);
    // find v with s v not parallel to v; try e1 then e2
    std::array<long, 2> v{1, 0};
    std::array<long, 2> sv{s.e[0], s.e[2]};
    if ((v[0] * sv[1] - v[1] * sv[0]) % l == 0) {
        v = {0, 1};
        sv = {s.e[1], s.e[3]};
    }
    // C has columns (v, s v); T = C^{-1}
    MatModL c(v[0], sv[0], v[1], sv[1], l);
    MatModL t = c.inverse();
    return {b, t};
}

// Smallest prime dividing |G|, with a realizing subgroup.
inline std::pair<long, GroupImage> best_subgroup_order(const GroupImage& g) {
    if (g.order() <= 1) throw TrivialGroup();
    long d = smallest_prime_factor(g.order());
    for (const auto& m : g.elements) {
        int k = m.order();
        if (k % d == 0) {
            MatModL h = m;
            for (int i = 1; i < k / d; ++i) h = h * m;
            // h = m^(k/d) has order d
            return {d, closure({h}, g.l)};
        }
    }
    throw std::runtime_error("best_subgroup_order: Cauchy element not found");
}

enum class BoundRule { EpsilonBar, NaiveTwo, DegreeMinusOne, SubgroupFactor };

inline const char* bound_rule_name(BoundRule r) {
    switch (r) {
        case BoundRule::EpsilonBar: return "epsilon-bar";
        case BoundRule::NaiveTwo: return "naive-2";
        case BoundRule::DegreeMinusOne: return "degree-minus-one";
        case BoundRule::SubgroupFactor: return "subgroup-factor";
    }
    return "?";
}

struct SymbolLengthBound {
    long bound = 0;
    BoundRule rule = BoundRule::EpsilonBar;
};

// Upper bound for the symbol length of the l-torsion Brauer classes of the
// curve modulo constant classes, given the Galois image. Requires l
// coprime to |G|.
inline SymbolLengthBound symbol_length_bound(const GroupImage& g, long l) {
    long n = g.order();
    if (n % l == 0)
        throw OutOfScope("l divides [L:K]; the corestriction construction requires l coprime to [L:K]");
    if (n == 1) return {2, BoundRule::EpsilonBar};
    if (n == 2) return {2, BoundRule::NaiveTwo};
    long d = smallest_prime_factor(n);
    long half = (n / d) * (d - 1);
    if (half <= n - 1) return {half, BoundRule::SubgroupFactor};
    return {n - 1, BoundRule::DegreeMinusOne};
}

} // namespace ellsym
