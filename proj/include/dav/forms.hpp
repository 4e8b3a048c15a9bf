#pragma once
// Positive definite binary quadratic forms: reduction, composition, class
// groups of imaginary quadratic orders, and the ladder of extension maps
// between the class groups of nested orders R_{p^i} (with kernels).
//
// The extension map is realized on representatives: a class at conductor
// p^a is sent down by finding an odd represented prime q coprime to p and
// the field discriminant, rewriting the form with leading coefficient q,
// and rescaling its middle coefficient to the smaller discriminant.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dav/error.hpp"
#include "dav/group.hpp"
#include "dav/intmath.hpp"
#include "dav/quadratic.hpp"

namespace dav {

struct BQForm {
    std::int64_t a = 1, b = 0, c = 0;
    auto operator<=>(const BQForm&) const = default;

    std::int64_t disc() const { return b * b - 4 * a * c; }
    std::string str() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    }
};

inline bool is_reduced(const BQForm& f) {
    std::int64_t ab = f.b < 0 ? -f.b : f.b;
    if (!(ab <= f.a && f.a <= f.c)) return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

namespace detail {

inline void normalize_form(std::int64_t& a, std::int64_t& b, std::int64_t& c, std::int64_t disc) {
    std::int64_t twoa = 2 * a;
    std::int64_t r = b % twoa;
    if (r > a) r -= twoa;
    if (r <= -a) r += twoa;
    b = r;
    c = static_cast<std::int64_t>(((__int128)b * b - disc) / (4 * (__int128)a));
}

} // namespace detail

inline BQForm reduced(BQForm f) {
    if (f.a <= 0 || f.disc() >= 0)
        throw invalid_argument_error("reduction needs a positive definite form");
    const std::int64_t disc = f.disc();
    std::int64_t a = f.a, b = f.b, c = f.c;
    detail::normalize_form(a, b, c, disc);
    while (a > c || (a == c && b < 0)) {
        std::swap(a, c);
        b = -b;
        detail::normalize_form(a, b, c, disc);
    }
    return BQForm{a, b, c};
}

/// Gauss composition followed by reduction. Both forms must be primitive and
/// share one negative discriminant.
inline BQForm compose(const BQForm& f1in, const BQForm& f2in) {
    if (f1in.disc() != f2in.disc())
        throw invalid_argument_error("composition needs equal discriminants");
    BQForm f1 = f1in, f2 = f2in;
    if (f1.a > f2.a) std::swap(f1, f2);
    const std::int64_t s = (f1.b + f2.b) / 2;
    const std::int64_t n = f2.b - s;
    std::int64_t y1, dgcd;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        dgcd = f1.a;
    } else {
        std::int64_t u, v;
        dgcd = ext_gcd(f2.a, f1.a, u, v);
        y1 = u;
    }
    std::int64_t x2, y2, d1;
    if (s % dgcd == 0) {
        x2 = 0;
        y2 = -1;
        d1 = dgcd;
    } else {
        std::int64_t u, v;
        d1 = ext_gcd(s, dgcd, u, v);
        x2 = u;
        y2 = -v;
    }
    const std::int64_t v1 = f1.a / d1;
    const std::int64_t v2 = f2.a / d1;
    __int128 r128 = ((__int128)y1 * y2 * n - (__int128)x2 * f2.c) % v1;
    if (r128 < 0) r128 += v1;
    const std::int64_t r = static_cast<std::int64_t>(r128);
    BQForm out;
    out.a = v1 * v2;
    out.b = f2.b + 2 * v2 * r;
    __int128 c128 = ((__int128)f2.c * d1 + (__int128)r * (f2.b + (__int128)v2 * r)) / v1;
    out.c = static_cast<std::int64_t>(c128);
    return reduced(out);
}

inline BQForm principal_form(std::int64_t disc) {
    std::int64_t b = ((disc % 2) + 2) % 2;
    return BQForm{1, b, static_cast<std::int64_t>(((__int128)b * b - disc) / 4)};
}

/// All reduced primitive forms of the given negative discriminant, sorted.
inline std::vector<BQForm> reduced_forms(std::int64_t disc) {
    if (disc >= 0 || (((disc % 4) + 4) % 4) > 1)
        throw invalid_argument_error("discriminant must be negative and 0 or 1 mod 4");
    std::vector<BQForm> out;
    for (std::int64_t a = 1; 3 * a * a <= -disc; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (((b - disc) % 2 + 2) % 2 != 0) continue; // b = disc mod 2
            __int128 num = (__int128)b * b - disc;
            if (num % (4 * a)) continue;
            std::int64_t c = static_cast<std::int64_t>(num / (4 * a));
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            std::int64_t g = std::gcd(std::gcd(a, b < 0 ? -b : b), c);
            if (g != 1) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// The form class group of one discriminant: abstract invariant-factor group
/// plus a class-indexed table of reduced representatives.
struct FormClassGroup {
    std::int64_t disc = -3;
    FabGroup group;
    std::vector<BQForm> rep;                 // rep[i] represents group element i
    std::map<BQForm, ElemIndex> class_index; // reduced form -> group element

    std::int64_t order() const { return group.order(); }

    ElemIndex class_of(const BQForm& f) const {
        auto it = class_index.find(reduced(f));
        if (it == class_index.end())
            throw invariant_violation_error("form " + f.str() + " not of discriminant " +
                                            std::to_string(disc));
        return it->second;
    }
};

/// Cl(R_f) for the order of conductor f in Q(sqrt d), d < 0, via reduced
/// forms of discriminant f^2 d_K. For f = 1 this is the field class group.
inline FormClassGroup class_group_imaginary(std::int64_t d, std::int64_t f) {
    if (d >= 0) throw invalid_argument_error("imaginary class group needs d < 0");
    require_field_d(d);
    if (f < 1) throw invalid_argument_error("conductor must be >= 1");
    FormClassGroup out;
    out.disc = f * f * fundamental_discriminant(d);
    std::vector<BQForm> forms = reduced_forms(out.disc);
    if (forms.empty() || forms.front() != principal_form(out.disc))
        throw invariant_violation_error("principal form missing from enumeration");
    std::map<BQForm, ElemIndex> pos;
    for (std::size_t i = 0; i < forms.size(); ++i) pos[forms[i]] = static_cast<ElemIndex>(i);
    auto add = [&](ElemIndex x, ElemIndex y) -> ElemIndex {
        auto it = pos.find(compose(forms[x], forms[y]));
        if (it == pos.end()) throw invariant_violation_error("composition left the reduced set");
        return it->second;
    };
    StructureResult st = structure_from_table(static_cast<std::int64_t>(forms.size()), add);
    out.group = st.group;
    out.rep.resize(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) {
        out.rep[st.to_group[i]] = forms[i];
        out.class_index[forms[i]] = st.to_group[i];
    }
    return out;
}

namespace detail {

// Least odd prime coprime to `avoid` that F represents primitively, together
// with one representation, searched deterministically in ascending q.
struct PrimeRep {
    std::int64_t q;
    std::int64_t x, y;
};

inline std::optional<PrimeRep> find_prime_rep(const BQForm& F, std::int64_t avoid,
                                              std::int64_t q_budget) {
    for (std::int64_t q = 3; q <= q_budget; q += 2) {
        if (!is_prime(q) || avoid % q == 0) continue;
        const std::int64_t ymax = isqrt((4 * F.a * q) / (-F.disc()));
        for (std::int64_t y = 0; y <= ymax; ++y) {
            // solve a x^2 + b x y + (c y^2 - q) = 0 over the integers
            __int128 disc_x = (__int128)F.disc() * y * y + (__int128)4 * F.a * q;
            if (disc_x < 0) continue;
            std::int64_t rt = isqrt(static_cast<std::int64_t>(disc_x));
            if ((__int128)rt * rt != disc_x) continue;
            for (std::int64_t sgn : {1, -1}) {
                std::int64_t num = -F.b * y + sgn * rt;
                if (num % (2 * F.a)) continue;
                std::int64_t x = num / (2 * F.a);
                if (std::gcd(x, y) != 1 && !(y == 0 && (x == 1 || x == -1))) continue;
                return PrimeRep{q, x, y};
            }
        }
    }
    return std::nullopt;
}

// GL2-rewrite of F so the leading coefficient becomes F(x0,y0) = q.
inline BQForm with_leading(const BQForm& F, std::int64_t x0, std::int64_t y0, std::int64_t q) {
    std::int64_t s, t;
    if (ext_gcd(x0, y0, s, t) != 1)
        throw invariant_violation_error("representation is not primitive");
    // matrix [[x0, -t], [y0, s]] has determinant 1
    std::int64_t u = -t, v = s;
    BQForm out;
    out.a = q;
    out.b = static_cast<std::int64_t>(2 * ((__int128)F.a * x0 * u + (__int128)F.c * y0 * v) +
                                      (__int128)F.b * ((__int128)x0 * v + (__int128)y0 * u));
    out.c = static_cast<std::int64_t>((__int128)F.a * u * u + (__int128)F.b * u * v +
                                      (__int128)F.c * v * v);
    if (out.disc() != F.disc()) throw invariant_violation_error("rewrite changed discriminant");
    return out;
}

} // namespace detail

struct QuadraticOrderSpec {
    std::int64_t d = 2;
    std::int64_t p = 2;
    int a = 1;
    std::int64_t n = 2; // p^a
    std::int64_t disc_k = 8;
    Splitting splitting = Splitting::ramified;
    bool half = false; // alpha = (1+sqrt d)/2
};

inline QuadraticOrderSpec make_order_spec(std::int64_t d, std::int64_t p, int a) {
    require_field_d(d);
    if (!is_prime(p)) throw invalid_argument_error("p must be prime");
    if (a < 1) throw invalid_argument_error("exponent a must be >= 1");
    QuadraticOrderSpec s;
    s.d = d;
    s.p = p;
    s.a = a;
    s.n = ipow(p, a);
    s.disc_k = fundamental_discriminant(d);
    s.splitting = splitting_type(d, p);
    s.half = ((d % 4) + 4) % 4 == 1;
    return s;
}

/// The class groups Cl(R_{p^i}) for i = 0..a, the extension maps from level a
/// down to each level, their kernels (as subgroups of the level-a group) and,
/// for ramified p, the fiber over the class of P.
struct TauLadder {
    QuadraticOrderSpec spec;
    std::vector<FormClassGroup> level;        // index i = conductor p^i
    std::vector<std::vector<ElemIndex>> down; // down[i]: level-a element -> level-i element
    std::vector<Subgroup> kernel;             // kernel[i] = ker(tau_i), subgroup of level-a group
    std::optional<Subset> p_fiber;            // ramified only: tau_0 preimage of [P]
};

inline TauLadder tau_ladder_imaginary(const QuadraticOrderSpec& spec,
                                      std::int64_t budget_factor = 10) {
    if (spec.d >= 0) throw invalid_argument_error("automatic ladders need d < 0");
    if (spec.splitting == Splitting::split)
        throw invalid_argument_error("split primes have no finite ladder");
    TauLadder lad;
    lad.spec = spec;
    for (int i = 0; i <= spec.a; ++i)
        lad.level.push_back(class_group_imaginary(spec.d, ipow(spec.p, i)));
    const FormClassGroup& top = lad.level[spec.a];
    const std::int64_t h_top = top.order();
    lad.down.assign(spec.a + 1, std::vector<ElemIndex>(h_top, 0));

    const std::int64_t q_budget = budget_factor * (-top.disc);
    for (std::int64_t x = 0; x < h_top; ++x) {
        const BQForm F = top.rep[x];
        auto rep = detail::find_prime_rep(F, 2 * spec.p * spec.disc_k, q_budget);
        if (!rep)
            throw search_budget_error("no represented prime below budget for class " + F.str());
        BQForm lead = detail::with_leading(F, rep->x, rep->y, rep->q);
        for (int i = 0; i <= spec.a; ++i) {
            if (i == spec.a) {
                lad.down[i][x] = static_cast<ElemIndex>(x);
                continue;
            }
            const std::int64_t disc_i = lad.level[i].disc;
            const std::int64_t m = ipow(spec.p, spec.a - i); // conductor ratio
            const std::int64_t q = rep->q;
            std::int64_t r = static_cast<std::int64_t>(
                (__int128)(((lead.b % q) + q) % q) * mod_inv(m % q, q) % q);
            // choose the lift with the parity of the target discriminant
            std::int64_t b2 = (r % 2 == ((disc_i % 2 + 2) % 2)) ? r : r + q;
            __int128 num = (__int128)b2 * b2 - disc_i;
            if (num % ((__int128)4 * q))
                throw invariant_violation_error("scaled middle coefficient lost integrality");
            BQForm down{q, b2, static_cast<std::int64_t>(num / (4 * q))};
            lad.down[i][x] = lad.level[i].class_of(down);
        }
    }

    // kernels, nesting, index products, and the homomorphism property
    for (int i = 0; i <= spec.a; ++i) {
        std::vector<ElemIndex> ker;
        for (std::int64_t x = 0; x < h_top; ++x)
            if (lad.down[i][x] == lad.level[i].group.zero()) ker.push_back(static_cast<ElemIndex>(x));
        Subset ks = Subset::of(top.group, ker);
        if (!is_subgroup(top.group, ks))
            throw invariant_violation_error("ladder kernel is not a subgroup");
        if (static_cast<std::int64_t>(ks.size()) * lad.level[i].order() != h_top)
            throw invariant_violation_error("ladder level size mismatch");
        lad.kernel.push_back(Subgroup{ks, ks.elems});
    }
    for (int i = 0; i < spec.a; ++i)
        if (!is_subset_of(lad.kernel[i + 1].set, lad.kernel[i].set))
            throw invariant_violation_error("ladder kernels are not nested");
    if (lad.kernel[spec.a].size() != 1)
        throw invariant_violation_error("top kernel must be trivial");
    for (int i = 0; i <= spec.a; ++i) {
        const bool full = h_top <= 64;
        for (std::int64_t x = 0; x < h_top; ++x) {
            const std::int64_t ystep = full ? 1 : std::max<std::int64_t>(1, h_top / 16);
            for (std::int64_t y = 0; y < h_top; y += ystep) {
                ElemIndex lhs = lad.down[i][top.group.add(static_cast<ElemIndex>(x),
                                                          static_cast<ElemIndex>(y))];
                ElemIndex rhs = lad.level[i].group.add(lad.down[i][x], lad.down[i][y]);
                if (lhs != rhs)
                    throw invariant_violation_error("extension map is not a homomorphism");
            }
        }
    }

    if (spec.splitting == Splitting::ramified) {
        // locate the class of the ramified prime downstairs, then its fiber
        const FormClassGroup& base = lad.level[0];
        std::optional<ElemIndex> p_class;
        for (std::int64_t i = 0; i < base.order(); ++i) {
            const BQForm& F = base.rep[i];
            const std::int64_t ymax2 = isqrt((4 * F.a * spec.p) / (-base.disc));
            bool represents = false;
            for (std::int64_t y = 0; y <= ymax2 && !represents; ++y) {
                __int128 disc_x = (__int128)base.disc * y * y + (__int128)4 * F.a * spec.p;
                if (disc_x < 0) continue;
                std::int64_t rt = isqrt(static_cast<std::int64_t>(disc_x));
                if ((__int128)rt * rt != disc_x) continue;
                for (std::int64_t sgn : {1, -1}) {
                    std::int64_t num = -F.b * y + sgn * rt;
                    if (num % (2 * F.a) == 0) represents = true;
                }
            }
            if (represents) {
                p_class = static_cast<ElemIndex>(i);
                break;
            }
        }
        if (!p_class)
            throw invariant_violation_error("no class represents the ramified prime");
        std::vector<ElemIndex> fiber;
        for (std::int64_t x = 0; x < h_top; ++x)
            if (lad.down[0][x] == *p_class) fiber.push_back(static_cast<ElemIndex>(x));
        lad.p_fiber = Subset::of(top.group, fiber);
    }
    return lad;
}

} // namespace dav
