#pragma once
// Number theory of quadratic fields Q(sqrt d): prime splitting, the local
// unit-count function L(n,d), fundamental units by continued fractions, and
// least powers of the fundamental unit landing in the order of index m.
// Unit coordinates are exact GMP integers; everything else fits in int64.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dav/error.hpp"
#include "dav/intmath.hpp"

namespace dav {

enum class Splitting { split, inert, ramified };

inline const char* to_string(Splitting s) {
    switch (s) {
        case Splitting::split: return "split";
        case Splitting::inert: return "inert";
        default: return "ramified";
    }
}

inline void require_field_d(std::int64_t d) {
    if (d == 0 || d == 1 || !is_squarefree(d))
        throw invalid_argument_error("d must be squarefree and != 0, 1");
}

inline std::int64_t fundamental_discriminant(std::int64_t d) {
    require_field_d(d);
    std::int64_t m4 = ((d % 4) + 4) % 4;
    return m4 == 1 ? d : 4 * d;
}

/// Behavior of the rational prime p in Q(sqrt d): ramified iff p divides the
/// fundamental discriminant, otherwise split or inert by the Kronecker symbol.
inline Splitting splitting_type(std::int64_t d, std::int64_t p) {
    require_field_d(d);
    if (!is_prime(p)) throw invalid_argument_error("p must be prime");
    std::int64_t dk = fundamental_discriminant(d);
    if (dk % p == 0) return Splitting::ramified;
    if (p == 2) {
        // dk odd here; split iff dk = 1 mod 8
        std::int64_t m8 = ((dk % 8) + 8) % 8;
        return m8 == 1 ? Splitting::split : Splitting::inert;
    }
    return legendre(dk, p) == 1 ? Splitting::split : Splitting::inert;
}

/// Multiplicative local factor: L(p,d) = p (ramified), p+1 (inert), p-1
/// (split), and L(p^r, d) = p^{r-1} L(p, d). The split value follows the
/// standard local unit count; callers short-circuit split primes to infinite
/// elasticity before this matters.
inline std::int64_t l_function(std::int64_t n, std::int64_t d) {
    if (n < 1) throw invalid_argument_error("L(n,d) needs n >= 1");
    require_field_d(d);
    std::int64_t out = 1;
    for (const auto& pp : factorize(n)) {
        std::int64_t lp;
        switch (splitting_type(d, pp.p)) {
            case Splitting::ramified: lp = pp.p; break;
            case Splitting::inert: lp = pp.p + 1; break;
            default: lp = pp.p - 1; break;
        }
        out *= ipow(pp.p, pp.e - 1) * lp;
    }
    return out;
}

/// An element x + y*alpha of the maximal order, where alpha = (1+sqrt d)/2
/// when d = 1 mod 4 and sqrt d otherwise.
struct QuadInt {
    mpz_class x, y;
    std::int64_t d = 0;
    bool half = false; // alpha = (1+sqrt d)/2

    std::string str() const {
        if (half) return x.get_str() + "+" + y.get_str() + "*(1+sqrt(" + std::to_string(d) + "))/2";
        return x.get_str() + "+" + y.get_str() + "*sqrt(" + std::to_string(d) + ")";
    }
};

inline QuadInt mul(const QuadInt& u, const QuadInt& v) {
    if (u.d != v.d || u.half != v.half)
        throw invalid_argument_error("quadratic integers from different rings");
    QuadInt out;
    out.d = u.d;
    out.half = u.half;
    if (!u.half) { // alpha^2 = d
        out.x = u.x * v.x + u.y * v.y * u.d;
        out.y = u.x * v.y + u.y * v.x;
    } else { // alpha^2 = alpha + (d-1)/4
        mpz_class c = (mpz_class(u.d) - 1) / 4;
        out.x = u.x * v.x + u.y * v.y * c;
        out.y = u.x * v.y + u.y * v.x + u.y * v.y;
    }
    return out;
}

inline mpz_class norm(const QuadInt& u) {
    if (!u.half) return u.x * u.x - mpz_class(u.d) * u.y * u.y;
    // N(x + y(1+sqrt d)/2) = x^2 + xy + y^2 (1-d)/4
    mpz_class c = (1 - mpz_class(u.d)) / 4;
    return u.x * u.x + u.x * u.y + u.y * u.y * c;
}

namespace detail {

// One period of the continued-fraction expansion of (P0 + sqrt D)/Q0,
// tracking convergents. Stops at the first i >= 1 with Q_i == Q_stop and
// returns the pair (G_{i-1}, B_{i-1}) where G = Q0*A - P0*B; these satisfy
// G^2 - D B^2 = (-1)^i Q_i Q0.
struct PqaResult {
    mpz_class g, b;
    int steps = 0;
    std::vector<std::int64_t> q_values;       // Q_1, Q_2, ... within the run
    std::vector<std::int64_t> q_signed;       // (-1)^i Q_i matching q_values
};

inline PqaResult pqa_until_q(std::int64_t P0, std::int64_t Q0, std::int64_t D,
                             std::int64_t Q_stop, std::int64_t max_steps = 1 << 22) {
    const std::int64_t s = isqrt(D);
    std::int64_t P = P0, Q = Q0;
    mpz_class a_prev = 0, a_cur = 1;  // A_{-2}, A_{-1}
    mpz_class b_prev = 1, b_cur = 0;  // B_{-2}, B_{-1}
    PqaResult out;
    for (int i = 0;; ++i) {
        if (i > max_steps) throw search_budget_error("continued fraction period too long");
        std::int64_t ai = (P + s) / Q; // Q > 0 throughout for these starts
        mpz_class a_next = ai * a_cur + a_prev;
        mpz_class b_next = ai * b_cur + b_prev;
        std::int64_t P_next = ai * Q - P;
        std::int64_t Q_next = (D - P_next * P_next) / Q;
        out.q_values.push_back(Q_next);
        out.q_signed.push_back((i % 2 == 0) ? -Q_next : Q_next); // (-1)^{i+1} Q_{i+1}
        if (Q_next == Q_stop) {
            out.g = mpz_class(Q0) * a_next - mpz_class(P0) * b_next;
            out.b = b_next;
            out.steps = i + 1;
            return out;
        }
        a_prev = a_cur;
        a_cur = a_next;
        b_prev = b_cur;
        b_cur = b_next;
        P = P_next;
        Q = Q_next;
    }
}

} // namespace detail

/// Fundamental unit (> 1) of the maximal order of Q(sqrt d), d > 1 squarefree,
/// from the continued fraction of sqrt d (or (1+sqrt d)/2 when d = 1 mod 4).
/// The norm is verified to be +-1.
inline QuadInt fundamental_unit(std::int64_t d) {
    if (d < 2) throw invalid_argument_error("fundamental unit needs d > 1");
    require_field_d(d);
    QuadInt u;
    u.d = d;
    std::int64_t m4 = d % 4;
    if (m4 == 1) {
        u.half = true;
        detail::PqaResult r = detail::pqa_until_q(1, 2, d, 2);
        // (G + B sqrt d)/2 = x + y*(1+sqrt d)/2 with y = B, x = (G-B)/2
        u.y = r.b;
        u.x = (r.g - r.b) / 2;
    } else {
        u.half = false;
        detail::PqaResult r = detail::pqa_until_q(0, 1, d, 1);
        u.x = r.g;
        u.y = r.b;
    }
    mpz_class n = norm(u);
    if (n != 1 && n != -1)
        throw invariant_violation_error("fundamental unit candidate has norm != +-1");
    return u;
}

/// Least k >= 1 with u^k in Z[m*alpha], i.e. with m dividing the alpha
/// coordinate of u^k. Only the coordinates mod m matter, so the iteration
/// runs on residues.
inline long long unit_index(const QuadInt& u, long long m) {
    if (m < 1) throw invalid_argument_error("unit_index needs m >= 1");
    if (m == 1) return 1;
    const std::int64_t ux = mpz_fdiv_ui(u.x.get_mpz_t(), m);
    const std::int64_t uy = mpz_fdiv_ui(u.y.get_mpz_t(), m);
    const std::int64_t c = u.half ? (((u.d - 1) / 4) % m + m) % m : ((u.d % m) + m) % m;
    std::int64_t x = 1, y = 0; // running power, starts at u^0
    const long long bound = 4 * m * m + 8;
    for (long long k = 1; k <= bound; ++k) {
        std::int64_t nx, ny;
        if (!u.half) {
            nx = (x * ux + ((y * uy) % m) * c) % m;
            ny = (x * uy + y * ux) % m;
        } else {
            nx = (x * ux + ((y * uy) % m) * c) % m;
            ny = (x * uy + y * ux + ((y * uy) % m)) % m;
        }
        x = nx;
        y = ny;
        if (y == 0) return k;
    }
    throw invariant_violation_error("unit power iteration failed to re-enter the order");
}

/// All values v with |v| < sqrt(disc) represented by the principal form
/// x^2 - d y^2, read off one period of the continued fraction of sqrt d.
/// Exact criterion: v is represented iff v appears among (-1)^i Q_i.
inline std::vector<std::int64_t> principal_form_small_values(std::int64_t d) {
    if (d < 2) throw invalid_argument_error("needs d > 1");
    require_field_d(d);
    detail::PqaResult r = detail::pqa_until_q(0, 1, d, 1);
    std::vector<std::int64_t> out = r.q_signed;
    // second half-period flips signs when the period length is odd
    if (r.steps % 2 == 1)
        for (std::int64_t v : r.q_signed) out.push_back(-v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Whether the (unique) prime ideal over the ramified prime p is principal in
/// the maximal order of Q(sqrt d), d > 0. Decidable through the represented
/// small values of the principal form when d = 2, 3 mod 4; the d = 1 mod 4
/// ramified case needs an explicit flag from the caller.
inline bool ramified_prime_principal(std::int64_t d, std::int64_t p) {
    if (d < 2) throw invalid_argument_error("needs d > 1");
    require_field_d(d);
    if (splitting_type(d, p) != Splitting::ramified)
        throw invalid_argument_error("p is not ramified in Q(sqrt d)");
    if (d % 4 == 1)
        throw unsupported_case_error("principality of a ramified prime for d = 1 mod 4 must be "
                                     "supplied explicitly");
    // P principal iff x^2 - d y^2 = +-p is solvable; for p | d we may trade p
    // for d/p (their classes are inverse up to the principal (sqrt d)).
    std::int64_t target = p;
    if (p != 2 && d % p == 0 && p > isqrt(d)) target = d / p;
    if (target * target >= d && target != 1) {
        if (target == d) return true; // P = (sqrt d)
        throw unsupported_case_error("ramified prime too large for the represented-value test");
    }
    if (target == 1) return true;
    std::vector<std::int64_t> vals = principal_form_small_values(d);
    return std::binary_search(vals.begin(), vals.end(), target) ||
           std::binary_search(vals.begin(), vals.end(), -target);
}

} // namespace dav
