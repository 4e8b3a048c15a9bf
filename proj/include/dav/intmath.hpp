#pragma once
// Small exact integer helpers shared across the library.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dav/error.hpp"

namespace dav {

inline std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

inline std::int64_t isqrt(std::int64_t n) {
    if (n < 0) throw invalid_argument_error("isqrt: negative argument");
    if (n < 2) return n;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct PrimePower {
    std::int64_t p;
    int e;
};

inline std::vector<PrimePower> factorize(std::int64_t n) {
    if (n < 1) throw invalid_argument_error("factorize: argument must be positive");
    std::vector<PrimePower> out;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) return false;
    return true;
}

inline bool is_squarefree(std::int64_t n) {
    if (n == 0) return false;
    if (n < 0) n = -n;
    for (const auto& pp : factorize(n))
        if (pp.e > 1) return false;
    return true;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> out{1};
    for (const auto& pp : factorize(n)) {
        const std::size_t k = out.size();
        std::int64_t q = 1;
        for (int e = 1; e <= pp.e; ++e) {
            q *= pp.p;
            for (std::size_t i = 0; i < k; ++i) out.push_back(out[i] * q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// g = gcd(a,b) together with x,y such that a*x + b*y = g.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    if (b == 0) {
        x = (a < 0 ? -1 : 1);
        y = 0;
        return a < 0 ? -a : a;
    }
    std::int64_t x1, y1;
    std::int64_t g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline std::int64_t mod_inv(std::int64_t a, std::int64_t m) {
    std::int64_t x, y;
    std::int64_t g = ext_gcd(((a % m) + m) % m, m, x, y);
    if (g != 1) throw invalid_argument_error("mod_inv: arguments not coprime");
    return ((x % m) + m) % m;
}

inline std::int64_t mod_pow(std::int64_t b, std::int64_t e, std::int64_t m) {
    b = ((b % m) + m) % m;
    std::int64_t r = 1;
    while (e > 0) {
        if (e & 1) r = static_cast<std::int64_t>((__int128)r * b % m);
        b = static_cast<std::int64_t>((__int128)b * b % m);
        e >>= 1;
    }
    return r;
}

// Legendre symbol (a/p) for an odd prime p.
inline int legendre(std::int64_t a, std::int64_t p) {
    a = ((a % p) + p) % p;
    if (a == 0) return 0;
    std::int64_t r = mod_pow(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

} // namespace dav
