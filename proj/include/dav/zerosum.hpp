#pragma once
// Zero-sum sequence machinery: decision procedure for zero-sum subsequences,
// exhaustive computation of the relative Davenport constants d_S(G) and
// D_S(G) with extractable witnesses, and the cyclic closed forms.
//
// The search core enumerates zero-sum-free multisets once per group, in
// non-decreasing element-index order, carrying the set of reachable nonempty
// subsums as a bitset. A branch dies the moment 0 becomes reachable, so the
// tree visited is exactly the family of zero-sum-free multisets. For every
// achievable sum the longest (lexicographically least) sequence is recorded;
// d_S(G) is then the maximum over the sums in S.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dav/error.hpp"
#include "dav/group.hpp"

namespace dav {

// A finite multiset of group elements. Canonical order is sorted.
struct GSequence {
    std::vector<ElemIndex> elems;

    std::size_t size() const { return elems.size(); }
    bool operator==(const GSequence&) const = default;
};

/// Value of d_S(G) together with a witness: a longest zero-sum-free S-sum
/// sequence. The witness is re-verified on construction and absent exactly
/// when the value is 0 (that is, when S = {0}).
struct SrdResult {
    int value = 0;
    std::optional<GSequence> witness;
};

// Persistent memo for d-values keyed by (canonical group, canonical S);
// implemented by the file cache, consulted when wired into the options.
struct DCacheBase {
    virtual ~DCacheBase() = default;
    virtual std::optional<SrdResult> lookup(const FabGroup& g, const Subset& s) = 0;
    virtual void store(const FabGroup& g, const Subset& s, const SrdResult& r) = 0;
};

struct ZerosumOptions {
    // Exhaustive search refuses groups larger than this; raise explicitly
    // for bigger runs, the closed forms are the right tool beyond desk scale.
    std::int64_t max_group_order = 255;
    DCacheBase* cache = nullptr;
};

namespace detail {

// Bitset over element indices. Eight words cover order 512, well past any
// override of the default 255 guard that could ever finish.
inline constexpr std::int64_t kMaxSearchOrder = 512;

struct SumBits {
    std::array<std::uint64_t, 8> w{};

    bool test(ElemIndex i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(ElemIndex i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
};

struct AddTables {
    std::int64_t n;
    std::vector<ElemIndex> add;  // n*n
    std::vector<ElemIndex> negv; // n

    explicit AddTables(const FabGroup& g) : n(g.order()) {
        add.resize(n * n);
        negv.resize(n);
        for (std::int64_t i = 0; i < n; ++i) {
            negv[i] = g.neg(static_cast<ElemIndex>(i));
            for (std::int64_t j = 0; j <= i; ++j) {
                ElemIndex s = g.add(static_cast<ElemIndex>(i), static_cast<ElemIndex>(j));
                add[i * n + j] = s;
                add[j * n + i] = s;
            }
        }
    }
};

} // namespace detail

// For each element a of G: the length of the longest zero-sum-free sequence
// with sum a, and the lexicographically least such sequence. d[0] is always 0
// (a sequence summing to 0 is its own zero-sum subsequence).
struct ZsfProfile {
    std::vector<int> d;
    std::vector<GSequence> witness;
    int max_d = 0; // = d(G), the classical small Davenport constant
};

namespace detail {

inline ZsfProfile compute_profile(const FabGroup& g) {
    const std::int64_t n = g.order();
    const std::int64_t nwords = (n + 63) / 64;
    AddTables t(g);
    ZsfProfile prof;
    prof.d.assign(n, 0);
    prof.witness.assign(n, {});

    std::vector<ElemIndex> path;
    SumBits reach;

    // Recursive enumeration of zero-sum-free multisets over elements 1..n-1
    // in non-decreasing index order. `reach` holds all nonempty subsums of
    // `path`; 0 is never in it.
    auto rec = [&](auto&& self, ElemIndex minElem, ElemIndex sum) -> void {
        for (std::int64_t e = minElem; e < n; ++e) {
            // adding e creates subsum 0 iff -e is already reachable
            if (reach.test(t.negv[e])) continue;
            SumBits saved = reach;
            for (std::int64_t word = 0; word < nwords; ++word) {
                std::uint64_t bits = saved.w[word];
                while (bits) {
                    int b = std::countr_zero(bits);
                    bits &= bits - 1;
                    reach.set(t.add[(word * 64 + b) * n + e]);
                }
            }
            reach.set(static_cast<ElemIndex>(e));
            ElemIndex s = t.add[sum * n + e];
            path.push_back(static_cast<ElemIndex>(e));
            const int len = static_cast<int>(path.size());
            if (len > prof.d[s]) {
                prof.d[s] = len;
                prof.witness[s].elems = path;
            }
            self(self, static_cast<ElemIndex>(e), s);
            path.pop_back();
            reach = saved;
        }
    };
    if (n > 1) rec(rec, 1, 0);
    for (std::int64_t a = 0; a < n; ++a) prof.max_d = std::max(prof.max_d, prof.d[a]);
    return prof;
}

struct ProfileCache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<const ZsfProfile>> map;

    static ProfileCache& instance() {
        static ProfileCache c;
        return c;
    }
};

} // namespace detail

/// Shared per-group profile; computed at most once per group per process.
inline std::shared_ptr<const ZsfProfile> zsf_profile(const FabGroup& g,
                                                     const ZerosumOptions& opt = {}) {
    if (g.order() > opt.max_group_order)
        throw size_guard_error("group order " + std::to_string(g.order()) +
                               " exceeds search guard " + std::to_string(opt.max_group_order));
    if (g.order() > detail::kMaxSearchOrder)
        throw size_guard_error("group order exceeds hard search capacity 512");
    auto& cache = detail::ProfileCache::instance();
    const std::string key = g.key();
    {
        std::lock_guard<std::mutex> lk(cache.mu);
        auto it = cache.map.find(key);
        if (it != cache.map.end()) return it->second;
    }
    auto prof = std::make_shared<const ZsfProfile>(detail::compute_profile(g));
    std::lock_guard<std::mutex> lk(cache.mu);
    auto [it, inserted] = cache.map.emplace(key, prof);
    return it->second; // idempotent: first writer wins
}

/// True iff some nonempty sub-multiset of seq sums to 0. Incremental
/// reachable-subsum table with early exit.
inline bool has_zero_sum_subsequence(const FabGroup& g, const GSequence& seq) {
    for (ElemIndex e : seq.elems)
        if (static_cast<std::int64_t>(e) >= g.order())
            throw element_domain_error("sequence element outside group");
    std::vector<char> reach(g.order(), 0);
    std::vector<ElemIndex> live;
    for (ElemIndex e : seq.elems) {
        if (e == g.zero() || reach[g.neg(e)]) return true;
        std::vector<ElemIndex> fresh;
        if (!reach[e]) fresh.push_back(e);
        for (ElemIndex x : live) {
            ElemIndex y = g.add(x, e);
            if (!reach[y]) {
                reach[y] = 1; // mark now to avoid duplicates within this round
                fresh.push_back(y);
            }
        }
        for (ElemIndex y : fresh) {
            reach[y] = 1;
            live.push_back(y);
        }
    }
    return reach[g.zero()];
}

namespace detail {

inline void verify_srd(const FabGroup& g, const Subset& s, const SrdResult& r) {
    if (r.value == 0) {
        if (r.witness) throw invariant_violation_error("zero d-value must have no witness");
        return;
    }
    if (!r.witness) throw invariant_violation_error("positive d-value needs a witness");
    const GSequence& w = *r.witness;
    if (static_cast<int>(w.size()) != r.value)
        throw invariant_violation_error("witness length differs from d-value");
    ElemIndex sum = g.zero();
    for (ElemIndex e : w.elems) sum = g.add(sum, e);
    if (!s.contains(sum)) throw invariant_violation_error("witness sum not in S");
    if (has_zero_sum_subsequence(g, w))
        throw invariant_violation_error("witness has a zero-sum subsequence");
}

} // namespace detail

/// d_S(G): the largest n such that some S-sum sequence of length n has no
/// zero-sum subsequence. Returns 0 with no witness exactly when S = {0}.
inline SrdResult small_rel_davenport(const FabGroup& g, const Subset& s,
                                     const ZerosumOptions& opt = {}) {
    if (s.empty()) throw invalid_argument_error("subset S must be nonempty");
    for (ElemIndex e : s.elems)
        if (static_cast<std::int64_t>(e) >= g.order())
            throw element_domain_error("subset element outside group");
    if (opt.cache) {
        if (std::optional<SrdResult> hit = opt.cache->lookup(g, s)) {
            detail::verify_srd(g, s, *hit);
            return *hit;
        }
    }
    auto prof = zsf_profile(g, opt);
    SrdResult out;
    for (ElemIndex a : s.elems) {
        if (prof->d[a] > out.value) {
            out.value = prof->d[a];
            out.witness = prof->witness[a];
        } else if (prof->d[a] == out.value && out.value > 0 &&
                   prof->witness[a].elems < out.witness->elems) {
            out.witness = prof->witness[a];
        }
    }
    if (out.value == 0) out.witness.reset();
    detail::verify_srd(g, s, out);
    if (opt.cache) opt.cache->store(g, s, out);
    return out;
}

/// D_S(G) = d_S(G) + 1.
inline int rel_davenport(const FabGroup& g, const Subset& s, const ZerosumOptions& opt = {}) {
    return small_rel_davenport(g, s, opt).value + 1;
}

/// The classical Davenport constant D(G) = D_G(G).
inline int davenport(const FabGroup& g, const ZerosumOptions& opt = {}) {
    return zsf_profile(g, opt)->max_d + 1;
}

/// Closed form for d over the coset g + <m> of the cyclic group Z_n:
/// n - gcd(g, m). Requires m | n; g is reduced mod m into (0, m].
inline std::int64_t cyclic_small_rel_coset(std::int64_t n, std::int64_t m, std::int64_t g) {
    if (n < 1 || m < 1 || n % m != 0)
        throw invalid_argument_error("cyclic coset form needs m | n");
    g %= m;
    if (g <= 0) g += m;
    return n - std::gcd(g, m);
}

/// Relative Davenport constant D_a(Z_n): n for a = 0, else n - n/ord(a).
inline std::int64_t skalba_relative(std::int64_t n, std::int64_t a) {
    if (n < 1 || a < 0 || a >= n)
        throw invalid_argument_error("skalba_relative needs 0 <= a < n");
    if (a == 0) return n;
    return n - std::gcd(a, n);
}

} // namespace dav
