#include <doctest.h>

#include <algorithm>
#include <random>

#include "dav/zerosum.hpp"
#include "oracles.hpp"

using namespace dav;

namespace {
Subset coset_of(const FabGroup& g, ElemIndex rep, const Subset& h) {
    std::vector<ElemIndex> v;
    for (ElemIndex e : h.elems) v.push_back(g.add(rep, e));
    return Subset::of(g, std::move(v));
}
} // namespace

TEST_CASE("has_zero_sum_subsequence") {
    FabGroup z5 = make_group({5});
    CHECK(has_zero_sum_subsequence(z5, {{1, 4}}));
    CHECK(!has_zero_sum_subsequence(z5, {{1, 1}}));

    FabGroup v = make_group({2, 2});
    ElemIndex a = 2, b = 1, c = 3; // (1,0), (0,1), (1,1)
    CHECK(has_zero_sum_subsequence(v, {{a, b, c}}));
    CHECK(!has_zero_sum_subsequence(v, {{a, b}}));

    CHECK(has_zero_sum_subsequence(z5, {{0}})); // 0 alone is a zero-sum subsequence
    CHECK(!has_zero_sum_subsequence(z5, {{}}));

    // multiset property: order never matters
    std::mt19937 rng(7);
    FabGroup z9 = make_group({9});
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ElemIndex> seq;
        int len = 1 + static_cast<int>(rng() % 7);
        for (int i = 0; i < len; ++i) seq.push_back(static_cast<ElemIndex>(rng() % 9));
        bool ref = has_zero_sum_subsequence(z9, {seq});
        for (int s = 0; s < 5; ++s) {
            std::shuffle(seq.begin(), seq.end(), rng);
            CHECK(has_zero_sum_subsequence(z9, {seq}) == ref);
        }
    }
}

TEST_CASE("small_rel_davenport on cosets and singletons") {
    FabGroup z6 = make_group({6});
    SrdResult r = small_rel_davenport(z6, Subset::of(z6, {1, 3, 5}));
    CHECK(r.value == 5);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->elems == std::vector<ElemIndex>{1, 1, 1, 1, 1});

    CHECK(small_rel_davenport(z6, Subset::of(z6, {0})).value == 0);
    CHECK(!small_rel_davenport(z6, Subset::of(z6, {0})).witness.has_value());

    FabGroup z4 = make_group({4});
    SrdResult r4 = small_rel_davenport(z4, Subset::of(z4, {2}));
    CHECK(r4.value == 2);
    CHECK(r4.witness->elems == std::vector<ElemIndex>{1, 1});

    CHECK_THROWS_AS(small_rel_davenport(z6, Subset{}), invalid_argument_error);
}

TEST_CASE("rel_davenport and davenport") {
    FabGroup z6 = make_group({6});
    CHECK(rel_davenport(z6, Subset::of(z6, {1, 3, 5})) == 6);
    CHECK(rel_davenport(z6, Subset::of(z6, {0})) == 1);
    CHECK(rel_davenport(z6, oracle::full_set(z6)) == 6);

    CHECK(davenport(make_group({5})) == 5);
    CHECK(davenport(make_group({})) == 1);
    CHECK(davenport(make_group({2, 2})) == 3);
}

TEST_CASE("minimal-n oracle agrees with d+1 on small groups") {
    // independent route for the successor identity D_S = d_S + 1
    for (const auto& factors : {std::vector<std::int64_t>{5}, {6}, {2, 2}, {8}, {2, 4}, {3, 3}}) {
        FabGroup g = make_group(factors);
        std::mt19937 rng(42);
        std::vector<Subset> picks{oracle::full_set(g), Subset::of(g, {0})};
        for (std::int64_t e = 1; e < g.order(); ++e)
            picks.push_back(oracle::singleton(g, static_cast<ElemIndex>(e)));
        for (int t = 0; t < 4; ++t) {
            std::vector<ElemIndex> v;
            for (std::int64_t e = 0; e < g.order(); ++e)
                if (rng() & 1) v.push_back(static_cast<ElemIndex>(e));
            if (!v.empty()) picks.push_back(Subset::of(g, v));
        }
        for (const Subset& s : picks) {
            int d = small_rel_davenport(g, s).value;
            CHECK(oracle::minimal_n_rel_davenport(g, s) == d + 1);
        }
    }
}

TEST_CASE("engine agrees with the slow independent search") {
    for (const auto& factors :
         {std::vector<std::int64_t>{7}, {12}, {2, 6}, {2, 2, 2}, {3, 3}, {2, 4}}) {
        FabGroup g = make_group(factors);
        // exhaustive over all nonempty subsets when feasible, else sampled
        if (g.order() <= 8) {
            for (std::uint32_t mask = 1; mask < (1u << g.order()); ++mask) {
                std::vector<ElemIndex> v;
                for (std::int64_t e = 0; e < g.order(); ++e)
                    if (mask & (1u << e)) v.push_back(static_cast<ElemIndex>(e));
                Subset s = Subset::of(g, v);
                CHECK(small_rel_davenport(g, s).value == oracle::d_slow(g, s));
            }
        } else {
            std::mt19937 rng(99);
            for (int t = 0; t < 25; ++t) {
                std::vector<ElemIndex> v;
                for (std::int64_t e = 0; e < g.order(); ++e)
                    if (rng() % 3 == 0) v.push_back(static_cast<ElemIndex>(e));
                if (v.empty()) v.push_back(static_cast<ElemIndex>(1 + rng() % (g.order() - 1)));
                Subset s = Subset::of(g, v);
                CHECK(small_rel_davenport(g, s).value == oracle::d_slow(g, s));
            }
        }
    }
}

TEST_CASE("cyclic closed form for cosets") {
    CHECK(cyclic_small_rel_coset(6, 2, 1) == 5);
    CHECK(cyclic_small_rel_coset(12, 4, 2) == 10);
    // g outside (0, m] is reduced
    CHECK(cyclic_small_rel_coset(12, 4, 6) == cyclic_small_rel_coset(12, 4, 2));
    CHECK(cyclic_small_rel_coset(12, 4, 0) == cyclic_small_rel_coset(12, 4, 4));
    for (std::int64_t n : {5, 9, 10}) {
        for (std::int64_t gg = 1; gg <= n; ++gg)
            if (std::gcd(gg, n) == 1) CHECK(cyclic_small_rel_coset(n, n, gg) == n - 1);
    }
    CHECK_THROWS_AS(cyclic_small_rel_coset(12, 5, 1), invalid_argument_error);

    // brute force via the engine on the explicit coset
    FabGroup z12 = make_group({12});
    CHECK(small_rel_davenport(z12, Subset::of(z12, {2, 6, 10})).value == 10);
    for (std::int64_t n = 1; n <= 14; ++n) {
        FabGroup zn = make_group(n == 1 ? std::vector<std::int64_t>{} : std::vector<std::int64_t>{n});
        for (std::int64_t m : divisors(n)) {
            Subgroup h = subgroup_generated(zn, {static_cast<ElemIndex>(m % n)});
            for (std::int64_t gg = 1; gg <= m; ++gg) {
                Subset alpha = coset_of(zn, static_cast<ElemIndex>(gg % n), h.set);
                CHECK(cyclic_small_rel_coset(n, m, gg) ==
                      small_rel_davenport(zn, alpha).value);
            }
        }
    }
}

TEST_CASE("skalba closed form") {
    CHECK(skalba_relative(6, 0) == 6);
    CHECK(skalba_relative(6, 2) == 4);
    CHECK(skalba_relative(6, 5) == 5);
    CHECK_THROWS_AS(skalba_relative(6, 6), invalid_argument_error);

    // D_a for a != 0 equals d over the singleton; D_0 = D(G)
    for (std::int64_t n = 2; n <= 12; ++n) {
        FabGroup zn = make_group({n});
        CHECK(skalba_relative(n, 0) == davenport(zn));
        for (std::int64_t a = 1; a < n; ++a)
            CHECK(skalba_relative(n, a) ==
                  small_rel_davenport(zn, oracle::singleton(zn, static_cast<ElemIndex>(a))).value);
    }
}

TEST_CASE("monotonicity, upper bound, successor, negation") {
    std::mt19937 rng(2024);
    for (const auto& factors : {std::vector<std::int64_t>{10}, {12}, {2, 6}, {3, 3}}) {
        FabGroup g = make_group(factors);
        const int dav = davenport(g);
        for (int t = 0; t < 30; ++t) {
            std::vector<ElemIndex> v1, v2;
            for (std::int64_t e = 0; e < g.order(); ++e) {
                if (rng() % 3 == 0) v1.push_back(static_cast<ElemIndex>(e));
                if (rng() % 3 == 0) v2.push_back(static_cast<ElemIndex>(e));
            }
            if (v1.empty()) v1.push_back(0);
            std::vector<ElemIndex> v12 = v1;
            v12.insert(v12.end(), v2.begin(), v2.end());
            Subset s1 = Subset::of(g, v1);
            Subset s2 = Subset::of(g, v12); // s1 subset of s2
            SrdResult r1 = small_rel_davenport(g, s1);
            SrdResult r2 = small_rel_davenport(g, s2);
            CHECK(r1.value <= r2.value);
            CHECK(rel_davenport(g, s1) <= rel_davenport(g, s2));
            CHECK(rel_davenport(g, s1) <= dav);
            CHECK(rel_davenport(g, s1) == r1.value + 1);
            // negation invariance
            CHECK(small_rel_davenport(g, negate_set(g, s1)).value == r1.value);
        }
    }
}

TEST_CASE("automorphism invariance under coordinate unit scaling") {
    std::mt19937 rng(5);
    for (const auto& factors : {std::vector<std::int64_t>{12}, {2, 6}, {3, 3}}) {
        FabGroup g = make_group(factors);
        // every tuple of per-coordinate units gives an automorphism
        std::vector<std::vector<std::int64_t>> units(g.rank());
        for (std::size_t t = 0; t < g.rank(); ++t)
            for (std::int64_t u = 1; u < g.factors()[t]; ++u)
                if (std::gcd(u, g.factors()[t]) == 1) units[t].push_back(u);
        std::vector<std::size_t> pick(g.rank(), 0);
        while (true) {
            auto sigma = [&](ElemIndex x) {
                Element e = g.element(x);
                for (std::size_t t = 0; t < g.rank(); ++t)
                    e.coords[t] = (e.coords[t] * units[t][pick[t]]) % g.factors()[t];
                return g.index(e);
            };
            for (int t = 0; t < 6; ++t) {
                std::vector<ElemIndex> v, w;
                for (std::int64_t e = 0; e < g.order(); ++e)
                    if (rng() % 3 == 0) v.push_back(static_cast<ElemIndex>(e));
                if (v.empty()) v.push_back(static_cast<ElemIndex>(g.order() - 1));
                for (ElemIndex e : v) w.push_back(sigma(e));
                CHECK(small_rel_davenport(g, Subset::of(g, v)).value ==
                      small_rel_davenport(g, Subset::of(g, w)).value);
            }
            std::size_t t = 0;
            for (; t < g.rank(); ++t) {
                if (++pick[t] < units[t].size()) break;
                pick[t] = 0;
            }
            if (t == g.rank()) break;
        }
    }
}

TEST_CASE("quotient lifting inequality") {
    for (const auto& factors : {std::vector<std::int64_t>{12}, {2, 6}, {2, 4}}) {
        FabGroup g = make_group(factors);
        for (const Subgroup& h : all_subgroups(g)) {
            auto [q, p] = quotient(g, h.set);
            std::mt19937 rng(17);
            for (int t = 0; t < 8; ++t) {
                std::vector<ElemIndex> v;
                for (std::int64_t e = 0; e < q.order(); ++e)
                    if (rng() & 1) v.push_back(static_cast<ElemIndex>(e));
                if (v.empty()) v.push_back(q.zero());
                Subset sq = Subset::of(q, v);
                Subset sg = preimage(p, sq);
                CHECK(small_rel_davenport(q, sq).value <= small_rel_davenport(g, sg).value);
            }
        }
    }
}

TEST_CASE("rank-2 Davenport cross-check") {
    for (std::int64_t n1 = 1; n1 <= 6; ++n1) {
        for (std::int64_t n2 = n1; n2 <= 6; ++n2) {
            if (n2 % n1) continue;
            std::vector<std::int64_t> f;
            if (n1 > 1) f.push_back(n1);
            if (n2 > 1) f.push_back(n2);
            CHECK(davenport(make_group(f)) == n1 + n2 - 1);
        }
    }
}

TEST_CASE("size guard") {
    FabGroup big = make_group({257});
    CHECK_THROWS_AS(davenport(big), size_guard_error);
    ZerosumOptions tight;
    tight.max_group_order = 20;
    CHECK_THROWS_AS(davenport(make_group({24}), tight), size_guard_error);
    CHECK(davenport(make_group({24})) == 24); // default guard admits order 24
}

TEST_CASE("results are deterministic across repeated calls") {
    FabGroup g = make_group({2, 6});
    Subset s = Subset::of(g, {1, 4, 7});
    SrdResult a = small_rel_davenport(g, s);
    SrdResult b = small_rel_davenport(g, s);
    CHECK(a.value == b.value);
    CHECK(a.witness == b.witness);
}
