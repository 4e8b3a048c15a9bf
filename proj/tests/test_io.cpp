#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dav/cache.hpp"
#include "dav/golden.hpp"
#include "dav/json_io.hpp"

using namespace dav;

TEST_CASE("group JSON round trip") {
    FabGroup g = group_from_json(json::parse(R"({"invariant_factors":[2,6]})"));
    CHECK(g.factors() == std::vector<std::int64_t>{2, 6});
    CHECK(group_to_json(g).dump() == R"({"invariant_factors":[2,6]})");

    CHECK(group_from_json(json::parse("[6]")).order() == 6);
    CHECK(group_from_json(json::parse("[]")).trivial());
    CHECK_THROWS_AS(group_from_json(json::parse(R"("Z6")")), parse_error);
    CHECK_THROWS_AS(group_from_json(json::parse("[1]")), invalid_group_error);
}

TEST_CASE("element and subset JSON") {
    FabGroup g = make_group({2, 6});
    CHECK(element_from_json(g, json::parse("[1,3]")) == 9);
    CHECK(element_to_json(g, 9).dump() == "[1,3]");
    CHECK_THROWS_AS(element_from_json(g, json::parse("[1]")), element_domain_error);
    CHECK_THROWS_AS(element_from_json(g, json::parse("[1,7]")), element_domain_error);
    CHECK_THROWS_AS(element_from_json(g, json::parse("3")), parse_error);

    Subset s = subset_from_json(g, json::parse("[[1,3],[0,2],[1,3]]"));
    CHECK(s.size() == 2); // duplicates collapse
    CHECK(subset_to_json(g, s).dump() == "[[0,2],[1,3]]");
}

TEST_CASE("order class data JSON") {
    json j = json::parse(R"({
        "group": {"invariant_factors":[6]},
        "ker_tau": [[0],[2],[4]],
        "p_class": [1],
        "a": 2,
        "p_principal": false,
        "conductor_principal": true
    })");
    OrderClassInput in = order_class_from_json(j);
    CHECK(in.data.cl_r.order() == 6);
    CHECK(in.data.ker_tau.size() == 3);
    CHECK(in.data.a == 2);
    CHECK(in.primes_over_conductor == 1);
    CHECK(elasticity_prime_conductor(in.data).str() == "4");

    // flags may be omitted entirely; the data forces them
    json j2 = json::parse(R"({
        "group": [6], "ker_tau": [[0],[2],[4]], "p_class": [1], "a": 2
    })");
    OrderClassInput in2 = order_class_from_json(j2);
    CHECK(!in2.data.p_principal);
    CHECK(in2.data.conductor_principal);

    // inconsistent flags are rejected
    json j3 = j;
    j3["p_principal"] = true;
    CHECK_THROWS_AS(order_class_from_json(j3), precondition_error);

    CHECK_THROWS_AS(order_class_from_json(json::parse(R"({"group":[6]})")), parse_error);

    // round trip embeds the derived quotient element
    json echo = order_class_to_json(in);
    CHECK(echo["a"] == 2);
    CHECK(echo["p_class"].dump() == "[1]");
}

TEST_CASE("quadratic spec JSON") {
    QuadInput in = quad_input_from_json(json::parse(R"({"d":987,"p":3,"a":8,"h":4})"));
    CHECK(in.d == 987);
    CHECK(in.h == 4);
    CHECK(!in.p_principal.has_value());
    CHECK(!in.ladder.has_value());

    QuadInput lad = quad_input_from_json(json::parse(R"({
        "d": 2, "p": 3, "a": 2,
        "ladder": {"group": [], "kernels": [[[]],[[]],[[]]]}
    })"));
    REQUIRE(lad.ladder.has_value());
    CHECK(lad.ladder->cl.trivial());
    CHECK(lad.ladder->kernel.size() == 3);

    CHECK_THROWS_AS(quad_input_from_json(json::parse(R"({"d":2,"p":3})")), parse_error);
    CHECK_THROWS_AS(quad_input_from_json(json::parse(R"({"d":2,"p":3,"a":1,"ladder":{}})")),
                    parse_error);
}

TEST_CASE("file cache round trip with verification") {
    const std::string path = "test_dcache.tmp";
    std::remove(path.c_str());
    FabGroup g = make_group({6});
    Subset coset = Subset::of(g, {1, 3, 5});
    {
        FileDCache cache = FileDCache::load(path);
        ZerosumOptions opt;
        opt.cache = &cache;
        SrdResult r = small_rel_davenport(g, coset, opt);
        CHECK(r.value == 5);
        CHECK(cache.hits() == 0);
        CHECK(cache.misses() == 1);
        small_rel_davenport(g, coset, opt);
        CHECK(cache.hits() == 1);
        cache.save();
    }
    {
        FileDCache cache = FileDCache::load(path);
        CHECK(cache.size() == 1);
        ZerosumOptions opt;
        opt.cache = &cache;
        SrdResult r = small_rel_davenport(g, coset, opt);
        CHECK(r.value == 5);
        CHECK(cache.hits() == 1);
        CHECK(cache.misses() == 0);
    }
    std::remove(path.c_str());
}

TEST_CASE("corrupt cache lines are skipped, never fatal") {
    const std::string path = "test_dcache_corrupt.tmp";
    {
        std::ofstream out(path);
        out << "garbage line without separators\n";
        out << R"({"invariant_factors":[6]}|not-a-hash|5|[])" << "\n";
        out << R"({"invariant_factors":[6]}|0123456789abcdef|-3|[])" << "\n";
        out << R"({"invariant_factors":[6]}|0123456789abcdef|5|{"oops":1})" << "\n";
    }
    std::ostringstream warnings;
    FileDCache cache = FileDCache::load(path, warnings);
    CHECK(cache.size() == 0);
    CHECK(cache.saw_corruption());
    CHECK(warnings.str().find("skipping corrupt line") != std::string::npos);

    // a record with a forged value fails witness verification and is ignored
    {
        std::ofstream out(path, std::ios::trunc);
        FabGroup g = make_group({6});
        Subset coset = Subset::of(g, {1, 3, 5});
        out << group_to_json(g).dump() << "|" << subset_hash(g, coset)
            << "|2|[[1],[1]]\n"; // claims d = 2; the real value is 5
    }
    FileDCache forged = FileDCache::load(path);
    FabGroup g = make_group({6});
    Subset coset = Subset::of(g, {1, 3, 5});
    ZerosumOptions opt;
    opt.cache = &forged;
    // the forged witness sums to 2, which is not in S, so the record is
    // dropped and the value recomputed
    CHECK(small_rel_davenport(g, coset, opt).value == 5);
    std::remove(path.c_str());
}

TEST_CASE("golden rows all pass") {
    auto rows = reproduce_paper_rows();
    CHECK(rows.size() == 6);
    for (const auto& r : rows) {
        CAPTURE(r.name);
        CAPTURE(r.actual);
        CHECK(r.pass);
    }
}
