#include <catch_amalgamated.hpp>

#include "sft/permutation.hpp"
#include "test_util.hpp"

using namespace sft;

TEST_CASE("identity and basic products") {
    Permutation id(4);
    CHECK(id.is_identity());
    CHECK(id.order() == 1);
    Permutation t = Permutation::parse_cycles("(1,2)", 4);
    CHECK((t * t).is_identity());
    CHECK(t.inverse() == t);
    CHECK_FALSE(t.is_identity());
}

TEST_CASE("left action composition") {
    // (g*h)(x) = g(h(x))
    Permutation g = Permutation::parse_cycles("(1,2,3)", 3);
    Permutation h = Permutation::parse_cycles("(1,2)", 3);
    Permutation gh = g * h;
    for (int x = 0; x < 3; ++x) CHECK(gh[x] == g[h[x]]);
}

TEST_CASE("cycle notation round trip") {
    CHECK(Permutation(5).to_cycle_string() == "()");
    CHECK(Permutation::parse_cycles("()", 5).is_identity());
    std::string s = "(1,9)(2,10)(3,11)(4,12)(5,13)(6,14)(7,15)(8,16)";
    Permutation p = Permutation::parse_cycles(s, 16);
    CHECK(p.to_cycle_string() == s);
    CHECK(p.order() == 2);

    auto g = test::rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Permutation q = test::random_permutation(12, g);
        CHECK(Permutation::parse_cycles(q.to_cycle_string(), 12) == q);
    }
}

TEST_CASE("cycle parse errors") {
    CHECK_THROWS_AS(Permutation::parse_cycles("(1,2", 4), Error);
    CHECK_THROWS_AS(Permutation::parse_cycles("(1,5)", 4), Error);
    CHECK_THROWS_AS(Permutation::parse_cycles("(1,2)(2,3)", 4), Error);
    CHECK_THROWS_AS(Permutation::parse_cycles("(1)", 4), Error);
    CHECK_THROWS_AS(Permutation::parse_cycles("", 4), Error);
}

TEST_CASE("order equals lcm of cycle lengths") {
    Permutation p = Permutation::parse_cycles("(1,2,3)(4,5)", 6);
    CHECK(p.order() == 6);
    Permutation q = Permutation::parse_cycles("(1,2,3,4)(5,6)", 6);
    CHECK(q.order() == 4);
}

TEST_CASE("commutator and conjugation") {
    auto g = test::rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        Permutation a = test::random_permutation(8, g);
        Permutation b = test::random_permutation(8, g);
        CHECK(commutator(a, b) == a.inverse() * b.inverse() * a * b);
        CHECK(a.conjugated_by(b) == b.inverse() * a * b);
        CHECK((a * a.inverse()).is_identity());
    }
}

TEST_CASE("image array validation") {
    CHECK_THROWS_AS(Permutation(std::vector<uint16_t>{0, 0, 1}), Error);
    CHECK_THROWS_AS(Permutation(std::vector<uint16_t>{0, 5}), Error);
}
