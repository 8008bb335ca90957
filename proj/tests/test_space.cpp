#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "ranknas/errors.hpp"
#include "ranknas/space.hpp"

using namespace ranknas;

TEST_CASE("builtin spaces have the documented sizes") {
    const SearchSpace micro = builtin_space("micro");
    CHECK(micro.n_edges() == 3);
    CHECK(micro.n_ops() == 4);
    CHECK(micro.num_architectures() == 64);

    const SearchSpace small = builtin_space("small");
    CHECK(small.n_edges() == 6);
    CHECK(small.n_ops() == 5);
    CHECK(small.num_architectures() == 15625);

    CHECK_THROWS_AS(builtin_space("bogus"), std::invalid_argument);
}

TEST_CASE("edges are lexicographic (i, j) pairs covering the full DAG") {
    const SearchSpace small = builtin_space("small");
    const std::vector<std::pair<int, int>> want{{0, 1}, {0, 2}, {0, 3},
                                                {1, 2}, {1, 3}, {2, 3}};
    CHECK(small.edges == want);
}

TEST_CASE("canonical text form round-trips") {
    const SearchSpace micro = builtin_space("micro");
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Architecture a = random_architecture(micro, rng);
        CHECK(Architecture::parse(a.to_string()) == a);
    }
    CHECK(Architecture::parse("0-3-1").to_string() == "0-3-1");
    CHECK_THROWS_AS(Architecture::parse("1--2"), std::invalid_argument);
    CHECK_THROWS_AS(Architecture::parse("a-b"), std::invalid_argument);
}

TEST_CASE("random architectures are uniform per edge") {
    const SearchSpace micro = builtin_space("micro");
    Rng rng(23);
    std::map<std::pair<int, int>, int> counts; // (edge, op) -> count
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const Architecture a = random_architecture(micro, rng);
        CHECK(a.codes.size() == 3);
        for (int e = 0; e < 3; ++e) ++counts[{e, a.codes[e]}];
    }
    for (int e = 0; e < 3; ++e) {
        for (int op = 0; op < 4; ++op) {
            const double freq = counts[{e, op}] / static_cast<double>(draws);
            CHECK(freq > 0.22);
            CHECK(freq < 0.28);
        }
    }
    Rng r1(42), r2(42);
    CHECK(random_architecture(micro, r1) == random_architecture(micro, r2));
}

TEST_CASE("mutation changes exactly one position, uniformly") {
    const SearchSpace micro = builtin_space("micro");
    Rng rng(31);
    const Architecture base = random_architecture(micro, rng);
    std::map<int, int> pos_counts;
    const int draws = 9000;
    for (int i = 0; i < draws; ++i) {
        const Architecture m = mutate(micro, base, rng);
        CHECK(hamming_distance(base, m) == 1);
        CHECK(!(m == base));
        for (int e = 0; e < 3; ++e)
            if (m.codes[e] != base.codes[e]) ++pos_counts[e];
    }
    for (int e = 0; e < 3; ++e) {
        const double freq = pos_counts[e] / static_cast<double>(draws);
        CHECK(freq > 0.30);
        CHECK(freq < 0.37);
    }
}

TEST_CASE("repeated mutation reaches the whole micro space") {
    const SearchSpace micro = builtin_space("micro");
    Rng rng(47);
    Architecture a = random_architecture(micro, rng);
    std::set<std::string> seen{a.to_string()};
    for (int i = 0; i < 10000; ++i) {
        a = mutate(micro, a, rng);
        seen.insert(a.to_string());
    }
    CHECK(seen.size() == 64);
}

TEST_CASE("hamming distance satisfies the metric axioms") {
    CHECK(hamming_distance(Architecture::parse("0-1-2"), Architecture::parse("0-1-2")) == 0);
    CHECK(hamming_distance(Architecture::parse("0-1-2"), Architecture::parse("0-3-2")) == 1);
    CHECK(hamming_distance(Architecture::parse("1-1-1"), Architecture::parse("2-0-2")) == 3);
    CHECK_THROWS_AS(hamming_distance(Architecture::parse("1-1"), Architecture::parse("1-1-1")),
                    std::invalid_argument);

    const SearchSpace small = builtin_space("small");
    Rng rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        const Architecture x = random_architecture(small, rng);
        const Architecture y = random_architecture(small, rng);
        const Architecture z = random_architecture(small, rng);
        CHECK(hamming_distance(x, y) == hamming_distance(y, x));
        CHECK(hamming_distance(x, x) == 0);
        CHECK(hamming_distance(x, z) <= hamming_distance(x, y) + hamming_distance(y, z));
    }
}

TEST_CASE("enumeration is lexicographic, distinct and complete") {
    const SearchSpace micro = builtin_space("micro");
    const auto all = enumerate_space(micro);
    CHECK(all.size() == 64);
    CHECK(all.front().to_string() == "0-0-0");
    CHECK(all.back().to_string() == "3-3-3");
    std::set<std::string> seen;
    for (size_t i = 0; i < all.size(); ++i) {
        seen.insert(all[i].to_string());
        if (i > 0) CHECK(all[i - 1] < all[i]);
    }
    CHECK(seen.size() == 64);

    CHECK_THROWS_AS(enumerate_space(builtin_space("small"), 100), CapacityError);
}
