#include <doctest.h>

#include "test_support.hpp"
#include "truthboost/outcome_tree.hpp"

#include <numeric>
#include <sstream>

using namespace truthboost;
namespace t = truthboost::testing;

TEST_CASE("single classifier counts") {
    const OutcomeMatrix m(3, 1, {-1, -1, 1});
    const auto tree = build_tree(m);
    CHECK(tree.depth() == 1);
    CHECK(tree.count(1) == 3);
    CHECK(tree.count(2) == 2);
    CHECK(tree.count(3) == 1);
}

TEST_CASE("reference leaf counts give the expected internal levels") {
    const auto tree = t::reference_tree();
    CHECK(tree.n() == 1000);
    CHECK(std::vector<std::uint64_t>(tree.level(2).begin(), tree.level(2).end()) == std::vector<std::uint64_t>{20, 60, 53, 867});
    CHECK(std::vector<std::uint64_t>(tree.level(1).begin(), tree.level(1).end()) == std::vector<std::uint64_t>{80, 920});
}

TEST_CASE("genealogy examples") {
    CHECK(genealogy(5).signs == std::vector<int>{-1, 1});
    CHECK(genealogy(13).signs == std::vector<int>{1, -1, 1});
    CHECK(genealogy(2).signs == std::vector<int>{-1});
    CHECK(genealogy(3).signs == std::vector<int>{1});
    CHECK_THROWS_AS(genealogy(1), validation_error);
    CHECK_THROWS_AS(genealogy(0), validation_error);
}

TEST_CASE("genealogy round trip") {
    for (std::uint64_t j = 2; j < 4096; ++j) {
        const auto g = genealogy(j);
        CHECK(g.signs.size() == node_level(j));
        CHECK(genealogy_index(g) == j);
    }
}

TEST_CASE("leaf_table_p3 labels") {
    const auto table = leaf_table_p3(t::reference_tree());
    CHECK(table.n == std::array<std::uint64_t, 4>{4, 9, 18, 16});
    CHECK(table.m == std::array<std::uint64_t, 4>{767, 42, 44, 100});
    CHECK(tree_from_table_p3(table) == t::reference_tree());

    const std::array<std::uint64_t, 8> equal = {5, 5, 5, 5, 5, 5, 5, 5};
    const auto balanced = leaf_table_p3(OutcomeTree::from_leaves(3, equal));
    CHECK(balanced.n == balanced.m);

    const std::array<std::uint64_t, 8> unanimous = {0, 0, 0, 0, 0, 0, 0, 12};
    const auto all_right = leaf_table_p3(OutcomeTree::from_leaves(3, unanimous));
    CHECK(all_right.m[0] == 12);

    CHECK_THROWS_AS(leaf_table_p3(t::reference_tree().truncated(2)), validation_error);
}

TEST_CASE("leaf labels agree with their genealogies") {
    // m_0: right under all three; n_j: only G_j right (j >= 1), m_j: only G_j wrong
    const auto g = [](std::uint64_t j) { return genealogy(j).signs; };
    CHECK(g(15) == std::vector<int>{1, 1, 1});
    CHECK(g(8) == std::vector<int>{-1, -1, -1});
    CHECK(g(12) == std::vector<int>{1, -1, -1});  // n_1
    CHECK(g(11) == std::vector<int>{-1, 1, 1});   // m_1
    CHECK(g(10) == std::vector<int>{-1, 1, -1});  // n_2
    CHECK(g(13) == std::vector<int>{1, -1, 1});   // m_2
    CHECK(g(9) == std::vector<int>{-1, -1, 1});   // n_3
    CHECK(g(14) == std::vector<int>{1, 1, -1});   // m_3
}

TEST_CASE("build_tree equals brute-force enumeration") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> size(1, 200), depth(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = t::random_outcomes(rng, size(rng), depth(rng), 0.3 + 0.01 * trial);
        CHECK(build_tree(m).counts() == t::count_by_enumeration(m));
    }
}

TEST_CASE("partition conservation and parent rule") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = t::random_outcomes(rng, 150, 5);
        const auto tree = build_tree(m);
        for (std::size_t k = 0; k <= tree.depth(); ++k) {
            const auto level = tree.level(k);
            CHECK(std::accumulate(level.begin(), level.end(), std::uint64_t{0}) == 150);
        }
        for (std::size_t j = 1; j < (std::size_t{1} << tree.depth()); ++j)
            CHECK(tree.count(j) == tree.count(2 * j) + tree.count(2 * j + 1));
    }
}

TEST_CASE("tree validation") {
    CHECK_THROWS_AS(OutcomeTree(1, {0, 3, 1, 1}), validation_error);   // parent rule
    CHECK_THROWS_AS(OutcomeTree(1, {1, 2, 1, 1}), validation_error);   // slot 0
    CHECK_THROWS_AS(OutcomeTree(1, {0, 0, 0, 0}), validation_error);   // n = 0
    CHECK_THROWS_AS(OutcomeTree(2, {0, 2, 1, 1}), validation_error);   // size
    CHECK_THROWS_AS(OutcomeTree(31, {}), validation_error);            // depth cap
    CHECK_THROWS_AS(OutcomeTree::from_leaves(2, std::vector<std::uint64_t>{1, 2, 3}), validation_error);
}

TEST_CASE("truncation keeps the prefix levels") {
    const auto tree = t::reference_tree();
    const auto two = tree.truncated(2);
    CHECK(two.depth() == 2);
    CHECK(two.leaves()[0] == 20);
    CHECK(two.leaves()[3] == 867);
}

TEST_CASE("truth table CSV layout") {
    std::ostringstream out;
    write_truth_table_p3(t::reference_tree(), out);
    CHECK(out.str() ==
          "p=3,n0,m0,n1,m1,n2,m2,n3,m3\n"
          "count,4,767,9,42,18,44,16,100\n"
          "G1,-1,1,1,-1,-1,1,-1,1\n"
          "G2,-1,1,-1,1,1,-1,-1,1\n"
          "G3,-1,1,-1,1,-1,1,1,-1\n");
}
