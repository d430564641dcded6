#include "truthboost/outcome_tree.hpp"

#include <bit>
#include <ostream>
#include <string>

namespace truthboost {

namespace {

constexpr std::uint64_t level_begin(std::size_t k) { return std::uint64_t{1} << k; }

void check_depth(std::size_t depth) {
    if (depth == 0 || depth > OutcomeTree::kMaxDepth)
        throw validation_error("outcome tree: depth must be in [1, " + std::to_string(OutcomeTree::kMaxDepth) +
                               "], got " + std::to_string(depth));
}

// Leaf j of a depth-3 tree -> position in the (n_0, m_0, n_1, m_1, ...) column order.
struct P3Slot {
    bool is_m;
    std::size_t index;
};
constexpr std::array<P3Slot, 8> kP3Slots = {{
    {false, 0}, {false, 3}, {false, 2}, {true, 1}, {false, 1}, {true, 2}, {true, 3}, {true, 0},
}};

}  // namespace

OutcomeTree::OutcomeTree(std::size_t depth, std::vector<std::uint64_t> counts) : depth_(depth), counts_(std::move(counts)) {
    check_depth(depth_);
    if (counts_.size() != 2 * level_begin(depth_))
        throw validation_error("outcome tree: expected " + std::to_string(2 * level_begin(depth_)) + " slots, got " +
                               std::to_string(counts_.size()));
    if (counts_[0] != 0)
        throw validation_error("outcome tree: slot 0 is unused and must be zero");
    if (counts_[1] == 0)
        throw validation_error("outcome tree: root count n must be positive");
    for (std::uint64_t j = 1; j < level_begin(depth_); ++j)
        if (counts_[j] != counts_[2 * j] + counts_[2 * j + 1])
            throw validation_error("outcome tree: parent rule violated at node " + std::to_string(j));
}

OutcomeTree OutcomeTree::from_leaves(std::size_t depth, std::span<const std::uint64_t> leaves) {
    check_depth(depth);
    if (leaves.size() != level_begin(depth))
        throw validation_error("outcome tree: expected " + std::to_string(level_begin(depth)) + " leaf counts, got " +
                               std::to_string(leaves.size()));
    std::vector<std::uint64_t> counts(2 * level_begin(depth), 0);
    std::copy(leaves.begin(), leaves.end(), counts.begin() + static_cast<std::ptrdiff_t>(level_begin(depth)));
    for (std::uint64_t j = level_begin(depth) - 1; j >= 1; --j)
        counts[j] = counts[2 * j] + counts[2 * j + 1];
    return OutcomeTree(depth, std::move(counts));
}

std::span<const std::uint64_t> OutcomeTree::level(std::size_t k) const {
    if (k > depth_)
        throw validation_error("outcome tree: level " + std::to_string(k) + " exceeds depth " + std::to_string(depth_));
    return std::span<const std::uint64_t>(counts_).subspan(level_begin(k), level_begin(k));
}

OutcomeTree OutcomeTree::truncated(std::size_t k) const {
    if (k == 0 || k > depth_)
        throw validation_error("outcome tree: truncation depth must be in [1, depth]");
    return OutcomeTree(k, std::vector<std::uint64_t>(counts_.begin(), counts_.begin() + static_cast<std::ptrdiff_t>(2 * level_begin(k))));
}

std::size_t node_level(std::uint64_t j) {
    if (j == 0)
        throw validation_error("node index must be positive");
    return static_cast<std::size_t>(std::bit_width(j) - 1);
}

Genealogy genealogy(std::uint64_t j) {
    if (j <= 1)
        throw validation_error("genealogy: index must be at least 2 (the root has no genealogy)");
    const std::size_t k = node_level(j);
    Genealogy g;
    g.signs.resize(k);
    for (std::size_t bit = 0; bit < k; ++bit)
        g.signs[k - 1 - bit] = ((j >> bit) & 1u) != 0 ? 1 : -1;
    return g;
}

std::uint64_t genealogy_index(const Genealogy &g) {
    if (g.signs.empty() || g.signs.size() > 63)
        throw validation_error("genealogy_index: genealogy length must be in [1, 63]");
    std::uint64_t j = 1;
    for (int s : g.signs) {
        if (s != 1 && s != -1)
            throw validation_error("genealogy_index: signs must be -1 or +1");
        j = 2 * j + (s > 0 ? 1 : 0);
    }
    return j;
}

OutcomeTree build_tree(const OutcomeMatrix &outcomes) {
    const std::size_t p = outcomes.cols();
    check_depth(p);
    std::vector<std::uint64_t> counts(2 * level_begin(p), 0);
    for (std::size_t i = 0; i < outcomes.rows(); ++i) {
        std::uint64_t j = 1;
        ++counts[j];
        for (auto o : outcomes.row(i)) {
            j = 2 * j + (o > 0 ? 1 : 0);
            ++counts[j];
        }
    }
    return OutcomeTree(p, std::move(counts));
}

LeafTableP3 leaf_table_p3(const OutcomeTree &tree) {
    if (tree.depth() != 3)
        throw validation_error("leaf_table_p3: tree depth must be 3, got " + std::to_string(tree.depth()));
    LeafTableP3 table;
    const auto leaves = tree.leaves();
    for (std::size_t i = 0; i < 8; ++i)
        (kP3Slots[i].is_m ? table.m : table.n)[kP3Slots[i].index] = leaves[i];
    return table;
}

OutcomeTree tree_from_table_p3(const LeafTableP3 &table) {
    std::array<std::uint64_t, 8> leaves{};
    for (std::size_t i = 0; i < 8; ++i)
        leaves[i] = (kP3Slots[i].is_m ? table.m : table.n)[kP3Slots[i].index];
    return OutcomeTree::from_leaves(3, leaves);
}

void write_truth_table_p3(const OutcomeTree &tree, std::ostream &out) {
    const auto table = leaf_table_p3(tree);
    // leaf offset (0..7 for c_8..c_15) of each printed column
    constexpr std::array<std::size_t, 8> kColumnLeaf = {0, 7, 4, 3, 2, 5, 1, 6};
    out << "p=3";
    for (std::size_t q = 0; q < 4; ++q)
        out << ",n" << q << ",m" << q;
    out << "\ncount";
    for (std::size_t q = 0; q < 4; ++q)
        out << ',' << table.n[q] << ',' << table.m[q];
    out << '\n';
    for (std::size_t k = 0; k < 3; ++k) {
        out << 'G' << (k + 1);
        for (auto leaf : kColumnLeaf)
            out << ',' << genealogy(8 + leaf).signs[k];
        out << '\n';
    }
}

}  // namespace truthboost
