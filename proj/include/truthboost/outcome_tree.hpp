#pragma once

#include "truthboost/dataset.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace truthboost {

/// Configuration counts of p classifiers in Sosa-Stradonitz layout.
///
/// Node j has children 2j (outcome -1 for the next classifier) and 2j+1 (outcome +1). Level k holds the
/// indices [2^k, 2^(k+1)); counts()[0] is unused and always zero, counts()[1] = n.
class OutcomeTree {
public:
    static constexpr std::size_t kMaxDepth = 30;

    /// Validates the parent rule and the level sums.
    OutcomeTree(std::size_t depth, std::vector<std::uint64_t> counts);

    /// Fills the internal nodes from the 2^p leaf counts c_{2^p} .. c_{2^(p+1)-1}.
    static OutcomeTree from_leaves(std::size_t depth, std::span<const std::uint64_t> leaves);

    std::size_t depth() const noexcept { return depth_; }
    std::uint64_t n() const noexcept { return counts_[1]; }
    std::uint64_t count(std::size_t j) const { return counts_.at(j); }
    const std::vector<std::uint64_t> &counts() const noexcept { return counts_; }

    /// Counts of level k, indices 2^k .. 2^(k+1)-1.
    std::span<const std::uint64_t> level(std::size_t k) const;
    std::span<const std::uint64_t> leaves() const { return level(depth_); }

    /// The tree of the first k classifiers.
    OutcomeTree truncated(std::size_t k) const;

    friend bool operator==(const OutcomeTree &, const OutcomeTree &) = default;

private:
    std::size_t depth_;
    std::vector<std::uint64_t> counts_;
};

/// Correctness pattern along the root-to-j path.
struct Genealogy {
    std::vector<int> signs;

    friend bool operator==(const Genealogy &, const Genealogy &) = default;
};

/// Binary digits of j after the leading 1, with 0 -> -1 and 1 -> +1. Requires j >= 2.
Genealogy genealogy(std::uint64_t j);

/// Inverse of genealogy(): prepends the leading 1 bit.
std::uint64_t genealogy_index(const Genealogy &g);

/// Level of node j (floor(log2 j)).
std::size_t node_level(std::uint64_t j);

OutcomeTree build_tree(const OutcomeMatrix &outcomes);

/// Leaf counts of a depth-3 tree under the classical n_j / m_j labels.
///
/// (c_8, ..., c_15) = (n_0, n_3, n_2, m_1, n_1, m_2, m_3, m_0): m_0 counts examples all three classifiers get
/// right, n_0 those all three get wrong, and m_j / n_j those where only classifier j disagrees with the others.
struct LeafTableP3 {
    std::array<std::uint64_t, 4> n{};
    std::array<std::uint64_t, 4> m{};

    friend bool operator==(const LeafTableP3 &, const LeafTableP3 &) = default;
};

LeafTableP3 leaf_table_p3(const OutcomeTree &tree);
OutcomeTree tree_from_table_p3(const LeafTableP3 &table);

/// Column layout n_0, m_0, n_1, m_1, ... with the G_k sign rows underneath.
void write_truth_table_p3(const OutcomeTree &tree, std::ostream &out);

}  // namespace truthboost
