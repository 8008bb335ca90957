#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ranknas/rng.hpp"

namespace ranknas {

/// Candidate operations on a cell edge. Zero, Identity and AvgMix carry no
/// parameters; Linear and ReluLinear carry a width×width weight and a bias.
enum class OpKind : uint8_t { Zero, Identity, Linear, ReluLinear, AvgMix };

constexpr bool op_has_params(OpKind op) {
    return op == OpKind::Linear || op == OpKind::ReluLinear;
}

std::string_view op_name(OpKind op);

/// Cell-based search space: a fully connected DAG over n_nodes, one op choice
/// per edge. Edges are ordered lexicographically by (i, j), which guarantees
/// every source node is finalized before any edge reads it.
struct SearchSpace {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<OpKind> ops;
    std::string name;

    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_ops() const { return static_cast<int>(ops.size()); }

    /// |ops|^|edges|; saturates at uint64 max on overflow.
    uint64_t num_architectures() const;
};

/// One op index per edge. Canonical text form joins the codes with '-'.
struct Architecture {
    std::vector<uint8_t> codes;

    std::string to_string() const;
    static Architecture parse(std::string_view text);

    bool operator==(const Architecture&) const = default;
    bool operator<(const Architecture& o) const { return codes < o.codes; }
};

/// name ∈ {"micro", "small"}. micro: 3 nodes × 4 ops, N=64.
/// small: 4 nodes × 5 ops, N=15625.
SearchSpace builtin_space(std::string_view name);

/// Constructs a fully connected space with the given nodes and op list.
SearchSpace make_space(std::string name, int n_nodes, std::vector<OpKind> ops);

bool arch_valid(const SearchSpace& space, const Architecture& a);

Architecture random_architecture(const SearchSpace& space, Rng& rng);

/// Alters exactly one position; the new code is uniform over the other
/// |ops|-1 choices, and the changed position is uniform over edges.
Architecture mutate(const SearchSpace& space, const Architecture& a, Rng& rng);

int hamming_distance(const Architecture& a, const Architecture& b);

/// All architectures in lexicographic code order. Throws CapacityError when
/// the space exceeds the cap.
std::vector<Architecture> enumerate_space(const SearchSpace& space, uint64_t cap = 1000000);

} // namespace ranknas
