#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace collabnet {

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph in compressed adjacency form. Node ids are
/// 0..node_count()-1; neighbor lists are sorted. Immutable once built.
class Graph {
public:
    Graph() = default;

    /// Duplicate edges (in either orientation) collapse into one. Self-loops
    /// and out-of-range endpoints throw ValidationError.
    Graph(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return targets_.size() / 2; }
    std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const std::uint32_t> neighbors(std::size_t v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }

    bool has_edge(std::size_t u, std::size_t v) const;

    /// Edges as (u, v) with u < v, sorted.
    std::vector<Edge> edges() const;

    /// Relabels node v as perm[v].
    Graph permuted(std::span<const std::size_t> perm) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;
};

}  // namespace collabnet
