#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "tvgl/errors.hpp"

namespace tvgl {

/// Unordered vertex pair with i < j (0-based).
struct Edge {
    int i = 0;
    int j = 0;
    auto operator<=>(const Edge&) const = default;
};

/// Canonicalizes a pair into an Edge; throws on self-loops.
Edge make_edge(int a, int b);

// Edge set of an undirected graph on dim vertices. Edges are kept sorted
// and unique; self-loops and out-of-range indices are rejected.
class EdgeSet {
public:
    explicit EdgeSet(int dim);
    EdgeSet(int dim, std::vector<Edge> edges);

    int dim() const { return dim_; }
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool contains(int a, int b) const;
    void insert(int a, int b);

    std::size_t intersection_size(const EdgeSet& other) const;
    /// |this  DELTA  other|: edges present in exactly one of the two sets.
    std::size_t symmetric_difference_size(const EdgeSet& other) const;

    bool operator==(const EdgeSet&) const = default;

private:
    void check_edge(const Edge& e) const;

    int dim_ = 0;
    std::vector<Edge> edges_;  // sorted, unique
};

}  // namespace tvgl
