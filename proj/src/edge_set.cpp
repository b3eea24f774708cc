#include "tvgl/edge_set.hpp"

#include <algorithm>
#include <utility>

namespace tvgl {

Edge make_edge(int a, int b) {
    if (a == b) throw Error("edge endpoints must differ (no self-loops)");
    if (a > b) std::swap(a, b);
    return Edge{a, b};
}

EdgeSet::EdgeSet(int dim) : dim_(dim) {
    if (dim <= 0) throw DimensionMismatch("edge set dimension must be positive");
}

EdgeSet::EdgeSet(int dim, std::vector<Edge> edges) : EdgeSet(dim) {
    for (Edge& e : edges) {
        e = make_edge(e.i, e.j);
        check_edge(e);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw Error("duplicate edge");
    edges_ = std::move(edges);
}

void EdgeSet::check_edge(const Edge& e) const {
    if (e.i < 0 || e.j >= dim_)
        throw DimensionMismatch("edge index out of range");
}

bool EdgeSet::contains(int a, int b) const {
    const Edge e = make_edge(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

void EdgeSet::insert(int a, int b) {
    const Edge e = make_edge(a, b);
    check_edge(e);
    const auto pos = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (pos != edges_.end() && *pos == e) return;
    edges_.insert(pos, e);
}

std::size_t EdgeSet::intersection_size(const EdgeSet& other) const {
    std::size_t count = 0;
    auto a = edges_.begin();
    auto b = other.edges_.begin();
    while (a != edges_.end() && b != other.edges_.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++count;
            ++a;
            ++b;
        }
    }
    return count;
}

std::size_t EdgeSet::symmetric_difference_size(const EdgeSet& other) const {
    if (dim_ != other.dim_)
        throw DimensionMismatch("edge sets have different dimensions");
    const std::size_t common = intersection_size(other);
    return (size() - common) + (other.size() - common);
}

}  // namespace tvgl
