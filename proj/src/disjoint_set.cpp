#include "sgb/disjoint_set.hpp"

#include <stdexcept>
#include <string>

namespace sgb {

void DisjointSet::makeSet(std::int64_t id) {
    auto [it, inserted] = nodes_.try_emplace(id, Node{id, 0, 1});
    if (!inserted) {
        throw std::invalid_argument("disjoint set: duplicate id " + std::to_string(id));
    }
    ++classes_;
}

std::int64_t DisjointSet::find(std::int64_t id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) {
        throw std::invalid_argument("disjoint set: unknown id " + std::to_string(id));
    }
    std::int64_t root = id;
    while (nodes_[root].parent != root) {
        root = nodes_[root].parent;
    }
    // Path compression; changes structure, never the partition.
    std::int64_t cur = id;
    while (cur != root) {
        std::int64_t next = nodes_[cur].parent;
        nodes_[cur].parent = root;
        cur = next;
    }
    return root;
}

std::int64_t DisjointSet::unite(std::int64_t a, std::int64_t b) {
    std::int64_t ra = find(a);
    std::int64_t rb = find(b);
    if (ra == rb) {
        return ra;
    }
    Node& na = nodes_[ra];
    Node& nb = nodes_[rb];
    if (na.rank < nb.rank) {
        std::swap(ra, rb);
    }
    Node& winner = nodes_[ra];
    Node& loser = nodes_[rb];
    loser.parent = ra;
    winner.size += loser.size;
    if (winner.rank == loser.rank) {
        ++winner.rank;
    }
    --classes_;
    return ra;
}

std::int64_t DisjointSet::classSize(std::int64_t id) {
    return nodes_[find(id)].size;
}

}  // namespace sgb
