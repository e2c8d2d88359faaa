#pragma once

#include <cstdint>
#include <unordered_map>

namespace sgb {

// Union-find forest with union by rank and path compression. Class sizes are
// kept at the roots so per-group counts are O(1).
class DisjointSet {
public:
    void makeSet(std::int64_t id);                     // throws std::invalid_argument on duplicate
    std::int64_t find(std::int64_t id);                // throws std::invalid_argument on unknown id
    std::int64_t unite(std::int64_t a, std::int64_t b);  // returns the surviving root

    bool contains(std::int64_t id) const { return nodes_.count(id) != 0; }
    std::int64_t classSize(std::int64_t id);
    std::size_t elementCount() const { return nodes_.size(); }
    std::size_t classCount() const { return classes_; }
    void reserve(std::size_t n) { nodes_.reserve(n); }

private:
    struct Node {
        std::int64_t parent;
        std::int32_t rank;
        std::int64_t size;
    };

    std::unordered_map<std::int64_t, Node> nodes_;
    std::size_t classes_ = 0;
};

}  // namespace sgb
