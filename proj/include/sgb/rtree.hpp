#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sgb/geometry.hpp"

namespace sgb {

struct IndexEntry {
    Rect key;  // a point is stored as a degenerate rect, lo == hi
    std::int64_t id = 0;

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

// In-memory R-tree with quadratic node splits (Guttman '84). Ids are unique
// within one tree; key changes go through updateKey so callers never observe
// a half-applied move. Single-writer: an instance belongs to one engine run.
class RTree {
public:
    static constexpr std::size_t kMinEntries = 6;
    static constexpr std::size_t kMaxEntries = 16;

    RTree();
    ~RTree();
    RTree(const RTree&) = delete;
    RTree& operator=(const RTree&) = delete;
    RTree(RTree&& other) noexcept;
    RTree& operator=(RTree&& other) noexcept;

    void insert(const IndexEntry& entry);  // throws std::invalid_argument on duplicate id
    void remove(std::int64_t id);          // throws std::invalid_argument on unknown id
    void updateKey(std::int64_t id, const Rect& newKey);
    void clear();

    // Ids whose key intersects the window (boundaries inclusive), ascending.
    void windowQuery(const Rect& window, std::vector<std::int64_t>& out) const;
    std::vector<std::int64_t> windowQuery(const Rect& window) const;
    // Same selection but with the stored keys, sorted by id.
    void windowQueryEntries(const Rect& window, std::vector<IndexEntry>& out) const;

    bool contains(std::int64_t id) const { return leafOf_.count(id) != 0; }
    std::size_t size() const { return leafOf_.size(); }
    bool empty() const { return leafOf_.empty(); }
    const Rect& keyOf(std::int64_t id) const;

    // Full walk checking uniform leaf depth, fanout bounds and that every
    // parent slot is the exact union of its child's slots. Throws
    // std::logic_error describing the first violation.
    void validateStructure() const;

private:
    struct Node;

    static Rect nodeMbr(const Node& node);
    Node* chooseLeaf(const Rect& key) const;
    void insertAtLeaf(Node* leaf, const Rect& key, std::int64_t id);
    Node* splitNode(Node* node);
    void adjustTree(Node* node, Node* splitSibling, const Rect* insertedKey);
    void condenseTree(Node* leaf);
    void destroy(Node* node);

    Node* root_ = nullptr;
    std::unordered_map<std::int64_t, Node*> leafOf_;
    // Traversal scratch reused across queries; confined like the tree itself.
    mutable std::vector<const Node*> queryStack_;
};

}  // namespace sgb
