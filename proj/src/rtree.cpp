#include "sgb/rtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sgb {

// Slots live inline in the node (the hot mbr array separate from the child/id
// array) so a window query touches one contiguous block per visited node.
struct RTree::Node {
    union Ref {
        Node* child;
        std::int64_t id;
    };

    Node* parent = nullptr;
    std::uint32_t count = 0;
    bool leaf = true;
    Rect mbr[kMaxEntries + 1];
    Ref ref[kMaxEntries + 1];

    explicit Node(bool isLeaf) : leaf(isLeaf) {}

    void set(std::uint32_t i, const Rect& r, Node* child) {
        mbr[i] = r;
        ref[i].child = child;
    }
    void set(std::uint32_t i, const Rect& r, std::int64_t id) {
        mbr[i] = r;
        ref[i].id = id;
    }
    void removeAt(std::uint32_t i) {
        --count;
        mbr[i] = mbr[count];
        ref[i] = ref[count];
    }
    std::uint32_t indexOfChild(const Node* child) const {
        for (std::uint32_t i = 0; i < count; ++i) {
            if (ref[i].child == child) {
                return i;
            }
        }
        throw std::logic_error("rtree: child not found in parent");
    }
};

namespace {

double area(const Rect& r) {
    return (r.hi.x - r.lo.x) * (r.hi.y - r.lo.y);
}

Rect rectUnion(const Rect& a, const Rect& b) {
    return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
            {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

double enlargement(const Rect& mbr, const Rect& key) {
    return area(rectUnion(mbr, key)) - area(mbr);
}

}  // namespace

Rect RTree::nodeMbr(const Node& node) {
    Rect r = node.mbr[0];
    for (std::uint32_t i = 1; i < node.count; ++i) {
        r = rectUnion(r, node.mbr[i]);
    }
    return r;
}

RTree::RTree() : root_(new Node(true)) {}

RTree::~RTree() {
    destroy(root_);
}

RTree::RTree(RTree&& other) noexcept : root_(other.root_), leafOf_(std::move(other.leafOf_)) {
    other.root_ = new Node(true);
    other.leafOf_.clear();
}

RTree& RTree::operator=(RTree&& other) noexcept {
    if (this != &other) {
        destroy(root_);
        root_ = other.root_;
        leafOf_ = std::move(other.leafOf_);
        other.root_ = new Node(true);
        other.leafOf_.clear();
    }
    return *this;
}

void RTree::destroy(Node* node) {
    if (node == nullptr) {
        return;
    }
    if (!node->leaf) {
        for (std::uint32_t i = 0; i < node->count; ++i) {
            destroy(node->ref[i].child);
        }
    }
    delete node;
}

void RTree::clear() {
    destroy(root_);
    root_ = new Node(true);
    leafOf_.clear();
}

RTree::Node* RTree::chooseLeaf(const Rect& key) const {
    Node* node = root_;
    while (!node->leaf) {
        std::uint32_t best = 0;
        double bestEnlargement = std::numeric_limits<double>::infinity();
        double bestArea = std::numeric_limits<double>::infinity();
        for (std::uint32_t i = 0; i < node->count; ++i) {
            const double grow = enlargement(node->mbr[i], key);
            if (grow > bestEnlargement) {
                continue;
            }
            const double a = area(node->mbr[i]);
            if (grow < bestEnlargement || a < bestArea) {
                best = i;
                bestEnlargement = grow;
                bestArea = a;
            }
        }
        node = node->ref[best].child;
    }
    return node;
}

// Quadratic split: seed the two groups with the pair wasting the most area,
// then hand each remaining slot to the group needing the least enlargement.
RTree::Node* RTree::splitNode(Node* node) {
    const std::uint32_t total = node->count;
    Rect mbrs[kMaxEntries + 1];
    Node::Ref refs[kMaxEntries + 1];
    std::copy(node->mbr, node->mbr + total, mbrs);
    std::copy(node->ref, node->ref + total, refs);
    node->count = 0;

    std::uint32_t seedA = 0;
    std::uint32_t seedB = 1;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < total; ++i) {
        for (std::uint32_t j = i + 1; j < total; ++j) {
            const double dead = area(rectUnion(mbrs[i], mbrs[j])) - area(mbrs[i]) - area(mbrs[j]);
            if (dead > worst) {
                worst = dead;
                seedA = i;
                seedB = j;
            }
        }
    }

    Node* sibling = new Node(node->leaf);
    Rect boundsA = mbrs[seedA];
    Rect boundsB = mbrs[seedB];
    node->mbr[node->count] = mbrs[seedA];
    node->ref[node->count++] = refs[seedA];
    sibling->mbr[sibling->count] = mbrs[seedB];
    sibling->ref[sibling->count++] = refs[seedB];

    bool assigned[kMaxEntries + 1] = {};
    assigned[seedA] = assigned[seedB] = true;
    std::uint32_t remaining = total - 2;

    const auto assignRestTo = [&](Node* target, Rect& bounds) {
        for (std::uint32_t i = 0; i < total; ++i) {
            if (!assigned[i]) {
                target->mbr[target->count] = mbrs[i];
                target->ref[target->count++] = refs[i];
                bounds = rectUnion(bounds, mbrs[i]);
                assigned[i] = true;
            }
        }
        remaining = 0;
    };

    while (remaining > 0) {
        // Force-assign once a group needs everything left to reach the
        // minimum fill.
        if (node->count + remaining == kMinEntries) {
            assignRestTo(node, boundsA);
            break;
        }
        if (sibling->count + remaining == kMinEntries) {
            assignRestTo(sibling, boundsB);
            break;
        }

        // PickNext: the slot with the strongest preference between groups.
        std::uint32_t pick = 0;
        double bestDiff = -1.0;
        double growA = 0.0;
        double growB = 0.0;
        for (std::uint32_t i = 0; i < total; ++i) {
            if (assigned[i]) {
                continue;
            }
            const double ga = enlargement(boundsA, mbrs[i]);
            const double gb = enlargement(boundsB, mbrs[i]);
            const double diff = std::fabs(ga - gb);
            if (diff > bestDiff) {
                bestDiff = diff;
                pick = i;
                growA = ga;
                growB = gb;
            }
        }

        bool toA;
        if (growA != growB) {
            toA = growA < growB;
        } else if (area(boundsA) != area(boundsB)) {
            toA = area(boundsA) < area(boundsB);
        } else {
            toA = node->count <= sibling->count;
        }
        Node* target = toA ? node : sibling;
        Rect& bounds = toA ? boundsA : boundsB;
        target->mbr[target->count] = mbrs[pick];
        target->ref[target->count++] = refs[pick];
        bounds = rectUnion(bounds, mbrs[pick]);
        assigned[pick] = true;
        --remaining;
    }

    // Re-home the moved entries.
    if (node->leaf) {
        for (std::uint32_t i = 0; i < node->count; ++i) {
            leafOf_[node->ref[i].id] = node;
        }
        for (std::uint32_t i = 0; i < sibling->count; ++i) {
            leafOf_[sibling->ref[i].id] = sibling;
        }
    } else {
        for (std::uint32_t i = 0; i < node->count; ++i) {
            node->ref[i].child->parent = node;
        }
        for (std::uint32_t i = 0; i < sibling->count; ++i) {
            sibling->ref[i].child->parent = sibling;
        }
    }
    return sibling;
}

void RTree::adjustTree(Node* node, Node* splitSibling, const Rect* insertedKey) {
    while (node != root_) {
        Node* parent = node->parent;
        const std::uint32_t slot = parent->indexOfChild(node);
        if (splitSibling != nullptr) {
            parent->mbr[slot] = nodeMbr(*node);
            splitSibling->parent = parent;
            parent->set(parent->count++, nodeMbr(*splitSibling), splitSibling);
            splitSibling = parent->count > kMaxEntries ? splitNode(parent) : nullptr;
        } else if (insertedKey != nullptr) {
            // Plain insert: the old bounds were tight, so extending by the
            // new key keeps them tight.
            parent->mbr[slot] = rectUnion(parent->mbr[slot], *insertedKey);
        } else {
            parent->mbr[slot] = nodeMbr(*node);
        }
        node = parent;
    }
    if (splitSibling != nullptr) {
        Node* newRoot = new Node(false);
        root_->parent = newRoot;
        splitSibling->parent = newRoot;
        newRoot->set(newRoot->count++, nodeMbr(*root_), root_);
        newRoot->set(newRoot->count++, nodeMbr(*splitSibling), splitSibling);
        root_ = newRoot;
    }
}

void RTree::insertAtLeaf(Node* leaf, const Rect& key, std::int64_t id) {
    leaf->set(leaf->count++, key, id);
    leafOf_[id] = leaf;
    if (leaf->count > kMaxEntries) {
        adjustTree(leaf, splitNode(leaf), nullptr);
    } else {
        adjustTree(leaf, nullptr, &key);
    }
}

void RTree::insert(const IndexEntry& entry) {
    if (!entry.key.valid()) {
        throw std::invalid_argument("rtree: invalid key rect");
    }
    if (leafOf_.count(entry.id) != 0) {
        throw std::invalid_argument("rtree: duplicate id " + std::to_string(entry.id));
    }
    insertAtLeaf(chooseLeaf(entry.key), entry.key, entry.id);
}

void RTree::condenseTree(Node* leaf) {
    std::vector<Node*> orphans;
    Node* node = leaf;
    while (node != root_) {
        Node* parent = node->parent;
        const std::uint32_t slot = parent->indexOfChild(node);
        if (node->count < kMinEntries) {
            parent->removeAt(slot);
            orphans.push_back(node);
        } else {
            parent->mbr[slot] = nodeMbr(*node);
        }
        node = parent;
    }

    if (!root_->leaf && root_->count == 1) {
        Node* child = root_->ref[0].child;
        child->parent = nullptr;
        delete root_;
        root_ = child;
    }
    if (!root_->leaf && root_->count == 0) {
        root_->leaf = true;
    }

    // Reinsert the data entries of every orphaned subtree.
    std::vector<IndexEntry> entries;
    for (Node* orphan : orphans) {
        std::vector<Node*> stack{orphan};
        while (!stack.empty()) {
            Node* cur = stack.back();
            stack.pop_back();
            if (cur->leaf) {
                for (std::uint32_t i = 0; i < cur->count; ++i) {
                    entries.push_back({cur->mbr[i], cur->ref[i].id});
                    leafOf_.erase(cur->ref[i].id);
                }
            } else {
                for (std::uint32_t i = 0; i < cur->count; ++i) {
                    stack.push_back(cur->ref[i].child);
                }
            }
            delete cur;
        }
    }
    for (const auto& entry : entries) {
        insertAtLeaf(chooseLeaf(entry.key), entry.key, entry.id);
    }
}

void RTree::remove(std::int64_t id) {
    auto it = leafOf_.find(id);
    if (it == leafOf_.end()) {
        throw std::invalid_argument("rtree: unknown id " + std::to_string(id));
    }
    Node* leaf = it->second;
    for (std::uint32_t i = 0; i < leaf->count; ++i) {
        if (leaf->ref[i].id == id) {
            leaf->removeAt(i);
            break;
        }
    }
    leafOf_.erase(it);
    condenseTree(leaf);
}

void RTree::updateKey(std::int64_t id, const Rect& newKey) {
    if (leafOf_.count(id) == 0) {
        throw std::invalid_argument("rtree: unknown id " + std::to_string(id));
    }
    if (!newKey.valid()) {
        throw std::invalid_argument("rtree: invalid key rect");
    }
    remove(id);
    insertAtLeaf(chooseLeaf(newKey), newKey, id);
}

const Rect& RTree::keyOf(std::int64_t id) const {
    auto it = leafOf_.find(id);
    if (it == leafOf_.end()) {
        throw std::invalid_argument("rtree: unknown id " + std::to_string(id));
    }
    const Node* leaf = it->second;
    for (std::uint32_t i = 0; i < leaf->count; ++i) {
        if (leaf->ref[i].id == id) {
            return leaf->mbr[i];
        }
    }
    throw std::logic_error("rtree: id map out of sync");
}

void RTree::windowQuery(const Rect& window, std::vector<std::int64_t>& out) const {
    out.clear();
    auto& stack = queryStack_;
    stack.clear();
    stack.push_back(root_);
    while (!stack.empty()) {
        const Node* node = stack.back();
        stack.pop_back();
        if (node->leaf) {
            for (std::uint32_t i = 0; i < node->count; ++i) {
                if (rectIntersects(node->mbr[i], window)) {
                    out.push_back(node->ref[i].id);
                }
            }
        } else {
            for (std::uint32_t i = 0; i < node->count; ++i) {
                if (rectIntersects(node->mbr[i], window)) {
                    stack.push_back(node->ref[i].child);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
}

std::vector<std::int64_t> RTree::windowQuery(const Rect& window) const {
    std::vector<std::int64_t> out;
    windowQuery(window, out);
    return out;
}

void RTree::windowQueryEntries(const Rect& window, std::vector<IndexEntry>& out) const {
    out.clear();
    auto& stack = queryStack_;
    stack.clear();
    stack.push_back(root_);
    while (!stack.empty()) {
        const Node* node = stack.back();
        stack.pop_back();
        if (node->leaf) {
            for (std::uint32_t i = 0; i < node->count; ++i) {
                if (rectIntersects(node->mbr[i], window)) {
                    out.push_back({node->mbr[i], node->ref[i].id});
                }
            }
        } else {
            for (std::uint32_t i = 0; i < node->count; ++i) {
                if (rectIntersects(node->mbr[i], window)) {
                    stack.push_back(node->ref[i].child);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const IndexEntry& a, const IndexEntry& b) { return a.id < b.id; });
}

namespace {

void fail(const std::string& what) {
    throw std::logic_error("rtree validation: " + what);
}

}  // namespace

void RTree::validateStructure() const {
    std::size_t seen = 0;
    // depth -1 means "not yet known".
    long leafDepth = -1;

    struct Item {
        const Node* node;
        long depth;
    };
    std::vector<Item> stack{{root_, 0}};
    while (!stack.empty()) {
        const auto [node, depth] = stack.back();
        stack.pop_back();

        const bool isRoot = node == root_;
        if (!isRoot && (node->count < kMinEntries || node->count > kMaxEntries)) {
            fail("fanout out of bounds");
        }
        if (isRoot && node->count > kMaxEntries) {
            fail("root overfull");
        }
        if (isRoot && !node->leaf && node->count < 2) {
            fail("internal root with fewer than two children");
        }

        if (node->leaf) {
            if (leafDepth == -1) {
                leafDepth = depth;
            } else if (leafDepth != depth) {
                fail("non-uniform leaf depth");
            }
            for (std::uint32_t i = 0; i < node->count; ++i) {
                auto it = leafOf_.find(node->ref[i].id);
                if (it == leafOf_.end() || it->second != node) {
                    fail("id map out of sync");
                }
                ++seen;
            }
        } else {
            for (std::uint32_t i = 0; i < node->count; ++i) {
                const Node* child = node->ref[i].child;
                if (child == nullptr) {
                    fail("internal slot without child");
                }
                if (child->parent != node) {
                    fail("broken parent pointer");
                }
                if (child->count == 0) {
                    fail("empty non-root node");
                }
                if (!(node->mbr[i] == nodeMbr(*child))) {
                    fail("parent mbr not the union of the child");
                }
                stack.push_back({child, depth + 1});
            }
        }
    }
    if (seen != leafOf_.size()) {
        fail("entry count mismatch");
    }
}

}  // namespace sgb
