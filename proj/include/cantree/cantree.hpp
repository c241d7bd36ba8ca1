#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>


#include "cantree/txndb.hpp"

namespace cantree {

using ItemId = std::uint32_t;

// Interned item names. Ids are dense and stable; they carry no ordering.
class ItemDictionary {
 public:
  ItemId intern(std::string_view name);
  std::optional<ItemId> find(std::string_view name) const;
  std::string_view name(ItemId id) const { return names_[id]; }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  struct NameHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> names_;
  std::unordered_map<std::string, ItemId, NameHash, std::equal_to<>> ids_;
};

// Canonical-order prefix tree. Every transaction is stored along the path of
// its canonically sorted items, so node placement never depends on item
// frequency: inserts and deletes touch only the path of the transaction
// concerned and the tree never needs restructuring.
//
// Mutation requires exclusive access. Const members may run concurrently.
class CanTree {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

  struct Node {
    ItemId item = 0;
    std::uint64_t count = 0;
    NodeId parent = kNone;
    std::uint32_t depth = 0;
    // Sorted by canonical order of item names.
    std::vector<NodeId> children;
    // Per-item node chain, in creation order.
    NodeId chain_prev = kNone;
    NodeId chain_next = kNone;
  };

  CanTree();

  CanTree(CanTree&&) noexcept = default;
  CanTree& operator=(CanTree&&) noexcept = default;
  CanTree(const CanTree&) = delete;
  CanTree& operator=(const CanTree&) = delete;

  CanTree clone() const;

  // An empty tree that shares this tree's item ids, so paths read from this
  // tree can be inserted with insert_path().
  CanTree empty_like() const;

  void reserve_nodes(std::size_t n) { nodes_.reserve(n + 1); }

  // Throws EmptyTransactionError if `t` has no items.
  void insert(const Transaction& t);
  void insert(std::span<const Item> items);
  void insert_batch(const TransactionDatabase& db);

  // Inserts a weighted path. `path` must be strictly increasing in canonical
  // order and use ids of this tree's dictionary.
  void insert_path(std::span<const ItemId> path, std::uint64_t weight);

  // Removes one occurrence of `t`. Throws NotPresentError, leaving the tree
  // untouched, unless some inserted transaction has exactly t's item set.
  void erase(const Transaction& t);
  void erase(std::span<const Item> items);

  std::uint64_t support(std::string_view item) const;
  std::uint64_t support(ItemId item) const {
    return item < header_.size() ? header_[item].support : 0;
  }

  std::uint64_t transaction_count() const noexcept { return transaction_count_; }
  // Nodes below the root.
  std::size_t node_count() const noexcept { return live_nodes_; }
  bool empty() const noexcept { return live_nodes_ == 0; }

  const Node& node(NodeId id) const { return nodes_[id]; }
  const Node& root() const { return nodes_[kRoot]; }
  std::string_view item_name(ItemId id) const { return dict_->name(id); }
  std::optional<ItemId> find_item(std::string_view name) const { return dict_->find(name); }
  // Upper bound on item ids used in this tree.
  std::size_t item_id_limit() const noexcept { return header_.size(); }
  NodeId chain_head(ItemId item) const { return item < header_.size() ? header_[item].head : kNone; }

  // Ids of items currently present, in canonical order.
  std::vector<ItemId> items() const;

  // Depth-first rendering with children in canonical order, one
  // "<depth> <item> <count>" line per node. Empty for the empty tree.
  std::string digest() const;

  // Verifies every structural invariant; throws std::logic_error describing
  // the first violation found.
  void check_invariants() const;

 private:
  struct Chain {
    NodeId head = kNone;
    NodeId tail = kNone;
    std::uint64_t support = 0;
  };

  explicit CanTree(std::shared_ptr<const ItemDictionary> dict);

  ItemId intern(std::string_view name);
  bool item_less(ItemId a, ItemId b) const {
    if (rank_) return (*rank_)[a] < (*rank_)[b];
    return dict_->name(a) < dict_->name(b);
  }
  // Position in `parent`'s children where `item` is or would be.
  std::vector<NodeId>::const_iterator lower_child(NodeId parent, ItemId item) const;
  NodeId find_child(NodeId parent, ItemId item) const;
  NodeId add_child(NodeId parent, ItemId item, std::uint64_t count);
  void free_node(NodeId id);
  std::optional<std::vector<ItemId>> lookup_path(std::span<const Item> items) const;
  void debug_check() const;

  friend CanTree snapshot_read(std::string_view text);

  std::shared_ptr<const ItemDictionary> dict_;
  // Canonical rank of every id in dict_, shared with projections while the
  // dictionary is unchanged. Null means compare names.
  std::shared_ptr<const std::vector<std::uint32_t>> rank_;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  std::vector<Chain> header_;
  std::uint64_t transaction_count_ = 0;
  std::size_t live_nodes_ = 0;
};

inline CanTree new_tree() { return CanTree(); }

inline void insert_transaction(CanTree& tree, const Transaction& t) { tree.insert(t); }
inline void insert_batch(CanTree& tree, const TransactionDatabase& db) { tree.insert_batch(db); }
inline void delete_transaction(CanTree& tree, const Transaction& t) { tree.erase(t); }
inline std::uint64_t item_support(const CanTree& tree, std::string_view item) { return tree.support(item); }
inline std::string structural_digest(const CanTree& tree) { return tree.digest(); }

inline CanTree build_tree(const TransactionDatabase& db) {
  CanTree tree;
  tree.insert_batch(db);
  return tree;
}

// Snapshot text: "cantree-snapshot v1", "txns <n>", then the digest lines.
std::string snapshot_write(const CanTree& tree);
// Throws SnapshotFormatError on any deviation from the format or if the
// records do not describe a valid tree.
CanTree snapshot_read(std::string_view text);

}  // namespace cantree
