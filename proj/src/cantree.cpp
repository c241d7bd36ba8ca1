#include "cantree/cantree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace cantree {

ItemId ItemDictionary::intern(std::string_view name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  const auto id = static_cast<ItemId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<ItemId> ItemDictionary::find(std::string_view name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

CanTree::CanTree() : CanTree(std::make_shared<const ItemDictionary>()) {}

CanTree::CanTree(std::shared_ptr<const ItemDictionary> dict) : dict_(std::move(dict)) {
  nodes_.emplace_back();
}

CanTree CanTree::clone() const {
  CanTree copy(dict_);
  copy.rank_ = rank_;
  copy.nodes_ = nodes_;
  copy.free_ = free_;
  copy.header_ = header_;
  copy.transaction_count_ = transaction_count_;
  copy.live_nodes_ = live_nodes_;
  return copy;
}

CanTree CanTree::empty_like() const {
  CanTree tree(dict_);
  tree.rank_ = rank_;
  if (!tree.rank_) {
    std::vector<ItemId> ids(dict_->size());
    for (ItemId i = 0; i < ids.size(); ++i) ids[i] = i;
    std::sort(ids.begin(), ids.end(), [this](ItemId a, ItemId b) { return dict_->name(a) < dict_->name(b); });
    auto rank = std::make_shared<std::vector<std::uint32_t>>(ids.size());
    for (std::uint32_t r = 0; r < ids.size(); ++r) (*rank)[ids[r]] = r;
    tree.rank_ = std::move(rank);
  }
  return tree;
}

ItemId CanTree::intern(std::string_view name) {
  if (auto id = dict_->find(name)) return *id;
  rank_.reset();
  // Trees may share a dictionary; copy it before adding names.
  if (dict_.use_count() > 1) dict_ = std::make_shared<const ItemDictionary>(*dict_);
  return const_cast<ItemDictionary&>(*dict_).intern(name);
}

std::vector<CanTree::NodeId>::const_iterator CanTree::lower_child(NodeId parent, ItemId item) const {
  const auto& children = nodes_[parent].children;
  if (rank_) {
    const auto& rank = *rank_;
    const std::uint32_t r = rank[item];
    return std::lower_bound(children.begin(), children.end(), r,
                            [&](NodeId child, std::uint32_t x) { return rank[nodes_[child].item] < x; });
  }
  const std::string_view name = dict_->name(item);
  return std::lower_bound(children.begin(), children.end(), name,
                          [this](NodeId child, std::string_view n) { return dict_->name(nodes_[child].item) < n; });
}

CanTree::NodeId CanTree::find_child(NodeId parent, ItemId item) const {
  auto it = lower_child(parent, item);
  if (it != nodes_[parent].children.end() && nodes_[*it].item == item) return *it;
  return kNone;
}

CanTree::NodeId CanTree::add_child(NodeId parent, ItemId item, std::uint64_t count) {
  NodeId id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = static_cast<NodeId>(nodes_.size());
    nodes_.emplace_back();
  }
  const auto pos = lower_child(parent, item) - nodes_[parent].children.begin();
  Node& n = nodes_[id];
  n.item = item;
  n.count = count;
  n.parent = parent;
  n.depth = nodes_[parent].depth + 1;
  n.children.clear();
  n.chain_next = kNone;
  nodes_[parent].children.insert(nodes_[parent].children.begin() + pos, id);

  if (header_.size() <= item) header_.resize(item + 1);
  Chain& chain = header_[item];
  n.chain_prev = chain.tail;
  if (chain.tail != kNone) nodes_[chain.tail].chain_next = id;
  else chain.head = id;
  chain.tail = id;
  ++live_nodes_;
  return id;
}

void CanTree::free_node(NodeId id) {
  Node& n = nodes_[id];
  Chain& chain = header_[n.item];
  if (n.chain_prev != kNone) nodes_[n.chain_prev].chain_next = n.chain_next;
  else chain.head = n.chain_next;
  if (n.chain_next != kNone) nodes_[n.chain_next].chain_prev = n.chain_prev;
  else chain.tail = n.chain_prev;
  n.children.clear();
  n.children.shrink_to_fit();
  n.parent = kNone;
  n.count = 0;
  n.chain_prev = n.chain_next = kNone;
  free_.push_back(id);
  --live_nodes_;
}

void CanTree::insert(const Transaction& t) { insert(std::span<const Item>(t.items)); }

void CanTree::insert(std::span<const Item> items) {
  const std::vector<Item> sorted = canonicalize(items);
  if (sorted.empty()) throw EmptyTransactionError("cannot insert a transaction with no items");
  std::vector<ItemId> path;
  path.reserve(sorted.size());
  for (const auto& item : sorted) {
    if (!is_valid_item(item)) throw InvalidItemError("invalid item name '" + item + "'");
    path.push_back(intern(item));
  }
  insert_path(path, 1);
}

void CanTree::insert_batch(const TransactionDatabase& db) {
  for (const auto& t : db) insert(t);
}

void CanTree::insert_path(std::span<const ItemId> path, std::uint64_t weight) {
  if (path.empty() || weight == 0) return;
  NodeId current = kRoot;
  for (ItemId item : path) {
    NodeId child = find_child(current, item);
    if (child == kNone) {
      child = add_child(current, item, weight);
    } else {
      nodes_[child].count += weight;
    }
    header_[item].support += weight;
    current = child;
  }
  transaction_count_ += weight;
  debug_check();
}

std::optional<std::vector<ItemId>> CanTree::lookup_path(std::span<const Item> items) const {
  std::vector<ItemId> ids;
  for (const auto& item : canonicalize(items)) {
    auto id = dict_->find(item);
    if (!id) return std::nullopt;
    ids.push_back(*id);
  }
  return ids;
}

void CanTree::erase(const Transaction& t) { erase(std::span<const Item>(t.items)); }

void CanTree::erase(std::span<const Item> items) {
  const auto ids = lookup_path(items);
  if (!ids || ids->empty()) throw NotPresentError("transaction is not stored in the tree");

  // Validate the whole path before touching anything.
  std::vector<NodeId> path;
  path.reserve(ids->size());
  NodeId current = kRoot;
  for (ItemId item : *ids) {
    current = find_child(current, item);
    if (current == kNone) throw NotPresentError("transaction is not stored in the tree");
    path.push_back(current);
  }
  std::uint64_t below = 0;
  for (NodeId child : nodes_[path.back()].children) below += nodes_[child].count;
  if (nodes_[path.back()].count <= below)
    throw NotPresentError("no stored transaction ends at this item set");

  std::size_t first_dead = path.size();
  for (std::size_t i = 0; i < path.size(); ++i) {
    Node& n = nodes_[path[i]];
    --n.count;
    --header_[n.item].support;
    if (n.count == 0 && first_dead == path.size()) first_dead = i;
  }
  if (first_dead < path.size()) {
    auto& siblings = nodes_[nodes_[path[first_dead]].parent].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), path[first_dead]));
    for (std::size_t i = first_dead; i < path.size(); ++i) free_node(path[i]);
  }
  --transaction_count_;
  debug_check();
}

std::uint64_t CanTree::support(std::string_view item) const {
  const auto id = dict_->find(item);
  return id ? support(*id) : 0;
}

std::vector<ItemId> CanTree::items() const {
  std::vector<ItemId> out;
  for (ItemId id = 0; id < header_.size(); ++id)
    if (header_[id].support > 0) out.push_back(id);
  std::sort(out.begin(), out.end(), [this](ItemId a, ItemId b) { return item_less(a, b); });
  return out;
}

std::string CanTree::digest() const {
  std::string out;
  std::vector<NodeId> stack(nodes_[kRoot].children.rbegin(), nodes_[kRoot].children.rend());
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    out += std::to_string(n.depth);
    out += ' ';
    out += dict_->name(n.item);
    out += ' ';
    out += std::to_string(n.count);
    out += '\n';
    stack.insert(stack.end(), n.children.rbegin(), n.children.rend());
  }
  return out;
}

void CanTree::debug_check() const {
#ifndef NDEBUG
  check_invariants();
#endif
}

void CanTree::check_invariants() const {
  const auto fail = [](const std::string& what) { throw std::logic_error("cantree invariant: " + what); };

  std::size_t reachable = 0;
  std::vector<std::uint64_t> support(header_.size(), 0);
  std::vector<NodeId> stack{kRoot};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[id];
    std::uint64_t below = 0;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const NodeId c = n.children[i];
      const Node& child = nodes_[c];
      if (child.parent != id) fail("parent link mismatch");
      if (child.count < 1) fail("node with zero count");
      if (child.depth != n.depth + 1) fail("depth mismatch");
      if (i > 0 && !item_less(nodes_[n.children[i - 1]].item, child.item)) fail("siblings not strictly increasing");
      if (id != kRoot && !item_less(n.item, child.item)) fail("path not strictly increasing");
      below += child.count;
      stack.push_back(c);
    }
    if (id == kRoot) {
      if (below != transaction_count_) fail("transaction count differs from root children total");
    } else {
      if (n.count < below) fail("node count below children total");
      ++reachable;
      if (n.item >= support.size()) fail("item without header entry");
      support[n.item] += n.count;
    }
  }
  if (reachable != live_nodes_) fail("live node count mismatch");

  std::size_t chained = 0;
  for (ItemId item = 0; item < header_.size(); ++item) {
    const Chain& chain = header_[item];
    std::uint64_t sum = 0;
    NodeId prev = kNone;
    for (NodeId id = chain.head; id != kNone; id = nodes_[id].chain_next) {
      const Node& n = nodes_[id];
      if (n.parent == kNone || n.count == 0) fail("dangling header chain entry");
      if (n.item != item) fail("node in wrong header chain");
      if (n.chain_prev != prev) fail("broken chain back link");
      sum += n.count;
      prev = id;
      ++chained;
    }
    if (prev != chain.tail) fail("chain tail mismatch");
    if (sum != chain.support || sum != support[item]) fail("header support mismatch");
  }
  if (chained != live_nodes_) fail("header chains do not cover every node exactly once");
}

namespace {

constexpr std::string_view kSnapshotMagic = "cantree-snapshot";
constexpr std::string_view kSnapshotVersion = "v1";

bool parse_count(std::string_view s, std::uint64_t& v) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string snapshot_write(const CanTree& tree) {
  std::string out;
  out += kSnapshotMagic;
  out += ' ';
  out += kSnapshotVersion;
  out += "\ntxns ";
  out += std::to_string(tree.transaction_count());
  out += '\n';
  out += tree.digest();
  return out;
}

CanTree snapshot_read(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  const auto bad = [](std::size_t line_no, const std::string& what) {
    return SnapshotFormatError("snapshot line " + std::to_string(line_no) + ": " + what);
  };

  if (lines.empty()) throw bad(1, "missing header");
  if (lines[0] != std::string(kSnapshotMagic) + " " + std::string(kSnapshotVersion)) {
    if (lines[0].starts_with(kSnapshotMagic)) throw bad(1, "unsupported snapshot version");
    throw bad(1, "not a cantree snapshot");
  }
  std::uint64_t txns = 0;
  if (lines.size() < 2 || !lines[1].starts_with("txns ") || !parse_count(lines[1].substr(5), txns))
    throw bad(2, "expected 'txns <count>'");

  CanTree tree;
  auto& dict = const_cast<ItemDictionary&>(*tree.dict_);
  // path[d] is the most recent node at depth d; path[0] is the root.
  std::vector<CanTree::NodeId> path{CanTree::kRoot};
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t first = line.find(' ');
    const std::size_t last = line.rfind(' ');
    if (first == std::string_view::npos || first == last) throw bad(i + 1, "expected '<depth> <item> <count>'");
    std::uint64_t depth = 0;
    std::uint64_t count = 0;
    if (!parse_count(line.substr(0, first), depth) || !parse_count(line.substr(last + 1), count))
      throw bad(i + 1, "malformed depth or count");
    const std::string_view name = line.substr(first + 1, last - first - 1);
    if (!is_valid_item(name)) throw bad(i + 1, "invalid item name");
    if (depth < 1 || depth > path.size()) throw bad(i + 1, "depth out of sequence");
    if (count < 1) throw bad(i + 1, "count must be positive");

    path.resize(depth);
    const CanTree::NodeId parent = path.back();
    const ItemId item = dict.intern(name);
    const auto& siblings = tree.nodes_[parent].children;
    if (!siblings.empty() && !tree.item_less(tree.nodes_[siblings.back()].item, item))
      throw bad(i + 1, "children out of canonical order");
    if (parent != CanTree::kRoot && !tree.item_less(tree.nodes_[parent].item, item))
      throw bad(i + 1, "path out of canonical order");
    const CanTree::NodeId id = tree.add_child(parent, item, count);
    tree.header_[item].support += count;
    if (depth == 1) tree.transaction_count_ += count;
    path.push_back(id);
  }
  if (tree.transaction_count_ != txns) throw SnapshotFormatError("snapshot txns does not match node counts");
  try {
    tree.check_invariants();
  } catch (const std::logic_error& e) {
    throw SnapshotFormatError(std::string("snapshot describes an invalid tree: ") + e.what());
  }
  return tree;
}

}  // namespace cantree
