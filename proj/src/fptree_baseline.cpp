#include "cantree/fptree_baseline.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace cantree {
namespace {

constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

// Rank-keyed prefix tree used both for the full tree and for conditional
// trees during mining.
struct RankTree {
  std::vector<FpTree::Node> nodes;
  std::vector<std::uint32_t> heads;
  std::vector<std::uint32_t> tails;
  std::vector<std::uint64_t> supports;

  explicit RankTree(std::size_t ranks) : heads(ranks, kNil), tails(ranks, kNil), supports(ranks, 0) {
    nodes.push_back({kNil, kNil, kNil, kNil, kNil, 0});
  }

  // `path` is strictly increasing in rank.
  void insert(std::span<const std::uint32_t> path, std::uint64_t weight) {
    std::uint32_t current = 0;
    for (std::uint32_t rank : path) {
      std::uint32_t child = nodes[current].first_child;
      while (child != kNil && nodes[child].rank != rank) child = nodes[child].next_sibling;
      if (child == kNil) {
        child = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back({rank, current, kNil, nodes[current].first_child, kNil, 0});
        nodes[current].first_child = child;
        if (tails[rank] == kNil) heads[rank] = child;
        else nodes[tails[rank]].next_link = child;
        tails[rank] = child;
      }
      nodes[child].count += weight;
      supports[rank] += weight;
      current = child;
    }
  }
};

// Tree storage shared by the full tree and conditional trees.
struct TreeView {
  const std::vector<FpTree::Node>& nodes;
  const std::vector<std::uint32_t>& heads;
  const std::vector<std::uint64_t>& supports;
};

void grow(const TreeView& tree, std::uint64_t minsup, std::vector<std::uint32_t>& suffix,
          std::vector<std::pair<std::vector<std::uint32_t>, std::uint64_t>>& out) {
  const std::size_t ranks = tree.heads.size();
  std::vector<std::uint64_t> projected(ranks, 0);
  std::vector<std::uint32_t> path;
  for (std::size_t r = ranks; r-- > 0;) {
    if (tree.supports[r] < minsup) continue;
    suffix.push_back(static_cast<std::uint32_t>(r));
    out.emplace_back(suffix, tree.supports[r]);

    std::fill(projected.begin(), projected.begin() + r, 0);
    bool any = false;
    for (std::uint32_t n = tree.heads[r]; n != kNil; n = tree.nodes[n].next_link) {
      for (std::uint32_t p = tree.nodes[n].parent; p != 0; p = tree.nodes[p].parent) {
        projected[tree.nodes[p].rank] += tree.nodes[n].count;
        any = true;
      }
    }
    if (any) {
      RankTree cond(r);
      for (std::uint32_t n = tree.heads[r]; n != kNil; n = tree.nodes[n].next_link) {
        path.clear();
        for (std::uint32_t p = tree.nodes[n].parent; p != 0; p = tree.nodes[p].parent) {
          if (projected[tree.nodes[p].rank] >= minsup) path.push_back(tree.nodes[p].rank);
        }
        std::reverse(path.begin(), path.end());
        cond.insert(path, tree.nodes[n].count);
      }
      if (cond.nodes.size() > 1) grow({cond.nodes, cond.heads, cond.supports}, minsup, suffix, out);
    }
    suffix.pop_back();
  }
}

}  // namespace

FpTree FpTree::build(const TransactionDatabase& db, const MinSupport& ms) {
  const TransactionDatabase* parts[] = {&db};
  return build(parts, ms);
}

FpTree FpTree::build(std::span<const TransactionDatabase* const> parts, const MinSupport& ms) {
  FpTree tree;
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto* db : parts) {
    tree.transaction_count_ += db->size();
    for (const auto& t : *db)
      for (const auto& item : t.items) ++counts[item];
  }
  tree.minsup_ = ms.resolve(tree.transaction_count_);

  std::vector<std::pair<std::string_view, std::uint64_t>> frequent;
  for (const auto& [item, support] : counts)
    if (support >= tree.minsup_) frequent.emplace_back(item, support);
  std::sort(frequent.begin(), frequent.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return canonical_less(a.first, b.first);
  });
  std::unordered_map<std::string_view, std::uint32_t> rank_of;
  for (std::uint32_t r = 0; r < frequent.size(); ++r) {
    rank_of.emplace(frequent[r].first, r);
    tree.names_.emplace_back(frequent[r].first);
  }

  RankTree ranks(frequent.size());
  std::vector<std::uint32_t> path;
  for (const auto* db : parts) {
    for (const auto& t : *db) {
      path.clear();
      for (const auto& item : t.items) {
        if (auto it = rank_of.find(item); it != rank_of.end()) path.push_back(it->second);
      }
      std::sort(path.begin(), path.end());
      ranks.insert(path, 1);
    }
  }
  tree.nodes_ = std::move(ranks.nodes);
  tree.heads_ = std::move(ranks.heads);
  tree.supports_ = std::move(ranks.supports);
  return tree;
}

MiningResult FpTree::mine() const {
  MiningResult result;
  result.minsup_resolved = minsup_;
  if (nodes_.size() <= 1) return result;

  std::vector<std::pair<std::vector<std::uint32_t>, std::uint64_t>> raw;
  std::vector<std::uint32_t> suffix;
  grow({nodes_, heads_, supports_}, minsup_, suffix, raw);

  result.itemsets.reserve(raw.size());
  for (const auto& [ranks, support] : raw) {
    ItemsetWithSupport itemset;
    itemset.support = support;
    for (auto r : ranks) itemset.items.push_back(names_[r]);
    std::sort(itemset.items.begin(), itemset.items.end(), canonical_less);
    result.itemsets.push_back(std::move(itemset));
  }
  sort_result(result);
  return result;
}

MiningResult rebuild_baseline_mine(const TransactionDatabase& db, const MinSupport& ms) {
  return FpTree::build(db, ms).mine();
}

}  // namespace cantree
