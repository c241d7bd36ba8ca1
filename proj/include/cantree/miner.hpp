#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cantree/cantree.hpp"
#include "cantree/txndb.hpp"

namespace cantree {

struct ItemsetWithSupport {
  // Strictly increasing in canonical order.
  std::vector<Item> items;
  std::uint64_t support = 0;

  friend bool operator==(const ItemsetWithSupport&, const ItemsetWithSupport&) = default;
};

// Result order: support descending, then canonical order of the item
// sequences.
struct MiningResult {
  std::uint64_t minsup_resolved = 0;
  std::vector<ItemsetWithSupport> itemsets;

  friend bool operator==(const MiningResult&, const MiningResult&) = default;
};

using ItemSupport = std::pair<Item, std::uint64_t>;

// Items with support >= the resolved minimum, by support descending then
// canonical order.
std::vector<ItemSupport> frequent_items(const CanTree& tree, const MinSupport& ms);

// Tree of the prefix paths of `item`'s nodes, each weighted by the node's
// count, keeping only items whose projected support reaches `minsup`.
// Throws NotPresentError if `item` is not in the tree.
CanTree conditional_tree(const CanTree& tree, std::string_view item, std::uint64_t minsup);

// Every itemset with support >= the resolved minimum, by recursive
// conditional-tree projection.
MiningResult mine_frequent_itemsets(const CanTree& tree, const MinSupport& ms);

inline constexpr std::size_t kAprioriMaxAlphabet = 20;

// Level-wise exhaustive miner used as a verification oracle. Refuses
// databases with more than kAprioriMaxAlphabet distinct items.
MiningResult apriori_bruteforce(const TransactionDatabase& db, const MinSupport& ms);

// Sorts into the canonical result order.
void sort_result(MiningResult& result);

// "items,support" header then one row per itemset, items joined by ';'.
void write_mining_csv(std::ostream& out, const MiningResult& result);
void write_items_csv(std::ostream& out, const std::vector<ItemSupport>& items);

}  // namespace cantree
