#include "cantree/miner.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

namespace cantree {
namespace {

// Projection of `tree` onto the prefix paths of `item`. `scratch` is indexed
// by item id and must be all zero on entry; it is left all zero.
CanTree project(const CanTree& tree, ItemId item, std::uint64_t minsup, std::vector<std::uint64_t>& scratch) {
  using NodeId = CanTree::NodeId;
  CanTree cond = tree.empty_like();

  // Prefix paths (leaf to root order) laid end to end, walked only once.
  std::vector<ItemId> prefixes;
  std::vector<std::pair<std::size_t, std::uint64_t>> bounds;
  std::vector<ItemId> touched;
  for (NodeId n = tree.chain_head(item); n != CanTree::kNone; n = tree.node(n).chain_next) {
    const std::uint64_t weight = tree.node(n).count;
    for (NodeId p = tree.node(n).parent; p != CanTree::kRoot; p = tree.node(p).parent) {
      const ItemId id = tree.node(p).item;
      if (scratch[id] == 0) touched.push_back(id);
      scratch[id] += weight;
      prefixes.push_back(id);
    }
    bounds.emplace_back(prefixes.size(), weight);
  }
  if (touched.empty()) return cond;
  cond.reserve_nodes(prefixes.size());

  std::vector<ItemId> path;
  std::size_t begin = 0;
  for (const auto& [end, weight] : bounds) {
    path.clear();
    for (std::size_t i = end; i-- > begin;)
      if (scratch[prefixes[i]] >= minsup) path.push_back(prefixes[i]);
    cond.insert_path(path, weight);
    begin = end;
  }
  for (ItemId id : touched) scratch[id] = 0;
  return cond;
}

struct RawItemset {
  std::vector<ItemId> items;
  std::uint64_t support;
};

void grow(const CanTree& tree, std::uint64_t minsup, std::vector<ItemId>& suffix,
          std::vector<std::uint64_t>& scratch, std::vector<RawItemset>& out) {
  for (ItemId id = 0; id < tree.item_id_limit(); ++id) {
    const std::uint64_t support = tree.support(id);
    if (support < minsup) continue;
    suffix.push_back(id);
    out.push_back({suffix, support});
    CanTree cond = project(tree, id, minsup, scratch);
    if (!cond.empty()) grow(cond, minsup, suffix, scratch, out);
    suffix.pop_back();
  }
}

bool result_less(const ItemsetWithSupport& a, const ItemsetWithSupport& b) {
  if (a.support != b.support) return a.support > b.support;
  return std::lexicographical_compare(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(),
                                      [](const Item& x, const Item& y) { return canonical_less(x, y); });
}

}  // namespace

void sort_result(MiningResult& result) { std::sort(result.itemsets.begin(), result.itemsets.end(), result_less); }

std::vector<ItemSupport> frequent_items(const CanTree& tree, const MinSupport& ms) {
  const std::uint64_t minsup = ms.resolve(tree.transaction_count());
  std::vector<ItemSupport> out;
  for (ItemId id : tree.items()) {
    if (tree.support(id) >= minsup) out.emplace_back(std::string(tree.item_name(id)), tree.support(id));
  }
  std::stable_sort(out.begin(), out.end(), [](const ItemSupport& a, const ItemSupport& b) { return a.second > b.second; });
  return out;
}

CanTree conditional_tree(const CanTree& tree, std::string_view item, std::uint64_t minsup) {
  const auto id = tree.find_item(item);
  if (!id || tree.support(*id) == 0) throw NotPresentError("item '" + std::string(item) + "' is not in the tree");
  std::vector<std::uint64_t> scratch(tree.item_id_limit(), 0);
  return project(tree, *id, std::max<std::uint64_t>(minsup, 1), scratch);
}

MiningResult mine_frequent_itemsets(const CanTree& tree, const MinSupport& ms) {
  MiningResult result;
  result.minsup_resolved = ms.resolve(tree.transaction_count());
  if (tree.empty()) return result;

  std::vector<RawItemset> raw;
  std::vector<ItemId> suffix;
  std::vector<std::uint64_t> scratch(tree.item_id_limit(), 0);
  grow(tree, result.minsup_resolved, suffix, scratch, raw);

  // Canonical rank of every item id, so itemsets can be ordered without
  // comparing strings.
  std::vector<std::uint32_t> rank(tree.item_id_limit(), 0);
  const auto ordered = tree.items();
  for (std::uint32_t r = 0; r < ordered.size(); ++r) rank[ordered[r]] = r;
  for (auto& r : raw) {
    std::sort(r.items.begin(), r.items.end(), [&](ItemId a, ItemId b) { return rank[a] < rank[b]; });
  }
  std::sort(raw.begin(), raw.end(), [&](const RawItemset& a, const RawItemset& b) {
    if (a.support != b.support) return a.support > b.support;
    return std::lexicographical_compare(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(),
                                        [&](ItemId x, ItemId y) { return rank[x] < rank[y]; });
  });

  result.itemsets.reserve(raw.size());
  for (const auto& r : raw) {
    ItemsetWithSupport itemset;
    itemset.support = r.support;
    itemset.items.reserve(r.items.size());
    for (ItemId id : r.items) itemset.items.emplace_back(tree.item_name(id));
    result.itemsets.push_back(std::move(itemset));
  }
  return result;
}

MiningResult apriori_bruteforce(const TransactionDatabase& db, const MinSupport& ms) {
  std::vector<Item> alphabet;
  for (const auto& t : db) alphabet.insert(alphabet.end(), t.items.begin(), t.items.end());
  alphabet = canonicalize(alphabet);
  if (alphabet.size() > kAprioriMaxAlphabet)
    throw AlphabetTooLargeError("apriori oracle supports at most " + std::to_string(kAprioriMaxAlphabet) +
                                " distinct items, database has " + std::to_string(alphabet.size()));

  std::vector<std::uint32_t> masks;
  masks.reserve(db.size());
  for (const auto& t : db) {
    std::uint32_t m = 0;
    for (const auto& item : t.items) {
      const auto pos = std::lower_bound(alphabet.begin(), alphabet.end(), item, canonical_less) - alphabet.begin();
      m |= 1u << pos;
    }
    masks.push_back(m);
  }
  const auto count = [&](const std::vector<std::uint32_t>& itemset) {
    std::uint32_t c = 0;
    for (auto i : itemset) c |= 1u << i;
    std::uint64_t n = 0;
    for (auto m : masks) n += (m & c) == c;
    return n;
  };

  MiningResult result;
  result.minsup_resolved = ms.resolve(db.size());
  const auto emit = [&](const std::vector<std::uint32_t>& itemset, std::uint64_t support) {
    ItemsetWithSupport out;
    out.support = support;
    for (auto i : itemset) out.items.push_back(alphabet[i]);
    result.itemsets.push_back(std::move(out));
  };

  // Each level holds sorted index vectors of frequent itemsets of one size.
  std::vector<std::vector<std::uint32_t>> level;
  for (std::uint32_t i = 0; i < alphabet.size(); ++i) {
    std::vector<std::uint32_t> single{i};
    const auto s = count(single);
    if (s >= result.minsup_resolved) {
      emit(single, s);
      level.push_back(std::move(single));
    }
  }
  while (!level.empty()) {
    std::unordered_set<std::uint32_t> previous;
    for (const auto& itemset : level) {
      std::uint32_t m = 0;
      for (auto i : itemset) m |= 1u << i;
      previous.insert(m);
    }
    std::vector<std::vector<std::uint32_t>> next;
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        const auto& x = level[a];
        const auto& y = level[b];
        if (!std::equal(x.begin(), x.end() - 1, y.begin())) continue;
        std::vector<std::uint32_t> candidate = x;
        candidate.push_back(y.back());
        if (candidate[candidate.size() - 2] > candidate.back())
          std::swap(candidate[candidate.size() - 2], candidate.back());

        std::uint32_t full = 0;
        for (auto i : candidate) full |= 1u << i;
        bool closed = true;
        for (auto i : candidate) closed = closed && previous.contains(full & ~(1u << i));
        if (!closed) continue;

        const auto s = count(candidate);
        if (s >= result.minsup_resolved) {
          emit(candidate, s);
          next.push_back(std::move(candidate));
        }
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  sort_result(result);
  return result;
}

void write_mining_csv(std::ostream& out, const MiningResult& result) {
  out << "items,support\n";
  for (const auto& itemset : result.itemsets) {
    for (std::size_t i = 0; i < itemset.items.size(); ++i) {
      if (i) out << ';';
      out << itemset.items[i];
    }
    out << ',' << itemset.support << '\n';
  }
}

void write_items_csv(std::ostream& out, const std::vector<ItemSupport>& items) {
  out << "items,support\n";
  for (const auto& [item, support] : items) out << item << ',' << support << '\n';
}

}  // namespace cantree
