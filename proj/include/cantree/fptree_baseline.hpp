#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cantree/miner.hpp"
#include "cantree/txndb.hpp"

namespace cantree {

// Classic frequency-ordered FP-tree. Item order depends on the supports of
// the whole database, so any update forces a full rescan and rebuild; this
// is the comparison baseline for the incremental CanTree.
class FpTree {
 public:
  // Two scans over `parts` (treated as one database): count supports, then
  // insert every transaction's frequent items ordered by support descending,
  // ties broken canonically.
  static FpTree build(std::span<const TransactionDatabase* const> parts, const MinSupport& ms);
  static FpTree build(const TransactionDatabase& db, const MinSupport& ms);

  MiningResult mine() const;

  std::uint64_t transaction_count() const noexcept { return transaction_count_; }
  std::uint64_t minsup() const noexcept { return minsup_; }
  std::size_t node_count() const noexcept { return nodes_.size() - 1; }

  struct Node {
    std::uint32_t rank;
    std::uint32_t parent;
    std::uint32_t first_child;
    std::uint32_t next_sibling;
    std::uint32_t next_link;
    std::uint64_t count;
  };

 private:
  FpTree() = default;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> heads_;
  std::vector<std::uint64_t> supports_;
  // Item names by rank (rank 0 = most frequent).
  std::vector<std::string> names_;
  std::uint64_t transaction_count_ = 0;
  std::uint64_t minsup_ = 1;
};

// Rescans `db`, rebuilds the frequency-ordered tree and mines it.
MiningResult rebuild_baseline_mine(const TransactionDatabase& db, const MinSupport& ms);

}  // namespace cantree
