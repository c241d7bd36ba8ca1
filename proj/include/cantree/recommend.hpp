#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cantree/txndb.hpp"

namespace cantree {

// Same shape as the source database, each transaction restricted to its
// frequent items. Transactions may end up with no items.
using OptimizedDatabase = TransactionDatabase;

// Drops every item whose support in `db` is below the resolved minimum.
// Item order, ids, labels and the transaction count are preserved.
OptimizedDatabase optimize_database(const TransactionDatabase& db, const MinSupport& ms);

struct ItemChange {
  Item item;
  std::optional<std::uint64_t> old_support;
  std::optional<std::uint64_t> new_support;

  friend bool operator==(const ItemChange&, const ItemChange&) = default;
};

// Frequent-item comparison of two versions of an API database.
struct RecommendationReport {
  std::uint64_t old_minsup = 0;
  std::uint64_t new_minsup = 0;
  // Frequent in both; sorted by new support descending, then canonically.
  std::vector<ItemChange> retained;
  // Frequent only in the old version; by old support descending.
  std::vector<ItemChange> dropped;
  // Frequent only in the new version; by new support descending.
  std::vector<ItemChange> added;
};

// Minimum support fractions resolve against each database's own size.
RecommendationReport diff_versions(const TransactionDatabase& old_db, const TransactionDatabase& new_db,
                                   const MinSupport& ms);

enum class Annotation { kRetained, kNewInVersion };

std::string_view to_string(Annotation a) noexcept;

struct Recommendation {
  Item item;
  Annotation annotation;
  std::uint64_t support;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// Up to `k` retained or added items ranked by new-version support, ties
// broken canonically.
std::vector<Recommendation> recommend_items(const RecommendationReport& report, std::size_t k);

void write_report_text(std::ostream& out, const RecommendationReport& report);
// "item,status,old_support,new_support"; absent supports are left empty.
void write_report_csv(std::ostream& out, const RecommendationReport& report);
// "item,annotation,support"
void write_recommendations_csv(std::ostream& out, const std::vector<Recommendation>& recs);

}  // namespace cantree
